# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GP hot kernels; same contract as ``_kernels_py``."""
import numpy as np
from libc.math cimport exp


def se_kernel(const double[:, ::1] X1, const double[:, ::1] X2,
              const double[::1] lengthscales, double signal_variance):
    cdef Py_ssize_t n1 = X1.shape[0], n2 = X2.shape[0], D = X1.shape[1]
    cdef Py_ssize_t i, j, d
    cdef double acc, diff
    out = np.empty((n1, n2))
    cdef double[:, ::1] K = out
    for i in range(n1):
        for j in range(n2):
            acc = 0.0
            for d in range(D):
                diff = X1[i, d] / lengthscales[d] - X2[j, d] / lengthscales[d]
                acc += diff * diff
            K[i, j] = signal_variance * exp(-0.5 * acc)
    return out


def gp_posterior(const double[:, ::1] X, const double[:, ::1] chol,
                 const double[::1] alpha, const double[::1] lengthscales,
                 double signal_variance, const double[:, ::1] Xstar):
    cdef Py_ssize_t t = X.shape[0], m = Xstar.shape[0], D = X.shape[1]
    cdef Py_ssize_t i, j, k, d
    cdef double acc, diff, mu, v
    mean_arr = np.empty(m)
    var_arr = np.empty(m)
    cdef double[::1] mean = mean_arr
    cdef double[::1] var = var_arr
    cdef double[::1] ks = np.empty(t)
    cdef double[::1] inv_ls = np.empty(D)
    for d in range(D):
        inv_ls[d] = 1.0 / lengthscales[d]
    for j in range(m):
        mu = 0.0
        for i in range(t):
            acc = 0.0
            for d in range(D):
                diff = Xstar[j, d] * inv_ls[d] - X[i, d] * inv_ls[d]
                acc += diff * diff
            ks[i] = signal_variance * exp(-0.5 * acc)
            mu += ks[i] * alpha[i]
        # forward substitution L v = k*, in place
        v = 0.0
        for i in range(t):
            acc = ks[i]
            for k in range(i):
                acc -= chol[i, k] * ks[k]
            ks[i] = acc / chol[i, i]
            v += ks[i] * ks[i]
        mean[j] = mu
        v = signal_variance - v
        var[j] = v if v > 0.0 else 0.0
    return mean_arr, var_arr
