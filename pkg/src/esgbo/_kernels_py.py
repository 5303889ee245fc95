"""Numpy implementations of the GP hot kernels (fallback backend)."""
import numpy as np
from scipy.linalg import solve_triangular


def se_kernel(X1, X2, lengthscales, signal_variance):
    A = X1 / lengthscales
    B = X2 / lengthscales
    sq = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=-1)
    return signal_variance * np.exp(-0.5 * sq)


def gp_posterior(X, chol, alpha, lengthscales, signal_variance, Xstar):
    """Latent posterior mean and variance at each row of ``Xstar``.

    Returns the mean ``k*' alpha`` and the variance
    ``k(x*, x*) - |L^-1 k*|^2`` clamped at zero.
    """
    Ks = se_kernel(Xstar, X, lengthscales, signal_variance)
    mean = Ks @ alpha
    V = solve_triangular(chol, Ks.T, lower=True, check_finite=False)
    var = signal_variance - np.einsum("ij,ij->j", V, V)
    np.maximum(var, 0.0, out=var)
    return mean, var
