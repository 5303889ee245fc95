"""Backend selection for the GP hot kernels.

The compiled extension ``esgbo._ckernels`` is used when it is importable;
otherwise the numpy fallback is used. Set ``ESGBO_PURE_PYTHON=1`` to force
the fallback.

Both backends expose:

``se_kernel(X1, X2, lengthscales, signal_variance)``
    Squared-exponential cross-covariance matrix.
``gp_posterior(X, chol, alpha, lengthscales, signal_variance, Xstar)``
    Latent posterior mean and clamped variance at each row of ``Xstar``.
"""
import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("ESGBO_PURE_PYTHON", "") != "1":
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def se_kernel(X1, X2, lengthscales, signal_variance):
    return _impl.se_kernel(_c(X1), _c(X2), _c(lengthscales), float(signal_variance))


def gp_posterior(X, chol, alpha, lengthscales, signal_variance, Xstar):
    return _impl.gp_posterior(_c(X), _c(chol), _c(alpha), _c(lengthscales),
                              float(signal_variance), _c(Xstar))
