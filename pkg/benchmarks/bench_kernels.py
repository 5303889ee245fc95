"""Compare the compiled GP kernels against the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Times ``se_kernel`` and ``gp_posterior`` at the sizes a BO run actually uses
(up to 25 training points, 1000 acquisition candidates, 3 dimensions), then a
whole 25-iteration BO run under each backend. The BO run switches backends by
patching ``esgbo.kernels._impl``, which is what ``ESGBO_PURE_PYTHON=1`` selects
at import time.
"""
import argparse
import timeit

import numpy as np

from esgbo import _kernels_py, kernels
from esgbo.gp import KernelParams, fit
from esgbo.optimizer import RunConfig, bo_run

try:
    from esgbo import _ckernels
except ImportError:
    _ckernels = None


def _problem(t, m, d, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.random((t, d))
    y = rng.normal(size=t)
    gp = fit(X, y, KernelParams(1.0, (0.3,) * d, 1e-6))
    Xs = rng.random((m, d))
    ls = np.asarray(gp.params.lengthscales)
    return gp, ls, Xs


def _time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _toy(u):
    return 1.0 - float(np.sum((np.asarray(u) - 0.5) ** 2))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=50)
    args = ap.parse_args(argv)

    backends = {"python": _kernels_py}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the numpy fallback only")

    print(f"{'case':<34}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    for t, m, d in [(5, 1000, 3), (25, 1000, 3), (25, 1, 3), (8, 5, 2)]:
        gp, ls, Xs = _problem(t, m, d)
        rows = {
            f"se_kernel        t={t:<2} m={m:<4} D={d}":
                lambda impl: impl.se_kernel(gp.X, Xs, ls, 1.0),
            f"gp_posterior     t={t:<2} m={m:<4} D={d}":
                lambda impl: impl.gp_posterior(gp.X, gp.chol, gp.alpha, ls, 1.0, Xs),
        }
        for label, call in rows.items():
            secs = {b: _time(lambda impl=impl: call(impl), args.repeat)
                    for b, impl in backends.items()}
            _report(label, secs)

    secs = {}
    for b, impl in backends.items():
        saved = kernels._impl
        kernels._impl = impl
        try:
            cfg = RunConfig(n_assets=2, budget=25, seed=0)
            secs[b] = _time(lambda: bo_run(_toy, cfg, transform=None), max(1, args.repeat // 10))
        finally:
            kernels._impl = saved
    _report("bo_run           T=25 D=2", secs)


def _report(label, secs):
    line = f"{label:<34}" + "".join(f"{1e3 * s:>10.3f}ms" for s in secs.values())
    if "cython" in secs:
        line += f"  {secs['python'] / secs['cython']:>8.1f}x"
    print(line)


if __name__ == "__main__":
    main()
