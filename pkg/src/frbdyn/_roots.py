"""Bracketed scalar root finding with the library-wide tolerances."""

from scipy import optimize

from .errors import ConvergenceError, DomainError

RESIDUAL_TOL = 1e-12
MAX_ITER = 200
_XTOL = 1e-15
_RTOL = 4.0 * 2.220446049250313e-16


def bisect(func, lo, hi, *, tol=RESIDUAL_TOL, what="root"):
    """Bisection on ``[lo, hi]`` followed by a residual check.

    Parameters
    ----------
    func : callable
        Scalar function with a sign change on the bracket.
    lo, hi : float
        Bracket end points.
    tol : float
        Maximum accepted ``|func(root)|``.
    what : str
        Label used in error messages.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        If the bracket has no sign change.
    ConvergenceError
        If the iteration budget runs out or the residual exceeds ``tol``.
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return float(lo)
    if f_hi == 0.0:
        return float(hi)
    if (f_lo > 0) == (f_hi > 0):
        raise DomainError(
            f"{what}: no sign change on [{lo!r}, {hi!r}] "
            f"(f={f_lo!r}, {f_hi!r})"
        )
    # a positive bracket near zero needs an absolute tolerance on its own scale
    xtol = _XTOL if lo <= 0.0 else max(min(_XTOL, lo * _RTOL), 1e-300)
    root, info = optimize.bisect(
        func, lo, hi, xtol=xtol, rtol=_RTOL, maxiter=MAX_ITER,
        full_output=True, disp=False,
    )
    resid = abs(func(root))
    if not info.converged or resid > tol:
        raise ConvergenceError(
            f"{what}: residual {resid:.3e} after {info.iterations} iterations"
        )
    return float(root)
