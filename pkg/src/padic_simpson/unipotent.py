"""Log/exp between unipotent and nilpotent matrices, and Z_p-powers.

Unipotency and nilpotency are checked by n-fold powering at the precision
floor, so every series below is a finite sum with divisions by ``k < n``
(log) or by ``k!`` with ``k < n`` (exp).
"""

from __future__ import annotations

from .errors import NotNilpotentError, NotUnipotentError
from fractions import Fraction
from math import factorial

from .field import Scalar, ZpElement, binomial_zp, rebase, vp_int, widened
from .linalg import Matrix


def is_nilpotent(m: Matrix) -> bool:
    return m.is_square() and (m ** m.nrows).is_zero()


def is_unipotent(u: Matrix) -> bool:
    return u.is_square() and is_nilpotent(u - Matrix.identity(u.field, u.nrows))


def require_nilpotent(m: Matrix) -> Matrix:
    if not is_nilpotent(m):
        raise NotNilpotentError(f"{m.nrows}x{m.ncols} matrix is not nilpotent at working precision")
    return m


def require_unipotent(u: Matrix) -> Matrix:
    if not is_unipotent(u):
        raise NotUnipotentError(f"{u.nrows}x{u.ncols} matrix is not unipotent at working precision")
    return u


def _series(x: Matrix, coeffs) -> Matrix:
    """``sum_k c_k x^k`` with a certified first-order precision bound.

    The sum is evaluated exactly on the stored digits of ``x`` in a widened
    field.  An input error ``d`` of size ``pi^M`` moves ``x^k`` by a sum of
    words ``x^a0 d x^a1 ... d x^aj``; bounding each word by the actual
    valuations of the powers of ``x`` avoids charging the per-product loss
    of entries with negative valuation again at every multiplication.
    ``coeffs[k]`` is a Fraction (exact) or a Scalar of ``x.field``.
    """
    F = x.field
    n = x.nrows
    W = widened(F, 2 * F.precision)
    M = x.precision_floor
    xw = Matrix(W, [[rebase(a, W, W.precision) for a in r] for r in x.rows], n)
    powers = [Matrix.identity(W, n)]
    for _ in range(1, len(coeffs)):
        powers.append(powers[-1] @ xw)
    # certified valuation of each exact power
    wv = [min(min((a.vpi for a in P.entries() if not a.is_zero()), default=P.precision_floor),
              P.precision_floor) for P in powers]
    wv[0] = 0
    top = len(coeffs) - 1
    # best[j][s]: least total valuation of j + 1 powers with exponents summing to s
    best = [[0 if s == 0 else wv[s] for s in range(top + 1)]]
    for _ in range(top):
        prev = best[-1]
        best.append([min(prev[s - a] + wv[a] for a in range(s + 1)) for s in range(top + 1)])
    bound = F.precision
    total = Matrix.zeros(W, n, n)
    for k, c in enumerate(coeffs):
        if isinstance(c, Scalar):
            cw = rebase(c, W, W.precision)
            cv, cprec = c.vpi, c.prec
        else:
            c = Fraction(c)
            cw = W(c)
            cv, cprec = (F.e * (vp_int(c.numerator, F.p) - vp_int(c.denominator, F.p)) if c else W.precision), None
        if cw.is_zero():
            continue
        total = total + powers[k].scale(cw)
        if k == 0:
            continue
        err = min(j * M + best[j][k - j] for j in range(1, k + 1))
        bound = min(bound, err + cv)
        if cprec is not None:
            bound = min(bound, cprec + min(wv[k], err))
    bound = min(bound, total.precision_floor)
    return Matrix(F, [[rebase(a, F, bound) for a in r] for r in total.rows], n)


def matrix_log(u: Matrix, check: bool = True) -> Matrix:
    """``sum_{k=1}^{n-1} (-1)^(k+1) (u - 1)^k / k``."""
    if check:
        require_unipotent(u)
    n = u.nrows
    coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, n)]
    return _series(u - Matrix.identity(u.field, n), coeffs)


def matrix_exp(m: Matrix, check: bool = True) -> Matrix:
    """``sum_{k=0}^{n-1} m^k / k!``."""
    if check:
        require_nilpotent(m)
    return _series(m, [Fraction(1, factorial(k)) for k in range(m.nrows)])


def unipotent_power(u: Matrix, gamma: ZpElement, check: bool = True) -> Matrix:
    """``u^gamma = sum_{k<n} binom(gamma, k) (u - 1)^k``."""
    if check:
        require_unipotent(u)
    n = u.nrows
    F = u.field
    coeffs = [Fraction(1)] + [binomial_zp(gamma, k, F) for k in range(1, n)]
    return _series(u - Matrix.identity(F, n), coeffs)


def commute(A: Matrix, B: Matrix) -> bool:
    if A.shape != B.shape or not A.is_square():
        raise ValueError("commute needs square matrices of the same size")
    return (A @ B - B @ A).is_zero()
