"""Matrices and polynomials over K with precision-aware elimination.

Tolerances are valuations normalized by ``v(p) = 1``; internally they are
converted to powers of the uniformizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DivisionBelowPrecision, DomainError, PrecisionExhausted, RootsNotInField
from .field import FieldConfig, Scalar


class Matrix:
    """Immutable dense matrix of Scalars sharing one FieldConfig."""

    __slots__ = ("field", "rows", "nrows", "ncols")
    __hash__ = None

    def __init__(self, field: FieldConfig, rows: Iterable[Iterable[Scalar]], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
            for s in r:
                if s.field != field:
                    raise ValueError("matrix entry from a different field")
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_entries(cls, F: FieldConfig, entries) -> "Matrix":
        return cls(F, [[F(x) for x in row] for row in entries])

    @classmethod
    def identity(cls, F: FieldConfig, n: int) -> "Matrix":
        one, zero = F.one, F.zero
        return cls(F, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, F: FieldConfig, r: int, c: int) -> "Matrix":
        zero = F.zero
        return cls(F, [[zero] * c for _ in range(r)], c)

    @classmethod
    def diag(cls, F: FieldConfig, values) -> "Matrix":
        vals = [F(v) for v in values]
        n = len(vals)
        zero = F.zero
        return cls(F, [[vals[i] if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, F: FieldConfig, cols: Sequence[Sequence[Scalar]], nrows: int | None = None) -> "Matrix":
        if not cols:
            return cls(F, [[] for _ in range(nrows or 0)], 0)
        n = len(cols[0])
        return cls(F, [[c[i] for c in cols] for i in range(n)], len(cols))

    # -- shape and access -------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> list[Scalar]:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list[Scalar]]:
        return [self.col(j) for j in range(self.ncols)]

    def entries(self):
        for r in self.rows:
            yield from r

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, zip(*self.rows) if self.nrows else [], self.nrows)

    # -- arithmetic -------------------------------------------------------

    def _check_same(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, s) -> "Matrix":
        if not isinstance(s, Scalar):
            s = self.field(s) if not isinstance(s, int) else s
        return Matrix(self.field, [[a * s for a in r] for r in self.rows], self.ncols)

    def __mul__(self, s):
        if isinstance(s, Matrix):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        out = []
        for r in self.rows:
            out.append([_dot(r, c, self.field) for c in cols])
        return Matrix(self.field, out, other.ncols)

    def apply(self, v: Sequence[Scalar]) -> list[Scalar]:
        return [_dot(r, v, self.field) for r in self.rows]

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square() or k < 0:
            raise ValueError("matrix power needs a square matrix and k >= 0")
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def trace(self) -> Scalar:
        return _sum([self.rows[i][i] for i in range(min(self.shape))], self.field)

    def kron(self, other: "Matrix") -> "Matrix":
        out = []
        for r in self.rows:
            for s in other.rows:
                out.append([a * b for a in r for b in s])
        return Matrix(self.field, out, self.ncols * other.ncols)

    def map(self, fn) -> "Matrix":
        return Matrix(self.field, [[fn(a) for a in r] for r in self.rows], self.ncols)

    # -- precision --------------------------------------------------------

    @property
    def precision_floor(self) -> int:
        """Minimum absolute precision of the entries, in powers of pi."""
        return min((a.prec for a in self.entries()), default=self.field.precision)

    def min_valuation(self):
        """Smallest entry valuation in powers of pi, None for the zero matrix."""
        vals = [a.vpi for a in self.entries() if not a.is_zero()]
        return min(vals) if vals else None

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    def lift_exact(self) -> "Matrix":
        return self.map(lambda a: a.lift_exact())

    def add_bigoh(self, prec: int) -> "Matrix":
        return self.map(lambda a: a.add_bigoh(prec))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(a) for a in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"


def _sum(values: Sequence[Scalar], F: FieldConfig) -> Scalar:
    if not values:
        return F.zero
    acc = values[0]
    for v in values[1:]:
        acc = acc + v
    return acc


def _dot(r: Sequence[Scalar], c: Sequence[Scalar], F: FieldConfig) -> Scalar:
    acc = None
    for a, b in zip(r, c):
        t = a * b
        acc = t if acc is None else acc + t
    return F.zero if acc is None else acc


def hstack(mats: Sequence[Matrix]) -> Matrix:
    F = mats[0].field
    n = mats[0].nrows
    if any(m.nrows != n for m in mats):
        raise ValueError("hstack needs equal row counts")
    return Matrix(F, [sum((m.rows[i] for m in mats), ()) for i in range(n)], sum(m.ncols for m in mats))


def vstack(mats: Sequence[Matrix]) -> Matrix:
    F = mats[0].field
    c = mats[0].ncols
    if any(m.ncols != c for m in mats):
        raise ValueError("vstack needs equal column counts")
    return Matrix(F, [r for m in mats for r in m.rows], c)


def block_diag(mats: Sequence[Matrix]) -> Matrix:
    F = mats[0].field
    total = sum(m.ncols for m in mats)
    zero = F.zero
    rows = []
    offset = 0
    for m in mats:
        for r in m.rows:
            rows.append([zero] * offset + list(r) + [zero] * (total - offset - m.ncols))
        offset += m.ncols
    return Matrix(F, rows, total)


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return A @ B - B @ A


# -- polynomials ------------------------------------------------------------------

class Poly:
    """Polynomial over K with coefficients listed from the constant term up."""

    __slots__ = ("field", "coeffs")
    __hash__ = None

    def __init__(self, field: FieldConfig, coeffs: Sequence):
        self.field = field
        self.coeffs = tuple(c if isinstance(c, Scalar) else field(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_roots(cls, F: FieldConfig, roots: Sequence[Scalar]) -> "Poly":
        coeffs = [F.one]
        for r in roots:
            r = F(r)
            new = [F.zero] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                new[i + 1] = new[i + 1] + c
                new[i] = new[i] - c * r
            coeffs = new
        return cls(F, coeffs)

    def __call__(self, x: Scalar) -> Scalar:
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:] or [self.field.zero])

    def taylor_shift(self, a: Scalar) -> list[Scalar]:
        """Coefficients of ``f(a + y)`` in ``y`` (repeated synthetic division)."""
        c = list(self.coeffs)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + a * c[j + 1]
        return c

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.degree != other.degree:
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self) -> str:
        return "Poly(" + ", ".join(str(c) for c in self.coeffs) + ")"


def charpoly(M: Matrix) -> Poly:
    """Characteristic polynomial det(xI - M) by Berkowitz's division-free scheme.

    The polynomial of the trailing principal block is grown one row/column at
    a time by multiplying with a lower-triangular Toeplitz matrix whose first
    column is ``(1, -a, -R C, -R A C, ..., -R A^(m-1) C)``.
    """
    if not M.is_square():
        raise ValueError("charpoly needs a square matrix")
    F = M.field
    n = M.nrows
    if n == 0:
        return Poly(F, [F.one])
    vec = [F.one, -M[n - 1, n - 1]]  # highest degree first
    for k in range(n - 2, -1, -1):
        a = M[k, k]
        R = M.rows[k][k + 1:]
        C = [M[i, k] for i in range(k + 1, n)]
        A1 = M.submatrix(range(k + 1, n), range(k + 1, n))
        m = n - 1 - k
        col = [F.one, -a]
        v = C
        for j in range(m):
            col.append(-_dot(R, v, F))
            if j < m - 1:
                v = A1.apply(v)
        new = []
        for i in range(m + 2):
            terms = [col[i - j] * vec[j] for j in range(max(0, i - m - 1), min(i, m) + 1)
                     if i - j < len(col)]
            new.append(_sum(terms, F))
        vec = new
    return Poly(F, list(reversed(vec)))


def det(M: Matrix) -> Scalar:
    c0 = charpoly(M).coeffs[0]
    return -c0 if M.nrows % 2 else c0


# -- elimination -------------------------------------------------------------------

def default_tol(M: Matrix) -> int:
    """Default rank tolerance in pi units: precision floor minus v(p^2)."""
    return M.precision_floor - 2 * M.field.e


def _tol_pi(M: Matrix, tol) -> int:
    if tol is None:
        return default_tol(M)
    return math.ceil(Fraction(tol) * M.field.e)


@dataclass
class Elimination:
    rows: list  # reduced rows
    pivots: list  # (row, col) pairs in elimination order
    ncols: int
    tol: int


def _negligible(s: Scalar, tol: int | None) -> bool:
    return s.is_zero() or (tol is not None and s.vpi >= tol)


def eliminate(M: Matrix, tol: int | None, pivot_cols: int | None = None,
              max_pivots: int | None = None) -> Elimination:
    """Gauss-Jordan with full pivoting on the entry of least valuation.

    Only the first ``pivot_cols`` columns are eligible as pivots (used for
    augmented systems).  ``tol`` is in pi units; ``None`` treats only values
    indistinguishable from zero as negligible, which together with
    ``max_pivots`` imposes a known rank.
    """
    F = M.field
    rows = [list(r) for r in M.rows]
    nr = M.nrows
    limit = M.ncols if pivot_cols is None else pivot_cols
    free_cols = list(range(limit))
    pivots = []
    r = 0
    while r < nr and free_cols and (max_pivots is None or r < max_pivots):
        best = None
        for i in range(r, nr):
            row = rows[i]
            for j in free_cols:
                s = row[j]
                if _negligible(s, tol):
                    continue
                if best is None or s.vpi < best[0]:
                    best = (s.vpi, i, j)
        if best is None:
            if tol is None:
                break
            for i in range(r, nr):
                for j in free_cols:
                    s = rows[i][j]
                    if s.is_zero() and 2 * s.prec <= tol:
                        raise PrecisionExhausted(
                            f"elimination: entry ({i},{j}) known only to O(pi^{s.prec}) "
                            f"but tolerance is pi^{tol}")
            break
        _, i, j = best
        rows[r], rows[i] = rows[i], rows[r]
        inv = rows[r][j].inverse()
        rows[r] = [x * inv for x in rows[r]]
        rows[r][j] = F.one.add_bigoh(rows[r][j].prec)
        prow = rows[r]
        for k in range(nr):
            if k == r:
                continue
            f = rows[k][j]
            if f.is_zero():
                continue
            rows[k] = [x - f * y for x, y in zip(rows[k], prow)]
        pivots.append((r, j))
        free_cols.remove(j)
        r += 1
    return Elimination(rows, pivots, M.ncols, tol)


def rank(M: Matrix, tol=None) -> int:
    return len(eliminate(M, _tol_pi(M, tol)).pivots)


def kernel_basis(M: Matrix, tol=None, dim: int | None = None) -> list[list[Scalar]]:
    """Right kernel basis; each vector has a 1 in its free coordinate.

    With ``dim`` the kernel dimension is imposed instead of decided by the
    tolerance: the ``ncols - dim`` pivots of least valuation are used, and
    PrecisionExhausted is raised if that many are not distinguishable from 0.
    """
    F = M.field
    if dim is not None:
        E = eliminate(M, None, max_pivots=M.ncols - dim)
        if len(E.pivots) != M.ncols - dim:
            raise PrecisionExhausted(
                f"kernel of dimension {dim} requested but only {len(E.pivots)} pivots are nonzero")
    else:
        E = eliminate(M, _tol_pi(M, tol))
    pivot_cols = {c: r for r, c in E.pivots}
    basis = []
    for f in range(M.ncols):
        if f in pivot_cols:
            continue
        v = [F.zero] * M.ncols
        v[f] = F.one
        for c, r in pivot_cols.items():
            v[c] = -E.rows[r][f]
        basis.append(v)
    return basis


def solve(A: Matrix, B: Matrix, tol=None) -> Matrix:
    """A solution X of ``A X = B``; free variables are set to zero.

    Raises DomainError if the system is inconsistent at the tolerance.
    """
    if A.nrows != B.nrows:
        raise ValueError("solve: row counts differ")
    F = A.field
    aug = hstack([A, B])
    t = _tol_pi(A, tol) if tol is not None else min(default_tol(A), default_tol(B))
    E = eliminate(aug, t, pivot_cols=A.ncols)
    used = {r for r, _ in E.pivots}
    for r in range(A.nrows):
        if r in used:
            continue
        for x in E.rows[r][A.ncols:]:
            if not _negligible(x, t):
                raise DomainError("solve: system is inconsistent at working precision")
    X = [[F.zero] * B.ncols for _ in range(A.ncols)]
    for r, c in E.pivots:
        X[c] = E.rows[r][A.ncols:]
    return Matrix(F, X, B.ncols)


def inverse(A: Matrix, tol=None) -> Matrix:
    if not A.is_square():
        raise ValueError("inverse needs a square matrix")
    t = _tol_pi(A, tol)
    E = eliminate(A, t)
    if len(E.pivots) < A.nrows:
        raise DivisionBelowPrecision("matrix is singular at working precision")
    return solve(A, Matrix.identity(A.field, A.nrows), tol)


def is_invertible(A: Matrix, tol=None) -> bool:
    return A.is_square() and rank(A, tol) == A.nrows


# -- eigen data -----------------------------------------------------------------

def generalized_eigenspace(M: Matrix, lam: Scalar, power: int | None = None, tol=None,
                           dim: int | None = None) -> list[list[Scalar]]:
    """Basis of ``ker (M - lam I)^power`` (``power`` defaults to the size).

    ``dim`` imposes the dimension, e.g. the root multiplicity of ``lam``.
    """
    n = M.nrows
    shifted = M - Matrix.identity(M.field, n).scale(lam)
    return kernel_basis(shifted ** (power if power is not None else n), tol, dim)


@dataclass
class RootCluster:
    """Roots of a polynomial grouped by the disc ``center + pi^radius O``.

    ``center`` is refined to the centroid of the cluster (a simple root of the
    ``(m-1)``-st derivative) and carries its own precision; the individual
    roots are only certified to agree with it modulo ``pi^radius``.
    """

    center: Scalar
    multiplicity: int
    radius: int


def _weierstrass(coeffs: Sequence[Scalar], k: int, F: FieldConfig, top: int):
    """Weierstrass degree of ``sum c_j (pi^k y)^j`` on the unit disc.

    Returns None when the answer is not determined by the known digits.
    """
    best_val, best_j = None, None
    for j, c in enumerate(coeffs[: top + 1]):
        if c.is_zero():
            continue
        v = c.vpi + k * j
        if best_val is None or v <= best_val:
            best_val, best_j = v, j
    if best_val is None:
        return None
    # an unknown coefficient can win below best_j only strictly; above it a tie suffices
    for j, c in enumerate(coeffs[: top + 1]):
        if not c.is_zero() or j == best_j:
            continue
        if (j < best_j and c.prec + k * j < best_val) or (j > best_j and c.prec + k * j <= best_val):
            return None
    return best_j


def _newton(f: Poly, x: Scalar, max_iter: int) -> Scalar:
    F = f.field
    df = f.derivative()
    for _ in range(max_iter):
        x = x.lift_exact()
        fx = f(x)
        dfx = df(x)
        if dfx.is_zero():
            raise PrecisionExhausted("root refinement: derivative vanishes at working precision")
        step = fx / dfx
        x_new = x - step
        if step.is_zero() or step.vpi >= F.precision:
            break
        x = x_new
    x = x.lift_exact()
    fx = f(x)
    dfx = df(x)
    bound = fx.prec - dfx.vpi if fx.is_zero() else min(fx.prec, fx.vpi) - dfx.vpi
    return x.add_bigoh(max(0, min(F.precision, bound)))


def root_clusters(f: Poly) -> list[RootCluster]:
    """Roots of a monic ``f`` whose roots all lie in ``1 + m``, as clusters."""
    F = f.field
    n = f.degree
    if n <= 0:
        return []
    lifts = F.residue_lifts()
    pi = F.uniformizer()
    leaves = []
    one = F.one
    m0 = _weierstrass(f.taylor_shift(one), 1, F, n)
    if m0 is None:
        leaves.append((one, 1, n))
        stack = []
    elif m0 != n:
        raise RootsNotInField(f"only {m0} of {n} roots lie in 1 + m")
    else:
        stack = [(one, 1, n)]
    max_depth = F.precision + 1
    while stack:
        a, k, m = stack.pop()
        if m == 1:
            leaves.append((a, k, 1))
            continue
        if k >= max_depth:
            leaves.append((a, k, m))
            continue
        step = pi ** k
        children = []
        undecided = False
        for r in lifts:
            b = (a + step * r).lift_exact()
            mc = _weierstrass(f.taylor_shift(b), k + 1, F, m)
            if mc is None:
                undecided = True
                break
            if mc:
                children.append((b, k + 1, mc))
        if undecided:
            leaves.append((a, k, m))
            continue
        if sum(c[2] for c in children) != m:
            raise RootsNotInField(
                f"residue polynomial does not split: {sum(c[2] for c in children)} of {m} roots found")
        stack.extend(reversed(children))
    out = []
    iters = 4 * F.precision + 8
    for a, k, m in leaves:
        if m == 1:
            center = _newton(f, a, iters)
        else:
            # (m-1)-st divided derivative has the cluster centroid as a simple root
            g = Poly(F, [c * math.comb(j, m - 1) for j, c in enumerate(f.coeffs)][m - 1:])
            try:
                center = _newton(g, a, iters)
            except PrecisionExhausted:
                center = a.add_bigoh(k)
            if (center - a).vpi < k and not (center - a).is_zero():
                center = a.add_bigoh(k)
        out.append(RootCluster(center, m, k))
    out.sort(key=lambda c: c.center.key())
    return out


def roots_in_principal_units(f: Poly) -> list[Scalar]:
    """All roots of ``f`` with multiplicity, sorted by digits.

    A root in a cluster of size ``m > 1`` is only certified modulo
    ``pi^radius``; use ``root_clusters`` for the refined centroid.
    """
    out = []
    for c in root_clusters(f):
        root = c.center if c.multiplicity == 1 else c.center.add_bigoh(c.radius)
        out.extend([root] * c.multiplicity)
    return out
