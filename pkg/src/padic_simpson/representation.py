"""Representations of Z_p^{2g} as commuting matrix tuples.

A representation is stored by the images of the standard generators
``e_1 .. e_2g``.  Validation checks invertibility, commutation and
admissibility (every eigenvalue in ``1 + m``); decomposition splits the
space into simultaneous generalized eigenspaces and writes each block as a
character times a unipotent representation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .errors import CharacterAdmissibilityError, PrecisionExhausted
from .field import FieldConfig, Scalar, is_admissible, padic_log
from .linalg import (
    Matrix,
    block_diag,
    charpoly,
    generalized_eigenspace,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    root_clusters,
    solve,
)
from .unipotent import matrix_log


@dataclass
class Report:
    """Outcome of a validation: ``reason`` names the first failed check."""

    valid: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.valid


# -- abeloid data -----------------------------------------------------------------

class AbeloidModel:
    """Hodge subspace ``W_omega`` and a chosen complement ``W_an`` in ``K^{2g}``.

    Columns of ``omega_basis`` span ``W_omega``; columns of ``analytic_basis``
    span the complement.  ``canonical_directions`` are 0-based indices.
    """

    def __init__(self, g: int, omega_basis: Matrix, analytic_basis: Matrix,
                 ordinary: bool = False, canonical_directions: Sequence[int] | None = None):
        if g < 1:
            raise ValueError("g must be positive")
        for name, m in (("omega_basis", omega_basis), ("analytic_basis", analytic_basis)):
            if m.shape != (2 * g, g):
                raise ValueError(f"{name} must be {2 * g}x{g}, got {m.nrows}x{m.ncols}")
        self.g = g
        self.omega_basis = omega_basis
        self.analytic_basis = analytic_basis
        self.ordinary = ordinary
        self.canonical_directions = tuple(canonical_directions) if canonical_directions is not None else None
        if not is_invertible(self.combined):
            raise ValueError("analytic and omega bases do not span K^{2g}")
        if ordinary:
            dirs = self.canonical_directions
            if dirs is None or len(dirs) != g or len(set(dirs)) != g or not all(0 <= d < 2 * g for d in dirs):
                raise ValueError("ordinary model needs g distinct canonical directions")
            F = self.field
            expected = Matrix.from_columns(F, [[F.one if i == d else F.zero for i in range(2 * g)] for d in dirs])
            if omega_basis != expected:
                raise ValueError("ordinary model: omega_basis must be the canonical standard vectors")

    @property
    def field(self) -> FieldConfig:
        return self.omega_basis.field

    @classmethod
    def ordinary_model(cls, F: FieldConfig, g: int, canonical_directions: Sequence[int] | None = None,
                       analytic_basis: Matrix | None = None) -> "AbeloidModel":
        dirs = tuple(canonical_directions) if canonical_directions is not None else tuple(range(g, 2 * g))
        unit = lambda d: [F.one if i == d else F.zero for i in range(2 * g)]
        omega = Matrix.from_columns(F, [unit(d) for d in dirs])
        if analytic_basis is None:
            rest = [d for d in range(2 * g) if d not in dirs]
            analytic_basis = Matrix.from_columns(F, [unit(d) for d in rest])
        return cls(g, omega, analytic_basis, True, dirs)

    @cached_property
    def combined(self) -> Matrix:
        """The 2g x 2g matrix ``[analytic_basis | omega_basis]``."""
        return hstack([self.analytic_basis, self.omega_basis])

    @cached_property
    def coordinates(self) -> Matrix:
        """Column j holds the coordinates of ``e_j`` in the combined basis."""
        return inverse(self.combined)

    def alpha(self, i: int, j: int) -> Scalar:
        """Coefficient of the i-th analytic column in ``e_j``."""
        return self.coordinates[i, j]

    def beta(self, i: int, j: int) -> Scalar:
        """Coefficient of the i-th omega column in ``e_j``."""
        return self.coordinates[self.g + i, j]


# -- characters --------------------------------------------------------------------

class CharacterTuple:
    """Values of a character on the generators, each congruent to 1 mod p."""

    __hash__ = None

    def __init__(self, values: Sequence[Scalar]):
        values = tuple(values)
        if not values:
            raise ValueError("empty character")
        for v in values:
            if not is_admissible(v):
                raise CharacterAdmissibilityError(f"character value {v} is not admissible")
        self.values = values

    @property
    def field(self) -> FieldConfig:
        return self.values[0].field

    @classmethod
    def trivial(cls, F: FieldConfig, r: int) -> "CharacterTuple":
        return cls([F.one] * r)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, j):
        return self.values[j]

    def __mul__(self, other: "CharacterTuple") -> "CharacterTuple":
        return CharacterTuple([a * b for a, b in zip(self.values, other.values)])

    def inverse(self) -> "CharacterTuple":
        return CharacterTuple([a.inverse() for a in self.values])

    def __truediv__(self, other: "CharacterTuple") -> "CharacterTuple":
        return CharacterTuple([a / b for a, b in zip(self.values, other.values)])

    def __eq__(self, other):
        if not isinstance(other, CharacterTuple):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self.values, other.values))

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.values)

    def logs(self) -> list[Scalar]:
        return [padic_log(v) for v in self.values]

    def key(self, prec: int | None = None):
        return tuple(v.key(prec) for v in self.values)

    def __repr__(self) -> str:
        return "CharacterTuple(" + ", ".join(str(v) for v in self.values) + ")"


# -- representations ----------------------------------------------------------------

class PadicRep:
    """Images of the standard generators of Z_p^r in GL_n(K)."""

    __hash__ = None

    def __init__(self, generators: Sequence[Matrix]):
        gens = tuple(generators)
        if not gens:
            raise ValueError("a representation needs at least one generator")
        n = gens[0].nrows
        for m in gens:
            if m.shape != (n, n):
                raise ValueError("generators must be square of a common size")
        self.generators = gens
        self.n = n

    @property
    def field(self) -> FieldConfig:
        return self.generators[0].field

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @classmethod
    def trivial(cls, F: FieldConfig, n: int, ngens: int) -> "PadicRep":
        return cls([Matrix.identity(F, n)] * ngens)

    @classmethod
    def from_character(cls, chi: CharacterTuple) -> "PadicRep":
        F = chi.field
        return cls([Matrix(F, [[v]], 1) for v in chi.values])

    def conjugate(self, P: Matrix) -> "PadicRep":
        """The representation ``P rho P^-1``."""
        Pinv = inverse(P)
        return PadicRep([P @ m @ Pinv for m in self.generators])

    def twist(self, chi: CharacterTuple) -> "PadicRep":
        return PadicRep([m.scale(c) for m, c in zip(self.generators, chi.values)])

    @property
    def precision_floor(self) -> int:
        return min(m.precision_floor for m in self.generators)

    def __eq__(self, other):
        if not isinstance(other, PadicRep):
            return NotImplemented
        return self.ngens == other.ngens and all(a == b for a, b in zip(self.generators, other.generators))

    def __repr__(self) -> str:
        return f"PadicRep(n={self.n}, ngens={self.ngens})"


def is_admissible_matrix(m: Matrix) -> bool:
    """Whether ``charpoly(m)`` reduces to ``(x - 1)^n`` modulo the maximal ideal."""
    from math import comb

    n = m.nrows
    cp = charpoly(m)
    for k, c in enumerate(cp.coeffs):
        expected = comb(n, k) * (-1) ** (n - k)
        diff = c - expected
        if diff.is_zero():
            if diff.prec < 1:
                return False
        elif diff.vpi < 1:
            return False
    return True


def validate_rep(rho: PadicRep) -> Report:
    gens = rho.generators
    for j, m in enumerate(gens):
        if not is_invertible(m):
            return Report(False, f"generator {j} is not invertible")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not (gens[i] @ gens[j] - gens[j] @ gens[i]).is_zero():
                return Report(False, f"generators {i} and {j} do not commute")
    for j, m in enumerate(gens):
        if not is_admissible_matrix(m):
            return Report(False, f"generator {j} is not admissible: eigenvalues outside 1 + m")
    return Report(True)


def tensor_rep(a: PadicRep, b: PadicRep) -> PadicRep:
    return PadicRep([x.kron(y) for x, y in zip(a.generators, b.generators)])


def dual_rep(a: PadicRep) -> PadicRep:
    return PadicRep([inverse(m).T for m in a.generators])


def dsum_rep(a: PadicRep, b: PadicRep) -> PadicRep:
    return PadicRep([block_diag([x, y]) for x, y in zip(a.generators, b.generators)])


# -- decomposition --------------------------------------------------------------------

@dataclass
class Block:
    character: CharacterTuple
    unipotent: PadicRep
    basis: Matrix  # n x n_i, columns span the block


@dataclass
class BlockDecomposition:
    blocks: list
    change_of_basis: Matrix

    def block_diagonal(self) -> PadicRep:
        """Rebuild ``chi_i * U_i`` block-diagonally."""
        ngens = self.blocks[0].unipotent.ngens
        return PadicRep([
            block_diag([b.unipotent.generators[j].scale(b.character[j]) for b in self.blocks])
            for j in range(ngens)
        ])

    def reassemble(self) -> PadicRep:
        return self.block_diagonal().conjugate(self.change_of_basis)


def restrict(m: Matrix, V: Matrix) -> Matrix:
    """Matrix of ``m`` on the invariant subspace spanned by the columns of V."""
    return solve(V, m @ V)


def decompose_rep(rho: PadicRep, tol=None) -> BlockDecomposition:
    """Simultaneous generalized-eigenspace decomposition of a valid rep.

    By default each generalized eigenspace gets the dimension certified by
    the root multiplicity; with an explicit ``tol`` the dimension is decided
    by the rank tolerance and must agree with the multiplicity.
    """
    F = rho.field
    spaces = [Matrix.identity(F, rho.n)]
    for A in rho.generators:
        refined = []
        for V in spaces:
            R = restrict(A, V)
            for cl in root_clusters(charpoly(R)):
                if tol is None:
                    W = generalized_eigenspace(R, cl.center, power=cl.multiplicity, dim=cl.multiplicity)
                else:
                    W = generalized_eigenspace(R, cl.center, power=cl.multiplicity, tol=tol)
                if len(W) != cl.multiplicity:
                    raise PrecisionExhausted(
                        f"decompose: eigenvalue {cl.center} has multiplicity {cl.multiplicity} "
                        f"but a {len(W)}-dimensional generalized eigenspace")
                refined.append(V @ Matrix.from_columns(F, W))
        spaces = refined
    found = []
    for V in spaces:
        restricted = [restrict(A, V) for A in rho.generators]
        chars = CharacterTuple([R.trace().div_int(V.ncols) for R in restricted])
        found.append((chars, V))
    groups: list[list] = []
    for chi, V in found:
        for grp in groups:
            if grp[0] == chi:
                grp[1].append(V)
                break
        else:
            groups.append([chi, [V]])
    blocks = []
    for chi, Vs in groups:
        V = hstack(Vs)
        gens = [restrict(A, V).scale(c.inverse()) for A, c in zip(rho.generators, chi.values)]
        blocks.append(Block(chi, PadicRep(gens), V))
    floor = min(v.prec for b in blocks for v in b.character.values)
    blocks.sort(key=lambda b: b.character.key(floor))
    return BlockDecomposition(blocks, hstack([b.basis for b in blocks]))


# -- intertwiners ---------------------------------------------------------------------

@dataclass
class HomSpace:
    dimension: int
    basis: list = dc_field(default_factory=list)


def intertwiners(pairs: Sequence[tuple[Matrix, Matrix]], n_src: int, n_dst: int, F: FieldConfig,
                 tol=None) -> HomSpace:
    """All ``T`` (n_dst x n_src) with ``T X = Y T`` for every pair ``(X, Y)``."""
    unknowns = n_dst * n_src
    if unknowns == 0:
        return HomSpace(0, [])
    rows = []
    zero = F.zero
    for X, Y in pairs:
        for a in range(n_dst):
            for c in range(n_src):
                row = [zero] * unknowns
                for b in range(n_src):
                    x = X[b, c]
                    if not x.is_zero() or x.prec < F.precision:
                        row[a * n_src + b] = row[a * n_src + b] + x
                for b in range(n_dst):
                    y = Y[a, b]
                    if not y.is_zero() or y.prec < F.precision:
                        row[b * n_src + c] = row[b * n_src + c] - y
                rows.append(row)
    if not rows:
        basis_vecs = [[F.one if i == k else zero for i in range(unknowns)] for k in range(unknowns)]
    else:
        basis_vecs = kernel_basis(Matrix(F, rows, unknowns), tol)
    basis = [Matrix(F, [v[a * n_src:(a + 1) * n_src] for a in range(n_dst)], n_src) for v in basis_vecs]
    return HomSpace(len(basis), basis)


def hom_space(rho: PadicRep, rho2: PadicRep, tol=None) -> HomSpace:
    """Intertwiners ``T`` with ``T rho(e_j) = rho2(e_j) T``."""
    if rho.ngens != rho2.ngens:
        raise ValueError("representations of groups of different rank")
    return intertwiners(list(zip(rho.generators, rho2.generators)), rho.n, rho2.n, rho.field, tol)


def probe_invertible(space: HomSpace, seed: int = 0, attempts: int = 8) -> Matrix | None:
    """A random combination of the basis that is invertible, or None."""
    if not space.basis or not space.basis[0].is_square():
        return None
    F = space.basis[0].field
    rng = random.Random(seed)
    for _ in range(attempts):
        T = None
        for B in space.basis:
            term = B.scale(rng.randrange(1, F.p ** 3))
            T = term if T is None else T + term
        if is_invertible(T):
            return T
    return None


def find_isomorphism(rho: PadicRep, rho2: PadicRep, seed: int = 0, attempts: int = 8) -> Matrix | None:
    if rho.n != rho2.n or rho.ngens != rho2.ngens:
        return None
    return probe_invertible(hom_space(rho, rho2), seed, attempts)


def are_isomorphic(rho: PadicRep, rho2: PadicRep, seed: int = 0) -> bool:
    return find_isomorphism(rho, rho2, seed) is not None


# -- analyticity ------------------------------------------------------------------

def theta_map(logs: Sequence[Matrix], v: Sequence[Scalar]) -> Matrix:
    """``sum_j v_j N_j``."""
    acc = None
    for c, N in zip(v, logs):
        term = N.scale(c)
        acc = term if acc is None else acc + term
    return acc


def analytic_test_unipotent(rho: PadicRep, A: AbeloidModel) -> tuple[bool, Matrix | None]:
    """Whether ``Theta = sum v_j log rho(e_j)`` vanishes on ``W_omega``."""
    logs = [matrix_log(m) for m in rho.generators]
    for w in A.omega_basis.columns():
        T = theta_map(logs, w)
        if not T.is_zero():
            return False, T
    return True, None


def log_functional(chi: CharacterTuple, v: Sequence[Scalar]) -> Scalar:
    acc = None
    for c, L in zip(v, chi.logs()):
        t = c * L
        acc = t if acc is None else acc + t
    return acc


def analytic_test_character(chi: CharacterTuple, A: AbeloidModel) -> bool:
    return all(log_functional(chi, w).is_zero() for w in A.omega_basis.columns())


def analytic_test_rep(rho: PadicRep, A: AbeloidModel, tol=None) -> tuple[bool, Matrix | None]:
    """Analyticity of a general rep: every block character and unipotent part.

    The witness is the first nonzero ``Theta(w)`` of a unipotent part, or the
    1x1 matrix holding a nonzero value of the character log functional.
    """
    for b in decompose_rep(rho, tol).blocks:
        for w in A.omega_basis.columns():
            val = log_functional(b.character, w)
            if not val.is_zero():
                return False, Matrix(val.field, [[val]], 1)
        ok, witness = analytic_test_unipotent(b.unipotent, A)
        if not ok:
            return False, witness
    return True, None
