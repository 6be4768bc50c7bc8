"""Higgs data and the correspondence with representations.

Given an AbeloidModel, a unipotent representation is recorded by its
commuting logs ``N_j``; the linear map ``Theta(v) = sum v_j N_j`` evaluated
on the analytic columns gives the analytic logs and on the omega columns
gives the Higgs fields.  Characters are split with the convergent
exponential: the part of ``log chi`` on ``W_omega`` becomes the line Higgs
field and is removed from the character.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import CommutationViolation, PrecisionExhausted
from .field import FieldConfig, Scalar, padic_exp
from .linalg import Matrix, block_diag
from .representation import (
    AbeloidModel,
    CharacterTuple,
    HomSpace,
    PadicRep,
    Report,
    analytic_test_character,
    decompose_rep,
    dsum_rep,
    intertwiners,
    log_functional,
    probe_invertible,
    theta_map,
)
from .unipotent import is_nilpotent, matrix_exp, matrix_log


@dataclass
class UnipotentHiggs:
    analytic_logs: list  # g nilpotent matrices, Theta on the analytic columns
    higgs_fields: list  # g nilpotent matrices, Theta on the omega columns

    @property
    def n(self) -> int:
        return self.higgs_fields[0].nrows

    @property
    def g(self) -> int:
        return len(self.higgs_fields)

    @property
    def field(self) -> FieldConfig:
        return self.higgs_fields[0].field

    @classmethod
    def zero(cls, F: FieldConfig, n: int, g: int) -> "UnipotentHiggs":
        z = Matrix.zeros(F, n, n)
        return cls([z] * g, [z] * g)

    def matrices(self) -> list:
        return list(self.analytic_logs) + list(self.higgs_fields)


@dataclass
class HiggsLine:
    chi_an: CharacterTuple
    theta: tuple  # g scalars in the basis dual to omega_basis

    def key(self, prec: int | None = None):
        return (self.chi_an.key(prec), tuple(t.key(prec) for t in self.theta))

    def precision_floor(self) -> int:
        return min([v.prec for v in self.chi_an] + [t.prec for t in self.theta])

    def __eq__(self, other):
        if not isinstance(other, HiggsLine):
            return NotImplemented
        return self.chi_an == other.chi_an and all(a == b for a, b in zip(self.theta, other.theta))

    __hash__ = None


@dataclass
class HiggsBlock:
    line: HiggsLine
    unipotent: UnipotentHiggs


@dataclass
class HiggsModel:
    blocks: list = dc_field(default_factory=list)

    @property
    def rank(self) -> int:
        return sum(b.unipotent.n for b in self.blocks)

    @property
    def g(self) -> int:
        return self.blocks[0].unipotent.g


# -- validation -----------------------------------------------------------------------

def validate_unipotent_higgs(U: UnipotentHiggs) -> Report:
    mats = U.matrices()
    for k, m in enumerate(mats):
        if not is_nilpotent(m):
            return Report(False, f"matrix {k} is not nilpotent")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not (mats[i] @ mats[j] - mats[j] @ mats[i]).is_zero():
                g = U.g
                if i >= g and j >= g:
                    return Report(False, f"theta_{i - g} and theta_{j - g} do not commute (theta^theta != 0)")
                return Report(False, f"matrices {i} and {j} do not commute")
    return Report(True)


def validate_higgs(H: HiggsModel, A: AbeloidModel | None = None) -> Report:
    for k, b in enumerate(H.blocks):
        r = validate_unipotent_higgs(b.unipotent)
        if not r:
            return Report(False, f"block {k}: {r.reason}")
        if A is not None and not analytic_test_character(b.line.chi_an, A):
            return Report(False, f"block {k}: line character is not analytic")
    for i in range(len(H.blocks)):
        for j in range(i + 1, len(H.blocks)):
            if H.blocks[i].line == H.blocks[j].line:
                return Report(False, f"blocks {i} and {j} share a line part and must be merged")
    return Report(True)


# -- unipotent correspondence -----------------------------------------------------

def unipotent_rep_to_higgs(rho: PadicRep, A: AbeloidModel) -> UnipotentHiggs:
    logs = [matrix_log(m) for m in rho.generators]
    return UnipotentHiggs(
        [theta_map(logs, a) for a in A.analytic_basis.columns()],
        [theta_map(logs, w) for w in A.omega_basis.columns()],
    )


def theta_on_generators(U: UnipotentHiggs, A: AbeloidModel) -> list[Matrix]:
    """``Theta(e_j)`` from the coordinates of ``e_j`` in the combined basis."""
    g = A.g
    out = []
    for j in range(2 * g):
        coeffs = [A.alpha(i, j) for i in range(g)] + [A.beta(i, j) for i in range(g)]
        out.append(theta_map(U.matrices(), coeffs))
    return out


def unipotent_higgs_to_rep(U: UnipotentHiggs, A: AbeloidModel) -> PadicRep:
    return PadicRep([matrix_exp(T) for T in theta_on_generators(U, A)])


# -- lines ---------------------------------------------------------------------------------

def _omega_part(theta: Sequence[Scalar], A: AbeloidModel, j: int) -> Scalar:
    """Value of the functional with coordinates ``theta`` on the omega part of e_j."""
    acc = None
    for i, t in enumerate(theta):
        term = A.beta(i, j) * t
        acc = term if acc is None else acc + term
    return acc


def char_to_higgs_line(chi: CharacterTuple, A: AbeloidModel) -> HiggsLine:
    theta = tuple(log_functional(chi, w) for w in A.omega_basis.columns())
    chi_an = [c * padic_exp(-_omega_part(theta, A, j)) for j, c in enumerate(chi.values)]
    return HiggsLine(CharacterTuple(chi_an), theta)


def higgs_line_to_char(line: HiggsLine, A: AbeloidModel) -> CharacterTuple:
    return CharacterTuple([c * padic_exp(_omega_part(line.theta, A, j))
                           for j, c in enumerate(line.chi_an.values)])


# -- full correspondence ---------------------------------------------------------

def _sorted_blocks(blocks: list) -> list:
    if not blocks:
        return blocks
    floor = min(b.line.precision_floor() for b in blocks)
    return sorted(blocks, key=lambda b: b.line.key(floor))


def rep_to_higgs(rho: PadicRep, A: AbeloidModel, tol=None) -> HiggsModel:
    """Blockwise transform; blocks keep the order of ``decompose_rep``.

    That order depends only on the representation, so two runs with
    different complements ``W_an`` can be compared block by block.
    """
    D = decompose_rep(rho, tol)
    blocks = [HiggsBlock(char_to_higgs_line(b.character, A), unipotent_rep_to_higgs(b.unipotent, A))
              for b in D.blocks]
    return HiggsModel(blocks)


def higgs_to_rep(H: HiggsModel, A: AbeloidModel) -> PadicRep:
    reps = []
    for b in H.blocks:
        chi = higgs_line_to_char(b.line, A)
        reps.append(unipotent_higgs_to_rep(b.unipotent, A).twist(chi))
    out = reps[0]
    for r in reps[1:]:
        out = dsum_rep(out, r)
    return out


# -- tensor and morphisms -----------------------------------------------------------------

def _kron_sum(X: Matrix, Y: Matrix) -> Matrix:
    F = X.field
    return X.kron(Matrix.identity(F, Y.nrows)) + Matrix.identity(F, X.nrows).kron(Y)


def _merge(blocks: list) -> list:
    groups: list = []
    for b in blocks:
        for grp in groups:
            if grp[0].line == b.line:
                grp.append(b)
                break
        else:
            groups.append([b])
    out = []
    for grp in groups:
        if len(grp) == 1:
            out.append(grp[0])
            continue
        g = grp[0].unipotent.g
        out.append(HiggsBlock(grp[0].line, UnipotentHiggs(
            [block_diag([b.unipotent.analytic_logs[i] for b in grp]) for i in range(g)],
            [block_diag([b.unipotent.higgs_fields[i] for b in grp]) for i in range(g)],
        )))
    return out


def higgs_tensor(H: HiggsModel, H2: HiggsModel) -> HiggsModel:
    """Blockwise tensor product with the Leibniz rule, merged by line part."""
    blocks = []
    for a in H.blocks:
        for b in H2.blocks:
            line = HiggsLine(a.line.chi_an * b.line.chi_an,
                             tuple(x + y for x, y in zip(a.line.theta, b.line.theta)))
            U = UnipotentHiggs(
                [_kron_sum(x, y) for x, y in zip(a.unipotent.analytic_logs, b.unipotent.analytic_logs)],
                [_kron_sum(x, y) for x, y in zip(a.unipotent.higgs_fields, b.unipotent.higgs_fields)],
            )
            blocks.append(HiggsBlock(line, U))
    return HiggsModel(_sorted_blocks(_merge(blocks)))


def higgs_structure(H: HiggsModel, A: AbeloidModel) -> tuple[list[Matrix], list[Matrix]]:
    """Analytic representation on the generators and total Higgs fields.

    The analytic part sends ``e_j`` to ``chi_an(e_j) exp(sum_i alpha_ij A_i)``;
    the total field is ``theta_L,i + theta_U,i``.
    """
    g = A.g
    an_blocks = [[] for _ in range(2 * g)]
    th_blocks = [[] for _ in range(g)]
    for b in H.blocks:
        U = b.unipotent
        F = U.field
        I = Matrix.identity(F, U.n)
        for j in range(2 * g):
            T = theta_map(U.analytic_logs, [A.alpha(i, j) for i in range(g)])
            an_blocks[j].append(matrix_exp(T).scale(b.line.chi_an[j]))
        for i in range(g):
            th_blocks[i].append(U.higgs_fields[i] + I.scale(b.line.theta[i]))
    return [block_diag(m) for m in an_blocks], [block_diag(m) for m in th_blocks]


def higgs_hom_space(H: HiggsModel, H2: HiggsModel, A: AbeloidModel, tol=None) -> HomSpace:
    an1, th1 = higgs_structure(H, A)
    an2, th2 = higgs_structure(H2, A)
    pairs = list(zip(an1, an2)) + list(zip(th1, th2))
    return intertwiners(pairs, H.rank, H2.rank, A.field, tol)


def higgs_hom_dim(H: HiggsModel, H2: HiggsModel, A: AbeloidModel, tol=None) -> int:
    return higgs_hom_space(H, H2, A, tol).dimension


def higgs_isomorphic(H: HiggsModel, H2: HiggsModel, A: AbeloidModel, seed: int = 0) -> bool:
    if H.rank != H2.rank:
        return False
    return probe_invertible(higgs_hom_space(H, H2, A), seed) is not None


# -- rank-2 extensions ---------------------------------------------------------------------

@dataclass
class NonSplit:
    """A nontrivial extension of the trivial Higgs line by itself."""

    b: tuple
    rho_offdiag: tuple
    reason: str = "theta vanishes while the extension data does not"


def split_higgs_extension(b: Sequence[Scalar], theta: Sequence[Scalar],
                          rho_offdiag: Sequence[Scalar]) -> Matrix | NonSplit:
    """Split the extension with Higgs matrices ``[[0, b_i], [0, theta_i]]``.

    Returns ``S`` such that ``S^-1 X S`` has zero upper-right entry for all
    Higgs matrices and rep generators ``[[1, r_j], [0, 1]]``, or NonSplit.
    """
    b, theta, rho_offdiag = tuple(b), tuple(theta), tuple(rho_offdiag)
    if len(b) != len(theta):
        raise ValueError("b and theta must have the same length")
    F = theta[0].field
    g = len(theta)
    for i in range(g):
        for j in range(i + 1, g):
            if not (b[i] * theta[j] - b[j] * theta[i]).is_zero():
                raise CommutationViolation(f"b_{i} theta_{j} != b_{j} theta_{i}")
    nonzero = [i for i, t in enumerate(theta) if not t.is_zero()]
    if nonzero:
        for j, r in enumerate(rho_offdiag):
            for i in nonzero:
                if not (r * theta[i]).is_zero():
                    raise CommutationViolation(
                        f"rep generator {j} does not commute with theta_{i}")
        k = min(nonzero, key=lambda i: (theta[i].vpi, i))
        s = b[k] / theta[k]
        S = Matrix(F, [[F.one, s], [F.zero, F.one]], 2)
        for i in range(g):
            if not (b[i] - s * theta[i]).is_zero():
                raise PrecisionExhausted(f"splitting leaves b_{i} nonzero at working precision")
        return S
    if any(t.prec < F.precision for t in theta):
        raise PrecisionExhausted("theta is indistinguishable from 0 but not known to be 0")
    if any(not x.is_zero() for x in b) or any(not x.is_zero() for x in rho_offdiag):
        return NonSplit(b, rho_offdiag)
    return Matrix.identity(F, 2)


def conjugate_extension(S: Matrix, b: Sequence[Scalar], theta: Sequence[Scalar],
                        rho_offdiag: Sequence[Scalar]) -> tuple[list, list]:
    """Upper-right entries of ``S^-1 X S`` for the Higgs and rep matrices."""
    F = S.field
    Sinv = Matrix(F, [[F.one, -S[0, 1]], [F.zero, F.one]], 2)
    new_b = [(Sinv @ Matrix(F, [[F.zero, bi], [F.zero, ti]], 2) @ S)[0, 1] for bi, ti in zip(b, theta)]
    new_r = [(Sinv @ Matrix(F, [[F.one, r], [F.zero, F.one]], 2) @ S)[0, 1] for r in rho_offdiag]
    return new_b, new_r
