"""Koszul complexes computing continuous cohomology of Z_p^r with twisted coefficients.

Degree-d terms have basis ``e_S`` for the d-subsets S of ``{0..r-1}`` in
colex order, and ``d(e_S) = sum_{i not in S} (-1)^{#{s in S : s < i}} (gamma_i - 1) e_{S+i}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import PrecisionExhausted
from .field import Scalar
from .linalg import Matrix, default_tol, rank
from .representation import CharacterTuple


def colex_subsets(r: int, d: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(r), d), key=lambda s: tuple(reversed(s)))


@dataclass
class KoszulComplex:
    gammas: tuple
    differentials: list  # differentials[d]: degree d -> degree d+1

    @property
    def r(self) -> int:
        return len(self.gammas)

    def term_dims(self) -> list[int]:
        dims = [m.ncols for m in self.differentials]
        return dims + [self.differentials[-1].nrows] if self.differentials else [1]

    @property
    def precision_floor(self) -> int:
        return min((m.precision_floor for m in self.differentials),
                   default=self.gammas[0].field.precision if self.gammas else 0)

    def check_d_squared(self) -> bool:
        return all((b @ a).is_zero() for a, b in zip(self.differentials, self.differentials[1:]))


def build_koszul(gammas: Sequence[Scalar]) -> KoszulComplex:
    gammas = tuple(gammas)
    r = len(gammas)
    if r == 0:
        raise ValueError("Koszul complex needs at least one generator")
    F = gammas[0].field
    shifted = [g - 1 for g in gammas]
    diffs = []
    for d in range(r):
        src = colex_subsets(r, d)
        dst = colex_subsets(r, d + 1)
        index = {s: k for k, s in enumerate(dst)}
        rows = [[F.zero] * len(src) for _ in dst]
        for col, S in enumerate(src):
            for i in range(r):
                if i in S:
                    continue
                sign = sum(1 for s in S if s < i) % 2
                target = tuple(sorted(S + (i,)))
                rows[index[target]][col] = -shifted[i] if sign else shifted[i]
        diffs.append(Matrix(F, rows, len(src)))
    K = KoszulComplex(gammas, diffs)
    if not K.check_d_squared():
        raise ArithmeticError("Koszul differentials do not square to zero")
    return K


def koszul_cohomology_dims(gammas: Sequence[Scalar], tol=None) -> list[int]:
    """``dim H^d`` for d = 0..r with rank decisions at the tolerance."""
    K = build_koszul(gammas)
    F = K.gammas[0].field
    if tol is None:
        tol_pi = min(default_tol(m) for m in K.differentials)
    else:
        tol_pi = math.ceil(Fraction(tol) * F.e)
    for k, g in enumerate(K.gammas):
        x = g - 1
        if not x.is_zero() and x.vpi >= tol_pi:
            raise PrecisionExhausted(
                f"gamma_{k} - 1 has valuation {x.valuation()} beyond the tolerance {tol_pi}/{F.e}")
    ranks = [rank(m, Fraction(tol_pi, F.e)) for m in K.differentials]
    dims = K.term_dims()
    out = []
    for d in range(K.r + 1):
        incoming = ranks[d - 1] if d > 0 else 0
        outgoing = ranks[d] if d < K.r else 0
        out.append(dims[d] - outgoing - incoming)
    return out


def euler_characteristic(dims: Sequence[int]) -> int:
    return sum((-1) ** d * x for d, x in enumerate(dims))


def ext1_line(chi1: CharacterTuple, chi2: CharacterTuple, tol=None) -> int:
    if len(chi1) != len(chi2):
        raise ValueError("characters of groups of different rank")
    ratio = chi2 / chi1
    return koszul_cohomology_dims(ratio.values, tol)[1]
