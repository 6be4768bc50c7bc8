"""Random instance construction shared by the test modules.

Everything here builds objects from known ingredients, so the ingredients
serve as the oracle for what decomposition and the correspondence must
recover.
"""

import random
from fractions import Fraction

from padic_simpson.field import FieldConfig
from padic_simpson.linalg import Matrix, block_diag, det, hstack
from padic_simpson.representation import AbeloidModel, CharacterTuple, PadicRep
from padic_simpson.higgs import HiggsBlock, HiggsLine, HiggsModel, UnipotentHiggs
from padic_simpson.field import padic_exp


def det_fraction(rows):
    """Exact determinant over Q by fraction Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def rand_unimodular_ints(rng, n, p, bound=None):
    """Integer matrix whose determinant is a p-adic unit."""
    bound = bound or p * p
    while True:
        rows = [[rng.randrange(-bound, bound + 1) for _ in range(n)] for _ in range(n)]
        d = det_fraction(rows)
        if d != 0 and d.numerator % p != 0:
            return rows


def rand_invertible(F, n, rng):
    return Matrix.from_entries(F, rand_unimodular_ints(rng, n, F.p))


def rand_strict_upper(F, n, rng, bound=5):
    return Matrix.from_entries(F, [[rng.randrange(-bound, bound + 1) if j > i else 0 for j in range(n)]
                                   for i in range(n)])


def poly_in(N, coeffs):
    """``sum_k coeffs[k-1] N^k`` (no constant term)."""
    F = N.field
    acc = Matrix.zeros(F, N.nrows, N.ncols)
    power = Matrix.identity(F, N.nrows)
    for c in coeffs:
        power = power @ N
        acc = acc + power.scale(c)
    return acc


def commuting_nilpotents(F, n, count, rng, bound=5, scale=1):
    """``count`` commuting nilpotents, all polynomials in one strictly upper matrix."""
    N0 = rand_strict_upper(F, n, rng)
    return [poly_in(N0, [scale * rng.randrange(-bound, bound + 1) for _ in range(max(n - 1, 1))])
            for _ in range(count)]


def commuting_unipotents(F, n, count, rng, bound=5):
    I = Matrix.identity(F, n)
    return [I + m for m in commuting_nilpotents(F, n, count, rng, bound)]


def rand_character(F, r, rng, trivial_at=(), nontrivial=False):
    """Values ``1 + p k`` with small random k (exactly 1 at ``trivial_at``)."""
    while True:
        vals = [F.one if j in trivial_at else F(1 + F.p * rng.randrange(0, F.p ** 3)) for j in range(r)]
        chi = CharacterTuple(vals)
        if not nontrivial or not chi.is_trivial():
            return chi


def distinct_characters(F, r, count, rng, trivial_at=()):
    """Characters whose values on each generator are 1 or pairwise distinct mod p^2.

    Keeping eigenvalues of different blocks at distance exactly |p| leaves
    enough digits at N = 16 for the eigenspace computations.
    """
    if count > F.p - 1:
        raise ValueError("at most p - 1 well separated characters")
    cols = []
    for j in range(r):
        if j in trivial_at:
            cols.append([F.one] * count)
            continue
        residues = rng.sample(range(1, F.p), count)
        cols.append([F(1 + F.p * (a + F.p * rng.randrange(0, F.p ** 2))) for a in residues])
    return [CharacterTuple([cols[j][i] for j in range(r)]) for i in range(count)]


def constructed_rep(F, ngens, sizes, rng, trivial_at=(), unip_trivial_at=(), conjugate=True):
    """``P (sum chi_i * U_i) P^-1`` with distinct characters; returns (rho, chars, unipotent reps, P)."""
    chars = distinct_characters(F, ngens, len(sizes), rng, trivial_at)
    unips = []
    for n in sizes:
        gens = commuting_unipotents(F, n, ngens, rng)
        gens = [Matrix.identity(F, n) if j in unip_trivial_at else m for j, m in enumerate(gens)]
        unips.append(PadicRep(gens))
    twisted = [u.twist(c) for u, c in zip(unips, chars)]
    gens = [block_diag([t.generators[j] for t in twisted]) for j in range(ngens)]
    rho = PadicRep(gens)
    P = None
    if conjugate:
        P = rand_invertible(F, sum(sizes), rng)
        rho = rho.conjugate(P)
    return rho, chars, unips, P


def rand_abeloid(F, g, rng):
    """Abeloid model whose combined basis is unimodular (integral inverse)."""
    rows = rand_unimodular_ints(rng, 2 * g, F.p, bound=3)
    B = Matrix.from_entries(F, rows)
    analytic = B.submatrix(range(2 * g), range(g))
    omega = B.submatrix(range(2 * g), range(g, 2 * g))
    return AbeloidModel(g, omega, analytic)


def with_new_complement(A, rng):
    """Same W_omega, a different random complement, again with unimodular combined basis.

    Unimodularity keeps the coordinates of e_j integral, so the exponential
    corrections of the line correspondence stay in the convergence domain.
    """
    F = A.field
    g = A.g
    while True:
        cand = Matrix.from_entries(F, [[rng.randrange(-3, 4) for _ in range(g)] for _ in range(2 * g)])
        if cand == A.analytic_basis or not det(hstack([cand, A.omega_basis])).is_unit():
            continue
        return AbeloidModel(g, A.omega_basis, cand, A.ordinary, A.canonical_directions)


def analytic_character(F, A, rng):
    """``exp`` of a functional vanishing on W_omega, values in 1 + pO."""
    g = A.g
    lam = [F(F.p * rng.randrange(0, F.p ** 2)) for _ in range(g)]
    vals = []
    for j in range(2 * g):
        mu = None
        for i in range(g):
            t = A.alpha(i, j) * lam[i]
            mu = t if mu is None else mu + t
        vals.append(padic_exp(mu))
    return CharacterTuple(vals)


def rand_higgs(F, A, sizes, rng):
    """Valid Higgs model: analytic line characters, commuting nilpotent data."""
    g = A.g
    blocks = []
    for n in sizes:
        while True:
            line = HiggsLine(analytic_character(F, A, rng),
                             tuple(F(F.p * rng.randrange(0, F.p ** 2)) for _ in range(g)))
            if all(not (line == b.line) for b in blocks):
                break
        mats = commuting_nilpotents(F, n, 2 * g, rng)
        blocks.append(HiggsBlock(line, UnipotentHiggs(mats[:g], mats[g:])))
    return HiggsModel(blocks)


def small_field(p=5, N=16):
    return FieldConfig(p, N)


def rng_for(seed):
    return random.Random(seed)
