from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from builders import det_fraction, rand_invertible, rng_for
from padic_simpson.errors import DomainError, PrecisionExhausted, RootsNotInField
from padic_simpson.field import FieldConfig
from padic_simpson.linalg import (
    Matrix,
    Poly,
    charpoly,
    det,
    generalized_eigenspace,
    inverse,
    kernel_basis,
    rank,
    root_clusters,
    roots_in_principal_units,
    solve,
)

F = FieldConfig(5, 16)
p = F.p


def charpoly_oracle(rows):
    """det(tI - M) over Q: evaluate at n+1 integers, then Lagrange interpolate."""
    n = len(rows)
    pts = list(range(n + 1))
    vals = [det_fraction([[(t if i == j else 0) - rows[i][j] for j in range(n)] for i in range(n)])
            for t in pts]
    coeffs = [Fraction(0)] * (n + 1)
    for i, xi in enumerate(pts):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(pts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n + 1):
            coeffs[k] += vals[i] * basis[k] / denom
    return coeffs


def same_multiset(got, expected):
    rest = list(got)
    for e in expected:
        k = next((i for i, r in enumerate(rest) if r == e), None)
        if k is None:
            return False
        rest.pop(k)
    return not rest


# -- basics -------------------------------------------------------------------

def test_matrix_arithmetic():
    A = Matrix.from_entries(F, [[1, 2], [3, 4]])
    B = Matrix.from_entries(F, [[0, 1], [1, 0]])
    assert A @ B == Matrix.from_entries(F, [[2, 1], [4, 3]])
    assert A + B - B == A
    assert A ** 0 == Matrix.identity(F, 2)
    assert (A ** 3) == A @ A @ A
    assert A.T == Matrix.from_entries(F, [[1, 3], [2, 4]])
    assert A.trace() == 5
    assert det(A) == -2


def test_kron_shape():
    A = Matrix.identity(F, 2)
    B = Matrix.from_entries(F, [[1, 2, 3]])
    K = A.kron(B)
    assert K.shape == (2, 6)
    assert K[1, 4] == 2 and K[0, 4] == 0


# -- charpoly -------------------------------------------------------------------------

def test_charpoly_examples():
    assert charpoly(Matrix.identity(F, 2)) == Poly.from_roots(F, [1, 1])
    D = Matrix.diag(F, [F(1 + p), F(1 + p * p)])
    assert charpoly(D) == Poly.from_roots(F, [1 + p, 1 + p * p])


@pytest.mark.parametrize("seed", range(5))
def test_charpoly_matches_cofactor_oracle(seed):
    rng = rng_for(seed)
    rows = [[rng.randrange(-20, 21) for _ in range(4)] for _ in range(4)]
    expected = Poly(F, charpoly_oracle(rows))
    assert charpoly(Matrix.from_entries(F, rows)) == expected


def test_charpoly_is_division_free_at_p2():
    F2 = FieldConfig(2, 20)
    rows = [[3, 1, 0, 2, 1], [1, 1, 4, 0, 1], [0, 2, 1, 1, 0], [1, 0, 0, 1, 3], [2, 2, 1, 0, 1]]
    cp = charpoly(Matrix.from_entries(F2, rows))
    assert min(c.prec for c in cp.coeffs) == F2.precision
    assert cp == Poly(F2, charpoly_oracle(rows))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_charpoly_similarity_invariance(seed):
    rng = rng_for(seed)
    n = rng.randrange(2, 5)
    M = Matrix.from_entries(F, [[rng.randrange(-9, 10) for _ in range(n)] for _ in range(n)])
    P = rand_invertible(F, n, rng)
    assert charpoly(P @ M @ inverse(P)) == charpoly(M)


# -- kernels ------------------------------------------------------------------------------

def test_kernel_examples():
    assert len(kernel_basis(Matrix.zeros(F, 3, 3))) == 3
    assert kernel_basis(Matrix.identity(F, 3)) == []
    (v,) = kernel_basis(Matrix.from_entries(F, [[1, 1], [1, 1]]))
    assert {str(x) for x in v} == {str(F(1)), str(F(-1))}
    assert v[0] + v[1] == 0


def test_kernel_tolerance_decides_rank():
    M = Matrix.from_entries(F, [[1, 0], [0, p ** 10]])
    assert rank(M) == 2
    assert rank(M, tol=8) == 1
    assert len(kernel_basis(M, tol=8)) == 1


def test_kernel_with_imposed_dimension():
    M = Matrix.from_entries(F, [[1, 2], [2, 4 + p ** 3]])
    assert len(kernel_basis(M, tol=3)) == 1
    assert rank(M) == 2
    with pytest.raises(PrecisionExhausted):
        kernel_basis(Matrix.zeros(F, 2, 2), dim=1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rank_nullity(seed):
    rng = rng_for(seed)
    r, c, k = rng.randrange(1, 6), rng.randrange(1, 6), rng.randrange(0, 4)
    # rank at most k by construction
    L = Matrix.from_entries(F, [[rng.randrange(-9, 10) for _ in range(k)] for _ in range(r)]) if k else None
    R = Matrix.from_entries(F, [[rng.randrange(-9, 10) for _ in range(c)] for _ in range(k)]) if k else None
    M = L @ R if k else Matrix.zeros(F, r, c)
    ker = kernel_basis(M)
    assert len(ker) + rank(M) == c
    assert rank(M) <= k
    for v in ker:
        assert all(x.is_zero() for x in M.apply(v))


def test_solve_and_inverse():
    A = Matrix.from_entries(F, [[2, 1], [1, 3]])
    B = Matrix.from_entries(F, [[1], [0]])
    X = solve(A, B)
    assert A @ X == B
    assert inverse(A) @ A == Matrix.identity(F, 2)
    with pytest.raises(DomainError):
        solve(Matrix.from_entries(F, [[1, 1], [1, 1]]), Matrix.from_entries(F, [[1], [0]]))


# -- eigenspaces --------------------------------------------------------------------

def test_generalized_eigenspace_examples():
    assert len(generalized_eigenspace(Matrix.identity(F, 3), F(1))) == 3
    D = Matrix.diag(F, [F(1 + p), F(1 + p * p)])
    (v,) = generalized_eigenspace(D, F(1 + p))
    assert v[0] == 1 and v[1] == 0
    J = Matrix.from_entries(F, [[1 + p, 1], [0, 1 + p]])
    assert len(generalized_eigenspace(J, F(1 + p))) == 2
    assert generalized_eigenspace(D, F(2)) == []


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_eigenspace_dimensions_sum_to_n(seed):
    rng = rng_for(seed)
    sizes = [rng.randrange(1, 3) for _ in range(rng.randrange(1, 4))]
    residues = rng.sample(range(1, p), len(sizes))
    n = sum(sizes)
    rows = [[0] * n for _ in range(n)]
    at = 0
    for s, a in zip(sizes, residues):
        for i in range(s):
            rows[at + i][at + i] = 1 + p * a
            if i + 1 < s:
                rows[at + i][at + i + 1] = rng.randrange(0, 3)
        at += s
    P = rand_invertible(F, n, rng)
    M = P @ Matrix.from_entries(F, rows) @ inverse(P)
    clusters = root_clusters(charpoly(M))
    total = sum(len(generalized_eigenspace(M, c.center, dim=c.multiplicity)) for c in clusters)
    assert total == n
    assert sum(c.multiplicity for c in clusters) == n


# -- roots ------------------------------------------------------------------------------------

def test_roots_examples():
    assert same_multiset(roots_in_principal_units(Poly.from_roots(F, [1, 1])), [F(1), F(1)])
    f = Poly.from_roots(F, [1 + p, 1 + p * p])
    assert same_multiset(roots_in_principal_units(f), [F(1 + p), F(1 + p * p)])
    g = Poly(F, [1 + p, -(2 + p), 1])
    assert g == Poly.from_roots(F, [1, 1 + p])
    assert same_multiset(roots_in_principal_units(g), [F(1), F(1 + p)])


def test_roots_outside_principal_units():
    with pytest.raises(RootsNotInField):
        roots_in_principal_units(Poly.from_roots(F, [2, 1]))
    # x^2 - 2u with u a principal unit: 2 is not a square mod 5
    with pytest.raises(RootsNotInField):
        roots_in_principal_units(Poly(F, [-(1 + p) * (1 + 2 * p) * 2, 0, 1]))


def test_roots_in_extension():
    K = FieldConfig(3, 12, (1, 0, 1))
    x = K([0, 1])
    r1, r2 = 1 + 3 * x, 1 + 3 + 9 * x
    assert same_multiset(roots_in_principal_units(Poly.from_roots(K, [r1, r2])), [r1, r2])


def test_cluster_next_to_multiple_root():
    # triple root at distance p^3 from a simple root
    roots = [F(1), F(1 + 120), F(1 + 120), F(1 + 120), F(1 + 245)]
    clusters = root_clusters(Poly.from_roots(F, roots))
    assert [c.multiplicity for c in clusters] == [1, 3, 1]
    assert same_multiset(roots_in_principal_units(Poly.from_roots(F, roots)), roots)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, p ** 3 - 1), min_size=1, max_size=6))
def test_roots_of_expanded_product(ks):
    roots = [F(1 + p * k) for k in ks]
    got = roots_in_principal_units(Poly.from_roots(F, roots))
    assert len(got) == len(roots)
    assert same_multiset(got, roots)
