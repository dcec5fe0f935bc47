import random
from fractions import Fraction

import pytest

from hopfcyclic.linalg import (
    SparseMatrix, SubspaceNotContained, ShapeMismatch,
    compose, tensor_kron, kernel_basis, kernel_canonicalize, image_rank,
    quotient_dim, rref, parse_scalar, format_scalar, scal,
    matrix_to_text, matrix_from_text,
)


def M(rows):
    return SparseMatrix.from_rows(rows)


def random_matrix(rng, rows, cols, density=0.5):
    ent = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                num = rng.randint(-6, 6)
                den = rng.choice([1, 1, 2, 3])
                if num:
                    ent[(i, j)] = scal(Fraction(num, den))
    return SparseMatrix(rows, cols, ent)


# -- kernel / rank ----------------------------------------------------------

def test_kernel_zero_matrix_standard_basis():
    ker = kernel_basis(SparseMatrix.zeros(2, 2))
    assert ker == [{0: 1}, {1: 1}]

def test_kernel_identity_empty():
    assert kernel_basis(SparseMatrix.identity(3)) == []

def test_kernel_rank_one_hand_reduced():
    # [[1,2],[2,4]] row-reduces to [[1,2]]; kernel = span{(-2,1)}
    m = M([[1, 2], [2, 4]])
    assert kernel_basis(m) == [{0: -2, 1: 1}]
    assert image_rank(m) == 1

def test_rank_trivial():
    assert image_rank(SparseMatrix.identity(5)) == 5
    assert image_rank(SparseMatrix.zeros(4, 7)) == 0

def test_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(25):
        m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert image_rank(m) + len(kernel_basis(m)) == m.cols

def test_kernel_canonical_idempotent():
    rng = random.Random(11)
    for _ in range(20):
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
        ker = kernel_basis(m)
        assert kernel_canonicalize(ker, m.cols) == ker

def test_kernel_vectors_annihilated():
    rng = random.Random(13)
    for _ in range(20):
        m = random_matrix(rng, 4, 5)
        for v in kernel_basis(m):
            assert m.apply(v) == {}


# -- quotients ---------------------------------------------------------------

def test_quotient_dim_basic():
    e1, e2 = {0: 1}, {1: 1}
    assert quotient_dim([e1, e2], [e1]) == 1
    assert quotient_dim([e1, e2], [e1, e2]) == 0
    assert quotient_dim([e1, e2], [{0: 1, 1: 1}]) == 1

def test_quotient_dim_not_contained():
    with pytest.raises(SubspaceNotContained):
        quotient_dim([{0: 1}], [{1: 1}])


# -- products ----------------------------------------------------------------

def test_compose_identity():
    rng = random.Random(3)
    m = random_matrix(rng, 3, 4)
    assert compose(SparseMatrix.identity(3), m) == m
    assert compose(m, SparseMatrix.identity(4)) == m

def test_compose_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        compose(SparseMatrix.zeros(2, 3), SparseMatrix.zeros(2, 3))

def test_compose_associative_random():
    rng = random.Random(5)
    for _ in range(10):
        a = random_matrix(rng, 3, 4)
        b = random_matrix(rng, 4, 2)
        c = random_matrix(rng, 2, 5)
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

def test_kron_identities():
    assert tensor_kron(SparseMatrix.identity(2), SparseMatrix.identity(3)) == SparseMatrix.identity(6)

def test_kron_block_swap():
    # swap (x) I_2 is the 4x4 block swap
    swap = M([[0, 1], [1, 0]])
    expected = M([
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ])
    assert tensor_kron(swap, SparseMatrix.identity(2)) == expected

def test_kron_mixed_product_rule():
    rng = random.Random(17)
    for _ in range(8):
        a = random_matrix(rng, 2, 3)
        b = random_matrix(rng, 3, 2)
        c = random_matrix(rng, 3, 2)
        d = random_matrix(rng, 2, 3)
        lhs = compose(tensor_kron(a, b), tensor_kron(c, d))
        rhs = tensor_kron(compose(a, c), compose(b, d))
        assert lhs == rhs


# -- serialization -----------------------------------------------------------

def test_scalar_round_trip():
    rng = random.Random(23)
    for _ in range(50):
        x = scal(Fraction(rng.randint(-99, 99), rng.randint(1, 40)))
        assert parse_scalar(format_scalar(x)) == x

def test_matrix_text_round_trip():
    rng = random.Random(29)
    m = random_matrix(rng, 4, 6)
    assert matrix_from_text(matrix_to_text(m)) == m

def test_rref_is_canonical():
    # same row space, different presentations -> identical RREF
    a = M([[2, 4, 0], [1, 2, 1]])
    b = M([[1, 2, 1], [3, 6, 1], [1, 2, -1]])
    assert rref(a) == rref(b)


# -- randomized cross-check against a naive dense echelon oracle ---------------

def dense_rref_oracle(rows, ncols):
    """Textbook Gauss-Jordan on dense lists; returns (pivot cols, rows)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = Fraction(m[r][c])
        m[r] = [Fraction(x) / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    out = []
    for i in range(r):
        out.append({j: scal(Fraction(x)) for j, x in enumerate(m[i]) if x})
    return pivots, out

def test_rref_matches_dense_oracle():
    rng = random.Random(101)
    for trial in range(40):
        nr, nc = rng.randint(1, 9), rng.randint(1, 12)
        dense = [[scal(Fraction(rng.randint(-5, 5), rng.choice([1, 1, 2, 3])))
                  if rng.random() < 0.45 else 0 for _ in range(nc)]
                 for _ in range(nr)]
        m = SparseMatrix.from_rows(dense)
        got_piv, got_rows = rref(m)
        exp_piv, exp_rows = dense_rref_oracle(dense, nc)
        assert got_piv == exp_piv, trial
        assert got_rows == exp_rows, trial

def test_solver_reconstruction_random():
    # solve() coefficients must reconstruct the vector over the inserted basis
    from hopfcyclic.linalg import SpanSolver, vec_axpy
    rng = random.Random(202)
    for trial in range(25):
        dim = rng.randint(2, 10)
        vecs = []
        for _ in range(rng.randint(1, 6)):
            v = {i: scal(Fraction(rng.randint(-4, 4), rng.choice([1, 2])))
                 for i in range(dim) if rng.random() < 0.5}
            vecs.append({i: x for i, x in v.items() if x})
        solver = SpanSolver(track=True)
        for v in vecs:
            solver.add(v)
        # random combination of the inserted vectors must solve exactly
        target = {}
        coeffs = [rng.randint(-3, 3) for _ in vecs]
        for c, v in zip(coeffs, vecs):
            vec_axpy(target, c, v)
        sol = solver.solve(target)
        assert sol is not None
        recon = {}
        for k, c in sol.items():
            vec_axpy(recon, c, vecs[k])
        assert recon == target, trial
