"""Exact linear algebra: products, echelon forms, solves, certificates."""

import random

import pytest

from modcoh.errors import MixedContexts, ShapeMismatch, Singular
from modcoh.gf import field_new
from modcoh.grp import family_matrix
from modcoh.linalg import (
    Matrix,
    direct_sum,
    inverse,
    kernel_basis,
    kron,
    matmul,
    matrix_from_json,
    matrix_to_json,
    rank,
    rref,
    solve,
)

F2 = field_new(2)
F3 = field_new(3)
F4 = field_new(2, 2)


def random_matrix(rng, ctx, rows, cols):
    return Matrix(ctx, rows, cols, [rng.randrange(ctx.q) for _ in range(rows * cols)])


def row_space_size_oracle(m):
    """Brute-force span enumeration; |span| = q^rank."""
    ctx = m.ctx
    vectors = {tuple([0] * m.cols)}
    rows = [tuple(m.row_list(i)) for i in range(m.rows)]
    changed = True
    while changed:
        changed = False
        for v in list(vectors):
            for r in rows:
                for c in range(1, ctx.q):
                    w = tuple(ctx.add_i(a, ctx.mul_i(c, b)) for a, b in zip(v, r))
                    if w not in vectors:
                        vectors.add(w)
                        changed = True
    return len(vectors)


def test_identity_matmul():
    m = Matrix.from_rows(F3, [[1, 2], [0, 1]])
    assert Matrix.identity(F3, 2) @ m == m
    assert matmul(m, Matrix.identity(F3, 2)) == m


def test_char2_square_of_ones():
    ones = Matrix.from_rows(F2, [[1, 1], [1, 1]])
    assert (ones @ ones).is_zero


def test_family_involution_over_gf4():
    # A(t) @ A(t) = A(t + t) = A(0) = I
    t = F4.gen()
    a = family_matrix(F4, t)
    assert a @ a == Matrix.identity(F4, 2)


def test_rref_identity_and_zero():
    r, pivots, rk = rref(Matrix.identity(F3, 3))
    assert r == Matrix.identity(F3, 3) and pivots == (0, 1, 2) and rk == 3
    z = Matrix.zeros(F3, 2, 3)
    r, pivots, rk = rref(z)
    assert r == z and pivots == () and rk == 0


def test_rref_rank_against_row_space_oracle():
    m = Matrix.from_rows(F2, [[1, 1], [1, 1]])
    assert row_space_size_oracle(m) == 2**rank(m)
    assert rank(m) == 1
    rng = random.Random(3)
    for _ in range(20):
        m = random_matrix(rng, F3, 3, 3)
        assert row_space_size_oracle(m) == 3 ** rank(m)


def test_rref_determinism():
    rng = random.Random(11)
    m = random_matrix(rng, F4, 4, 5)
    assert rref(m) == rref(m)


def test_solve_identity_and_certificates():
    v = Matrix.column(F3, [1, 2])
    res = solve(Matrix.identity(F3, 2), v)
    assert res.consistent and res.solution == v and res.kernel == ()
    res = solve(Matrix.zeros(F3, 2, 2), v)
    assert not res.consistent
    y = res.certificate
    assert (y @ Matrix.zeros(F3, 2, 2)).is_zero and not (y @ v).is_zero


def test_solve_vs_rank_comparison_random():
    # consistency of solve() must coincide with rank(a) == rank(a|b)
    rng = random.Random(5)
    for ctx in (F2, F3, F4):
        for _ in range(200):
            rows, cols = rng.randrange(1, 5), rng.randrange(1, 4)
            a = random_matrix(rng, ctx, rows, cols)
            b = random_matrix(rng, ctx, rows, 1)
            res = solve(a, b)
            aug = Matrix(ctx, rows, cols + 1, [
                x for i in range(rows) for x in a.row_list(i) + b.row_list(i)
            ])
            assert res.consistent == (rank(a) == rank(aug))
            if res.consistent:
                assert a @ res.solution == b
                assert len(res.kernel) == cols - rank(a)
                for k in res.kernel:
                    assert (a @ k).is_zero
            else:
                y = res.certificate
                assert (y @ a).is_zero and not (y @ b).is_zero


def test_kernel_basis_properties():
    rng = random.Random(9)
    for _ in range(30):
        m = random_matrix(rng, F3, 3, 5)
        basis = kernel_basis(m)
        assert len(basis) == 5 - rank(m)
        for v in basis:
            assert (m @ v).is_zero


def test_kron_identities():
    assert kron(Matrix.identity(F3, 2), Matrix.identity(F3, 3)) == Matrix.identity(F3, 6)
    a = Matrix.from_rows(F3, [[1, 2], [0, 1]])
    b = Matrix.from_rows(F3, [[1, 0, 2], [2, 1, 0], [0, 0, 1]])
    assert kron(a, b).rows == 6 and kron(a, b).cols == 6


def kron_entry_oracle(a, b, i, j):
    return a[i // b.rows, j // b.cols] * b[i % b.rows, j % b.cols]


def test_kron_mixed_product_with_expansion_oracle():
    rng = random.Random(13)
    for _ in range(10):
        a, b, c, d = (random_matrix(rng, F3, 2, 2) for _ in range(4))
        lhs = kron(a, b) @ kron(c, d)
        rhs = kron(a @ c, b @ d)
        assert lhs == rhs
        for i in range(4):
            for j in range(4):
                assert kron(a, b)[i, j] == kron_entry_oracle(a, b, i, j)


def test_direct_sum():
    assert direct_sum(Matrix.identity(F3, 1), Matrix.identity(F3, 2)) == Matrix.identity(F3, 3)
    rng = random.Random(17)
    a, b, c, d = (random_matrix(rng, F4, 2, 2) for _ in range(4))
    assert direct_sum(a, b) @ direct_sum(c, d) == direct_sum(a @ c, b @ d)


def test_inverse_shear_gf3():
    m = Matrix.from_rows(F3, [[1, 1], [0, 1]])
    assert inverse(m) == Matrix.from_rows(F3, [[1, -1], [0, 1]])


def test_inverse_singular_and_random():
    with pytest.raises(Singular):
        inverse(Matrix.from_rows(F2, [[1, 1], [1, 1]]))
    rng = random.Random(23)
    found = 0
    while found < 10:
        m = random_matrix(rng, F4, 3, 3)
        if rank(m) == 3:
            assert m @ inverse(m) == Matrix.identity(F4, 3)
            found += 1


def test_shape_and_context_errors():
    a = Matrix.identity(F3, 2)
    with pytest.raises(ShapeMismatch):
        a @ Matrix.identity(F3, 3)
    with pytest.raises(MixedContexts):
        a @ Matrix.identity(F2, 2)
    with pytest.raises(ShapeMismatch):
        a + Matrix.zeros(F3, 2, 3)
    with pytest.raises(ShapeMismatch):
        solve(Matrix.zeros(F3, 2, 2), Matrix.zeros(F3, 3, 1))


def test_matrix_serialization_round_trip():
    rng = random.Random(29)
    m = random_matrix(rng, F4, 2, 3)
    assert matrix_from_json(F4, matrix_to_json(m)) == m
    obj = matrix_to_json(m)
    assert obj["rows"] == 2 and obj["cols"] == 3
    assert all(len(entry) == 2 for row in obj["entries"] for entry in row)


def test_flatten_reshape_row_major():
    m = Matrix.from_rows(F3, [[1, 2], [0, 1]])
    assert m.flatten().transpose() == Matrix.from_rows(F3, [[1, 2, 0, 1]])
    assert m.flatten().reshape(2, 2) == m
