"""Exact linear algebra: ranks, kernels, monomial bases, multiplication maps."""

import random
from fractions import Fraction
from math import comb

import pytest

from monadlab.exactlin import (
    GF,
    QQ,
    DenseMatrix,
    compose_check,
    forms_matrix,
    kernel_basis,
    monomial_basis,
    monomial_count,
    monomial_exponents,
    mult_map,
    parse_linear_form,
    rank,
)


def gauss_rank_oracle(rows, ncols):
    """Independent plain fraction Gaussian elimination, for cross-checking."""
    m = [[Fraction(x) for x in row] for row in rows]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_rank_examples():
    assert rank(DenseMatrix.from_rows(QQ, [[1, 0], [0, 0]])) == 1
    assert rank(DenseMatrix.zeros(QQ, 3, 5)) == 0
    # coefficient matrix of (-y, x, z, w): rows are the coefficient vectors
    rows = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert gauss_rank_oracle(rows, 4) == 4
    assert rank(DenseMatrix.from_rows(QQ, rows)) == 4


def test_kernel_examples():
    assert kernel_basis(DenseMatrix.identity(QQ, 3)).ncols == 0
    assert kernel_basis(DenseMatrix.zeros(QQ, 2, 3)).ncols == 3
    k = kernel_basis(DenseMatrix.from_rows(QQ, [[1, 1]]))
    assert k.ncols == 1
    assert [k.data[0][0], k.data[1][0]] == [Fraction(1), Fraction(-1)]


def test_rank_plus_kernel_is_cols():
    rng = random.Random(2024)
    for _ in range(80):
        r, c = rng.randint(0, 6), rng.randint(0, 6)
        rows = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        for field in (QQ, GF(32003)):
            m = DenseMatrix(field, r, c, [[field.coerce(x) for x in row] for row in rows])
            kern = m.right_kernel()
            assert m.rank() + kern.ncols == c
            if kern.ncols and r:
                assert m.matmul(kern).is_zero()


def test_bareiss_matches_plain_gauss():
    rng = random.Random(7)
    for _ in range(60):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        rows = [[Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(c)]
                for _ in range(r)]
        m = DenseMatrix(QQ, r, c, rows)
        assert m.rank() == gauss_rank_oracle(rows, c)


def test_rank_agrees_over_q_and_large_primes():
    rng = random.Random(13)
    rows = [[rng.randint(-50, 50) for _ in range(9)] for _ in range(7)]
    rq = rank(DenseMatrix.from_rows(QQ, rows))
    for p in (32003, 65521, 1000003):
        assert rank(DenseMatrix.from_rows(GF(p), rows)) == rq


def test_monomial_basis():
    b = monomial_basis(4, 1)
    assert b.exponents == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert len(monomial_basis(4, 2)) == 10
    assert len(monomial_basis(4, -1)) == 0
    for e in monomial_exponents(3, 5):
        assert sum(e) == 5
    assert monomial_count(4, 2) == comb(5, 3)


def test_monomial_pascal_recurrence():
    for m in (2, 3, 4):
        for d in range(0, 7):
            assert monomial_count(m, d) == monomial_count(m - 1, d) + monomial_count(m, d - 1)


def test_mult_map_single_form():
    L = forms_matrix(QQ, 2, [["x0"]])
    m = mult_map(L, 0)
    assert (m.nrows, m.ncols) == (2, 1)
    assert [m.data[0][0], m.data[1][0]] == [Fraction(1), Fraction(0)]
    assert mult_map(L, -1).ncols == 0
    assert mult_map(L, -1).rank() == 0


def test_mult_maps_commute():
    f = forms_matrix(QQ, 2, [["x0"]])
    g = forms_matrix(QQ, 2, [["x1"]])
    for d in range(0, 5):
        lhs = mult_map(g, d + 1).matmul(mult_map(f, d))
        rhs = mult_map(f, d + 1).matmul(mult_map(g, d))
        assert lhs == rhs


def test_mult_map_composes_to_zero_when_forms_do():
    beta = forms_matrix(QQ, 4, [["-y", "x", "z", "w"]])
    alpha = forms_matrix(QQ, 4, [["x"], ["y"], ["-w"], ["z"]])
    assert compose_check(beta, alpha)
    for d in range(0, 4):
        assert mult_map(beta, d + 1).matmul(mult_map(alpha, d)).is_zero()


def test_compose_check():
    beta = forms_matrix(QQ, 4, [["-y", "x", "z", "w"]])
    assert compose_check(beta, forms_matrix(QQ, 4, [["x"], ["y"], ["0"], ["0"]]))
    assert compose_check(beta, forms_matrix(QQ, 4, [["x"], ["y"], ["-w"], ["z"]]))
    # x * x survives
    assert not compose_check(forms_matrix(QQ, 4, [["x", "0"]]),
                             forms_matrix(QQ, 4, [["x"], ["0"]]))


def test_parse_linear_form():
    assert parse_linear_form("x - 2*w", 4) == [1, 0, 0, -2]
    assert parse_linear_form("-y", 4) == [0, -1, 0, 0]
    assert parse_linear_form("x0 + x0", 2) == [2, 0]
    assert parse_linear_form("0", 3) == [0, 0, 0]
    with pytest.raises(ValueError):
        parse_linear_form("q", 4)


def test_prime_field_arithmetic():
    f = GF(7)
    assert f.coerce(Fraction(1, 2)) == 4   # 2 * 4 = 8 = 1 mod 7
    assert f.inv(3) == 5
    with pytest.raises(ValueError):
        GF(6)


def test_evaluate_linear_forms():
    alpha = forms_matrix(QQ, 4, [["x"], ["y"], ["-w"], ["z"]])
    m = alpha.at([1, 0, 0, 0])
    assert [row[0] for row in m.data] == [1, 0, 0, 0]
    m = alpha.at([0, 0, 1, 0])
    assert [row[0] for row in m.data] == [0, 0, 0, 1]
