import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from fgx.linalg import (combine_primary, crt_idempotent, factorize, invariant_factors,
                        local_smith, matmul, row_module_basis, smith_normal_form)


def test_snf_of_diag_2_3():
    S, U, V = smith_normal_form([[2, 0], [0, 3]])
    assert S == [[1, 0], [0, 6]]
    assert matmul(matmul(U, [[2, 0], [0, 3]]), V) == S


def test_snf_textbook_example():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    S, U, V, Ui, Vi = smith_normal_form(M, return_inverses=True)
    assert [S[i][i] for i in range(3)] == [2, 6, 12]
    assert matmul(matmul(U, M), V) == S
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    assert matmul(U, Ui) == I3 and matmul(V, Vi) == I3


def test_invariant_factors():
    assert invariant_factors([[2, 0], [0, 2]]) == (2, 2)
    assert invariant_factors([[2, 0], [0, 3]]) == (6,)
    # a free summand shows up as 0
    assert invariant_factors([[4, 0]]) == (4, 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_is_valid(M):
    S, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == S
    diag = [S[i][i] for i in range(min(len(S), 3))]
    for i in range(len(S)):
        for j in range(3):
            if i != j:
                assert S[i][j] == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b % a == 0) if a else b == 0


def _span_size(A, q):
    span = {tuple([0] * A.shape[1])}
    for row in A:
        span = {tuple((np.array(s) + c * row) % q) for s in span for c in range(q)}
    return len(span)


def _kernel_size(A, q):
    n = A.shape[1]
    return sum(1 for x in itertools.product(range(q), repeat=n)
               if not ((A @ np.array(x)) % q).any())


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (2, 3), (5, 1)]),
       st.lists(st.lists(st.integers(0, 26), min_size=3, max_size=3), min_size=1, max_size=4))
def test_local_smith_against_brute_force(pk, rows):
    p, k = pk
    q = p ** k
    A = np.array(rows, dtype=np.int64) % q
    ls = local_smith(A, p, k)
    gens, orders = ls.kernel()
    assert int(np.prod(orders, dtype=np.int64)) == _kernel_size(A, q)
    for g in gens:
        assert not ((A @ g) % q).any()
    _, cok = ls.cokernel()
    assert int(np.prod(cok, dtype=np.int64)) * _span_size(A, q) == q ** 3
    # kernel coordinates invert the generator expansion
    if len(gens):
        coeffs = np.arange(1, len(gens) + 1)
        x = (coeffs @ gens) % q
        c = ls.kernel_coordinates(x)[0]
        assert np.array_equal((c @ gens) % q, x)


def test_row_module_basis_keeps_the_span():
    rng = np.random.default_rng(5)
    A = rng.integers(0, 9, size=(40, 3))
    B = row_module_basis(A, 3, 2)
    assert B.shape[0] <= 3
    assert _span_size(B, 9) == _span_size(A % 9, 9)


def test_factorize_and_crt():
    assert factorize(360) == [(2, 3), (3, 2), (5, 1)]
    assert factorize(1) == []
    e = crt_idempotent(12, 2, 2)
    assert e % 4 == 1 and e % 3 == 0
    assert crt_idempotent(9, 3, 2) == 1


def test_combine_primary():
    assert combine_primary({2: [2, 4], 3: [3]}) == (2, 12)
    assert combine_primary({}) == ()
