import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadmod.blockdiag import (
    TypeI,
    TypeII,
    apply_transform,
    block_diagonalize,
    blocks_to_matrix,
    check_symmetric,
    integer_det,
    mat_inverse_mod,
    mat_mul,
    mat_vec,
)
from quadmod.modring import DomainError, PrimePower


def test_check_symmetric():
    assert check_symmetric([[1, 2], [2, 3]]) == 2
    with pytest.raises(DomainError):
        check_symmetric([[1, 2], [3, 1]])
    with pytest.raises(DomainError):
        check_symmetric([[1, 2]])


def test_integer_det():
    assert integer_det([[1, 2], [2, 1]]) == -3
    assert integer_det([[2]]) == 2
    assert integer_det([]) == 1
    assert integer_det([[0, 1, 0], [1, 0, 0], [0, 0, 3]]) == -3


def test_matrix_helpers():
    q = 7
    a = [[1, 2], [3, 4]]
    b = [[5, 6], [0, 1]]
    assert mat_mul(a, b, q) == [[5, 1], [1, 1]]
    assert mat_vec(a, [1, 1], q) == [3, 0]
    inv = mat_inverse_mod(a, PrimePower(7, 1))
    assert mat_mul(a, inv, q) == [[1, 0], [0, 1]]


def test_type2_matrix_scaling():
    blk = TypeII(1, 1, 3, 0)
    assert blk.matrix() == [[4, 6], [6, 0]]
    with pytest.raises(DomainError):
        TypeII(0, 1, 2, 1)  # middle coefficient must be odd


def test_hyperbolic_plane_odd():
    # x y form splits into two squares over Z/5
    bd = block_diagonalize([[0, 1], [1, 0]], PrimePower(5, 1))
    assert bd.blocks == (TypeI(2), TypeI(2))
    assert bd.u == ((1, 2), (1, 3))


def test_hyperbolic_plane_two():
    bd = block_diagonalize([[0, 1], [1, 0]], PrimePower(2, 3))
    assert bd.blocks == (TypeII(0, 0, 1, 0),)
    assert bd.u == ((1, 0), (0, 1))


def test_already_diagonal():
    bd = block_diagonalize([[3, 0], [0, 10]], PrimePower(5, 2))
    assert bd.blocks == (TypeI(3), TypeI(10))


def test_zero_form():
    bd = block_diagonalize([[0, 0], [0, 0]], PrimePower(3, 2))
    assert bd.blocks == (TypeI(0), TypeI(0))
    assert blocks_to_matrix(bd) == [[0, 0], [0, 0]]


@st.composite
def instances(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    k = draw(st.integers(min_value=1, max_value=5))
    n = draw(st.integers(min_value=1, max_value=4))
    pp = PrimePower(p, k)
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = draw(st.integers(min_value=0, max_value=pp.q - 1))
            mat[i][j] = v
            mat[j][i] = v
    return pp, mat


@given(instances())
@settings(max_examples=200, deadline=None)
def test_block_diagonalize_contract(inst):
    pp, mat = inst
    n = len(mat)
    bd = block_diagonalize(mat, pp)
    u = [list(row) for row in bd.u]
    assert integer_det(u) % pp.q == 1
    assert apply_transform(mat, u, pp) == blocks_to_matrix(bd)
    assert sum(b.dim for b in bd.blocks) == n
    for b in bd.blocks:
        if pp.p != 2:
            assert isinstance(b, TypeI)
        if isinstance(b, TypeII):
            assert b.b % 2 == 1
            assert 0 <= b.ell < pp.k
