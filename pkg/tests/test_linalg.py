import numpy as np
import pytest

from paraosc import linalg
from paraosc.qscalar import ExactRing, FloatRing

R = ExactRing(2)


def test_exact_inverse():
    a = linalg.as_matrix(R, [[1, 2, 0], [0, 1, 1j], [1, 0, 1]])
    inv = linalg.inverse(R, a)
    assert linalg.is_zero_matrix(R, a @ inv - linalg.eye(R, 3))


def test_singular():
    a = linalg.as_matrix(R, [[1, 1], [1, 1]])
    with pytest.raises(linalg.SingularMatrixError):
        linalg.inverse(R, a)
    with pytest.raises(linalg.SingularMatrixError):
        linalg.inverse(FloatRing(2), np.ones((2, 2), dtype=complex))


def test_solve_linear_free_and_inconsistent():
    rows = [[R.one(), R.one()], [R.scalar(2), R.scalar(2)]]
    x, rank = linalg.solve_linear(R, rows, [R.one(), R.scalar(2)])
    assert rank == 1
    assert x[0] == R.one() and R.is_zero(x[1])
    with pytest.raises(linalg.InconsistentSystemError):
        linalg.solve_linear(R, rows, [R.one(), R.one()])


def test_rank_and_kron():
    a = linalg.diag(R, [1, 0, 2])
    assert linalg.rank(R, a) == 2
    k = linalg.kron(R, linalg.eye(R, 2), a)
    assert k.shape == (6, 6)
    assert linalg.rank(R, k) == 4


def test_dagger():
    a = linalg.as_matrix(R, [[1j, 2], [0, 1]])
    d = linalg.dagger(R, a)
    assert d[0, 0] == R.scalar(-1j) and d[1, 0] == R.scalar(2)
