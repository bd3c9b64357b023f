"""Shared constructions for the tests."""
import numpy as np
from gmpy2 import mpq

from osserman.curvature import SquareOperator
from osserman.space import PseudoEuclideanSpace


def op(rows, p=None):
    n = len(rows)
    space = PseudoEuclideanSpace(n if p is None else p, 0 if p is None else n - p)
    return SquareOperator(space, tuple(tuple(mpq(x) for x in r) for r in rows))


def jordan_rows(blocks):
    n = sum(b for _, b in blocks)
    J = [[mpq(0)] * n for _ in range(n)]
    pos = 0
    for lam, b in blocks:
        for k in range(b):
            J[pos + k][pos + k] = mpq(lam)
            if k + 1 < b:
                J[pos + k][pos + k + 1] = mpq(1)
        pos += b
    return J


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), mpq(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def unimodular_pair(rng: np.random.Generator, n, ops=None):
    U = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    Ui = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(ops or 2 * n):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(-2, 3)) or 1
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for r in range(n):
            Ui[r][j] -= c * Ui[r][i]
    return U, Ui


def conjugated(blocks, seed):
    rng = np.random.default_rng(seed)
    n = sum(b for _, b in blocks)
    U, Ui = unimodular_pair(rng, n)
    assert matmul(U, Ui) == [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    return op(matmul(matmul(U, jordan_rows(blocks)), Ui))
