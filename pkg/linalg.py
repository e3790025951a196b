"""
Exact linear algebra over Z/ell^n and F_p on numpy object matrices.
"""
from typing import List, Optional, Sequence

import numpy as np

from coeff import ell_valuation


class SmithForm():
    """
    Diagonal form D = U * A * V over Z/ell^level. Only V is tracked since row
    operations do not change the row space.
    """
    def __init__(self, ell: int, level: int, exponents: List[int], column_transform: np.ndarray):
        self.ell = ell
        self.level = level
        # exponents[k] = valuation of the k-th nonzero diagonal entry
        self.exponents = exponents
        self.column_transform = column_transform

    @property
    def rank(self) -> int:
        """Number of generators of the row module, i.e. dim of M / ell M."""
        return len(self.exponents)

    def is_free(self) -> bool:
        return all(exponent == 0 for exponent in self.exponents)

    def contains(self, target: Sequence[int]) -> bool:
        modulus = self.ell ** self.level
        vector = np.array([int(value) % modulus for value in target], dtype=object)
        if len(vector) != self.column_transform.shape[0]:
            raise ValueError('Target has {} entries, expected {}'.format(
                len(vector), self.column_transform.shape[0]))
        if len(vector) == 0:
            return True
        image = vector.dot(self.column_transform) % modulus
        for k, value in enumerate(image):
            if k < len(self.exponents):
                if ell_valuation(int(value), self.ell, self.level) < self.exponents[k]:
                    return False
            elif value != 0:
                return False
        return True


def smith_form(rows: Sequence[Sequence[int]], ell: int, level: int, columns: Optional[int] = None) -> SmithForm:
    """
    Diagonalize the matrix whose rows are the given coefficient vectors.
    Over the local ring Z/ell^level the pivot of least valuation divides every
    remaining entry, so plain pivoting suffices.

    >>> smith_form([[2, 0], [0, 1]], 2, 2).exponents
    [0, 1]
    >>> smith_form([[1, 1], [1, 1]], 2, 1).rank
    1
    """
    modulus = ell ** level
    width = columns if columns is not None else (len(rows[0]) if rows else 0)
    matrix = np.zeros((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError('Row {} has {} entries, expected {}'.format(i, len(row), width))
        for j, value in enumerate(row):
            matrix[i, j] = int(value) % modulus
    transform = np.zeros((width, width), dtype=object)
    for j in range(width):
        transform[j, j] = 1

    exponents = []
    height = len(rows)
    for k in range(min(height, width)):
        best = None
        for i in range(k, height):
            for j in range(k, width):
                if matrix[i, j] != 0:
                    valuation = ell_valuation(int(matrix[i, j]), ell, level)
                    if best is None or valuation < best[0]:
                        best = (valuation, i, j)
        if best is None:
            break
        valuation, i, j = best
        if i != k:
            matrix[[k, i], :] = matrix[[i, k], :]
        if j != k:
            matrix[:, [k, j]] = matrix[:, [j, k]]
            transform[:, [k, j]] = transform[:, [j, k]]
        power = ell ** valuation
        unit = int(matrix[k, k]) // power
        matrix[k, :] = (matrix[k, :] * pow(unit, -1, modulus)) % modulus
        for i in range(height):
            if i != k and matrix[i, k] != 0:
                factor = int(matrix[i, k]) // power
                matrix[i, :] = (matrix[i, :] - factor * matrix[k, :]) % modulus
        for j in range(width):
            if j != k and matrix[k, j] != 0:
                factor = int(matrix[k, j]) // power
                matrix[:, j] = (matrix[:, j] - factor * matrix[:, k]) % modulus
                transform[:, j] = (transform[:, j] - factor * transform[:, k]) % modulus
        exponents.append(valuation)
    return SmithForm(ell, level, exponents, transform)


def solve_mod_p(columns: Sequence[Sequence[int]], target: Sequence[int], p: int) -> Optional[List[int]]:
    """
    Solve sum_k x_k * columns[k] = target over F_p, or return None.

    >>> solve_mod_p([[1, 0, 0], [0, 0, 1]], [3, 0, 4], 5)
    [3, 4]
    >>> solve_mod_p([[1, 0]], [0, 1], 5) is None
    True
    """
    height = len(target)
    width = len(columns)
    matrix = np.zeros((height, width + 1), dtype=object)
    for k, column in enumerate(columns):
        for i, value in enumerate(column):
            matrix[i, k] = int(value) % p
    for i, value in enumerate(target):
        matrix[i, width] = int(value) % p

    pivots = []
    row = 0
    for col in range(width):
        pivot = None
        for i in range(row, height):
            if matrix[i, col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != row:
            matrix[[row, pivot], :] = matrix[[pivot, row], :]
        matrix[row, :] = (matrix[row, :] * pow(int(matrix[row, col]), -1, p)) % p
        for i in range(height):
            if i != row and matrix[i, col] != 0:
                matrix[i, :] = (matrix[i, :] - matrix[i, col] * matrix[row, :]) % p
        pivots.append(col)
        row += 1
        if row == height:
            break
    for i in range(row, height):
        if matrix[i, width] != 0:
            return None
    solution = [0] * width
    for i, col in enumerate(pivots):
        solution[col] = int(matrix[i, width])
    return solution
