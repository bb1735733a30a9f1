"""
Exact linear algebra over Fractions or sympy field elements

Matrices are lists of rows. Zero tests use truthiness, so any exact field
element type with __bool__ works.
"""
from fractions import Fraction


def _copy(matrix):
    return [list(row) for row in matrix]


def row_echelon(matrix):
    """
    Reduce a matrix to row echelon form

    Args:
        matrix: List of rows

    Returns:
        (echelon rows, pivot columns)
    """
    rows = _copy(matrix)
    pivots = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix):
    """Rank of an exact matrix"""
    return len(row_echelon(matrix)[1])


def solve(matrix, rhs):
    """
    Solve matrix @ x = rhs exactly

    Args:
        matrix: List of rows
        rhs: List of right-hand side entries

    Returns:
        Solution list (free variables set to zero) or None when inconsistent
    """
    if not matrix:
        return []
    ncols = len(matrix[0])
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = row_echelon(augmented)
    if ncols in pivots:
        return None
    zero = rhs[0] - rhs[0] if rhs else Fraction(0)
    solution = [zero] * ncols
    for row, c in zip(rows, pivots):
        solution[c] = row[ncols]
    return solution


def matmul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def commutator(a, b):
    ab = matmul(a, b)
    ba = matmul(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]
