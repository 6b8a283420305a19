import numpy as np

from errors import SingularMatrix


def gauss_jordan_inverse(matrix, tol: float = 1e-12) -> np.ndarray:
    """
    Dense inverse by Gauss-Jordan elimination with partial pivoting, in plain Python
    floats so the timed work is the same O(d^3) loop on every platform.
    """
    rows = [[float(v) for v in row] for row in np.asarray(matrix, dtype=float)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError('gauss_jordan_inverse needs a square matrix.')
    scale = max((abs(v) for r in rows for v in r), default=0.0)
    a = [r + [1.0 if i == j else 0.0 for j in range(n)] for i, r in enumerate(rows)]

    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[pivot][col]) <= tol * max(scale, 1.0):
            raise SingularMatrix(f'pivot {a[pivot][col]:.3g} in column {col} is numerically zero.')
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        prow = [v / p for v in a[col]]
        a[col] = prow
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f != 0.0:
                a[r] = [x - f * y for x, y in zip(a[r], prow)]
    return np.array([r[n:] for r in a])
