"""Compressed sparse row storage for complex Hermitian operators.

Matrices are assembled from (row, col, value) triplets, stored with sorted
column indices per row, and optionally flagged Hermitian when the triplet set
is symmetric by construction.  The fast matvec path delegates to scipy's CSR
kernel; the pure-Python reference matvec is kept for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class DimensionMismatchError(ValueError):
    pass


@dataclass
class CsrMatrix:
    """Complex CSR matrix with optional Hermitian flag.

    Invariants: ``row_offsets`` is nondecreasing with ``row_offsets[0] == 0``
    and ``row_offsets[-1] == len(values)``; column indices are strictly
    increasing within each row.
    """

    nrows: int
    ncols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray
    hermitian: bool = False
    _scipy: sp.csr_matrix | None = field(default=None, repr=False, compare=False)
    _scipy_real: sp.csr_matrix | None = field(default=None, repr=False,
                                              compare=False)
    _is_real: bool | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.row_offsets = np.asarray(self.row_offsets, dtype=np.int64)
        self.col_indices = np.asarray(self.col_indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if len(self.row_offsets) != self.nrows + 1:
            raise ValueError("row_offsets must have length nrows+1")
        if self.row_offsets[0] != 0 or self.row_offsets[-1] != len(self.values):
            raise ValueError("row_offsets endpoints inconsistent with values")
        if np.any(np.diff(self.row_offsets) < 0):
            raise ValueError("row_offsets must be nondecreasing")

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_real(self) -> bool:
        """True when every stored value has zero imaginary part."""
        if self._is_real is None:
            self._is_real = not np.any(self.values.imag)
        return self._is_real

    def to_scipy_real(self) -> sp.csr_matrix:
        """Real-valued scipy view; only valid when ``is_real`` holds."""
        if self._scipy_real is None:
            self._scipy_real = sp.csr_matrix(
                (self.values.real.copy(), self.col_indices, self.row_offsets),
                shape=(self.nrows, self.ncols),
            )
        return self._scipy_real

    def to_scipy(self) -> sp.csr_matrix:
        if self._scipy is None:
            self._scipy = sp.csr_matrix(
                (self.values, self.col_indices, self.row_offsets),
                shape=(self.nrows, self.ncols),
            )
        return self._scipy

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def diagonal(self) -> np.ndarray:
        return self.to_scipy().diagonal()

    def norm_estimate(self) -> float:
        """Row-sum (infinity-norm) upper bound on the spectral norm."""
        a = self.to_scipy()
        return float(np.max(np.add.reduceat(
            np.abs(a.data), a.indptr[:-1][np.diff(a.indptr) > 0]
        ))) if a.nnz else 0.0

    def gershgorin_bounds(self) -> tuple[float, float]:
        """Real Gershgorin interval [lo, hi] (meaningful for Hermitian A)."""
        d = np.real(self.diagonal())
        radius = np.zeros(self.nrows)
        absv = np.abs(self.values)
        for i in range(self.nrows):
            lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
            off = absv[lo:hi].sum()
            # remove the diagonal entry from the radius if present
            cols = self.col_indices[lo:hi]
            j = np.searchsorted(cols, i)
            if j < hi - lo and cols[j] == i:
                off -= absv[lo + j]
            radius[i] = off
        return float(np.min(d - radius)), float(np.max(d + radius))

    def is_hermitian_exact(self) -> bool:
        a = self.to_scipy()
        return (abs(a - a.conj().T) > 0).nnz == 0


def from_triplets(nrows: int, ncols: int, rows, cols, vals,
                  hermitian: bool = False) -> CsrMatrix:
    """Assemble a CsrMatrix from COO triplets (duplicates are summed)."""
    a = sp.coo_matrix(
        (np.asarray(vals, dtype=np.complex128),
         (np.asarray(rows), np.asarray(cols))),
        shape=(nrows, ncols),
    ).tocsr()
    a.sum_duplicates()
    a.sort_indices()
    m = CsrMatrix(nrows, ncols, a.indptr, a.indices, a.data, hermitian=hermitian)
    m._scipy = a
    return m


def from_dense(a: np.ndarray, hermitian: bool = False) -> CsrMatrix:
    s = sp.csr_matrix(np.asarray(a, dtype=np.complex128))
    s.sort_indices()
    m = CsrMatrix(s.shape[0], s.shape[1], s.indptr, s.indices, s.data,
                  hermitian=hermitian)
    m._scipy = s
    return m


def identity(n: int) -> CsrMatrix:
    return from_dense(np.eye(n), hermitian=True)


def matvec(a: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """y = A x with row-major accumulation."""
    x = np.asarray(x)
    if x.shape[0] != a.ncols:
        raise DimensionMismatchError(
            f"matvec: matrix is {a.nrows}x{a.ncols}, vector has length {x.shape[0]}"
        )
    if a.is_real and np.isrealobj(x):
        return a.to_scipy_real() @ x.astype(np.float64, copy=False)
    return a.to_scipy() @ x.astype(np.complex128, copy=False)


def matvec_reference(a: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """Loop-based matvec used as an independent cross-check of the fast path."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != a.ncols:
        raise DimensionMismatchError("matvec_reference: dimension mismatch")
    y = np.zeros(a.nrows, dtype=np.complex128)
    for i in range(a.nrows):
        acc = 0.0 + 0.0j
        for k in range(a.row_offsets[i], a.row_offsets[i + 1]):
            acc += a.values[k] * x[a.col_indices[k]]
        y[i] = acc
    return y


def dump_text(a: CsrMatrix, path) -> None:
    """Write the documented text format: 'nrows ncols nnz' then triplets."""
    with open(path, "w") as f:
        f.write(f"{a.nrows} {a.ncols} {a.nnz}\n")
        for i in range(a.nrows):
            for k in range(a.row_offsets[i], a.row_offsets[i + 1]):
                v = a.values[k]
                f.write(f"{i} {a.col_indices[k]} {v.real:.17g} {v.imag:.17g}\n")


def load_text(path) -> CsrMatrix:
    with open(path) as f:
        nrows, ncols, nnz = (int(w) for w in f.readline().split())
        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz, dtype=np.complex128)
        for k in range(nnz):
            r, c, re, im = f.readline().split()
            rows[k], cols[k] = int(r), int(c)
            vals[k] = float(re) + 1j * float(im)
    return from_triplets(nrows, ncols, rows, cols, vals)
