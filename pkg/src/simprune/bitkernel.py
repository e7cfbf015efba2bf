"""Bit-vectors, bit-matrices and the boolean vector-matrix product.

A :class:`BitVector` is a fixed-length set of node indices packed into a
Python integer (bit ``i`` is node ``i``).  A :class:`BitMatrix` is a square
boolean matrix whose rows are exposed as bit-vectors; internally the set
entries are kept row-major as sorted column indices, with a column-major
mirror that is built on first column-wise use.
"""

from __future__ import annotations

from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import DimensionMismatch

EvalMode = Literal["row", "col"]

_EMPTY = np.zeros(0, dtype=np.int64)


class BitVector:
    """Mutable fixed-length bit-vector over node indices ``0..length-1``."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0) -> None:
        if length < 0:
            raise ValueError("length must be non-negative")
        if bits < 0 or bits >> length:
            raise ValueError(f"bits exceed vector length {length}")
        self.length = length
        self.bits = bits

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> BitVector:
        return cls(length, (1 << length) - 1)

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> BitVector:
        bits = 0
        for i in indices:
            if not 0 <= i < length:
                raise IndexError(f"bit {i} out of range for length {length}")
            bits |= 1 << int(i)
        return cls(length, bits)

    @classmethod
    def from_bools(cls, values: Sequence[int | bool]) -> BitVector:
        """Build from a 0/1 sequence; position 0 is node 0."""
        return cls.from_indices(len(values), (i for i, b in enumerate(values) if b))

    @classmethod
    def from_numpy(cls, mask: np.ndarray) -> BitVector:
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            return cls(len(mask), 0)
        packed = np.packbits(mask, bitorder="little")
        return cls(len(mask), int.from_bytes(packed.tobytes(), "little"))

    def to_numpy(self) -> np.ndarray:
        if self.bits == 0:
            return np.zeros(self.length, dtype=bool)
        raw = self.bits.to_bytes((self.length + 7) // 8, "little")
        unpacked = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little", count=self.length)
        return unpacked.astype(bool)

    def indices(self) -> list[int]:
        """Set bit positions in ascending order."""
        if self.bits == 0:
            return []
        return np.flatnonzero(self.to_numpy()).tolist()

    def popcount(self) -> int:
        return self.bits.bit_count()

    def any(self) -> bool:
        return self.bits != 0

    def copy(self) -> BitVector:
        return BitVector(self.length, self.bits)

    def _check(self, other: BitVector) -> None:
        if self.length != other.length:
            raise DimensionMismatch(f"bit-vector lengths differ: {self.length} != {other.length}")

    def __getitem__(self, i: int) -> bool:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return bool(self.bits >> i & 1)

    def __len__(self) -> int:
        return self.length

    def __iter__(self):
        return (bool(self.bits >> i & 1) for i in range(self.length))

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits & other.bits)

    def __or__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits | other.bits)

    def __le__(self, other: BitVector) -> bool:
        return leq(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    __hash__ = None  # mutable

    def to_string(self) -> str:
        """Bits as a 0/1 string, node 0 first."""
        return "".join("1" if b else "0" for b in self)

    def __repr__(self) -> str:
        if self.length <= 64:
            return f"BitVector({self.to_string()!r})"
        return f"BitVector(length={self.length}, popcount={self.popcount()})"


def leq(a: BitVector, b: BitVector) -> bool:
    """True iff ``a`` is a bitwise subset of ``b``."""
    a._check(b)
    return a.bits & ~b.bits == 0


def and_assign(target: BitVector, other: BitVector) -> tuple[BitVector, bool]:
    """``target &= other`` in place; the flag reports whether any bit was cleared."""
    target._check(other)
    new = target.bits & other.bits
    changed = new != target.bits
    target.bits = new
    return target, changed


def _gather(indptr: np.ndarray, indices: np.ndarray, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate the index slices of ``rows``; also return per-row lengths."""
    starts = indptr[rows]
    lens = indptr[rows + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return _EMPTY, lens
    offsets = np.repeat(starts - (np.cumsum(lens) - lens), lens)
    return indices[offsets + np.arange(total)], lens


class BitMatrix:
    """Square boolean matrix of dimension ``dim``.

    Entry ``(i, j)`` is set iff ``j`` appears in ``indices[indptr[i]:indptr[i+1]]``.
    Instances are treated as immutable once built.
    """

    __slots__ = ("dim", "indptr", "indices", "_cols", "_rows", "_row_summary", "_col_summary")

    def __init__(self, dim: int, indptr: np.ndarray, indices: np.ndarray) -> None:
        if len(indptr) != dim + 1:
            raise DimensionMismatch(f"indptr must have {dim + 1} entries, got {len(indptr)}")
        self.dim = dim
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self._cols: tuple[np.ndarray, np.ndarray] | None = None
        self._rows: np.ndarray | None = None
        self._row_summary: BitVector | None = None
        self._col_summary: BitVector | None = None

    @classmethod
    def zeros(cls, dim: int) -> BitMatrix:
        return cls(dim, np.zeros(dim + 1, dtype=np.int64), _EMPTY)

    @classmethod
    def from_pairs(cls, dim: int, rows: Iterable[int] | np.ndarray, cols: Iterable[int] | np.ndarray) -> BitMatrix:
        """Build from parallel row/column index arrays; duplicates collapse."""
        r = np.asarray(list(rows) if not isinstance(rows, np.ndarray) else rows, dtype=np.int64)
        c = np.asarray(list(cols) if not isinstance(cols, np.ndarray) else cols, dtype=np.int64)
        if r.shape != c.shape:
            raise DimensionMismatch("row and column index arrays differ in length")
        if len(r) and (r.min() < 0 or c.min() < 0 or r.max() >= dim or c.max() >= dim):
            raise IndexError(f"entry out of range for dimension {dim}")
        key = np.unique(r * dim + c) if len(r) else _EMPTY
        r, c = np.divmod(key, dim) if dim else (_EMPTY, _EMPTY)
        indptr = np.zeros(dim + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=dim), out=indptr[1:])
        return cls(dim, indptr, c)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | bool]]) -> BitMatrix:
        """Build from a dense 0/1 table (list of rows)."""
        dim = len(rows)
        ri, ci = [], []
        for i, row in enumerate(rows):
            if len(row) != dim:
                raise DimensionMismatch(f"row {i} has length {len(row)}, expected {dim}")
            for j, bit in enumerate(row):
                if bit:
                    ri.append(i)
                    ci.append(j)
        return cls.from_pairs(dim, ri, ci)

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def coo(self) -> tuple[np.ndarray, np.ndarray]:
        """Row and column index arrays of all set entries, row-major."""
        if self._rows is None:
            self._rows = np.repeat(np.arange(self.dim, dtype=np.int64), np.diff(self.indptr))
        return self._rows, self.indices

    def columns(self) -> tuple[np.ndarray, np.ndarray]:
        """Column-major mirror ``(colptr, row_indices)``, built lazily."""
        if self._cols is None:
            rows, cols = self.coo()
            order = np.lexsort((rows, cols))
            colptr = np.zeros(self.dim + 1, dtype=np.int64)
            np.cumsum(np.bincount(cols, minlength=self.dim), out=colptr[1:])
            self._cols = (colptr, rows[order])
        return self._cols

    @property
    def has_column_mirror(self) -> bool:
        return self._cols is not None

    def transpose(self) -> BitMatrix:
        colptr, rowidx = self.columns()
        t = BitMatrix(self.dim, colptr, rowidx)
        t._cols = (self.indptr, self.indices)
        return t

    def row(self, i: int) -> BitVector:
        mask = np.zeros(self.dim, dtype=bool)
        mask[self.indices[self.indptr[i]:self.indptr[i + 1]]] = True
        return BitVector.from_numpy(mask)

    def column(self, j: int) -> BitVector:
        colptr, rowidx = self.columns()
        mask = np.zeros(self.dim, dtype=bool)
        mask[rowidx[colptr[j]:colptr[j + 1]]] = True
        return BitVector.from_numpy(mask)

    def __getitem__(self, ij: tuple[int, int]) -> bool:
        i, j = ij
        lo, hi = self.indptr[i], self.indptr[i + 1]
        k = lo + np.searchsorted(self.indices[lo:hi], j)
        return bool(k < hi and self.indices[k] == j)

    def to_rows(self) -> list[list[int]]:
        dense = [[0] * self.dim for _ in range(self.dim)]
        for i, j in zip(*self.coo()):
            dense[i][j] = 1
        return dense

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"BitMatrix(dim={self.dim}, nnz={self.nnz})"


def vec_mat_mul(
    v: BitVector,
    m: BitMatrix,
    mode: EvalMode = "row",
    within: BitVector | None = None,
) -> BitVector:
    """Boolean product ``v ×_b m``: bit ``j`` is set iff ``v(i)`` and ``m(i, j)`` for some ``i``.

    ``mode`` selects the traversal.  Row-wise unions the rows selected by
    ``v``; column-wise tests each column against ``v``.  Both give the same
    result.  If ``within`` is given the result is intersected with it, which
    lets column-wise evaluation skip columns outside ``within`` entirely.
    """
    if v.length != m.dim:
        raise DimensionMismatch(f"vector length {v.length} != matrix dimension {m.dim}")
    if within is not None and within.length != m.dim:
        raise DimensionMismatch(f"mask length {within.length} != matrix dimension {m.dim}")
    n = m.dim
    if v.bits == 0 or m.nnz == 0 or (within is not None and within.bits == 0):
        return BitVector(n, 0)
    src = v.to_numpy()
    out = np.zeros(n, dtype=bool)
    if mode == "row":
        reached, _ = _gather(m.indptr, m.indices, np.flatnonzero(src))
        out[reached] = True
        if within is not None:
            out &= within.to_numpy()
    elif mode == "col":
        colptr, rowidx = m.columns()
        cols = np.flatnonzero(within.to_numpy()) if within is not None else np.arange(n)
        preds, lens = _gather(colptr, rowidx, cols)
        if len(preds):
            seg = np.repeat(np.arange(len(cols)), lens)
            hit = np.zeros(len(cols), dtype=bool)
            hit[seg[src[preds]]] = True
            out[cols[hit]] = True
    else:
        raise ValueError(f"unknown evaluation mode {mode!r}")
    return BitVector.from_numpy(out)


def row_summary(m: BitMatrix) -> BitVector:
    """Bit ``i`` set iff row ``i`` of ``m`` is non-empty."""
    if m._row_summary is None:
        m._row_summary = BitVector.from_numpy(np.diff(m.indptr) > 0)
    return m._row_summary.copy()


def col_summary(m: BitMatrix) -> BitVector:
    """Bit ``j`` set iff column ``j`` of ``m`` is non-empty."""
    if m._col_summary is None:
        mask = np.zeros(m.dim, dtype=bool)
        mask[m.indices] = True
        m._col_summary = BitVector.from_numpy(mask)
    return m._col_summary.copy()
