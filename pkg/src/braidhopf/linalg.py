"""Sparse exact linear algebra: reduced echelon forms, kernels, affine
solves, subspaces with block-respecting complements, and graded tensor
indexing.

Vectors and matrix rows are dicts ``{column: scalar}`` holding only nonzero
entries; scalars come from :mod:`braidhopf.scalars`.  Reduced row echelon
form is canonical for a given row space, so every construction here is
deterministic regardless of the order spanning vectors arrive in.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Optional

from .errors import BlockViolation, MembershipViolation

Row = dict  # {int: scalar}, no zero entries


def row_add_scaled(target: Row, factor, source: Row) -> None:
    """target += factor * source, in place, dropping entries that cancel."""
    for c, v in source.items():
        w = target.get(c)
        if w is None:
            fv = factor * v
            if fv:
                target[c] = fv
        else:
            w = w + factor * v
            if w:
                target[c] = w
            else:
                del target[c]


class Echelon:
    """Incremental reduced row echelon accumulator.

    Rows are inserted one at a time; the accumulator maintains full RREF:
    pivot entries are 1, each pivot column is zero in every other stored
    row, and entries left of a row's pivot are zero.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, Row] = {}  # pivot column -> row

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def reduce(self, row: Row) -> Row:
        """Return the residual of ``row`` after eliminating all pivots."""
        res = dict(row)
        heap = list(res)
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen or c not in res:
                continue
            seen.add(c)
            prow = self.pivot_rows.get(c)
            if prow is None:
                continue
            factor = -res[c]
            before = set(res)
            row_add_scaled(res, factor, prow)
            for nc in res.keys() - before:
                heapq.heappush(heap, nc)
        return res

    def insert(self, row: Row) -> Optional[int]:
        """Insert a row; return its pivot column, or None if dependent."""
        res = self.reduce(row)
        if not res:
            return None
        p = min(res)
        inv = 1 / res[p]
        res = {c: v * inv for c, v in res.items()}
        # keep existing rows fully reduced against the new pivot
        for prow in self.pivot_rows.values():
            if p in prow:
                row_add_scaled(prow, -prow[p], res)
        self.pivot_rows[p] = res
        return p

    def rows_sorted(self) -> list[Row]:
        return [dict(self.pivot_rows[p]) for p in sorted(self.pivot_rows)]


def rref_rows(rows: Iterable[Row], ncols: int) -> tuple[list[Row], list[int]]:
    """RREF of a list of sparse rows; returns (reduced rows, pivot columns)."""
    ech = Echelon(ncols)
    for row in rows:
        ech.insert(row)
    return ech.rows_sorted(), ech.pivots()


class SparseMatrix:
    """Immutable-by-convention sparse matrix with exact entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v}
        for (r, c) in self.entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r},{c}) out of bounds {rows}x{cols}")

    @classmethod
    def from_rows(cls, row_dicts: list[Row], cols: int) -> "SparseMatrix":
        entries = {}
        for r, row in enumerate(row_dicts):
            for c, v in row.items():
                if v:
                    entries[(r, c)] = v
        return cls(len(row_dicts), cols, entries)

    @classmethod
    def from_dense(cls, data: list[list], field) -> "SparseMatrix":
        entries = {}
        for r, row in enumerate(data):
            for c, v in enumerate(row):
                fv = v if not isinstance(v, int) else field.of(v)
                if fv:
                    entries[(r, c)] = fv
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, entries)

    @classmethod
    def identity(cls, n: int, field) -> "SparseMatrix":
        return cls(n, n, {(i, i): field.one for i in range(n)})

    def row_dicts(self) -> list[Row]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def get(self, r: int, c: int, default=0):
        return self.entries.get((r, c), default)

    def apply(self, vec: Row) -> Row:
        """Matrix times column vector (vector indexed by column)."""
        out: Row = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x:
                w = out.get(r, 0) + v * x
                if w:
                    out[r] = w
                else:
                    out.pop(r, None)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


def rref(m: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    """Reduced row echelon form and pivot columns; row space preserved."""
    rows, pivots = rref_rows(m.row_dicts(), m.cols)
    rows += [{} for _ in range(m.rows - len(rows))]  # keep shape
    return SparseMatrix.from_rows(rows, m.cols), pivots


def kernel_rows(rows: list[Row], pivots: list[int], ncols: int) -> list[Row]:
    """Kernel basis from RREF data: one vector per non-pivot column."""
    pivot_of_row = {p: i for i, p in enumerate(pivots)}
    basis = []
    pivset = set(pivots)
    for j in range(ncols):
        if j in pivset:
            continue
        vec: Row = {j: _one_like(rows, pivots)}
        for p in pivots:
            coeff = rows[pivot_of_row[p]].get(j)
            if coeff:
                vec[p] = -coeff
        basis.append(vec)
    return basis


def _one_like(rows: list[Row], pivots: list[int]):
    if rows and pivots:
        return rows[0][pivots[0]] / rows[0][pivots[0]]
    return 1  # free module with no constraints: plain 1 works for scaling


def kernel(m: SparseMatrix, field=None) -> "Subspace":
    rows, pivots = rref_rows(m.row_dicts(), m.cols)
    basis = kernel_rows(rows, pivots, m.cols)
    if field is not None and not pivots:
        basis = [{c: field.one * v for c, v in vec.items()} for vec in basis]
    return Subspace.from_vectors(m.cols, basis)


def solve_affine(m: SparseMatrix, rhs: Row) -> Optional[tuple[Row, "Subspace"]]:
    """Solve m x = rhs exactly.

    Returns (particular solution, kernel subspace) when consistent, and
    None when the system has no solution.  Free variables in the particular
    solution are set to zero.
    """
    aug_col = m.cols  # augmented column index
    rows = m.row_dicts()
    b = dict(rhs)
    aug_rows = []
    for r, row in enumerate(rows):
        row = dict(row)
        v = b.get(r)
        if v:
            row[aug_col] = v
        aug_rows.append(row)
    red, pivots = rref_rows(aug_rows, m.cols + 1)
    if aug_col in pivots:
        return None
    particular: Row = {}
    for i, p in enumerate(pivots):
        v = red[i].get(aug_col)
        if v:
            particular[p] = v
    ker = Subspace.from_vectors(m.cols, kernel_rows(red, pivots, m.cols))
    return particular, ker


class Subspace:
    """A subspace of k^n stored by its canonical reduced echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: list[Row], pivots: list[int]):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Row]) -> "Subspace":
        rows, pivots = rref_rows(vectors, ambient_dim)
        return cls(ambient_dim, rows, pivots)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [], [])

    @classmethod
    def full(cls, ambient_dim: int, field) -> "Subspace":
        one = field.one
        return cls(
            ambient_dim,
            [{i: one} for i in range(ambient_dim)],
            list(range(ambient_dim)),
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vec: Row) -> Row:
        """Residual of vec after subtracting its projection onto self."""
        res = dict(vec)
        for p, row in zip(self.pivots, self.basis):
            v = res.get(p)
            if v:
                row_add_scaled(res, -v, row)
        return res

    def contains(self, vec: Row) -> bool:
        return not self.reduce(vec)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, vec: Row) -> Optional[list]:
        """Coefficients of vec on the echelon basis, or None if outside."""
        res = dict(vec)
        coords = []
        for p, row in zip(self.pivots, self.basis):
            v = res.get(p)
            coords.append(v if v is not None else 0)
            if v:
                row_add_scaled(res, -v, row)
        if res:
            return None
        return coords

    def sum(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace.from_vectors(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize [u|u] and [w|0]; zero-left rows give it."""
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        n = self.ambient_dim
        stacked = []
        for u in self.basis:
            row = dict(u)
            for c, v in u.items():
                row[c + n] = v
            stacked.append(row)
        stacked.extend(dict(w) for w in other.basis)
        red, _ = rref_rows(stacked, 2 * n)
        out = []
        for row in red:
            if all(c >= n for c in row):
                out.append({c - n: v for c, v in row.items()})
        return Subspace.from_vectors(n, out)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"


def _row_block(row: Row, blocks: list | None):
    """Block label of a single-block row; BlockViolation if mixed."""
    if blocks is None:
        return None
    labels = {blocks[c] for c in row}
    if len(labels) > 1:
        raise BlockViolation(f"vector mixes blocks {sorted(map(str, labels))}")
    return labels.pop() if labels else None


def complement_within(
    container: Subspace, sub: Subspace, blocks: list | None = None
) -> Subspace:
    """Deterministic complement of ``sub`` inside ``container``.

    The complement is spanned by the container's echelon basis rows whose
    pivots are not pivots of ``sub`` (for the full ambient space this is the
    span of the non-pivot coordinates).  With ``blocks`` given (a label per
    coordinate), every basis row of both spaces must live in a single block,
    and the complement then respects the block decomposition.
    """
    if container.ambient_dim != sub.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not container.contains_subspace(sub):
        raise MembershipViolation("subspace is not contained in the container")
    if blocks is not None:
        for row in container.basis:
            _row_block(row, blocks)
        for row in sub.basis:
            _row_block(row, blocks)
    sub_pivots = set(sub.pivots)
    rows = [dict(r) for p, r in zip(container.pivots, container.basis) if p not in sub_pivots]
    return Subspace.from_vectors(container.ambient_dim, rows)


class TensorIndexer:
    """Flat indexing for a fixed total degree of a graded tensor product.

    ``factor_dims[f]`` lists the dimensions per degree of factor ``f``.  A
    coordinate of the degree-``total`` component is addressed by a degree
    composition plus an index tuple; slots are ordered by ascending degree
    composition (lexicographic), indices row-major.
    """

    def __init__(self, factor_dims: list[list[int]], total: int):
        self.factor_dims = factor_dims
        self.total = total
        self.slots: dict[tuple, tuple] = {}  # degs -> (offset, dims)
        self.order: list[tuple] = []
        offset = 0
        for degs in _compositions(total, [len(d) - 1 for d in factor_dims]):
            dims = tuple(factor_dims[f][degs[f]] for f in range(len(factor_dims)))
            size = 1
            for d in dims:
                size *= d
            if size:
                self.slots[degs] = (offset, dims)
                self.order.append(degs)
                offset += size
        self.size = offset

    def flat(self, degs: tuple, idxs: tuple) -> int:
        offset, dims = self.slots[degs]
        k = 0
        for d, i in zip(dims, idxs):
            k = k * d + i
        return offset + k

    def unflat(self, flat: int) -> tuple[tuple, tuple]:
        for degs in self.order:
            offset, dims = self.slots[degs]
            size = 1
            for d in dims:
                size *= d
            if flat < offset + size:
                k = flat - offset
                idxs = []
                for d in reversed(dims):
                    idxs.append(k % d)
                    k //= d
                return degs, tuple(reversed(idxs))
        raise IndexError(flat)

    def enumerate(self):
        for degs in self.order:
            offset, dims = self.slots[degs]
            for idxs in _mixed_radix(dims):
                yield degs, idxs

    def __contains__(self, degs):
        return degs in self.slots


def _compositions(total: int, maxima: list[int]):
    """All tuples with given maxima summing to total, lexicographic order."""
    if not maxima:
        if total == 0:
            yield ()
        return
    head_max = min(maxima[0], total)
    for first in range(head_max + 1):
        for rest in _compositions(total - first, maxima[1:]):
            yield (first,) + rest


def _mixed_radix(dims: tuple[int, ...]):
    if any(d == 0 for d in dims):
        return
    idxs = [0] * len(dims)
    while True:
        yield tuple(idxs)
        for pos in range(len(dims) - 1, -1, -1):
            idxs[pos] += 1
            if idxs[pos] < dims[pos]:
                break
            idxs[pos] = 0
        else:
            return
