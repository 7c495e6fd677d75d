"""Exact dense linear algebra over the rationals.

Scalars are ``fractions.Fraction`` values: always in lowest terms, always
with a positive denominator, so equality is literal equality and printing
is canonical (``p/q`` or ``p``).  Vectors are tuples of fractions and
matrices are immutable row-major grids.  Elimination picks the leftmost
nonzero pivot and nothing else, which makes every reduced form, particular
solution and kernel basis canonical: the same input yields identical
output on every run.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vector = tuple[Fraction, ...]


def fr(value) -> Fraction:
    """Coerce an int, string like ``2/3``, or Fraction to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass int, str or Fraction")
    return Fraction(value)


def vector(entries: Iterable) -> Vector:
    return tuple(fr(e) for e in entries)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def vec_add(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"vector length mismatch: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ValueError(f"vector length mismatch: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vector) -> Vector:
    c = fr(c)
    return tuple(c * a for a in v)


def vec_is_zero(v: Vector) -> bool:
    return all(a == 0 for a in v)


class Matrix:
    """Immutable dense rational matrix.

    ``entries`` is a sequence of rows.  Empty shapes are legal but the
    column count must then be passed explicitly, since it cannot be
    inferred from zero rows.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        rows = [tuple(fr(e) for e in row) for row in entries]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError(f"cols={cols} disagrees with row width {width}")
            cols = width
        elif cols is None:
            raise ValueError("empty matrix needs an explicit column count")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(rows))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls([zero_vector(cols) for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([unit_vector(n, i) for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], rows: int) -> "Matrix":
        for c in columns:
            if len(c) != rows:
                raise ValueError(f"column length {len(c)} != rows {rows}")
        return cls(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def matvec(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"matvec shape mismatch: {self.cols} cols vs {len(v)}")
        return tuple(
            sum((r[j] * v[j] for j in range(self.cols)), Fraction(0))
            for r in self.entries
        )

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("matmul shape mismatch")
        return Matrix.from_columns(
            [self.matvec(other.column(j)) for j in range(other.cols)], self.rows
        )

    def transpose(self) -> "Matrix":
        return Matrix(self.columns(), cols=self.rows)

    def augment(self, v: Vector) -> "Matrix":
        if len(v) != self.rows:
            raise ValueError("augment length mismatch")
        return Matrix(
            [tuple(r) + (v[i],) for i, r in enumerate(self.entries)],
            cols=self.cols + 1,
        )

    def is_zero(self) -> bool:
        return all(vec_is_zero(r) for r in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({[list(map(str, r)) for r in self.entries]}, cols={self.cols})"


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form.

    Returns ``(reduced, pivot_columns)``.  The pivot in each step is the
    first nonzero entry in the leftmost unfinished column; pivots are
    scaled to 1 and cleared above and below.  Deterministic by
    construction, with no magnitude heuristics.
    """
    work = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        pivot_row = None
        for i in range(r, m.rows):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = work[r][c]
        work[r] = [e / inv for e in work[r]]
        for i in range(m.rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Matrix(work, cols=m.cols), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def solve(a: Matrix, b: Vector) -> Optional[Vector]:
    """Canonical particular solution of ``a x = b``, or None if inconsistent.

    The solution sets every free variable to zero, so it is unique and
    reproducible.  Inconsistency is detected by a pivot appearing in the
    augmented column.
    """
    if len(b) != a.rows:
        raise ValueError(f"solve shape mismatch: {a.rows} rows vs rhs {len(b)}")
    reduced, pivots = rref(a.augment(b))
    if a.cols in pivots:
        return None
    x = [Fraction(0)] * a.cols
    for k, p in enumerate(pivots):
        x[p] = reduced.entries[k][a.cols]
    return tuple(x)


class Subspace:
    """A linear subspace of Q^n held as a reduced-echelon row basis.

    The stored basis is the canonical one (reduced row echelon form with
    zero rows dropped), so two Subspace objects are equal exactly when
    they describe the same subspace.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Sequence[Vector], pivots: Sequence[int]):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", tuple(tuple(v) for v in basis))
        object.__setattr__(self, "pivots", tuple(pivots))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Sequence[Vector]) -> "Subspace":
        vecs = [vector(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError(
                    f"vector length {len(v)} != ambient dim {ambient_dim}"
                )
        if not vecs:
            return cls(ambient_dim, [], [])
        reduced, pivots = rref(Matrix(vecs, cols=ambient_dim))
        rows = [reduced.row(i) for i in range(len(pivots))]
        return cls(ambient_dim, rows, pivots)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [], [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Vector) -> Vector:
        """Residue of v after eliminating all pivot coordinates."""
        if len(v) != self.ambient_dim:
            raise ValueError("reduce length mismatch")
        out = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = out[p]
            if c != 0:
                out = [a - c * b for a, b in zip(out, row)]
        return tuple(out)

    def contains(self, v: Vector) -> bool:
        return vec_is_zero(self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace.span(self.ambient_dim, list(self.basis) + list(other.basis))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(a: Matrix) -> Subspace:
    """Null space of ``a`` as a canonical Subspace of Q^cols."""
    reduced, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(a.cols) if c not in pivot_set]
    gens = []
    for f in free:
        v = [Fraction(0)] * a.cols
        v[f] = Fraction(1)
        for k, p in enumerate(pivots):
            v[p] = -reduced.entries[k][f]
        gens.append(tuple(v))
    return Subspace.span(a.cols, gens)


def member(v: Vector, s: Subspace) -> bool:
    """Is v in the subspace s?"""
    return s.contains(vector(v))


class AffineCoset:
    """An affine coset ``point + direction`` inside Q^n.

    The point is stored reduced against the direction subspace, so equal
    cosets get equal stored data.
    """

    __slots__ = ("point", "direction")

    def __init__(self, point: Vector, direction: Subspace):
        point = vector(point)
        if len(point) != direction.ambient_dim:
            raise ValueError("point length does not match the direction space")
        object.__setattr__(self, "point", direction.reduce(point))
        object.__setattr__(self, "direction", direction)

    def __setattr__(self, name, value):
        raise AttributeError("AffineCoset is immutable")

    @property
    def ambient_dim(self) -> int:
        return self.direction.ambient_dim

    def contains(self, v: Vector) -> bool:
        return self.direction.contains(vec_sub(vector(v), self.point))

    def contains_zero(self) -> bool:
        return vec_is_zero(self.point)

    def meets(self, s: Subspace) -> bool:
        """Does the coset intersect the subspace s?"""
        return (self.direction + s).contains(self.point)

    def contained_in(self, other: "AffineCoset") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return other.contains(self.point) and other.direction.contains_subspace(
            self.direction
        )

    def __eq__(self, other):
        return (
            isinstance(other, AffineCoset)
            and self.direction == other.direction
            and self.point == other.point
        )

    def __hash__(self):
        return hash((self.point, self.direction))

    def __repr__(self):
        return f"AffineCoset(dim={self.direction.dim}, ambient={self.ambient_dim})"


def coset_meets(c: AffineCoset, s: Subspace) -> bool:
    return c.meets(s)
