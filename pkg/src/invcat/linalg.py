"""Exact matrices over a field and the calculus of subspaces of F^n.

Matrices act on column vectors; a map between spaces of dimensions d -> c is
stored as a c x d matrix.  Subspaces are kept in a canonical form: the unique
reduced row-echelon basis of the row space, with zero rows dropped.  Two
Subspace values describe the same set of vectors iff they are equal as Python
values, so deduplication, hashing and poset construction all key on equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import ValidationError
from .fields import Field, Scalar

Vector = Tuple[Scalar, ...]


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: int
    cols: int
    entries: Tuple[Vector, ...]  # row-major

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValidationError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValidationError("matrix entry grid does not match declared shape")

    # --- constructors ------------------------------------------------------

    @classmethod
    def build(cls, field: Field, rows: int, cols: int, data: Iterable[Iterable]) -> "Matrix":
        ent = tuple(tuple(field.coerce(x) for x in row) for row in data)
        return cls(field, rows, cols, ent)

    @classmethod
    def from_rows(cls, field: Field, cols: int, rows: Sequence[Sequence]) -> "Matrix":
        return cls.build(field, len(rows), cols, rows)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        ent = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        return cls(field, n, n, ent)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        zero = field.zero
        return cls(field, rows, cols, tuple(tuple(zero for _ in range(cols)) for _ in range(rows)))

    # --- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValidationError("cannot multiply matrices over different fields")
        if self.cols != other.rows:
            raise ValidationError(
                f"shape mismatch in product: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        f = self.field
        ocols = tuple(zip(*other.entries)) if other.entries else tuple(() for _ in range(other.cols))
        out = []
        for r in self.entries:
            row = []
            for j in range(other.cols):
                acc = f.zero
                col = ocols[j] if other.entries else ()
                for a, b in zip(r, col):
                    acc = f.add(acc, f.mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(self.field, self.rows, other.cols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols) or self.field != other.field:
            raise ValidationError("shape mismatch in matrix sum")
        f = self.field
        ent = tuple(
            tuple(f.add(a, b) for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)
        )
        return Matrix(self.field, self.rows, self.cols, ent)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(
            self.field, self.rows, self.cols,
            tuple(tuple(f.neg(a) for a in r) for r in self.entries),
        )

    def apply(self, v: Sequence[Scalar]) -> Vector:
        """Matrix-vector product (``v`` as a column)."""
        if len(v) != self.cols:
            raise ValidationError("vector length does not match matrix columns")
        f = self.field
        out = []
        for r in self.entries:
            acc = f.zero
            for a, b in zip(r, v):
                acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.field, self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix(self.field, self.cols, self.rows, tuple(tuple(c) for c in zip(*self.entries)))

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    @property
    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        one = self.field.one
        return all(
            x == (one if i == j else 0)
            for i, r in enumerate(self.entries)
            for j, x in enumerate(r)
        )

    def to_json(self) -> list:
        return [[self.field.entry_to_json(x) for x in r] for r in self.entries]


# --- elimination -----------------------------------------------------------


def _rref_rows(field: Field, rows: List[List[Scalar]], ncols: int) -> Tuple[List[List[Scalar]], List[int]]:
    """In-place Gauss-Jordan elimination.

    Returns the reduced rows (zero rows sunk to the bottom) and the list of
    pivot columns.  Leading entries are normalized to 1 and pivot columns are
    cleared above and below, so the nonzero rows are the unique RREF basis of
    the row space.
    """
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(m: Matrix) -> Tuple[Matrix, int]:
    """Reduced row-echelon form of ``m`` and its rank."""
    rows = [list(r) for r in m.entries]
    rows, pivots = _rref_rows(m.field, rows, m.cols)
    return Matrix(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows)), len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[1]


def solve_particular(m: Matrix, v: Sequence[Scalar]) -> Optional[Vector]:
    """One solution of ``m x = v`` (free variables set to zero), or None.

    The free-variables-at-zero choice makes every downstream certificate
    reproducible.
    """
    if len(v) != m.rows:
        raise ValidationError("right-hand side length does not match matrix rows")
    f = m.field
    aug = [list(r) + [f.coerce(x)] for r, x in zip(m.entries, v)]
    if m.rows == 0:
        return tuple(f.zero for _ in range(m.cols))
    aug, pivots = _rref_rows(f, aug, m.cols + 1)
    if m.cols in pivots:
        return None
    x = [f.zero] * m.cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][m.cols]
    return tuple(x)


def inverse(m: Matrix) -> Optional[Matrix]:
    """Exact inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        return None
    n = m.rows
    f = m.field
    aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(m.entries)]
    aug, pivots = _rref_rows(f, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        return None
    ent = tuple(tuple(row[n:]) for row in aug)
    return Matrix(f, n, n, ent)


# --- subspaces ---------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n held by its canonical RREF basis (rows)."""

    field: Field
    ambient_dim: int
    basis: Tuple[Vector, ...]

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Sequence[Sequence]) -> "Subspace":
        rows = [[field.coerce(x) for x in v] for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise ValidationError("spanning vector length differs from ambient dimension")
        rows, pivots = _rref_rows(field, rows, ambient_dim)
        basis = tuple(tuple(r) for r in rows[: len(pivots)])
        return cls(field, ambient_dim, basis)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls.span(field, ambient_dim, Matrix.identity(field, ambient_dim).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    @property
    def is_full(self) -> bool:
        return len(self.basis) == self.ambient_dim

    @property
    def sort_key(self):
        """Deterministic total order: by dimension, then basis entries."""
        return (len(self.basis), self.basis)

    def basis_matrix(self) -> Matrix:
        return Matrix(self.field, len(self.basis), self.ambient_dim, self.basis)

    def contains_vector(self, v: Sequence[Scalar]) -> bool:
        f = self.field
        w = [f.coerce(x) for x in v]
        if len(w) != self.ambient_dim:
            raise ValidationError("vector length differs from ambient dimension")
        for row in self.basis:
            lead = next(j for j, x in enumerate(row) if x != 0)
            if w[lead] != 0:
                factor = w[lead]
                w = [f.sub(a, f.mul(factor, b)) for a, b in zip(w, row)]
        return all(x == 0 for x in w)

    def contains(self, other: "Subspace") -> bool:
        """True when ``other`` is a subspace of ``self``."""
        _check_same_ambient(self, other)
        return all(self.contains_vector(v) for v in other.basis)

    def to_json(self) -> list:
        return [[self.field.entry_to_json(x) for x in r] for r in self.basis]


def _check_same_ambient(a: Subspace, b: Subspace) -> None:
    if a.field != b.field or a.ambient_dim != b.ambient_dim:
        raise ValidationError("subspaces live in different ambient spaces")


def sub_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    return Subspace.span(a.field, a.ambient_dim, list(a.basis) + list(b.basis))


def sub_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection by the Zassenhaus block trick.

    Row-reduce [A | A; B | 0]; rows whose left half vanished carry, in their
    right half, a spanning set of the intersection.
    """
    _check_same_ambient(a, b)
    n = a.ambient_dim
    f = a.field
    zero_row = [f.zero] * n
    rows = [list(r) + list(r) for r in a.basis] + [list(r) + zero_row for r in b.basis]
    rows, pivots = _rref_rows(f, rows, 2 * n)
    out = []
    for row in rows:
        left, right = row[:n], row[n:]
        if any(x != 0 for x in left):
            continue
        if any(x != 0 for x in right):
            out.append(right)
    return Subspace.span(f, n, out)


def sub_contains(a: Subspace, b: Subspace) -> bool:
    """True when ``b`` is contained in ``a``."""
    return a.contains(b)


def map_image(m: Matrix, a: Subspace) -> Subspace:
    if a.ambient_dim != m.cols or a.field != m.field:
        raise ValidationError("subspace does not live in the domain of the map")
    return Subspace.span(m.field, m.rows, [m.apply(v) for v in a.basis])


def image(m: Matrix) -> Subspace:
    return Subspace.span(m.field, m.rows, [col for col in zip(*m.entries)] if m.entries else [])


def kernel(m: Matrix) -> Subspace:
    rows = [list(r) for r in m.entries]
    rows, pivots = _rref_rows(m.field, rows, m.cols)
    f = m.field
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [f.zero] * m.cols
        v[j] = f.one
        for i, c in enumerate(pivots):
            v[c] = f.neg(rows[i][j])
        basis.append(v)
    return Subspace.span(f, m.cols, basis)


def annihilator_rows(s: Subspace) -> Matrix:
    """A matrix K with ker(K) = s, i.e. rows cutting out ``s`` by equations."""
    k = kernel(s.basis_matrix())
    return Matrix(s.field, k.dim, s.ambient_dim, k.basis)


def map_preimage(m: Matrix, b: Subspace) -> Subspace:
    if b.ambient_dim != m.rows or b.field != m.field:
        raise ValidationError("subspace does not live in the codomain of the map")
    constraints = annihilator_rows(b)
    return kernel(constraints @ m)


def projection_onto(img: Subspace, ker: Subspace) -> Matrix:
    """The projection of F^n with the given image and kernel.

    Requires img + ker = F^n and img meet ker = 0; raises otherwise.
    """
    _check_same_ambient(img, ker)
    n = img.ambient_dim
    f = img.field
    if img.dim + ker.dim != n or not sub_intersect(img, ker).is_zero:
        raise ValidationError("image and kernel are not complementary")
    cols = list(img.basis) + list(ker.basis)
    basis_t = Matrix(f, n, n, tuple(zip(*cols))) if n else Matrix(f, 0, 0, ())
    inv = inverse(basis_t)
    if inv is None:
        raise ValidationError("image and kernel are not complementary")
    img_t = (
        Matrix(f, n, img.dim, tuple(zip(*img.basis)))
        if img.dim and n
        else Matrix.zeros(f, n, img.dim)
    )
    coords = Matrix(f, img.dim, n, inv.entries[: img.dim])
    return img_t @ coords
