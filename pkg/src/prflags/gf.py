"""Exact linear algebra over prime finite fields.

Vectors live in F_p^n and are handled as packed rows: an int bitmask for
p = 2, a bytes vector otherwise.  Subspaces always carry their reduced
row-echelon basis, so two subspaces are equal exactly when their packed
bases are identical.  Everything here is immutable and pure.
"""

from __future__ import annotations

import itertools
import math

DEFAULT_ENUM_CAP = 10**7


class AmbientMismatchError(ValueError):
    """Operands live in different ambient spaces or over different fields."""


class EnumerationCapError(RuntimeError):
    """A subspace enumeration would exceed the configured cap."""

    def __init__(self, count, cap):
        super().__init__("enumeration of %d subspaces exceeds cap %d" % (count, cap))
        self.count = count
        self.cap = cap


def _is_prime(p):
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


class PrimeField:
    """The prime field F_p; also the codec for packed row vectors."""

    __slots__ = ("p",)

    def __init__(self, p=2):
        if not _is_prime(p):
            raise ValueError("%r is not prime" % (p,))
        object.__setattr__(self, "p", p)

    def __setattr__(self, *a):
        raise AttributeError("PrimeField is immutable")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return "PrimeField(%d)" % self.p

    # packed-row codec ---------------------------------------------------

    def pack(self, coords):
        if self.p == 2:
            row = 0
            for i, c in enumerate(coords):
                if c % 2:
                    row |= 1 << i
            return row
        return bytes(c % self.p for c in coords)

    def unpack(self, row, n):
        if self.p == 2:
            return tuple((row >> i) & 1 for i in range(n))
        return tuple(row)

    def zero_row(self, n):
        return 0 if self.p == 2 else bytes(n)

    def unit_row(self, n, i):
        if self.p == 2:
            return 1 << i
        return bytes(1 if j == i else 0 for j in range(n))

    def row_add(self, a, b):
        if self.p == 2:
            return a ^ b
        return bytes((x + y) % self.p for x, y in zip(a, b))

    def row_sub(self, a, b):
        if self.p == 2:
            return a ^ b
        return bytes((x - y) % self.p for x, y in zip(a, b))

    def row_scale(self, a, c):
        c %= self.p
        if self.p == 2:
            return a if c else 0
        if c == 1:
            return a
        return bytes((x * c) % self.p for x in a)

    def row_get(self, a, i):
        if self.p == 2:
            return (a >> i) & 1
        return a[i]

    def row_is_zero(self, a):
        return not a if self.p == 2 else not any(a)

    def row_support_min(self, a):
        if self.p == 2:
            return (a & -a).bit_length() - 1
        for i, x in enumerate(a):
            if x:
                return i
        raise ValueError("zero row has no support")

    def row_join(self, a, b, n):
        """Concatenate two packed rows of length n into one of length 2n."""
        if self.p == 2:
            return a | (b << n)
        return a + b

    def row_split(self, ab, n):
        if self.p == 2:
            return ab & ((1 << n) - 1), ab >> n
        return ab[:n], ab[n:]

    def inv(self, c):
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return pow(c, self.p - 2, self.p)


F2 = PrimeField(2)
F3 = PrimeField(3)


def rref(field, rows):
    """Reduced row-echelon basis of the span of `rows` (packed).

    Returns (pivots, rows) with rows sorted by pivot column; the result
    is the canonical basis of the row space, independent of input order.
    """
    basis = []  # (pivot, row), sorted by pivot
    for row in rows:
        for piv, b in basis:
            c = field.row_get(row, piv)
            if c:
                row = field.row_sub(row, field.row_scale(b, c))
        if field.row_is_zero(row):
            continue
        piv = field.row_support_min(row)
        c = field.row_get(row, piv)
        if c != 1:
            row = field.row_scale(row, field.inv(c))
        basis = [
            (q, field.row_sub(b, field.row_scale(row, field.row_get(b, piv))))
            for q, b in basis
        ]
        basis.append((piv, row))
        basis.sort(key=lambda t: t[0])
    return tuple(p for p, _ in basis), tuple(r for _, r in basis)


class Subspace:
    """A subspace of F_p^n, stored as its canonical reduced-echelon basis."""

    __slots__ = ("field", "n", "pivots", "rows", "_hash")

    def __init__(self, field, n, packed_rows, _canonical=False):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        if _canonical:
            rows = tuple(packed_rows)
            pivots = tuple(field.row_support_min(r) for r in rows)
        else:
            pivots, rows = rref(field, packed_rows)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", hash((field.p, n, rows)))

    def __setattr__(self, *a):
        raise AttributeError("Subspace is immutable")

    # constructors -------------------------------------------------------

    @classmethod
    def span(cls, field, n, coord_rows):
        return cls(field, n, [field.pack(r) for r in coord_rows])

    @classmethod
    def span_packed(cls, field, n, packed_rows):
        return cls(field, n, packed_rows)

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, (), _canonical=True)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, [field.unit_row(n, i) for i in range(n)], _canonical=True)

    # basic queries ------------------------------------------------------

    @property
    def dim(self):
        return len(self.rows)

    def is_zero(self):
        return not self.rows

    def reduce_row(self, row):
        """Residue of a packed vector modulo this subspace."""
        f = self.field
        for piv, b in zip(self.pivots, self.rows):
            c = f.row_get(row, piv)
            if c:
                row = f.row_sub(row, f.row_scale(b, c))
        return row

    def contains_row(self, row):
        return self.field.row_is_zero(self.reduce_row(row))

    def contains(self, other):
        self._check(other)
        return all(self.contains_row(r) for r in other.rows)

    def coordinates_of(self, row):
        """Coefficients of a vector over the canonical basis."""
        f = self.field
        coeffs = []
        for piv, b in zip(self.pivots, self.rows):
            c = f.row_get(row, piv)
            coeffs.append(c)
            if c:
                row = f.row_sub(row, f.row_scale(b, c))
        if not f.row_is_zero(row):
            raise ValueError("vector not in subspace")
        return tuple(coeffs)

    def basis_coords(self):
        return tuple(self.field.unpack(r, self.n) for r in self.rows)

    def vectors(self):
        """All packed vectors of the subspace, in deterministic order."""
        f, rows = self.field, self.rows
        for coeffs in itertools.product(range(f.p), repeat=len(rows)):
            v = f.zero_row(self.n)
            for c, b in zip(coeffs, rows):
                if c:
                    v = f.row_add(v, f.row_scale(b, c))
            yield v

    def _check(self, other):
        if self.field != other.field or self.n != other.n:
            raise AmbientMismatchError(
                "subspaces in F_%d^%d and F_%d^%d do not match"
                % (self.field.p, self.n, other.field.p, other.n)
            )

    # lattice operations -------------------------------------------------

    def sum(self, other):
        self._check(other)
        return Subspace(self.field, self.n, self.rows + other.rows)

    def intersect(self, other):
        """Intersection via the Zassenhaus double-block trick."""
        self._check(other)
        f, n = self.field, self.n
        ext = [f.row_join(r, r, n) for r in self.rows]
        ext += [f.row_join(r, f.zero_row(n), n) for r in other.rows]
        _, red = rref(f, ext)
        zero = f.zero_row(n)
        out = []
        for row in red:
            left, right = f.row_split(row, n)
            if f.row_is_zero(left) and not f.row_is_zero(right):
                out.append(right)
        if f.p != 2:
            out = [bytes(r) for r in out]
            zero = bytes(zero)
        return Subspace(f, n, out)

    def complement_in(self, other):
        """Packed vectors extending this basis to a basis of `other`."""
        self._check(other)
        if not other.contains(self):
            raise AmbientMismatchError("complement_in requires containment")
        ext = []
        span = self
        for r in other.rows:
            res = span.reduce_row(r)
            if not self.field.row_is_zero(res):
                ext.append(res)
                span = Subspace(self.field, self.n, span.rows + (res,))
        return tuple(ext)

    # dunder -------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self):
        return self._hash

    def __le__(self, other):
        return other.contains(self)

    def __repr__(self):
        return "Subspace(F%d^%d, dim=%d)" % (self.field.p, self.n, self.dim)


class Matrix:
    """A matrix over a prime field, stored as packed rows."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, nrows, ncols, packed_rows):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", tuple(packed_rows))
        if len(self.rows) != nrows:
            raise ValueError("row count mismatch")

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, field, coord_rows, ncols=None):
        coord_rows = [tuple(r) for r in coord_rows]
        if ncols is None:
            ncols = len(coord_rows[0]) if coord_rows else 0
        return cls(field, len(coord_rows), ncols, [field.pack(r) for r in coord_rows])

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [field.unit_row(n, i) for i in range(n)])

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, ncols, [field.zero_row(ncols)] * nrows)

    def entry(self, i, j):
        return self.field.row_get(self.rows[i], j)

    def coord_rows(self):
        return tuple(self.field.unpack(r, self.ncols) for r in self.rows)

    def apply(self, vec):
        """Matrix-vector product; vec is packed of length ncols."""
        f = self.field
        if f.p == 2:
            out = 0
            for i, r in enumerate(self.rows):
                if (r & vec).bit_count() & 1:
                    out |= 1 << i
            return out
        return bytes(
            sum(x * y for x, y in zip(r, vec)) % f.p for r in self.rows
        )

    def mul(self, other):
        if self.ncols != other.nrows or self.field != other.field:
            raise AmbientMismatchError("matrix shapes do not compose")
        f = self.field
        rows = []
        for r in self.rows:
            acc = f.zero_row(other.ncols)
            for j in range(self.ncols):
                c = f.row_get(r, j)
                if c:
                    acc = f.row_add(acc, f.row_scale(other.rows[j], c))
            rows.append(acc)
        return Matrix(f, self.nrows, other.ncols, rows)

    def power(self, k):
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.field, self.nrows)
        for _ in range(k):
            out = out.mul(self)
        return out

    def add(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise AmbientMismatchError("matrix shapes differ")
        f = self.field
        return Matrix(
            f, self.nrows, self.ncols,
            [f.row_add(a, b) for a, b in zip(self.rows, other.rows)],
        )

    def scale(self, c):
        f = self.field
        return Matrix(f, self.nrows, self.ncols, [f.row_scale(r, c) for r in self.rows])

    def transpose(self):
        f = self.field
        cols = []
        for j in range(self.ncols):
            cols.append(f.pack([f.row_get(r, j) for r in self.rows]))
        return Matrix(f, self.ncols, self.nrows, cols)

    def is_zero(self):
        return all(self.field.row_is_zero(r) for r in self.rows)

    def rank(self):
        _, rows = rref(self.field, self.rows)
        return len(rows)

    def row_space(self):
        return Subspace(self.field, self.ncols, self.rows)

    def kernel(self):
        """Subspace {v : A v = 0}."""
        f = self.field
        pivots, rows = rref(f, self.rows)
        pivot_set = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivot_set]
        basis = []
        for j in free:
            coords = [0] * self.ncols
            coords[j] = 1
            for piv, r in zip(pivots, rows):
                coords[piv] = (-f.row_get(r, j)) % f.p
            basis.append(f.pack(coords))
        return Subspace(f, self.ncols, basis)

    def inverse(self):
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        f, n = self.field, self.nrows
        aug = [f.row_join(r, f.unit_row(n, i), n) for i, r in enumerate(self.rows)]
        pivots, red = rref(f, aug)
        if tuple(pivots) != tuple(range(n)):
            raise ValueError("matrix is singular")
        return Matrix(f, n, n, [f.row_split(r, n)[1] for r in red])

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.p, self.nrows, self.ncols, self.rows))

    def __repr__(self):
        return "Matrix(F%d, %dx%d)" % (self.field.p, self.nrows, self.ncols)


class Flag:
    """A nested chain of subspaces F_0 <= F_1 <= ... <= F_l in one ambient."""

    __slots__ = ("spaces",)

    def __init__(self, spaces):
        spaces = tuple(spaces)
        if not spaces:
            raise ValueError("empty flag")
        for a, b in zip(spaces, spaces[1:]):
            if not b.contains(a):
                raise AmbientMismatchError("flag members are not nested")
        object.__setattr__(self, "spaces", spaces)

    def __setattr__(self, *a):
        raise AttributeError("Flag is immutable")

    def __len__(self):
        return len(self.spaces)

    def __getitem__(self, i):
        return self.spaces[i]

    def __iter__(self):
        return iter(self.spaces)

    def dims(self):
        return tuple(s.dim for s in self.spaces)


# operator-vs-subspace operations ----------------------------------------


def image(T, W):
    """Image T(W) of a subspace under an operator."""
    _check_op(T, W)
    return Subspace(W.field, W.n, [T.apply(r) for r in W.rows])


def preimage(T, W):
    """Preimage {v : T v in W} of a subspace under an operator."""
    _check_op(T, W)
    f, n = W.field, W.n
    if W.dim == n:
        return Subspace.full(f, n)
    pivot_set = set(W.pivots)
    checks = [q for q in range(n) if q not in pivot_set]
    cols = []
    for j in range(n):
        res = W.reduce_row(T.apply(f.unit_row(n, j)))
        cols.append(f.unpack(res, n))
    constraint = Matrix.from_rows(f, [[cols[j][q] for j in range(n)] for q in checks], n)
    return constraint.kernel()


def quotient_dim(A, B):
    """dim A - dim B for nested subspaces B <= A."""
    if not A.contains(B):
        raise AmbientMismatchError("quotient_dim requires B <= A")
    return A.dim - B.dim


def map_subspace(T, W):
    return image(T, W)


def _check_op(T, W):
    if T.field != W.field or T.ncols != W.n or T.nrows != W.n:
        raise AmbientMismatchError("operator does not act on the ambient space")


# enumeration --------------------------------------------------------------


def gaussian_binomial(n, k, p):
    """Number of k-dimensional subspaces of F_p^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def enumerate_subspaces(field, n, d, cap=DEFAULT_ENUM_CAP):
    """Yield every d-dimensional subspace of F_p^n exactly once.

    Subspaces come out in canonical order (pivot columns lexicographic,
    then free entries lexicographic); refuses to start if the Gaussian
    binomial count exceeds `cap`.
    """
    count = gaussian_binomial(n, d, field.p)
    if cap is not None and count > cap:
        raise EnumerationCapError(count, cap)
    if d == 0:
        yield Subspace.zero(field, n)
        return
    p = field.p
    for pivots in itertools.combinations(range(n), d):
        pivot_set = set(pivots)
        free = [
            (i, j)
            for i in range(d)
            for j in range(pivots[i] + 1, n)
            if j not in pivot_set
        ]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = []
            for i in range(d):
                coords = [0] * n
                coords[pivots[i]] = 1
                rows.append(coords)
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            packed = [field.pack(r) for r in rows]
            yield Subspace(field, n, packed, _canonical=True)


def subspaces_between(floor, ceiling, d, cap=DEFAULT_ENUM_CAP):
    """Yield every subspace S with floor <= S <= ceiling and dim S = d."""
    if not ceiling.contains(floor):
        raise AmbientMismatchError("floor must sit inside ceiling")
    if d < floor.dim or d > ceiling.dim:
        return
    comp = floor.complement_in(ceiling)
    q = len(comp)
    f, n = floor.field, floor.n
    for small in enumerate_subspaces(f, q, d - floor.dim, cap=cap):
        lifted = []
        for r in small.rows:
            v = f.zero_row(n)
            for i in range(q):
                c = f.row_get(r, i)
                if c:
                    v = f.row_add(v, f.row_scale(comp[i], c))
            lifted.append(v)
        yield Subspace(f, n, floor.rows + tuple(lifted))
