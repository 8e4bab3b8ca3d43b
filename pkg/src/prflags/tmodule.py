"""Modules over k[T]/T^e: Jordan types, concrete realizations, Hodge polygons.

A finite module over k[T]/T^e is a vector space with a nilpotent
operator T, T^e = 0; its isomorphism class is the partition of part
sizes (a_1, ..., a_h), padded with zeros up to the generator bound h.
The socle-growth vector delta (delta_i = dim M[T^i] - dim M[T^{i-1}])
is the conjugate partition, and the Hodge polygon can be computed
either from the parts (slopes a_i/e) or as P(delta_1, ..., delta_e);
the two must agree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .gf import Matrix, Subspace
from .polygon import Polygon


class JordanTypeError(ValueError):
    pass


@dataclass(frozen=True)
class DeltaVector:
    """Socle growth (delta_1 >= ... >= delta_e) of a k[T]/T^e-module."""

    entries: tuple

    def __post_init__(self):
        e = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", e)
        if any(x < 0 for x in e):
            raise JordanTypeError("delta entries must be non-negative")
        if any(a < b for a, b in zip(e, e[1:])):
            raise JordanTypeError("delta must be non-increasing: %r" % (e,))

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)

    def conjugate_parts(self):
        """Part sizes (a_1 >= a_2 >= ...) of the module with this delta."""
        e = len(self.entries)
        return tuple(
            sum(1 for i in range(e) if self.entries[i] > j)
            for j in range(self.entries[0] if self.entries else 0)
        )


@dataclass(frozen=True)
class JordanType:
    """Isomorphism class of a k[T]/T^e-module on at most h generators."""

    e: int
    parts: tuple

    def __post_init__(self):
        if self.e < 1:
            raise JordanTypeError("e must be >= 1")
        parts = tuple(sorted((int(a) for a in self.parts), reverse=True))
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise JordanTypeError("parts may not be empty; pad with zeros")
        if parts[0] > self.e or parts[-1] < 0:
            raise JordanTypeError("parts must lie in [0, e]: %r" % (parts,))

    @property
    def h(self):
        return len(self.parts)

    @property
    def dim(self):
        return sum(self.parts)

    def delta(self):
        return DeltaVector(
            tuple(sum(1 for a in self.parts if a >= i) for i in range(1, self.e + 1))
        )

    @classmethod
    def from_delta(cls, e, delta, h=None):
        delta = DeltaVector(tuple(delta))
        if len(delta) != e:
            raise JordanTypeError("delta has length %d, expected e=%d" % (len(delta), e))
        parts = delta.conjugate_parts()
        if h is None:
            h = max(len(parts), 1)
        if len(parts) > h:
            raise JordanTypeError("%d generators exceed the bound h=%d" % (len(parts), h))
        parts = parts + (0,) * (h - len(parts))
        return cls(e, parts)

    def hodge_polygon(self):
        """Hodge polygon: slopes a_i/e; equals P(delta_1, ..., delta_e)."""
        mults = {}
        for a in self.parts:
            s = Fraction(a, self.e)
            mults[s] = mults.get(s, 0) + 1
        poly = Polygon.from_slopes(self.h, mults.items(), self.e)
        if __debug__:
            alt = Polygon.from_d(self.h, self.delta().entries, self.e)
            assert poly == alt, "parts-based and delta-based Hodge polygons disagree"
        return poly

    def to_json(self):
        return json.dumps({"e": self.e, "h": self.h, "parts": list(self.parts)})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        parts = tuple(data["parts"])
        h = data.get("h", len(parts))
        if len(parts) < h:
            parts = parts + (0,) * (h - len(parts))
        return cls(data["e"], parts)


class ConcreteModule:
    """A vector space over a prime field with a nilpotent action T^e = 0."""

    __slots__ = ("field", "e", "op")

    def __init__(self, field, e, op):
        if op.nrows != op.ncols:
            raise JordanTypeError("T must be square")
        if not op.power(e).is_zero():
            raise JordanTypeError("T^%d != 0" % e)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "op", op)

    def __setattr__(self, *a):
        raise AttributeError("ConcreteModule is immutable")

    @property
    def dim(self):
        return self.op.nrows

    def ambient(self):
        return Subspace.full(self.field, self.dim)

    def __eq__(self, other):
        return (
            isinstance(other, ConcreteModule)
            and self.field == other.field
            and self.e == other.e
            and self.op == other.op
        )

    def __hash__(self):
        return hash((self.field, self.e, self.op))

    def __repr__(self):
        return "ConcreteModule(F%d, e=%d, dim=%d)" % (self.field.p, self.e, self.dim)


def realize(J, field):
    """Concrete module with T a direct sum of Jordan blocks of sizes J.parts."""
    n = J.dim
    rows = [[0] * n for _ in range(n)]
    offset = 0
    for a in J.parts:
        for i in range(a - 1):
            rows[offset + i][offset + i + 1] = 1
        offset += a
    return ConcreteModule(field, J.e, Matrix.from_rows(field, rows, n))


def delta_vector(M):
    """delta_i = dim M[T^i] - dim M[T^{i-1}], for i = 1..e."""
    ranks = [M.op.power(i).rank() for i in range(M.e + 1)]
    return DeltaVector(tuple(ranks[i - 1] - ranks[i] for i in range(1, M.e + 1)))


def jordan_type(M, h=None):
    """Jordan type recovered from the ranks of the powers of T."""
    parts = delta_vector(M).conjugate_parts()
    if h is None:
        h = max(len(parts), 1)
    if len(parts) > h:
        raise JordanTypeError("%d generators exceed the bound h=%d" % (len(parts), h))
    return JordanType(M.e, parts + (0,) * (h - len(parts)))


def torsion_flag(M, i):
    """The subspace M[T^i] = ker T^i."""
    if i < 0 or i > M.e:
        raise JordanTypeError("power %d outside [0, %d]" % (i, M.e))
    return M.op.power(i).kernel()


def power_image(M, i):
    """The subspace T^i M."""
    if i < 0 or i > M.e:
        raise JordanTypeError("power %d outside [0, %d]" % (i, M.e))
    T_i = M.op.power(i)
    return Subspace(M.field, M.dim, [T_i.apply(r) for r in M.ambient().rows])


def hodge_polygon(obj, h=None, field=None):
    """Hodge polygon of a JordanType or ConcreteModule."""
    if isinstance(obj, JordanType):
        J = obj
        if h is not None and h != J.h:
            parts = tuple(a for a in J.parts if a)
            if h < len(parts):
                raise JordanTypeError("more than %d nonzero parts" % h)
            J = JordanType(obj.e, parts + (0,) * (h - len(parts)))
        return J.hodge_polygon()
    return jordan_type(obj, h=h).hodge_polygon()


def restrict_module(M, S, e=None):
    """The T-stable subspace S as a module in its own basis coordinates."""
    if not all(S.contains_row(M.op.apply(r)) for r in S.rows):
        raise JordanTypeError("subspace is not T-stable")
    if e is None:
        e = M.e
    f = M.field
    cols = [S.coordinates_of(M.op.apply(r)) for r in S.rows]
    rows = [[cols[j][i] for j in range(S.dim)] for i in range(S.dim)]
    return ConcreteModule(f, e, Matrix.from_rows(f, rows, S.dim))


def quotient_module(M, S, e=None):
    """The quotient M/S (S must be T-stable), in residue coordinates."""
    if not all(S.contains_row(M.op.apply(r)) for r in S.rows):
        raise JordanTypeError("subspace is not T-stable")
    if e is None:
        e = M.e
    f, n = M.field, M.dim
    pivot_set = set(S.pivots)
    free = [j for j in range(n) if j not in pivot_set]
    q = len(free)
    cols = []
    for j in free:
        res = S.reduce_row(M.op.apply(f.unit_row(n, j)))
        coords = f.unpack(res, n)
        cols.append([coords[i] for i in free])
    rows = [[cols[j][i] for j in range(q)] for i in range(q)]
    return ConcreteModule(f, e, Matrix.from_rows(f, rows, q))
