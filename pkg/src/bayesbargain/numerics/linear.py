"""Linear systems and polytopes over named variables, in exact arithmetic."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .rational import q

LE, EQ, GE = "<=", "=", ">="
RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    rel: str
    rhs: Fraction
    tag: str | None = None

    def lhs(self, point) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point) if c), Fraction(0))

    def holds(self, point) -> bool:
        v = self.lhs(point)
        if self.rel == LE:
            return v <= self.rhs
        if self.rel == GE:
            return v >= self.rhs
        return v == self.rhs

    def as_le(self) -> list["Constraint"]:
        """Equivalent list of ``<=`` constraints."""
        neg = tuple(-c for c in self.coeffs)
        if self.rel == LE:
            return [self]
        if self.rel == GE:
            return [Constraint(neg, LE, -self.rhs, self.tag)]
        return [Constraint(self.coeffs, LE, self.rhs, self.tag),
                Constraint(neg, LE, -self.rhs, self.tag)]


def _vector(variables, index, coeffs) -> tuple:
    if isinstance(coeffs, Mapping):
        vec = [Fraction(0)] * len(variables)
        for name, c in coeffs.items():
            try:
                vec[index[name]] += q(c)
            except KeyError:
                raise KeyError(f"unknown variable {name!r}") from None
        return tuple(vec)
    vec = tuple(q(c) for c in coeffs)
    if len(vec) != len(variables):
        raise ValueError(f"coefficient vector has {len(vec)} entries, "
                         f"system has {len(variables)} variables")
    return vec


@dataclass(frozen=True)
class LinearSystem:
    """Constraints ``a.x (<=|=|>=) b`` over an ordered list of variable names.

    Instances are immutable; ``add``/``remove``/``without_tag`` return new
    systems.  Coefficients may be given as a full vector or as a mapping
    from variable name to coefficient.
    """

    variables: tuple
    constraints: tuple = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(variables)})
        rows = []
        for c in self.constraints:
            if not isinstance(c, Constraint):
                c = self._make(*c)
            if c.rel not in RELATIONS:
                raise ValueError(f"bad relation {c.rel!r}")
            if len(c.coeffs) != len(variables):
                raise ValueError("constraint length does not match variables")
            rows.append(c)
        object.__setattr__(self, "constraints", tuple(rows))

    def _make(self, coeffs, rel, rhs, tag=None) -> Constraint:
        return Constraint(_vector(self.variables, self._index, coeffs), rel, q(rhs), tag)

    @classmethod
    def from_rows(cls, variables: Sequence[str], rows: Iterable) -> "LinearSystem":
        base = cls(tuple(variables))
        return cls(base.variables, tuple(base._make(*r) for r in rows))

    def __len__(self):
        return len(self.constraints)

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        return self._index[name]

    def vector(self, coeffs) -> tuple:
        return _vector(self.variables, self._index, coeffs)

    def add(self, coeffs, rel, rhs, tag=None) -> "LinearSystem":
        return LinearSystem(self.variables, self.constraints + (self._make(coeffs, rel, rhs, tag),))

    def extend(self, rows: Iterable) -> "LinearSystem":
        new = tuple(r if isinstance(r, Constraint) else self._make(*r) for r in rows)
        return LinearSystem(self.variables, self.constraints + new)

    def remove(self, index: int) -> "LinearSystem":
        rows = list(self.constraints)
        del rows[index]
        return LinearSystem(self.variables, tuple(rows))

    def tags(self) -> set:
        return {c.tag for c in self.constraints}

    def with_tags(self, tags) -> "LinearSystem":
        tags = set(tags)
        return LinearSystem(self.variables, tuple(c for c in self.constraints if c.tag in tags))

    def without_tag(self, tag) -> "LinearSystem":
        return LinearSystem(self.variables, tuple(c for c in self.constraints if c.tag != tag))

    def satisfied_by(self, point) -> bool:
        point = self._point(point)
        return all(c.holds(point) for c in self.constraints)

    def violated(self, point) -> list[int]:
        point = self._point(point)
        return [i for i, c in enumerate(self.constraints) if not c.holds(point)]

    def _point(self, point):
        if isinstance(point, Mapping):
            return tuple(q(point.get(v, 0)) for v in self.variables)
        return tuple(q(x) for x in point)

    def as_inequalities(self) -> "LinearSystem":
        rows = []
        for c in self.constraints:
            rows.extend(c.as_le())
        return LinearSystem(self.variables, tuple(rows))


@dataclass(frozen=True)
class Polytope:
    """A polyhedron ``{x : A x <= b}`` kept as a system of ``<=`` rows.

    ``empty`` is set when the defining system is known to be infeasible
    (e.g. a projection of an empty set); membership is then always false.
    """

    system: LinearSystem
    empty: bool = False

    def __post_init__(self):
        if any(c.rel != LE for c in self.system.constraints):
            object.__setattr__(self, "system", self.system.as_inequalities())

    @classmethod
    def from_rows(cls, variables, rows) -> "Polytope":
        return cls(LinearSystem.from_rows(variables, rows))

    @property
    def variables(self) -> tuple:
        return self.system.variables

    @property
    def dimension(self) -> int:
        return self.system.dimension

    @property
    def inequalities(self) -> tuple:
        return self.system.constraints

    def contains(self, point) -> bool:
        if self.empty:
            return False
        return self.system.satisfied_by(point)

    def vertices(self) -> list:
        from .geometry import enumerate_vertices_2d
        return enumerate_vertices_2d(self)


def rank(rows) -> int:
    """Exact rank of a rational matrix (Gaussian elimination)."""
    m = [[q(x) for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r
