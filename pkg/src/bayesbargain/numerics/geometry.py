"""Plane geometry in exact arithmetic: vertex enumeration and Pareto hulls."""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations

from .linear import Polytope
from .lp import LPSolver, UNBOUNDED
from .rational import q


class UnboundedPolytopeError(ValueError):
    """Raised by vertex enumeration; ``ray`` is a recession direction."""

    def __init__(self, ray):
        super().__init__(f"polytope is unbounded along {tuple(str(r) for r in ray)}")
        self.ray = tuple(ray)


def cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def sort_ccw(points):
    """Sort distinct points counterclockwise around their centroid.

    Exact: the comparator uses half-plane tests and cross products only.
    """
    pts = list(dict.fromkeys(points))
    if len(pts) < 3:
        return sorted(pts)
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        c = cross((cx, cy), a, b)
        return -1 if c > 0 else (1 if c < 0 else 0)

    pts.sort(key=cmp_to_key(cmp))
    # start from the lowest-leftmost vertex for a canonical order
    start = min(range(len(pts)), key=lambda i: (pts[i][1], pts[i][0]))
    return pts[start:] + pts[:start]


def enumerate_vertices_2d(polytope: Polytope) -> list:
    """Vertices of a bounded planar polytope, counterclockwise, no repeats.

    Unbounded input raises :class:`UnboundedPolytopeError` carrying a ray.

    >>> P = Polytope.from_rows(["u0", "u1"], [({"u0": 1}, ">=", "1/10"),
    ...     ({"u1": 1}, ">=", "2/5"), ({"u0": 1, "u1": 1}, "<=", 1)])
    >>> [tuple(map(str, v)) for v in enumerate_vertices_2d(P)]
    [('1/10', '2/5'), ('3/5', '2/5'), ('1/10', '9/10')]
    """
    if polytope.dimension != 2:
        raise ValueError("enumerate_vertices_2d needs exactly two variables")
    if polytope.empty:
        return []
    solver = LPSolver(polytope.system)
    if not solver.feasible:
        return []
    for direction in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        res = solver.maximize(direction)
        if res.status == UNBOUNDED:
            raise UnboundedPolytopeError(res.ray)
    rows = polytope.inequalities
    found = []
    for r1, r2 in combinations(rows, 2):
        (a, b), (c, d) = r1.coeffs, r2.coeffs
        det = a * d - b * c
        if det == 0:
            continue
        x = (r1.rhs * d - b * r2.rhs) / det
        y = (a * r2.rhs - r1.rhs * c) / det
        if polytope.system.satisfied_by((x, y)):
            found.append((x, y))
    return sort_ccw(found)


def upper_right_hull(points) -> list:
    """Pareto-undominated corners of the convex hull of ``points``.

    Ordered by decreasing second coordinate.  Points in the relative
    interior of a frontier edge are not corners and are dropped.

    >>> upper_right_hull([(1, 0), (0, 1), (Fraction(2, 5), Fraction(2, 5))])
    [(Fraction(0, 1), Fraction(1, 1)), (Fraction(1, 1), Fraction(0, 1))]
    """
    pts = sorted({(q(x), q(y)) for x, y in points})
    if not pts:
        raise ValueError("need at least one point")
    chain = []
    for p in pts:
        while len(chain) >= 2 and cross(chain[-2], chain[-1], p) >= 0:
            chain.pop()
        chain.append(p)
    top = max(chain, key=lambda p: (p[1], p[0]))
    return chain[chain.index(top):]


def on_segment(p, a, b) -> bool:
    if cross(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))
