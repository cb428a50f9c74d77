"""Small polytopes used by the conformance suites and examples."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .polytope import Polytope, face_lattice


def segment() -> Polytope:
    return face_lattice([(0,), (1,)])


def triangle() -> Polytope:
    return face_lattice([(0, 0), (1, 0), (0, 1)])


def square() -> Polytope:
    return face_lattice([(-1, -1), (1, -1), (1, 1), (-1, 1)])


def cube() -> Polytope:
    return face_lattice(list(product((-1, 1), repeat=3)))


def octahedron() -> Polytope:
    pts = []
    for axis in range(3):
        for s in (1, -1):
            v = [0, 0, 0]
            v[axis] = s
            pts.append(tuple(v))
    return face_lattice(pts)


def prism() -> Polytope:
    """Triangle conv{(0,0),(1,0),(0,1)} times [0,1]."""
    return face_lattice([(x, y, z) for z in (0, 1) for x, y in ((0, 0), (1, 0), (0, 1))])


CORPUS = {
    "segment": segment,
    "triangle": triangle,
    "square": square,
    "cube": cube,
    "octahedron": octahedron,
    "prism": prism,
}


def interior_grid(P: Polytope, step: Fraction = Fraction(1, 4)) -> list[tuple[Fraction, ...]]:
    """Grid points (multiples of ``step``) in the interior of a full-dimensional P.

    Interior means: inside P and on no facet.
    """
    from .polytope import face_contains

    lo, hi = P.bbox(P.full)
    axes = []
    for a, b in zip(lo, hi):
        start = -((-a) // step)  # ceil(a / step)
        stop = b // step
        axes.append([step * i for i in range(int(start), int(stop) + 1)])
    facets = [f for f in P.faces if f.dim == P.dim - 1]
    out = []
    for p in product(*axes):
        if face_contains(P, P.full, p)[0] and not any(face_contains(P, f, p)[0] for f in facets):
            out.append(tuple(p))
    return out
