"""V-polytopes with their face lattices.

Faces are stored as sorted tuples of vertex indices.  The lattice is built
from facets (hyperplanes through affinely independent vertex subsets that
leave every vertex on one closed side) and closed under intersection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .exact_linalg import (
    FeasibilitySystem,
    InputError,
    Vector,
    affine_dim,
    fmt_rational,
    lp_feasible,
    to_vector,
)


@dataclass(frozen=True, order=True)
class Face:
    dim: int
    vertex_set: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertex_set)


@dataclass(frozen=True)
class Polytope:
    """Vertices plus the full face lattice (including the empty face and P itself).

    ``dim`` is the intrinsic dimension; it can be smaller than
    ``ambient_dim`` for faces extracted from a bigger polytope.
    """

    vertices: tuple[Vector, ...]
    faces: tuple[Face, ...]
    ambient_dim: int
    dim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", max(f.dim for f in self.faces))

    @cached_property
    def face_index(self) -> dict[tuple[int, ...], Face]:
        return {f.vertex_set: f for f in self.faces}

    @property
    def full(self) -> Face:
        return self.face_index[tuple(range(len(self.vertices)))]

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dim + 1)
        for f in self.faces:
            if f.dim >= 0:
                counts[f.dim] += 1
        return tuple(counts)

    def facets_of(self, face: Face) -> list[Face]:
        """Faces of ``face`` of codimension one."""
        s = set(face.vertex_set)
        return [g for g in self.faces if g.dim == face.dim - 1 and set(g.vertex_set) <= s]

    def points(self, face: Face) -> list[Vector]:
        return [self.vertices[i] for i in face.vertex_set]

    @cached_property
    def _bbox(self) -> dict[tuple[int, ...], tuple[Vector, Vector]]:
        out = {}
        for f in self.faces:
            if f.vertex_set:
                pts = self.points(f)
                out[f.vertex_set] = (
                    tuple(min(c) for c in zip(*pts)),
                    tuple(max(c) for c in zip(*pts)),
                )
        return out

    def bbox(self, face: Face) -> tuple[Vector, Vector]:
        return self._bbox[face.vertex_set]

    def to_json(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "vertices": [[fmt_rational(c) for c in v] for v in self.vertices],
            "faces": [list(f.vertex_set) for f in self.faces if f.dim >= 0],
        }


def _null_vector(rows: list[list[Fraction]], n: int) -> list[Fraction]:
    """A nonzero vector orthogonal to every row (rows have rank n-1)."""
    M = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    free = next(c for c in range(n) if c not in piv_cols)
    x = [Fraction(0)] * n
    x[free] = Fraction(1)
    for i, c in enumerate(piv_cols):
        x[c] = -M[i][free]
    return x


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _facets(vertices: Sequence[Vector]) -> set[frozenset[int]]:
    d = len(vertices[0])
    n = len(vertices)
    found: list[frozenset[int]] = []
    for combo in combinations(range(n), d):
        if any(set(combo) <= f for f in found):
            continue
        base = vertices[combo[0]]
        diffs = [[a - b for a, b in zip(vertices[i], base)] for i in combo[1:]]
        if d > 1 and affine_dim([vertices[i] for i in combo]) != d - 1:
            continue
        normal = _null_vector(diffs, d) if d > 1 else [Fraction(1)]
        c = _dot(normal, base)
        vals = [_dot(normal, v) - c for v in vertices]
        if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
            found.append(frozenset(i for i, v in enumerate(vals) if v == 0))
    return set(found)


def _close_under_intersection(sets: Iterable[frozenset[int]]) -> set[frozenset[int]]:
    closed = set(sets)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                c = a & b
                if c not in closed:
                    closed.add(c)
                    new.append(c)
        frontier = new
    return closed


def _build(vertices: Sequence[Vector], face_sets: Iterable[frozenset[int]]) -> Polytope:
    faces = []
    for s in face_sets:
        vs = tuple(sorted(s))
        dim = affine_dim([vertices[i] for i in vs]) if vs else -1
        faces.append(Face(dim, vs))
    ambient = len(vertices[0])
    return Polytope(tuple(vertices), tuple(sorted(faces)), ambient)


def _in_hull(point: Vector, pts: Sequence[Vector]) -> list[Fraction] | None:
    if not pts:
        return None
    d = len(point)
    A = [[Fraction(1)] * len(pts)] + [[p[c] for p in pts] for c in range(d)]
    b = [Fraction(1)] + list(point)
    return lp_feasible(FeasibilitySystem(A, b))


def _parse_vertices(vertices) -> list[Vector]:
    verts = [to_vector(v) for v in vertices]
    if not verts:
        raise InputError("polytope needs at least one vertex")
    d = len(verts[0])
    if any(len(v) != d for v in verts):
        raise InputError("vertices have inconsistent dimensions")
    return verts


def face_lattice(vertices) -> Polytope:
    """Compute the face lattice of a full-dimensional V-polytope.

    Raises InputError if the points do not affinely span their ambient
    space or if some point is not a vertex of the hull.
    """
    verts = _parse_vertices(vertices)
    d = len(verts[0])
    if affine_dim(verts) != d:
        raise InputError(f"vertices do not affinely span R^{d} (degenerate polytope)")
    for i, v in enumerate(verts):
        others = verts[:i] + verts[i + 1:]
        if _in_hull(v, others) is not None:
            raise InputError(f"point {i} {[fmt_rational(c) for c in v]} is not a vertex of the hull")
    n = len(verts)
    if d == 0:
        sets = {frozenset(), frozenset([0])}
    else:
        sets = _facets(verts) | {frozenset(range(n))}
        sets = _close_under_intersection(sets) | {frozenset()}
    return _build(verts, sets)


def is_face(vertices: Sequence[Vector], subset: Iterable[int]) -> bool:
    """True iff ``subset`` is exactly the vertex set cut out by a supporting hyperplane."""
    S = set(subset)
    n, d = len(vertices), len(vertices[0])
    if len(S) == n:
        return True
    inside = sorted(S)
    outside = [i for i in range(n) if i not in S]
    # unknowns: a (d, free), c (free), one slack per outside vertex
    nvars = d + 1 + len(outside)
    A, b = [], []
    for i in inside:
        A.append(list(vertices[i]) + [Fraction(-1)] + [Fraction(0)] * len(outside))
        b.append(Fraction(0))
    for k, i in enumerate(outside):
        slack = [Fraction(0)] * len(outside)
        slack[k] = Fraction(1)
        A.append(list(vertices[i]) + [Fraction(-1)] + slack)
        b.append(Fraction(-1))
    nonneg = frozenset(range(d + 1, nvars))
    return lp_feasible(FeasibilitySystem(A, b, nonneg, nvars)) is not None


def polytope_from_faces(vertices, faces) -> Polytope:
    """Build a polytope from a supplied lattice after re-verifying every face."""
    verts = _parse_vertices(vertices)
    d = len(verts[0])
    if affine_dim(verts) != d:
        raise InputError(f"vertices do not affinely span R^{d} (degenerate polytope)")
    n = len(verts)
    sets = {frozenset(int(i) for i in f) for f in faces}
    for s in sets:
        if any(not 0 <= i < n for i in s):
            raise InputError(f"face {sorted(s)} references an unknown vertex")
        if not is_face(verts, s):
            raise InputError(f"supplied face {sorted(s)} is not cut out by a supporting hyperplane")
    sets |= {frozenset(), frozenset(range(n))}
    for i in range(n):
        if frozenset([i]) not in sets:
            raise InputError(f"vertex {i} missing from the supplied lattice")
    if _close_under_intersection(sets) != sets:
        raise InputError("supplied faces are not closed under intersection")
    return _build(verts, sets)


def polytope_from_json(data: dict) -> Polytope:
    if "vertices" not in data:
        raise InputError("polytope JSON needs a 'vertices' field")
    verts = data["vertices"]
    if "dim" in data and verts and any(len(v) != data["dim"] for v in verts):
        raise InputError("'dim' does not match the vertex coordinates")
    if data.get("faces") is not None:
        return polytope_from_faces(verts, data["faces"])
    return face_lattice(verts)


def face_polytope(P: Polytope, face: Face) -> Polytope:
    """``face`` as a standalone polytope; its lattice is the interval below it.

    Vertex ``j`` of the result is vertex ``face.vertex_set[j]`` of ``P``.
    """
    old = face.vertex_set
    pos = {v: j for j, v in enumerate(old)}
    keep = set(old)
    faces = [
        Face(g.dim, tuple(pos[v] for v in g.vertex_set))
        for g in P.faces
        if set(g.vertex_set) <= keep
    ]
    return Polytope(tuple(P.vertices[i] for i in old), tuple(sorted(faces)), P.ambient_dim)


def skeleton(P: Polytope, k: int) -> list[Face]:
    """All nonempty faces of dimension at most ``k``, sorted by (dim, vertex_set)."""
    if not 0 <= k <= P.dim:
        raise InputError(f"skeleton dimension k={k} outside [0, {P.dim}]")
    return [f for f in P.faces if 0 <= f.dim <= k]


def face_contains(P: Polytope, face: Face, x) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Exact membership of ``x`` in ``face``; returns convex coefficients on success."""
    x = to_vector(x)
    if len(x) != P.ambient_dim:
        raise InputError(f"point has dimension {len(x)}, expected {P.ambient_dim}")
    lam = _in_hull(x, P.points(face))
    if lam is None:
        return False, None
    return True, tuple(lam)


def contains(P: Polytope, x) -> bool:
    return face_contains(P, P.full, x)[0]


def minimal_face(P: Polytope, x) -> Face:
    """The face containing ``x`` in its relative interior."""
    x = to_vector(x)
    if not contains(P, x):
        raise InputError("point is not in the polytope")
    cur = set(range(len(P.vertices)))
    for g in P.faces:
        if g.dim == P.dim - 1 and face_contains(P, g, x)[0]:
            cur &= set(g.vertex_set)
    return P.face_index[tuple(sorted(cur))]


# ---------------------------------------------------------------------------
# floating point distance to a skeleton


def _dist_to_face(P: Polytope, face: Face, x: np.ndarray, memo: dict) -> float:
    key = face.vertex_set
    if key in memo:
        return memo[key]
    V = np.array([[float(c) for c in v] for v in P.points(face)])
    if face.dim == 0:
        memo[key] = float(np.linalg.norm(x - V[0]))
        return memo[key]
    base = V[0]
    Q = _orthobasis(V[1:] - base, face.dim)
    proj = base + Q @ (Q.T @ (x - base))
    if _inside(P, face, proj, Q, base):
        out = float(np.linalg.norm(x - proj))
    else:
        out = min(_dist_to_face(P, g, x, memo) for g in P.facets_of(face))
    memo[key] = out
    return out


def _orthobasis(diffs: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis (columns) of the span of ``diffs`` (known rank ``dim``)."""
    U, _, _ = np.linalg.svd(diffs.T, full_matrices=False)
    return U[:, :dim]


def _inside(P: Polytope, face: Face, y: np.ndarray, Q: np.ndarray, base: np.ndarray) -> bool:
    """Is ``y`` (already in aff(face)) inside the face?  Checked facet by facet."""
    V = {i: np.array([float(c) for c in P.vertices[i]]) for i in face.vertex_set}
    scale = max(1.0, max(float(np.abs(v).max()) for v in V.values()))
    for g in P.facets_of(face):
        g0 = V[g.vertex_set[0]]
        other = next(i for i in face.vertex_set if i not in g.vertex_set)
        if g.dim > 0:
            Qg = _orthobasis(np.array([V[i] - g0 for i in g.vertex_set[1:]]), g.dim)
        else:
            Qg = np.zeros((len(g0), 0))
        w = V[other] - g0
        n = w - Qg @ (Qg.T @ w)
        n = Q @ (Q.T @ n)
        if np.dot(n, y - g0) < -1e-12 * scale * np.linalg.norm(n):
            return False
    return True


def dist_to_skeleton(P: Polytope, k: int, x) -> float:
    """Euclidean distance from ``x`` to the ``k``-skeleton of ``P`` (floating point)."""
    if not 0 <= k <= P.dim:
        raise InputError(f"skeleton dimension k={k} outside [0, {P.dim}]")
    xs = np.array([float(c) for c in x], dtype=float)
    memo: dict = {}
    return min(_dist_to_face(P, f, xs, memo) for f in P.faces if 0 <= f.dim <= k)
