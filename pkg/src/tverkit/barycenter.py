"""Writing a point of a polytope as the barycenter of r points of its k-skeleton.

Two solvers: a direct search over multisets of skeleton faces (one exact LP
per candidate, with exact pruning), and a recursive one that peels off the
smallest prime factor q of r: first m = r/q points in the (qk)-skeleton,
then each of those split into q points of its carrier's k-skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .bounds import smallest_prime_factor
from .exact_linalg import FeasibilitySystem, InputError, Vector, lp_feasible, to_vector
from .polytope import Face, Polytope, contains, face_contains, face_polytope, minimal_face


@dataclass(frozen=True)
class BarycenterCertificate:
    faces: tuple[Face, ...]
    points: tuple[Vector, ...]
    coefficients: tuple[tuple[Fraction, ...], ...]

    def to_json(self) -> dict:
        from .exact_linalg import fmt_rational as f

        return {
            "faces": [list(s.vertex_set) for s in self.faces],
            "points": [[f(c) for c in p] for p in self.points],
            "coefficients": [[f(c) for c in lam] for lam in self.coefficients],
        }


class Verdict(NamedTuple):
    ok: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def _validate(P: Polytope, p, k: int, r: int) -> Vector:
    p = to_vector(p)
    if len(p) != P.ambient_dim:
        raise InputError(f"point has dimension {len(p)}, expected {P.ambient_dim}")
    if k < 0 or r < 1:
        raise InputError("need k >= 0 and r >= 1")
    if not contains(P, p):
        raise InputError("point is not in the polytope")
    return p


def _maximal_skeleton_faces(P: Polytope, k: int) -> list[Face]:
    # x in a face implies x in every face containing it, so only faces of the
    # skeleton not strictly contained in another skeleton face can matter
    top = min(k, P.dim)
    return [f for f in P.faces if f.dim == top]


def _lp(P: Polytope, faces: list[Face], slack: int, target: Vector):
    """Points x_i in faces[i] and y in P with sum x_i + slack*y = target."""
    d = P.ambient_dim
    cols: list[tuple[int, int]] = []  # (block, vertex)
    for b, f in enumerate(faces):
        cols.extend((b, v) for v in f.vertex_set)
    if slack:
        cols.extend((len(faces), v) for v in range(len(P.vertices)))
    nblocks = len(faces) + (1 if slack else 0)
    A = []
    b = []
    for blk in range(nblocks):
        A.append([Fraction(1) if c[0] == blk else Fraction(0) for c in cols])
        b.append(Fraction(1) if blk < len(faces) else Fraction(slack))
    for coord in range(d):
        A.append([P.vertices[v][coord] for _, v in cols])
        b.append(target[coord])
    x = lp_feasible(FeasibilitySystem(A, b))
    if x is None:
        return None
    lams = [[] for _ in faces]
    for (blk, _), val in zip(cols, x):
        if blk < len(faces):
            lams[blk].append(val)
    return lams


def _bbox_ok(P: Polytope, faces: list[Face], slack: int, target: Vector) -> bool:
    lo_all, hi_all = P.bbox(P.full)
    for c in range(P.ambient_dim):
        lo = slack * lo_all[c] + sum(P.bbox(f)[0][c] for f in faces)
        hi = slack * hi_all[c] + sum(P.bbox(f)[1][c] for f in faces)
        if not lo <= target[c] <= hi:
            return False
    return True


def _certificate(P: Polytope, faces: list[Face], lams) -> BarycenterCertificate:
    points = []
    for f, lam in zip(faces, lams):
        pts = P.points(f)
        points.append(tuple(sum((l * v[c] for l, v in zip(lam, pts)), Fraction(0)) for c in range(P.ambient_dim)))
    return BarycenterCertificate(tuple(faces), tuple(points), tuple(tuple(l) for l in lams))


def solve_barycenter(P: Polytope, p, k: int, r: int) -> BarycenterCertificate | None:
    """First feasible multiset of r skeleton faces in lexicographic order.

    Depth-first over nondecreasing face sequences.  A partial choice is cut
    as soon as the remaining points cannot be placed even anywhere in P
    (bounding boxes first, then an exact LP), so the first leaf that
    survives is the lexicographically first feasible multiset.
    """
    p = _validate(P, p, k, r)
    faces = _maximal_skeleton_faces(P, k)
    target = tuple(r * c for c in p)
    chosen: list[Face] = []

    def dfs(start: int):
        j = len(chosen)
        if j == r:
            lams = _lp(P, chosen, 0, target)
            return None if lams is None else _certificate(P, chosen, lams)
        for i in range(start, len(faces)):
            chosen.append(faces[i])
            slack = r - j - 1
            if _bbox_ok(P, chosen, slack, target) and (
                slack == 0 or _lp(P, chosen, slack, target) is not None
            ):
                found = dfs(i)
                if found is not None:
                    return found
            chosen.pop()
        return None

    return dfs(0)


def restrict_to_carrier(P: Polytope, p) -> tuple[Polytope, Vector]:
    """The minimal face of ``p`` as a standalone polytope, with ``p`` in its relative interior."""
    p = to_vector(p)
    return face_polytope(P, minimal_face(P, p)), p


def _lift_certificate(P: Polytope, sub_face: Face, sub_cert: BarycenterCertificate) -> BarycenterCertificate:
    """Re-index a certificate found on face_polytope(P, sub_face) into P."""
    faces = tuple(
        P.face_index[tuple(sorted(sub_face.vertex_set[j] for j in f.vertex_set))]
        for f in sub_cert.faces
    )
    # sub-face vertex order is increasing in P's indices, so coefficient order carries over
    return BarycenterCertificate(faces, sub_cert.points, sub_cert.coefficients)


def solve_barycenter_recursive(P: Polytope, p, k: int, r: int) -> BarycenterCertificate | None:
    """Peel off prime factors of r, smallest first.

    Prime r, and any query outside the regime k*r >= dim(carrier of p) where
    the splitting is guaranteed to go through, use the direct search.
    """
    p = _validate(P, p, k, r)
    carrier = minimal_face(P, p)
    if r == 1:
        if carrier.dim > k:
            return None
        _, lam = face_contains(P, carrier, p)
        return BarycenterCertificate((carrier,), (p,), (lam,))
    q = smallest_prime_factor(r)
    if q == r or k * r < carrier.dim:
        return solve_barycenter(P, p, k, r)

    m = r // q
    outer = solve_barycenter_recursive(P, p, q * k, m)
    if outer is None:
        return solve_barycenter(P, p, k, r)
    faces: list[Face] = []
    points: list[Vector] = []
    coeffs: list[tuple[Fraction, ...]] = []
    for x in outer.points:
        sigma = minimal_face(P, x)
        inner = solve_barycenter(face_polytope(P, sigma), x, k, q)
        if inner is None:
            return solve_barycenter(P, p, k, r)
        lifted = _lift_certificate(P, sigma, inner)
        faces.extend(lifted.faces)
        points.extend(lifted.points)
        coeffs.extend(lifted.coefficients)
    return BarycenterCertificate(tuple(faces), tuple(points), tuple(coeffs))


def verify_certificate(P: Polytope, p, k: int, r: int, cert: BarycenterCertificate) -> Verdict:
    """Re-check a certificate with plain exact arithmetic (no LP, no search)."""
    p = to_vector(p)
    if not (len(cert.faces) == len(cert.points) == len(cert.coefficients) == r):
        return Verdict(False, "wrong number of points")
    for face, point, lam in zip(cert.faces, cert.points, cert.coefficients):
        known = P.face_index.get(tuple(face.vertex_set))
        if known is None or not face.vertex_set:
            return Verdict(False, "unknown face")
        if known.dim > k:
            return Verdict(False, "face dimension exceeds k")
        if len(lam) != len(face.vertex_set) or any(l < 0 for l in lam) or sum(lam) != 1:
            return Verdict(False, "coefficients not convex")
        if len(point) != P.ambient_dim:
            return Verdict(False, "point has wrong dimension")
        for c in range(P.ambient_dim):
            if sum(l * P.vertices[v][c] for l, v in zip(lam, face.vertex_set)) != point[c]:
                return Verdict(False, "point does not match coefficients")
    for c in range(P.ambient_dim):
        if sum(pt[c] for pt in cert.points) != r * p[c]:
            return Verdict(False, "barycenter mismatch")
    return Verdict(True)
