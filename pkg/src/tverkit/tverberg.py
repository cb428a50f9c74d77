"""Tverberg-type partitions for affine maps of a simplex.

An affine map from the N-simplex to R^d is just the list of images of its
N+1 vertices, so a configuration is a point list.  A certificate names r
pairwise disjoint vertex sets, convex coefficients on each, and the common
image point.

Search strategy: enlarging a face only enlarges its image hull, so a
feasible family extends to a feasible *maximal* family (no unused vertex can
join any face without breaking the face constraints).  The search walks
maximal families in canonical order (faces sorted by smallest vertex), drops
families whose bounding boxes have empty common intersection, and runs one
exact LP on the rest.  Returned faces are trimmed to the vertices carrying
positive weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Sequence

from .barycenter import Verdict
from .exact_linalg import (
    FeasibilitySystem,
    InputError,
    Vector,
    affine_dim,
    fmt_rational,
    lp_feasible,
    to_vector,
)


@dataclass(frozen=True)
class PointConfiguration:
    """Images of the vertices 0..N of the N-simplex under an affine map to R^dim."""

    dim: int
    points: tuple[Vector, ...]
    colors: tuple | None = None
    provenance: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.points:
            raise InputError("configuration needs at least one point")
        if any(len(p) != self.dim for p in self.points):
            raise InputError(f"all points must have dimension {self.dim}")
        if self.colors is not None and len(self.colors) != len(self.points):
            raise InputError("colors must be given for every vertex")

    @classmethod
    def from_points(cls, points, colors=None) -> "PointConfiguration":
        pts = tuple(to_vector(p) for p in points)
        dim = len(pts[0]) if pts else 0
        return cls(dim, pts, None if colors is None else tuple(colors))

    @classmethod
    def from_json(cls, data: dict) -> "PointConfiguration":
        if "points" not in data:
            raise InputError("configuration JSON needs a 'points' field")
        cfg = cls.from_points(data["points"], data.get("colors"))
        if "dim" in data and data["dim"] != cfg.dim:
            raise InputError("'dim' does not match the point coordinates")
        return cfg

    def to_json(self) -> dict:
        out = {"dim": self.dim, "points": [[fmt_rational(c) for c in p] for p in self.points]}
        if self.colors is not None:
            out["colors"] = list(self.colors)
        if self.provenance is not None:
            out["provenance"] = self.provenance
        return out

    @property
    def N(self) -> int:
        return len(self.points) - 1


@dataclass(frozen=True)
class TverbergCertificate:
    faces: tuple[tuple[int, ...], ...]
    coefficients: tuple[tuple[Fraction, ...], ...]
    witness: Vector

    def to_json(self) -> dict:
        return {
            "faces": [list(f) for f in self.faces],
            "coefficients": [[fmt_rational(c) for c in lam] for lam in self.coefficients],
            "witness": [fmt_rational(c) for c in self.witness],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TverbergCertificate":
        try:
            return cls(
                tuple(tuple(int(i) for i in f) for f in data["faces"]),
                tuple(to_vector(lam) for lam in data["coefficients"]),
                to_vector(data["witness"]),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed Tverberg certificate: {exc}") from exc


# ---------------------------------------------------------------------------
# family enumeration

FaceRule = Callable[[list[int], int], bool]


def _face_rule(max_size: int | None, colors: Sequence | None) -> FaceRule | None:
    """Predicate: may vertex ``v`` join ``block``?  None when unconstrained."""
    if max_size is None and colors is None:
        return None

    def allowed(block: list[int], v: int) -> bool:
        if max_size is not None and len(block) >= max_size:
            return False
        if colors is not None and any(colors[u] == colors[v] for u in block):
            return False
        return True

    return allowed


def maximal_families(n: int, r: int, rule: FaceRule | None) -> Iterator[list[list[int]]]:
    """Families of r disjoint nonempty subsets of range(n), maximal under ``rule``.

    Blocks appear in order of their smallest element.  Vertices are assigned
    in increasing order: to an existing block, to a new block, or left
    unused (only when a rule exists; unconstrained maximal families are
    exactly the partitions into r blocks).
    """
    blocks: list[list[int]] = []
    unused: list[int] = []

    def rec(v: int):
        if len(blocks) + (n - v) < r:
            return
        if v == n:
            if len(blocks) == r and all(
                not rule(b, u) for u in unused for b in blocks
            ):
                yield blocks
            return
        for b in blocks:
            if rule is None or rule(b, v):
                b.append(v)
                yield from rec(v + 1)
                b.pop()
        if len(blocks) < r:
            blocks.append([v])
            yield from rec(v + 1)
            blocks.pop()
        if rule is not None:
            unused.append(v)
            yield from rec(v + 1)
            unused.pop()

    yield from rec(0)


def _boxes_meet(cfg: PointConfiguration, family: list[list[int]]) -> bool:
    for c in range(cfg.dim):
        lo = max(min(cfg.points[i][c] for i in f) for f in family)
        hi = min(max(cfg.points[i][c] for i in f) for f in family)
        if lo > hi:
            return False
    return True


def common_point(cfg: PointConfiguration, family: Sequence[Sequence[int]]) -> TverbergCertificate | None:
    """Exact LP: do the convex hulls of the faces share a point?"""
    cols = [(b, v) for b, f in enumerate(family) for v in f]
    A, rhs = [], []
    for b in range(len(family)):
        A.append([Fraction(int(cb == b)) for cb, _ in cols])
        rhs.append(Fraction(1))
    for b in range(1, len(family)):
        for c in range(cfg.dim):
            A.append([
                cfg.points[v][c] if cb == b else (-cfg.points[v][c] if cb == 0 else Fraction(0))
                for cb, v in cols
            ])
            rhs.append(Fraction(0))
    x = lp_feasible(FeasibilitySystem(A, rhs))
    if x is None:
        return None
    faces: list[tuple[tuple[int, ...], tuple[Fraction, ...]]] = []
    for b, f in enumerate(family):
        pairs = [(v, val) for (cb, v), val in zip(cols, x) if cb == b and val > 0]
        faces.append((tuple(v for v, _ in pairs), tuple(val for _, val in pairs)))
    faces.sort()
    f0, lam0 = faces[0]
    witness = tuple(
        sum((l * cfg.points[v][c] for v, l in zip(f0, lam0)), Fraction(0)) for c in range(cfg.dim)
    )
    return TverbergCertificate(tuple(f for f, _ in faces), tuple(l for _, l in faces), witness)


def _search(cfg: PointConfiguration, r: int, max_size=None, colors=None) -> TverbergCertificate | None:
    if r < 2:
        raise InputError(f"need r >= 2, got {r}")
    rule = _face_rule(max_size, colors)
    for family in maximal_families(len(cfg.points), r, rule):
        if not _boxes_meet(cfg, family):
            continue
        cert = common_point(cfg, family)
        if cert is not None:
            return cert
    return None


def tverberg_partition(cfg: PointConfiguration, r: int) -> TverbergCertificate | None:
    return _search(cfg, r)


def skeleton_tverberg_partition(cfg: PointConfiguration, r: int, k: int) -> TverbergCertificate | None:
    """Like tverberg_partition, but every face has at most k+1 vertices."""
    if k < 0:
        raise InputError(f"need k >= 0, got {k}")
    return _search(cfg, r, max_size=k + 1)


def colored_tverberg_partition(cfg: PointConfiguration, colors: Sequence, r: int) -> TverbergCertificate | None:
    """Like tverberg_partition, but every face is rainbow (no repeated color)."""
    if len(colors) != len(cfg.points):
        raise InputError("colors must be given for every vertex")
    return _search(cfg, r, colors=tuple(colors))


def verify_tverberg_certificate(
    cfg: PointConfiguration,
    cert: TverbergCertificate,
    r: int | None = None,
    max_face_size: int | None = None,
    colors: Sequence | None = None,
) -> Verdict:
    """Exact re-check of disjointness, convexity, common witness and face constraints."""
    n = len(cfg.points)
    if r is not None and len(cert.faces) != r:
        return Verdict(False, "wrong number of faces")
    if len(cert.faces) < 2 or len(cert.coefficients) != len(cert.faces):
        return Verdict(False, "malformed certificate")
    if len(cert.witness) != cfg.dim:
        return Verdict(False, "witness has wrong dimension")
    seen: set[int] = set()
    for face in cert.faces:
        if not face or any(not 0 <= v < n for v in face) or len(set(face)) != len(face):
            return Verdict(False, "invalid face")
        if seen & set(face):
            return Verdict(False, "faces not disjoint")
        seen |= set(face)
    for face, lam in zip(cert.faces, cert.coefficients):
        if len(lam) != len(face) or any(l < 0 for l in lam) or sum(lam) != 1:
            return Verdict(False, "coefficients not convex")
        for c in range(cfg.dim):
            if sum(l * cfg.points[v][c] for v, l in zip(face, lam)) != cert.witness[c]:
                return Verdict(False, "witness mismatch")
    if max_face_size is not None and any(len(f) > max_face_size for f in cert.faces):
        return Verdict(False, "face exceeds skeleton dimension")
    if colors is not None:
        for f in cert.faces:
            if len({colors[v] for v in f}) != len(f):
                return Verdict(False, "face not rainbow")
    return Verdict(True)


# ---------------------------------------------------------------------------
# counting argument


def pigeonhole_vkf_check(N: int, r: int, k: int) -> bool:
    """Must every family of r disjoint nonempty faces of the N-simplex contain a
    face of dimension <= k?  Equivalently: r faces with >= k+2 vertices each
    do not fit into N+1 vertices."""
    if min(N, r, k) < 0:
        raise InputError("N, r, k must be nonnegative")
    return N + 1 < r * (k + 2)


def exists_large_family(N: int, r: int, k: int) -> bool:
    """Brute force: is there a family of r pairwise disjoint faces of the
    N-simplex, all of dimension >= k+1?  Used to cross-check the count."""
    verts = range(N + 1)

    def rec(avail: frozenset[int], left: int, lo: int) -> bool:
        if left == 0:
            return True
        # faces listed by increasing smallest vertex
        for size in range(k + 2, len(avail) + 1):
            for face in combinations(sorted(avail), size):
                if face[0] < lo:
                    continue
                if rec(avail - set(face), left - 1, face[0] + 1):
                    return True
        return False

    return rec(frozenset(verts), r, 0)


# ---------------------------------------------------------------------------
# seeded trial suites

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of splitmix64; used to turn user seeds into xorshift states."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D)."""

    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def coordinate(self) -> Fraction:
        """Integer in [-1000, 1000] (reduced mod 2001) divided by 1000."""
        return Fraction(int(self.next_u64() % 2001) - 1000, 1000)


def in_general_position(points: Sequence[Vector], d: int) -> bool:
    """Every subset of at most d+1 points is affinely independent."""
    if len(points) <= d + 1:
        return affine_dim(points) == len(points) - 1
    return all(affine_dim(list(s)) == d for s in combinations(points, d + 1))


def random_configuration(d: int, n: int, seed: int, general_position: bool = False) -> PointConfiguration:
    rng = XorShift64Star(seed)
    while True:
        pts = tuple(tuple(rng.coordinate() for _ in range(d)) for _ in range(n))
        if not general_position or in_general_position(pts, d):
            return PointConfiguration(d, pts)


@dataclass
class TrialReport:
    mode: str
    trials: int
    successes: int = 0
    failures: int = 0
    failing_seeds: list[int] = field(default_factory=list)
    invalid: int = 0  # certificates the verifier rejected

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "trials": self.trials,
            "successes": self.successes,
            "failures": self.failures,
            "failing_seeds": self.failing_seeds,
            "invalid_certificates": self.invalid,
        }


def random_trial_suite(
    d: int,
    r: int,
    N: int,
    trials: int,
    seed: int,
    mode: str = "classical",
    k: int | None = None,
    general_position: bool = False,
) -> TrialReport:
    """Run the solver for ``mode`` on ``trials`` seeded random configurations.

    Trial t uses seed ``seed + t``.  Modes: "classical", "skeleton" (needs
    k), "colored" (vertex v gets color v // (2r-1), the color classes of the
    type-B setting).
    """
    if mode not in ("classical", "skeleton", "colored"):
        raise InputError(f"unknown mode {mode!r}")
    if mode == "skeleton" and k is None:
        raise InputError("skeleton mode needs k")
    label = f"skeleton(k={k})" if mode == "skeleton" else mode
    rep = TrialReport(label, trials)
    colors = tuple(v // (2 * r - 1) for v in range(N + 1)) if mode == "colored" else None
    for t in range(trials):
        s = seed + t
        cfg = random_configuration(d, N + 1, s, general_position)
        if mode == "classical":
            cert = tverberg_partition(cfg, r)
            verdict = cert and verify_tverberg_certificate(cfg, cert, r)
        elif mode == "skeleton":
            cert = skeleton_tverberg_partition(cfg, r, k)
            verdict = cert and verify_tverberg_certificate(cfg, cert, r, max_face_size=k + 1)
        else:
            cert = colored_tverberg_partition(cfg, colors, r)
            verdict = cert and verify_tverberg_certificate(cfg, cert, r, colors=colors)
        if cert is None:
            rep.failures += 1
            rep.failing_seeds.append(s)
        else:
            rep.successes += 1
            if not verdict:
                rep.invalid += 1
    return rep
