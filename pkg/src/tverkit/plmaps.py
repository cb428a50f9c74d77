"""Maps out of simplicial complexes and the two lifting constructions.

* ``constraint_lift`` appends the distance to a skeleton of the simplex as an
  extra output coordinate.  The result is continuous but not affine, so it
  is an evaluator, never a configuration.
* ``join_lift_config`` realizes the map on the k-fold join of the simplex,
  lambda_1 x_1 + ... + lambda_k x_k  ->  (lambda_1..lambda_{k-1},
  lambda_1 f(x_1), ..., lambda_k f(x_k)),
  by its values on the join's vertices.  Copy i (1-based), vertex j of the
  base simplex gets index (i-1)(N+1)+j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .delprod import SimplicialComplex
from .exact_linalg import InputError, Vector, to_rational
from .tverberg import (
    PointConfiguration,
    TverbergCertificate,
    tverberg_partition,
    verify_tverberg_certificate,
)


@dataclass(frozen=True)
class BarycentricPoint:
    """Nonnegative weights over vertices summing to one; zero weights are dropped."""

    weights: Mapping[int, Fraction]

    def __post_init__(self):
        w = {int(v): to_rational(x) for v, x in dict(self.weights).items()}
        if any(x < 0 for x in w.values()):
            raise InputError("barycentric weights must be nonnegative")
        if sum(w.values()) != 1:
            raise InputError("barycentric weights must sum to 1")
        object.__setattr__(self, "weights", {v: x for v, x in sorted(w.items()) if x != 0})

    @classmethod
    def from_list(cls, weights: Sequence) -> "BarycentricPoint":
        return cls(dict(enumerate(weights)))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.weights)

    def __hash__(self):
        return hash(tuple(self.weights.items()))


@dataclass(frozen=True)
class AffineVertexMap:
    source: SimplicialComplex
    target_dim: int
    images: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.images) != self.source.vertex_count:
            raise InputError("every vertex needs an image")
        if any(len(v) != self.target_dim for v in self.images):
            raise InputError(f"images must have dimension {self.target_dim}")

    @classmethod
    def on_simplex(cls, cfg: PointConfiguration) -> "AffineVertexMap":
        return cls(SimplicialComplex.simplex(cfg.N), cfg.dim, cfg.points)


def evaluate(f: AffineVertexMap, x: BarycentricPoint) -> Vector:
    if not x.support or any(v >= f.source.vertex_count for v in x.support):
        raise InputError("point references vertices outside the complex")
    if not f.source.is_face(x.support):
        raise InputError(f"support {sorted(x.support)} is not a face of the complex")
    return tuple(
        sum((w * f.images[v][c] for v, w in x.weights.items()), Fraction(0))
        for c in range(f.target_dim)
    )


def simplex_skeleton_distance(weights: Sequence, k: int) -> float:
    """Euclidean distance from a point of the standard simplex (coordinates =
    barycentric weights, vertices e_0..e_N) to its k-skeleton.

    The nearest k-face keeps the k+1 largest weights; the missing mass s is
    spread evenly over them, giving sum(rest^2) + s^2/(k+1).
    """
    w = sorted((float(x) for x in weights), reverse=True)
    rest = w[k + 1:]
    s = sum(rest)
    return math.sqrt(sum(x * x for x in rest) + s * s / (k + 1))


@dataclass(frozen=True)
class ConstraintLift:
    """x -> (f(x), dist(x, k-skeleton)); exact in the first coordinates, float in the last."""

    f: AffineVertexMap
    k: int

    @property
    def target_dim(self) -> int:
        return self.f.target_dim + 1

    def __call__(self, x: BarycentricPoint) -> tuple:
        head = evaluate(self.f, x)
        n = self.f.source.vertex_count
        weights = [x.weights.get(v, Fraction(0)) for v in range(n)]
        return head + (simplex_skeleton_distance(weights, self.k),)


def constraint_lift(f: AffineVertexMap, k: int) -> ConstraintLift:
    N = f.source.vertex_count - 1
    if not 0 <= k <= N:
        raise InputError(f"need 0 <= k <= N={N}, got k={k}")
    if f.source.facets != (frozenset(range(N + 1)),):
        raise InputError("constraint_lift is defined for maps on the full simplex")
    return ConstraintLift(f, k)


# ---------------------------------------------------------------------------
# join lift


def join_index(copy: int, vertex: int, n_vertices: int) -> int:
    """Index of vertex ``vertex`` in copy ``copy`` (1-based) of the join."""
    return (copy - 1) * n_vertices + vertex


def join_lift_config(cfg: PointConfiguration, k: int) -> PointConfiguration:
    if k < 1:
        raise InputError(f"need k >= 1, got {k}")
    d, n = cfg.dim, len(cfg.points)
    zero = Fraction(0)
    pts = []
    for i in range(1, k + 1):
        indicator = tuple(Fraction(1) if j == i else zero for j in range(1, k))
        for p in cfg.points:
            blocks: list[Fraction] = []
            for j in range(1, k + 1):
                blocks.extend(p if j == i else (zero,) * d)
            pts.append(indicator + tuple(blocks))
    prov = {"join_of": cfg.provenance, "k": k} if cfg.provenance else {"k": k}
    return PointConfiguration(k * (d + 1) - 1, tuple(pts), provenance=prov)


def join_weights(cert_face: Sequence[int], coeffs: Sequence[Fraction], n: int, k: int) -> tuple[Fraction, ...]:
    """Total weight each copy carries in one face of a lifted certificate."""
    lam = [Fraction(0)] * k
    for v, c in zip(cert_face, coeffs):
        lam[v // n] += c
    return tuple(lam)


@dataclass
class ReflectionReport:
    r: int
    k: int
    base_has_partition: bool
    lift_has_partition: bool
    consistent: bool
    message: str
    lambdas: tuple[Fraction, ...] | None = None
    back_projected: TverbergCertificate | None = None
    base_certificate: TverbergCertificate | None = field(default=None, repr=False)
    lift_certificate: TverbergCertificate | None = field(default=None, repr=False)

    @property
    def fatal(self) -> bool:
        return not self.consistent


def back_project(cfg: PointConfiguration, cert: TverbergCertificate, k: int):
    """Turn a certificate for the join lift into one for ``cfg``.

    Every face carries the same copy weights (lambda_1..lambda_k); take the
    first copy j with lambda_j > 0 and renormalize each face's copy-j part.
    Returns (lambdas, certificate) or raises InputError if the weights
    disagree across faces.
    """
    n = len(cfg.points)
    per_face = [join_weights(f, c, n, k) for f, c in zip(cert.faces, cert.coefficients)]
    if any(lam != per_face[0] for lam in per_face):
        raise InputError(f"copy weights differ across faces: {per_face}")
    lam = per_face[0]
    j = next(i for i, x in enumerate(lam) if x > 0)
    faces, coeffs = [], []
    for f, c in zip(cert.faces, cert.coefficients):
        part = [(v - j * n, x / lam[j]) for v, x in zip(f, c) if v // n == j and x > 0]
        faces.append(tuple(v for v, _ in part))
        coeffs.append(tuple(x for _, x in part))
    d = cfg.dim
    off = (k - 1) + j * d
    witness = tuple(x / lam[j] for x in cert.witness[off:off + d])
    order = sorted(range(len(faces)), key=lambda i: faces[i])
    return lam, TverbergCertificate(
        tuple(faces[i] for i in order), tuple(coeffs[i] for i in order), witness
    )


def check_lift_reflection(cfg: PointConfiguration, r: int, k: int) -> ReflectionReport:
    """Check: if the join lift has an r-fold partition then so does ``cfg``.

    A lifted certificate is also projected back to ``cfg`` and verified;
    any failure is reported as a fatal inconsistency.
    """
    base = tverberg_partition(cfg, r)
    lifted_cfg = join_lift_config(cfg, k)
    lifted = tverberg_partition(lifted_cfg, r)
    rep = ReflectionReport(r, k, base is not None, lifted is not None, True, "ok",
                           base_certificate=base, lift_certificate=lifted)
    if lifted is None:
        rep.message = "lift has no partition" + ("" if base is None else "; base does")
        return rep
    if base is None:
        rep.consistent = False
        rep.message = "FATAL: lift has a partition but the base configuration has none"
    try:
        lam, back = back_project(cfg, lifted, k)
    except InputError as exc:
        rep.consistent = False
        rep.message = f"FATAL: {exc}"
        return rep
    rep.lambdas, rep.back_projected = lam, back
    if not verify_tverberg_certificate(cfg, back, r):
        rep.consistent = False
        rep.message = "FATAL: back-projected certificate fails verification"
    return rep
