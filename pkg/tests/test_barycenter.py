from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tverkit import corpus
from tverkit.barycenter import (
    BarycenterCertificate,
    restrict_to_carrier,
    solve_barycenter,
    solve_barycenter_recursive,
    verify_certificate,
)
from tverkit.exact_linalg import InputError
from tverkit.polytope import skeleton

from oracles import brute_barycenter

SQUARE = corpus.square()
SEGMENT = corpus.segment()


def test_square_two_edge_points():
    cert = solve_barycenter(SQUARE, (0, 0), 1, 2)
    assert cert is not None and verify_certificate(SQUARE, (0, 0), 1, 2, cert)
    assert all(f.dim <= 1 for f in cert.faces)
    assert cert.points[0] == tuple(-c for c in cert.points[1])


def test_vertex_target():
    for v in SQUARE.vertices:
        for k in (0, 1):
            for r in (1, 2, 3):
                cert = solve_barycenter(SQUARE, v, k, r)
                assert cert.points == (v,) * r


def test_segment_examples():
    cert = solve_barycenter(SEGMENT, (F(1, 2),), 0, 2)
    assert sorted(cert.points) == [(0,), (1,)]
    assert solve_barycenter(SEGMENT, (F(1, 2),), 0, 1) is None
    assert solve_barycenter_recursive(SEGMENT, (F(1, 2),), 0, 1) is None


def test_point_outside_is_rejected():
    with pytest.raises(InputError):
        solve_barycenter(SQUARE, (2, 0), 1, 2)
    with pytest.raises(InputError):
        solve_barycenter_recursive(SQUARE, (0, 0, 0), 1, 2)


def test_recursive_examples():
    cube = corpus.cube()
    cert = solve_barycenter_recursive(cube, (0, 0, 0), 1, 4)
    assert cert is not None and verify_certificate(cube, (0, 0, 0), 1, 4, cert)
    cert = solve_barycenter_recursive(SQUARE, (0, 0), 1, 4)
    assert verify_certificate(SQUARE, (0, 0), 1, 4, cert)
    # prime r takes the direct path
    p = (F(1, 4), F(-1, 2))
    assert solve_barycenter_recursive(SQUARE, p, 1, 3) == solve_barycenter(SQUARE, p, 1, 3)


def test_restrict_to_carrier():
    Q, _ = restrict_to_carrier(SQUARE, (1, 0))
    assert Q.dim == 1 and set(Q.vertices) == {(1, -1), (1, 1)}
    Q, _ = restrict_to_carrier(SQUARE, (0, 0))
    assert Q.f_vector() == SQUARE.f_vector()
    Q, _ = restrict_to_carrier(SQUARE, (1, 1))
    assert Q.dim == 0 and Q.vertices == ((1, 1),)
    with pytest.raises(InputError):
        restrict_to_carrier(SQUARE, (3, 3))


def test_verifier_reasons():
    p = (0, 0)
    cert = solve_barycenter(SQUARE, p, 1, 2)
    assert verify_certificate(SQUARE, p, 1, 2, cert).reason == "ok"
    assert verify_certificate(SQUARE, p, 0, 2, cert).reason == "face dimension exceeds k"
    assert verify_certificate(SQUARE, p, 1, 3, cert).reason == "wrong number of points"
    moved = (cert.points[1][0] + F(1, 5),) + cert.points[1][1:]
    shifted = replace(cert, points=(cert.points[0], moved))
    assert verify_certificate(SQUARE, p, 1, 2, shifted).reason == "point does not match coefficients"
    assert verify_certificate(SQUARE, (F(1, 10), 0), 1, 2, cert).reason == "barycenter mismatch"
    diag = replace(cert.faces[0], vertex_set=(0, 2))
    bogus = replace(cert, faces=(diag, cert.faces[1]))
    assert verify_certificate(SQUARE, p, 1, 2, bogus).reason == "unknown face"
    neg = replace(cert, coefficients=((F(3, 2), F(-1, 2)),) + cert.coefficients[1:])
    assert verify_certificate(SQUARE, p, 1, 2, neg).reason == "coefficients not convex"
    # a hand-made certificate from two opposite edge midpoints
    e1 = [f for f in skeleton(SQUARE, 1) if f.dim == 1 and all(SQUARE.vertices[v][0] == 1 for v in f.vertex_set)][0]
    e2 = [f for f in skeleton(SQUARE, 1) if f.dim == 1 and all(SQUARE.vertices[v][0] == -1 for v in f.vertex_set)][0]
    half = (F(1, 2), F(1, 2))
    hand = BarycenterCertificate((e1, e2), ((1, 0), (-1, 0)), (half, half))
    assert verify_certificate(SQUARE, p, 1, 2, hand)


def _oracle_cases():
    cases = []
    for name in ("segment", "triangle", "square"):
        P = corpus.CORPUS[name]()
        pts = corpus.interior_grid(P, F(1, 2)) + [P.vertices[0]]
        for p in pts:
            for k in range(P.dim):
                for r in (1, 2, 3):
                    cases.append((name, p, k, r))
    return cases


@pytest.mark.parametrize("name,p,k,r", _oracle_cases())
def test_direct_solver_matches_oracle(name, p, k, r):
    P = corpus.CORPUS[name]()
    faces = [list(f.vertex_set) for f in skeleton(P, k)]
    cert = solve_barycenter(P, p, k, r)
    assert (cert is not None) == brute_barycenter(P.vertices, faces, p, r)
    if cert is not None:
        assert verify_certificate(P, p, k, r, cert)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["triangle", "square", "octahedron", "prism"]),
    st.lists(st.fractions(min_value=0, max_value=1, max_denominator=6), min_size=6, max_size=6),
    st.integers(0, 2),
    st.integers(1, 4),
)
def test_random_points_carrier_and_recursion(name, weights, k, r):
    P = corpus.CORPUS[name]()
    k = min(k, P.dim)
    w = weights[: len(P.vertices)]
    if sum(w) == 0:
        w = [F(1)] + w[1:]
    s = sum(w)
    p = tuple(sum(wi / s * v[c] for wi, v in zip(w, P.vertices)) for c in range(P.ambient_dim))
    direct = solve_barycenter(P, p, k, r)
    if k * r >= P.dim:
        assert direct is not None
    if direct is not None:
        assert verify_certificate(P, p, k, r, direct)
        rec = solve_barycenter_recursive(P, p, k, r)
        assert rec is not None and verify_certificate(P, p, k, r, rec)
    Q, _ = restrict_to_carrier(P, p)
    if k <= Q.dim:
        assert (solve_barycenter(Q, p, k, r) is not None) == (direct is not None)


def test_deterministic():
    cube = corpus.cube()
    p = (F(1, 4), F(-1, 2), 0)
    assert solve_barycenter(cube, p, 1, 3) == solve_barycenter(cube, p, 1, 3)
