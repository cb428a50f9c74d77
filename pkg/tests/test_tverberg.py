from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tverkit.exact_linalg import InputError
from tverkit.tverberg import (
    PointConfiguration,
    TverbergCertificate,
    XorShift64Star,
    colored_tverberg_partition,
    exists_large_family,
    in_general_position,
    maximal_families,
    pigeonhole_vkf_check,
    random_configuration,
    random_trial_suite,
    skeleton_tverberg_partition,
    splitmix64,
    tverberg_partition,
    verify_tverberg_certificate,
)

from oracles import brute_tverberg, disjoint_families

LINE3 = PointConfiguration.from_points([(0,), (1,), (2,)])
TRIANGLE = PointConfiguration.from_points([(0, 0), (1, 0), (0, 1)])
SQUARE_C = PointConfiguration.from_points([(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2))])


def test_classical_examples():
    cert = tverberg_partition(LINE3, 2)
    assert cert.faces == ((0, 2), (1,)) and cert.witness == (1,)
    cfg = PointConfiguration.from_points([(0, 0), (2, 0), (0, 2), (F(2, 3), F(2, 3))])
    cert = tverberg_partition(cfg, 2)
    assert set(cert.faces) == {(3,), (0, 1, 2)} and cert.witness == (F(2, 3), F(2, 3))
    assert tverberg_partition(TRIANGLE, 2) is None
    with pytest.raises(InputError):
        tverberg_partition(LINE3, 1)


def test_skeleton_examples():
    cert = skeleton_tverberg_partition(SQUARE_C, 2, 1)
    assert cert is not None and all(len(f) <= 2 for f in cert.faces)
    assert verify_tverberg_certificate(SQUARE_C, cert, 2, max_face_size=2)
    assert skeleton_tverberg_partition(SQUARE_C, 2, 0) is None
    assert skeleton_tverberg_partition(LINE3, 2, 1).faces == ((0, 2), (1,))


def test_colored_examples():
    assert colored_tverberg_partition(LINE3, "ABA", 2) is None
    cfg = PointConfiguration.from_points([(0,), (2,), (1,)])
    got = colored_tverberg_partition(cfg, "AAB", 2)
    assert (got is not None) == brute_tverberg(cfg.points, 2, colors="AAB")
    if got is not None:
        assert verify_tverberg_certificate(cfg, got, 2, colors="AAB")
    same = PointConfiguration.from_points([(0,), (1,), (1,)])
    cert = colored_tverberg_partition(same, "AAA", 2)
    assert cert.faces == ((1,), (2,))
    assert colored_tverberg_partition(LINE3, "AAA", 2) is None


def test_verifier_reasons():
    cert = tverberg_partition(LINE3, 2)
    assert verify_tverberg_certificate(LINE3, cert, 2)
    overlap = replace(cert, faces=((0, 2), (2,)))
    assert verify_tverberg_certificate(LINE3, overlap, 2).reason == "faces not disjoint"
    bad_witness = replace(cert, witness=(F(3, 2),))
    assert verify_tverberg_certificate(LINE3, bad_witness, 2).reason == "witness mismatch"
    not_convex = replace(cert, coefficients=((F(1, 2), F(1, 3)), (F(1),)))
    assert verify_tverberg_certificate(LINE3, not_convex, 2).reason == "coefficients not convex"
    assert verify_tverberg_certificate(LINE3, cert, 2, max_face_size=1).reason == "face exceeds skeleton dimension"
    assert verify_tverberg_certificate(LINE3, cert, 2, colors="ABA").reason == "face not rainbow"
    assert verify_tverberg_certificate(LINE3, cert, 3).reason == "wrong number of faces"
    assert TverbergCertificate.from_json(cert.to_json()) == cert


def test_pigeonhole_examples():
    assert pigeonhole_vkf_check(4, 2, 1) is True
    assert pigeonhole_vkf_check(5, 2, 1) is False
    assert pigeonhole_vkf_check(100, 6, 15) is True


def test_pigeonhole_matches_enumeration():
    count = 0
    for N in range(11):
        for r in range(1, 5):
            for k in range(4):
                assert pigeonhole_vkf_check(N, r, k) == (not exists_large_family(N, r, k))
                count += 1
    assert count == 11 * 4 * 4


def test_maximal_families_are_partitions_when_unconstrained():
    fams = [tuple(tuple(b) for b in f) for f in maximal_families(4, 2, None)]
    assert len(fams) == 7  # Stirling number S(4, 2)
    assert len(set(fams)) == 7


coords = st.integers(-2, 2).map(F)


@st.composite
def configurations(draw, max_n=6, dims=(1, 2)):
    d = draw(st.sampled_from(dims))
    n = draw(st.integers(2, max_n))
    pts = [tuple(draw(coords) for _ in range(d)) for _ in range(n)]
    return PointConfiguration.from_points(pts)


@settings(max_examples=80, deadline=None)
@given(configurations(), st.integers(2, 3))
def test_solver_matches_brute_force(cfg, r):
    cert = tverberg_partition(cfg, r)
    assert (cert is not None) == brute_tverberg(cfg.points, r)
    if cert is not None:
        assert verify_tverberg_certificate(cfg, cert, r)


@settings(max_examples=60, deadline=None)
@given(configurations(), st.integers(0, 2))
def test_skeleton_matches_brute_force_and_is_monotone(cfg, k):
    cert = skeleton_tverberg_partition(cfg, 2, k)
    assert (cert is not None) == brute_tverberg(cfg.points, 2, max_size=k + 1)
    if cert is not None:
        assert skeleton_tverberg_partition(cfg, 2, k + 1) is not None
        assert tverberg_partition(cfg, 2) is not None


@settings(max_examples=60, deadline=None)
@given(configurations(), st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_colored_matches_brute_force(cfg, palette):
    colors = palette[: len(cfg.points)]
    cert = colored_tverberg_partition(cfg, colors, 2)
    assert (cert is not None) == brute_tverberg(cfg.points, 2, colors=colors)
    if cert is not None:
        assert verify_tverberg_certificate(cfg, cert, 2, colors=colors)


@settings(max_examples=40, deadline=None)
@given(configurations(dims=(2,)), st.integers(2, 3))
def test_affine_invariance(cfg, r):
    # (x, y) -> (2x + y + 1, x - y - 3), an invertible affine map
    moved = PointConfiguration.from_points([(2 * x + y + 1, x - y - 3) for x, y in cfg.points])
    a, b = tverberg_partition(cfg, r), tverberg_partition(moved, r)
    assert (a is None) == (b is None)
    if a is not None:
        x, y = a.witness
        assert (2 * x + y + 1, x - y - 3) in {
            tuple(sum(l * moved.points[v][c] for v, l in zip(f, lam)) for c in range(2))
            for f, lam in zip(a.faces, a.coefficients)
        }


def test_oracle_family_count():
    # {a},{b} three ways and {a},{b,c} three ways
    assert len(list(disjoint_families(3, 2))) == 6


def test_prng_reference_values():
    # splitmix64 reference output for state 0 (first value of the public generator)
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    a, b = XorShift64Star(7), XorShift64Star(7)
    assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]
    c = XorShift64Star(1).coordinate()
    assert -1 <= c <= 1 and (c * 1000).denominator == 1


def test_random_configuration_is_deterministic():
    assert random_configuration(2, 5, 11) == random_configuration(2, 5, 11)
    assert random_configuration(2, 5, 11) != random_configuration(2, 5, 12)
    cfg = random_configuration(2, 4, 3, general_position=True)
    assert in_general_position(cfg.points, 2)


def test_trial_suite_examples():
    rep = random_trial_suite(1, 2, 2, 100, 0)
    assert rep.successes == 100 and rep.invalid == 0
    rep = random_trial_suite(2, 3, 8, 50, 0)
    assert rep.successes == 50 and rep.invalid == 0
    rep = random_trial_suite(2, 2, 3, 100, 0, general_position=True)
    assert rep.successes == 100
    rep = random_trial_suite(2, 2, 2, 100, 0, general_position=True)
    assert rep.successes == 0 and len(rep.failing_seeds) == 100


@pytest.mark.parametrize("r,d", [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)])
def test_skeleton_parameter_check(r, d):
    k = -(-(r - 1) * d // r)
    N = (r - 1) * (d + 2)
    rep = random_trial_suite(d, r, N, 10, 100, mode="skeleton", k=k)
    assert rep.failures == 0 and rep.invalid == 0
