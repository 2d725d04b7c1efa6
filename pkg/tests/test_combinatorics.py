"""Degree-3 seed enumeration, anglewise vertex sets, and classification."""

import math

import pytest
from hypothesis import given, strategies as st

from spheretile.combinatorics import (
    AVC,
    FamilyOutcome,
    NonexistenceEvidence,
    VertexType,
    classify,
    counting_filter,
    enumerate_avc,
    enumerate_degree3,
    requires_adjacency_pair,
    vertex_angle_sum,
)
from spheretile.realization import earth_map_solution, prism_solution, sporadic_solution
from spheretile.trig import solve_closure


M5_SEEDS = {
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (0, 3, 0),
    (0, 2, 1),
}
HIGH_M_SEEDS = {(2, 0, 1), (1, 1, 1), (0, 2, 1)}


def test_degree3_seeds_pentagon():
    assert {tuple(v) for v in enumerate_degree3(5)} == M5_SEEDS


@pytest.mark.parametrize("m", range(6, 13))
def test_degree3_seeds_high_m(m):
    assert {tuple(v) for v in enumerate_degree3(m)} == HIGH_M_SEEDS


def test_degree3_excludes_narrowly_infeasible_types():
    """Types whose angle box contradiction is tiny must still be rejected.

    At m = 5 the types alpha.gamma^2, beta.gamma^2 and gamma^3 fail the box
    constraints by a margin comparable to the feasibility cushion, which a
    loosely configured LP solver accepts by mistake.
    """
    seeds = {tuple(v) for v in enumerate_degree3(5)}
    assert (1, 0, 2) not in seeds
    assert (0, 1, 2) not in seeds
    assert (0, 0, 3) not in seeds


def test_vertex_angle_sum():
    s = prism_solution(5, 1.2)
    assert vertex_angle_sum(VertexType(1, 1, 1), s) == pytest.approx(2 * math.pi)
    assert vertex_angle_sum(VertexType(2, 0, 0), s) == pytest.approx(2 * s.alpha)


# -- anglewise vertex combinations ----------------------------------------------------


def test_avc_prism():
    avc = enumerate_avc(prism_solution(5, 1.2))
    assert {tuple(v) for v in avc.members} == {(1, 1, 1)}
    assert not avc.warnings


def test_avc_football():
    avc = enumerate_avc(sporadic_solution("football"))
    assert {tuple(v) for v in avc.members} == {(0, 3, 0), (1, 1, 2)}
    assert not avc.warnings


def test_avc_snub_fusion():
    """beta = 2 gamma makes alpha.gamma^4 an exact member of the snub set."""
    avc = enumerate_avc(sporadic_solution("snub-fusion"))
    assert {tuple(v) for v in avc.members} == {(1, 2, 0), (1, 1, 2), (1, 0, 4)}
    assert not avc.warnings


@pytest.mark.parametrize(
    "c,expected",
    [
        (2, {(0, 2, 1), (1, 1, 2), (2, 0, 3)}),
        (3, {(0, 2, 1), (1, 1, 3), (2, 0, 5)}),
    ],
)
def test_avc_earth_map(c, expected):
    avc = enumerate_avc(earth_map_solution(c))
    assert {tuple(v) for v in avc.members} == expected


def test_counting_filter_drops_unbalanced_sets():
    avc = AVC(members=[VertexType(1, 1, 2), VertexType(0, 2, 2)])
    kept = counting_filter(avc)
    assert [tuple(v) for v in kept.members] == [(0, 2, 2)]


def test_counting_filter_keeps_realizable_families():
    for s in (
        prism_solution(5, 1.2),
        sporadic_solution("football"),
        sporadic_solution("snub-fusion"),
        earth_map_solution(2),
    ):
        avc = enumerate_avc(s)
        assert counting_filter(avc).members == avc.members


@given(
    st.lists(
        st.tuples(
            st.integers(0, 3), st.integers(0, 6), st.integers(0, 6)
        ).filter(lambda t: sum(t) >= 3),
        min_size=1,
        max_size=8,
        unique=True,
    )
)
def test_counting_filter_idempotent(raw):
    avc = AVC(members=[VertexType(*t) for t in raw])
    once = counting_filter(avc)
    twice = counting_filter(once)
    assert [tuple(v) for v in twice.members] == [tuple(v) for v in once.members]


def test_requires_adjacency_pair():
    balanced = AVC(members=[VertexType(1, 1, 1)])
    assert requires_adjacency_pair(balanced)
    all_beta_heavy = AVC(members=[VertexType(0, 3, 0)])
    assert not requires_adjacency_pair(all_beta_heavy)


# -- classification -------------------------------------------------------------------


@pytest.mark.parametrize("m", [2, 3, 4, 65])
def test_classify_rejects_out_of_range_m(m):
    with pytest.raises(ValueError):
        classify(m)


def test_classify_pentagon_families():
    report = classify(5)
    outcomes = {tuple(e.seed): e.outcome for e in report.entries}
    assert set(outcomes) == M5_SEEDS

    for seed in ((3, 0, 0), (2, 1, 0), (2, 0, 1)):
        assert isinstance(outcomes[seed], NonexistenceEvidence)

    prism_family = outcomes[(1, 1, 1)]
    assert isinstance(prism_family, FamilyOutcome)
    assert prism_family.name == "prism"
    assert prism_family.parameterized

    earth = outcomes[(0, 2, 1)]
    assert isinstance(earth, FamilyOutcome)
    assert earth.name == "earth-map"
    assert earth.parameterized

    fusion = outcomes[(1, 2, 0)]
    assert isinstance(fusion, FamilyOutcome)
    assert fusion.name == "snub-fusion"
    assert fusion.variants == 3

    ball = outcomes[(0, 3, 0)]
    assert isinstance(ball, FamilyOutcome)
    assert ball.name == "football"
    assert ball.variants == 1


def test_classify_high_m_is_prism_only():
    from spheretile.combinatorics import SubsumedNote

    for m in (6, 9, 12):
        report = classify(m)
        families = [e for e in report.entries if isinstance(e.outcome, FamilyOutcome)]
        assert [e.outcome.name for e in families] == ["prism"]
        rest = [e for e in report.entries if not isinstance(e.outcome, FamilyOutcome)]
        for e in rest:
            assert isinstance(e.outcome, (NonexistenceEvidence, SubsumedNote))


def test_classify_realized_families_helper():
    report = classify(5)
    names = {f.name for f in report.realized_families()}
    assert names == {"earth-map", "prism", "snub-fusion", "football"}


def test_classify_solutions_solve_the_closure():
    from spheretile.trig import closure_residual

    report = classify(5)
    for fam in report.realized_families():
        assert fam.solutions, fam.name
        for s in fam.solutions:
            assert s.m == 5
            assert 0 < s.gamma < s.beta < math.pi
            assert abs(closure_residual(5, s.alpha, s.beta, s.gamma)) < 1e-9
