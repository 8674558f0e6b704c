import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import E1, small_instance, subset_optimum
from muca.model import Bid, Instance
from muca.ordering import NAMED_CRITERIA, Criterion, Kind, dominance_prune, rank_bids, score

ALL_CRITERIA = NAMED_CRITERIA + (
    Criterion.family(2, 1),
    Criterion.family(3, Fraction(1, 3), normalized=True),
)


def test_sqrt_norm_ties_the_two_counterexample_bids():
    inst = Instance((4, 1), [((4, 1), Fraction("1.414214")), ((1, 0), Fraction("0.5"))], scale=6)
    c = Criterion(Kind.SQRT_NORM)
    assert score(c, inst.bids[0], inst) == pytest.approx(1.0, abs=1e-6)
    assert score(c, inst.bids[1], inst) == pytest.approx(1.0, rel=1e-12)


def test_avg_and_sqrt_scores():
    inst = Instance((2, 1), [(2, 0, 6), (1, 1, 5)])
    assert score(Criterion(Kind.AVG), inst.bids[0], inst) == 3.0
    assert score(Criterion(Kind.SQRT), inst.bids[1], inst) == pytest.approx(5 / math.sqrt(2), rel=1e-15)


def test_rank_e1():
    r = rank_bids(Criterion(Kind.SQRT), E1)
    assert r.order == (1, 0, 3, 2)
    assert r.scores == pytest.approx((5 / math.sqrt(2), 6 / math.sqrt(2), 2.0, 3.0))
    assert rank_bids(Criterion(Kind.PRICE), E1).order == (1, 0, 3, 2)


def test_ties_break_by_index():
    inst = Instance((2,), [(1, 3), (1, 3)])
    assert rank_bids(Criterion(), inst).order == (0, 1)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("sqrt", Criterion(Kind.SQRT)),
        ("price", Criterion(Kind.PRICE)),
        ("euclid-norm", Criterion(Kind.EUCLID_NORM)),
        ("family:l=2,m=1/2", Criterion.family(2, Fraction(1, 2))),
        ("family:l=1,m=0.5,norm", Criterion.family(1, Fraction(1, 2), True)),
    ],
)
def test_parse_criterion(name, expected):
    c = Criterion.parse(name)
    assert c == expected
    assert Criterion.parse(str(c)) == c


@pytest.mark.parametrize("bad", ["cheapest", "family:l=2", "family:m=1", "family:l=0,m=1", "family"])
def test_parse_criterion_rejects(bad):
    with pytest.raises(ValueError):
        Criterion.parse(bad)


bid_st = st.builds(
    lambda q, p: (tuple(q), p),
    st.lists(st.integers(0, 9), min_size=3, max_size=3).filter(any),
    st.integers(0, 10**6),
)


@settings(max_examples=200, deadline=None)
@given(bid_st, st.lists(st.integers(9, 20), min_size=3, max_size=3))
def test_family_equivalences(bid, caps):
    inst = Instance(tuple(caps), [bid])
    b = inst.bids[0]
    pairs = [
        (Criterion(Kind.AVG), Criterion.family(1, 1)),
        (Criterion(Kind.EUCLID), Criterion.family(2, Fraction(1, 2))),
        (Criterion(Kind.SQRT), Criterion.family(1, Fraction(1, 2))),
        (Criterion(Kind.AVG_NORM), Criterion.family(1, 1, True)),
        (Criterion(Kind.EUCLID_NORM), Criterion.family(2, Fraction(1, 2), True)),
        (Criterion(Kind.SQRT_NORM), Criterion.family(1, Fraction(1, 2), True)),
    ]
    for named, fam in pairs:
        a, f = score(named, b, inst), score(fam, b, inst)
        assert abs(a - f) <= 1e-12 * max(abs(a), 1e-300)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([2, 4, 1024]))
def test_ranking_invariant_under_price_scaling(seed, factor):
    inst = small_instance(seed, max_bids=12)
    scaled = Instance(inst.caps, tuple(Bid(b.q, b.p * factor) for b in inst.bids))
    for c in ALL_CRITERIA:
        assert rank_bids(c, inst).order == rank_bids(c, scaled).order


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 11), st.integers(1, 50))
def test_raising_price_raises_score_and_never_lowers_rank(seed, which, bump):
    inst = small_instance(seed, max_bids=12)
    which %= len(inst.bids)
    bids = list(inst.bids)
    bids[which] = Bid(bids[which].q, bids[which].p + bump)
    richer = Instance(inst.caps, tuple(bids))
    for c in ALL_CRITERIA:
        before, after = rank_bids(c, inst), rank_bids(c, richer)
        assert after.scores[which] > before.scores[which]
        assert after.position(which) <= before.position(which)


@settings(max_examples=100, deadline=None)
@given(bid_st)
def test_anti_monotone_in_quantities(bid):
    q, p = bid
    caps = (10, 10, 10)
    inst = Instance(caps, [(q, p + 1)])
    bigger = Instance(caps, [((q[0] + 1,) + q[1:], p + 1)])
    for c in ALL_CRITERIA:
        assert score(c, bigger.bids[0], bigger) <= score(c, inst.bids[0], inst)


def test_only_normalized_scores_depend_on_caps():
    a = Instance((3, 3), [(1, 2, 7)])
    b = Instance((5, 9), [(1, 2, 7)])
    for c in ALL_CRITERIA:
        same = score(c, a.bids[0], a) == score(c, b.bids[0], b)
        assert same == (not c.uses_caps), c


def test_dominance_removes_conflicting_cheaper_twin():
    inst = Instance((1, 1), [(1, 1, 5), (1, 1, 4)])
    pruned, removed, kept = dominance_prune(inst)
    assert removed == {1}
    assert kept == (0,)
    assert len(pruned.bids) == 1


def test_dominance_keeps_non_conflicting_bids():
    inst = Instance((2,), [(1, 5), (1, 4)])
    pruned, removed, _ = dominance_prune(inst)
    assert removed == frozenset()
    assert subset_optimum(pruned) == 9


def test_dominance_same_price_fewer_units():
    inst = Instance((2, 1), [(1, 0, 3), (2, 1, 3)])
    _, removed, _ = dominance_prune(inst)
    assert removed == {1}


def test_dominance_single_bid_unchanged():
    inst = Instance((2,), [(1, 5)])
    pruned, removed, kept = dominance_prune(inst)
    assert pruned == inst and not removed and kept == (0,)


def test_dominance_respects_exclusions_of_the_dominator():
    # bid 0 beats bid 1 but is excluded with bid 2; swapping 1 -> 0 would be infeasible
    inst = Instance((1, 1), [(1, 0, 5), (1, 0, 4), (0, 1, 10)], {(0, 2)})
    _, removed, _ = dominance_prune(inst)
    assert removed == frozenset()
    assert subset_optimum(inst) == 14


def test_dominance_remaps_exclusions():
    inst = Instance((1, 2), [(1, 0, 5), (1, 0, 4), (0, 1, 1), (0, 1, 2)], {(1, 3), (2, 3)})
    pruned, removed, kept = dominance_prune(inst)
    assert 1 in removed
    for i, j in pruned.exclusions:
        assert (kept[i], kept[j]) in inst.exclusions


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**40), st.sampled_from([0.0, 0.1]))
def test_dominance_preserves_optimum(seed, excl):
    inst = small_instance(seed, max_goods=4, max_bids=12, max_cap=4, prices=(1, 8), exclusion_prob=excl)
    pruned, removed, kept = dominance_prune(inst)
    assert subset_optimum(pruned) == subset_optimum(inst)
    assert len(kept) + len(removed) == len(inst.bids)
