"""Policy decision functions: selection keys, preemption, informative sets."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aoisim.policies import (PolicyId, PolicyError, QueueView, WaitingUpdate,
                             informative_set, informative_twin, parse_policy,
                             select_next, should_preempt)


def w(uid, gen, size, remaining=None):
    return WaitingUpdate(uid, gen, size, size if remaining is None else remaining)


def view(waiting, now=100.0, in_service=None, freshest=0.0, rng=None):
    return QueueView(now, tuple(waiting), in_service, freshest, rng)


class TestPolicyId:
    @pytest.mark.parametrize("name", [
        "fcfs", "lcfs", "random", "sjf", "ps", "lcfs_p", "sjf_p", "srpt",
        "ade", "ads", "adm", "fcfs_i", "lcfs_i", "random_i", "sjf_i",
        "srpt_i", "lcfs_pi", "sjf_pi", "ade_i", "ade_p", "ade_pi", "ads_p",
        "ads_pi", "adm_p", "adm_pi",
    ])
    def test_roundtrip(self, name):
        assert parse_policy(name).name == name

    def test_flags(self):
        p = parse_policy("ade_pi")
        assert p.base == "ade" and p.preemptive_aoi and p.informative
        assert p.preemptive
        q = parse_policy("lcfs_pi")
        assert q.base == "lcfs_p" and not q.preemptive_aoi and q.informative

    def test_rejects_invalid(self):
        for bad in ("ps_i", "fcfs_p", "srpt_p", "nonsense", "ade_ip"):
            with pytest.raises(PolicyError):
                parse_policy(bad)
        with pytest.raises(PolicyError):
            PolicyId("ps", informative=True)
        with pytest.raises(PolicyError):
            PolicyId("sjf", preemptive_aoi=True)

    def test_informative_twin(self):
        assert informative_twin("srpt").name == "srpt_i"
        assert informative_twin("sjf_p").name == "sjf_pi"
        assert informative_twin("ade_p").name == "ade_pi"


class TestInformativeSet:
    def test_partition(self):
        v = view([w(0, 3, 1), w(1, 6, 1), w(2, 7, 1)], freshest=5.0)
        assert [u.gen_time for u in informative_set(v)] == [6, 7]

    def test_nothing_delivered(self):
        v = view([w(0, 3, 1), w(1, 6, 1)], freshest=0.0)
        assert len(informative_set(v)) == 2

    def test_all_obsolete(self):
        v = view([w(0, 3, 1), w(1, 6, 1), w(2, 7, 1)], freshest=9.0)
        assert informative_set(v) == ()


class TestSelection:
    def test_age_drop_scenario(self):
        # Three informative updates ordered so each policy picks a different
        # one: sizes and gens increasing, middle one has the smallest
        # post-delivery age (size - gen).
        u1, u2, u3 = w(1, 1.0, 5.0), w(2, 3.5, 6.0), w(3, 9.0, 12.0)
        assert u2.size - u2.gen_time < min(u1.size - u1.gen_time,
                                           u3.size - u3.gen_time)
        v = view([u1, u2, u3], now=10.0, freshest=0.0)
        assert select_next(parse_policy("ade"), v) == 1
        assert select_next(parse_policy("ads"), v) == 2
        assert select_next(parse_policy("adm"), v) == 3

    def test_earliest_drop_beats_smallest_size(self):
        # A small obsolete update and a bigger informative one: earliest-drop
        # selection serves the informative update, smallest-size serves the
        # obsolete one.
        stale = w(10, 1.0, 1.0)
        fresh = w(12, 6.0, 3.0)
        v = view([stale, fresh], now=9.0, freshest=5.0)
        assert select_next(parse_policy("ade"), v) == 12
        assert select_next(parse_policy("sjf"), v) == 10

    def test_fallback_smallest_size_when_all_obsolete(self):
        v = view([w(1, 2.0, 4.0), w(2, 3.0, 2.0)], freshest=5.0)
        for name in ("ade", "ads", "adm"):
            assert select_next(parse_policy(name), v) == 2

    def test_empty_waiting(self):
        v = view([])
        for name in ("fcfs", "lcfs", "sjf", "srpt", "ade", "ads", "adm"):
            assert select_next(parse_policy(name), v) is None

    def test_informative_variant_returns_none_when_all_obsolete(self):
        v = view([w(1, 2.0, 4.0), w(2, 3.0, 2.0)], freshest=5.0)
        for name in ("lcfs_i", "sjf_i", "srpt_i", "ade_i", "adm_pi"):
            assert select_next(parse_policy(name), v) is None

    def test_basic_keys(self):
        ws = [w(1, 1.0, 3.0, 2.5), w(2, 2.0, 1.0), w(3, 3.0, 2.0)]
        v = view(ws)
        assert select_next(parse_policy("fcfs"), v) == 1
        assert select_next(parse_policy("lcfs"), v) == 3
        assert select_next(parse_policy("sjf"), v) == 2
        assert select_next(parse_policy("srpt"), v) == 2  # remaining 2.5,1,2

    def test_tie_break_earliest_arrival(self):
        v = view([w(2, 2.0, 1.0), w(1, 1.0, 1.0)])
        assert select_next(parse_policy("sjf"), v) == 1

    def test_random_uniform_over_waiting(self):
        rng = np.random.default_rng(0)
        ws = [w(i, float(i), 1.0) for i in range(1, 6)]
        picks = {select_next(parse_policy("random"), view(ws, rng=rng))
                 for _ in range(200)}
        assert picks == {1, 2, 3, 4, 5}

    def test_ps_has_no_selection(self):
        with pytest.raises(PolicyError):
            select_next(parse_policy("ps"), view([]))


class TestPreemption:
    def busy(self, waiting, cur):
        return view(waiting, in_service=cur)

    def test_srpt(self):
        cur = w(1, 1.0, 4.0, 2.0)
        assert should_preempt(parse_policy("srpt"), self.busy([], cur),
                              w(2, 5.0, 1.5))
        assert not should_preempt(parse_policy("srpt"), self.busy([], cur),
                                  w(2, 5.0, 2.5))
        assert not should_preempt(parse_policy("srpt"), self.busy([], cur),
                                  w(2, 5.0, 2.0))  # strict inequality

    def test_lcfs_p_always(self):
        cur = w(1, 1.0, 0.1, 0.05)
        assert should_preempt(parse_policy("lcfs_p"), self.busy([], cur),
                              w(2, 5.0, 100.0))

    def test_sjf_p_requires_smallest_overall(self):
        cur = w(1, 1.0, 4.0)
        small_waiting = [w(2, 2.0, 1.0)]
        assert not should_preempt(parse_policy("sjf_p"),
                                  self.busy(small_waiting, cur), w(3, 5.0, 2.0))
        assert should_preempt(parse_policy("sjf_p"),
                              self.busy(small_waiting, cur), w(3, 5.0, 0.5))

    def test_ade_p_matches_srpt_rule(self):
        cur = w(1, 1.0, 4.0, 2.0)
        pol = parse_policy("ade_p")
        assert should_preempt(pol, self.busy([], cur), w(2, 5.0, 1.9))
        assert not should_preempt(pol, self.busy([], cur), w(2, 5.0, 2.0))

    def test_ads_p_uses_post_drop_age(self):
        cur = w(1, 1.0, 4.0, 2.0)  # remaining - gen = 1.0
        pol = parse_policy("ads_p")
        assert should_preempt(pol, self.busy([], cur), w(2, 5.0, 5.9))
        assert not should_preempt(pol, self.busy([], cur), w(2, 5.0, 6.1))

    def test_adm_p_always(self):
        cur = w(1, 1.0, 1.0, 0.1)
        assert should_preempt(parse_policy("adm_p"), self.busy([], cur),
                              w(2, 5.0, 100.0))

    def test_non_preemptive_bases(self):
        cur = w(1, 1.0, 4.0, 2.0)
        for name in ("fcfs", "lcfs", "random", "sjf", "ade", "ads", "adm"):
            assert not should_preempt(parse_policy(name), self.busy([], cur),
                                      w(2, 5.0, 0.1))


# ---------------------------------------------------------------------------
# Property tests over random queue views
# ---------------------------------------------------------------------------

@st.composite
def queue_views(draw, min_size=1, max_size=8):
    k = draw(st.integers(min_size, max_size))
    gens = sorted(draw(st.lists(
        st.floats(0.1, 99.0, allow_nan=False), min_size=k, max_size=k,
        unique=True)))
    updates = []
    for i, g in enumerate(gens):
        size = draw(st.floats(0.01, 50.0))
        served = draw(st.booleans())
        rem = size * draw(st.floats(0.05, 1.0)) if served else size
        updates.append(WaitingUpdate(i, g, size, rem))
    freshest = draw(st.one_of(st.just(0.0), st.floats(0.0, 120.0)))
    return QueueView(100.0, tuple(updates), None, freshest, None)


@given(queue_views())
@settings(max_examples=300, deadline=None)
def test_adm_equals_freshest_informative(v):
    # Maximizing the age drop (gen - U) is the same as taking the freshest
    # informative update.
    got = select_next(parse_policy("adm_i"), v)
    inf = informative_set(v)
    expect = max(inf, key=lambda u: u.gen_time).id if inf else None
    assert got == expect


@given(queue_views())
@settings(max_examples=300, deadline=None)
def test_ade_equals_srpt_when_all_informative(v):
    v = QueueView(v.now, v.waiting, None, 0.0, None)  # everything informative
    assert select_next(parse_policy("ade"), v) == \
        select_next(parse_policy("srpt"), v)


@given(queue_views())
@settings(max_examples=300, deadline=None)
def test_ade_equals_sjf_when_nothing_preempted(v):
    fresh = tuple(WaitingUpdate(u.id, u.gen_time, u.size, u.size)
                  for u in v.waiting)
    v = QueueView(v.now, fresh, None, 0.0, None)
    assert select_next(parse_policy("ade"), v) == \
        select_next(parse_policy("sjf"), v)


@given(queue_views())
@settings(max_examples=300, deadline=None)
def test_informative_variants_never_pick_obsolete(v):
    ids_inf = {u.id for u in informative_set(v)}
    for name in ("fcfs_i", "lcfs_i", "sjf_i", "srpt_i", "ade_i", "ads_i", "adm_i"):
        got = select_next(parse_policy(name), v)
        assert got is None or got in ids_inf


@given(queue_views())
@settings(max_examples=200, deadline=None)
def test_selection_is_pure(v):
    for name in ("fcfs", "lcfs", "sjf", "srpt", "ade", "ads", "adm"):
        pol = parse_policy(name)
        assert select_next(pol, v) == select_next(pol, v)
