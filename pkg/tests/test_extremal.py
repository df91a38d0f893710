"""Bounds, extremality, characterization, and enumeration."""

from __future__ import annotations

import random
from itertools import combinations

import pytest

from shadowlab.exact import binom, decompose, lex_cmp, seq_minus
from shadowlab.families import KFamily, are_isomorphic, initial_segment, shadow
from shadowlab.extremal import (
    _fast_characterize_verdict,
    _sweep_tables,
    brute_force_min_shadow,
    certify_by_witness,
    characterize,
    enumerate_extremal,
    extremal_iso_classes,
    is_extremal,
    kk_bound,
    min_degree_bound_check,
    min_degree_sweep,
    shadow_chain_check,
    uniqueness_predicate,
)


def full_layer(n, k):
    return KFamily.from_sets(n, k, combinations(range(1, n + 1), k))


def test_kk_bound_examples():
    assert kk_bound(11, 3, 1) == 12
    for n, k in ((5, 3), (6, 3), (8, 4)):
        assert kk_bound(binom(n, k), k, 1) == binom(n, k - 1)
    assert kk_bound(14, 4, 1) == 20
    assert kk_bound(7, 3, 0) == 7
    with pytest.raises(ValueError):
        kk_bound(5, 3, 3)


def test_is_extremal_examples():
    seg = initial_segment(6, 3, 12)
    assert len(shadow(seg)) == 13
    assert is_extremal(seg)
    forb = KFamily.from_sets(
        6,
        3,
        [
            s
            for s in combinations(range(1, 7), 3)
            if not ({1, 2} <= set(s) or {3, 4} <= set(s))
        ],
    )
    assert len(forb) == 12 and len(shadow(forb)) == 13
    assert is_extremal(forb)
    pair = KFamily.from_sets(6, 3, [(1, 2, 3), (4, 5, 6)])
    assert len(shadow(pair)) == 6 > kk_bound(2, 3, 1) == 5
    assert not is_extremal(pair)
    with pytest.raises(ValueError):
        is_extremal(KFamily(5, 3, ()))


def test_brute_force_min_shadow_examples():
    assert brute_force_min_shadow(5, 3, 4) == 6
    assert brute_force_min_shadow(6, 3, 12) == 13
    for n, k in ((5, 3), (6, 2), (4, 2)):
        assert brute_force_min_shadow(n, k, binom(n, k)) == binom(n, k - 1)


def test_oracle_equivalence_small():
    for n in range(2, 6):
        for k in (2, 3):
            if k > n:
                continue
            for m in range(1, binom(n, k) + 1):
                assert brute_force_min_shadow(n, k, m) == kk_bound(m, k, 1), (n, k, m)


def test_shadow_chain_examples():
    single = KFamily.from_sets(5, 3, [(1, 2, 3)])
    assert shadow_chain_check(single)
    for n in range(3, 9):
        for k in range(2, min(4, n) + 1):
            for m in range(1, binom(n, k) + 1):
                assert shadow_chain_check(initial_segment(n, k, m))
    with pytest.raises(ValueError):
        shadow_chain_check(KFamily.from_sets(6, 3, [(1, 2, 3), (4, 5, 6)]))


def test_characterize_segment():
    seg = initial_segment(6, 3, 12)
    report = characterize(seg)
    assert report.verdict
    assert report.cascade == (5, 2, 1)
    at6 = report.element(6)
    assert at6.branch == "strict"
    assert at6.deleted_size == 10 and at6.threshold == 4
    assert decompose(at6.deleted_size, 3).terms == (5,)
    assert decompose(at6.link_size, 2).terms == (2, 1)
    assert at6.ok and at6.numeric and at6.inclusion
    assert certify_by_witness(seg, 6)
    assert certify_by_witness(seg, 1)


def test_characterize_forbidden_pairs():
    forb = KFamily.from_sets(
        6,
        3,
        [
            s
            for s in combinations(range(1, 7), 3)
            if not ({1, 2} <= set(s) or {3, 4} <= set(s))
        ],
    )
    report = characterize(forb)
    assert report.verdict
    assert all(e.ok for e in report.elements)


def test_characterize_rejects_support_gap():
    gappy = KFamily.from_sets(6, 3, [(1, 2, 3)])
    with pytest.raises(ValueError):
        characterize(gappy)


def test_characterize_matches_is_extremal_sampled():
    rng = random.Random(4242)
    pool6 = list(combinations(range(1, 7), 3))
    for _ in range(400):
        m = rng.randint(1, 14)
        family = KFamily.from_sets(6, 3, rng.sample(pool6, m))
        support = family.support()
        if len(support) < 3:
            continue
        relabel = {x: i + 1 for i, x in enumerate(support)}
        compacted = KFamily.from_sets(
            len(support), 3, ([relabel[e] for e in s] for s in family.sets())
        )
        assert characterize(compacted).verdict == is_extremal(compacted)


def test_characterization_sweep_small_layer():
    from shadowlab.extremal import characterization_sweep

    result = characterization_sweep(5)
    assert result["checked"] == 2**10 - 1
    assert result["mismatches"] == []


def test_characterize_matches_extremality_at_k2():
    # exhaustive at the (5,2) layer, support-compacted via direct evaluation
    from shadowlab.families import compact_support

    pool = list(combinations(range(1, 6), 2))
    for pattern in range(1, 1 << len(pool)):
        chosen = [pool[i] for i in range(len(pool)) if pattern >> i & 1]
        family = compact_support(KFamily.from_sets(5, 2, chosen))
        if family.n < 2:
            continue
        assert characterize(family).verdict == is_extremal(family), chosen


def test_fast_verdict_matches_slow_characterize():
    tables = _sweep_tables(6)
    layer = tables.layer
    rng = random.Random(777)
    for _ in range(600):
        pattern = rng.randrange(1, 1 << layer.size)
        family = layer.family(pattern)
        support = family.support()
        relabel = {x: i + 1 for i, x in enumerate(support)}
        compacted = KFamily.from_sets(
            len(support), 3, ([relabel[e] for e in s] for s in family.sets())
        )
        assert _fast_characterize_verdict(tables, pattern) == characterize(compacted).verdict


def test_min_degree_bound_examples():
    seg = initial_segment(6, 3, 12)
    assert min_degree_bound_check(seg)
    assert decompose(10, 3).terms == (5,)
    assert lex_cmp(decompose(10, 3), seq_minus(decompose(12, 3), 1)) > 0
    full5 = full_layer(5, 3)
    assert min_degree_bound_check(full5)
    assert decompose(10 - 6, 3).terms == (4,)
    assert lex_cmp(decompose(4, 3), seq_minus(decompose(10, 3), 1)) == 0


def test_min_degree_sweep():
    # full-support families at every ground size up to 6; smaller supports
    # are relabelings of the smaller sweeps
    assert min_degree_sweep(4, 3) > 0
    assert min_degree_sweep(5, 3) > 0
    assert min_degree_sweep(6, 3) == 1042642
    assert min_degree_sweep(4, 2) > 0
    assert min_degree_sweep(5, 2) > 0


def test_enumerate_extremal_examples():
    classes_19 = extremal_iso_classes(6, 3, 19)
    assert len(classes_19) == 1
    families_19 = enumerate_extremal(6, 3, 19)
    assert len(families_19) == 20  # every way to delete one triple
    assert all(are_isomorphic(f, families_19[0]) for f in families_19)

    classes_10 = extremal_iso_classes(6, 3, 10)
    assert len(classes_10) == 1
    assert uniqueness_predicate(6, 3, 10)

    classes_12 = extremal_iso_classes(6, 3, 12)
    assert len(classes_12) >= 2
    assert not uniqueness_predicate(6, 3, 12)


def test_enumerate_methods_agree():
    for m in range(1, binom(5, 3) + 1):
        ex = {f.masks for f in enumerate_extremal(5, 3, m, method="exhaustive")}
        rec = {f.masks for f in enumerate_extremal(5, 3, m, method="recursive")}
        assert ex == rec, m
    for m in (3, 10, 12, 19):
        ex = {f.masks for f in enumerate_extremal(6, 3, m, method="exhaustive")}
        rec = {f.masks for f in enumerate_extremal(6, 3, m, method="recursive")}
        assert ex == rec, m
    for m in range(1, binom(5, 2) + 1):
        ex = {f.masks for f in enumerate_extremal(5, 2, m, method="exhaustive")}
        rec = {f.masks for f in enumerate_extremal(5, 2, m, method="recursive")}
        assert ex == rec, m


def test_extremal_counts_match_orbit_arithmetic():
    # hand-derivable orbit sizes at (6,3): single triples; edge-sharing pairs
    # (15 edges x 6 triple pairs over each); copies of the full (5,3) layer
    # (choose the unused element); the 16-set segment whose stabilizer is
    # S4 x C2 (orbit 720/48); full layer minus one triple; the full layer
    from shadowlab.extremal import _extremal_patterns_by_size

    counts = {m: len(v) for m, v in _extremal_patterns_by_size(6, 3).items()}
    assert counts[1] == 20
    assert counts[2] == 90
    assert counts[10] == 6
    assert counts[16] == 15
    assert counts[19] == 20
    assert counts[20] == 1


def test_uniqueness_predicate_examples():
    assert uniqueness_predicate(6, 3, 10)
    assert uniqueness_predicate(6, 3, 19)
    assert not uniqueness_predicate(6, 3, 12)
    assert decompose(12, 3).terms == (5, 2, 1)
    with pytest.raises(ValueError):
        uniqueness_predicate(6, 3, 0)


def test_extremal_shadow_is_extremal_small():
    # over every extremal family of C([5], 3) via the slow path
    for m in range(1, binom(5, 3) + 1):
        for family in enumerate_extremal(5, 3, m):
            if family.k > 1:
                assert is_extremal(shadow(family))
    # and over every extremal family of C([6], 3) via the shared tables
    from shadowlab.extremal import _extremal_patterns_by_size

    tables = _sweep_tables(6)
    for m, patterns in _extremal_patterns_by_size(6, 3).items():
        for pattern in patterns:
            edge_mask = tables.shadow_table[pattern]
            pairs = edge_mask.bit_count()
            points = tables.pair_support[edge_mask].bit_count()
            assert points == kk_bound(pairs, 2, 1)


def test_witness_implies_extremal():
    # a single certifying element is already proof of extremality; in
    # particular no non-extremal family may have one
    from shadowlab.families import compact_support

    pool4 = list(combinations(range(1, 5), 3))
    for m in range(1, len(pool4) + 1):
        for chosen in combinations(pool4, m):
            family = compact_support(KFamily.from_sets(4, 3, chosen))
            if family.n < 3:
                continue
            witnessed = any(
                certify_by_witness(family, x) for x in range(1, family.n + 1)
            )
            if witnessed:
                assert is_extremal(family)
            if is_extremal(family):
                assert witnessed  # full verdict implies every element certifies

    rng = random.Random(20240613)
    pool6 = list(combinations(range(1, 7), 3))
    for _ in range(250):
        m = rng.randint(1, 12)
        family = compact_support(KFamily.from_sets(6, 3, rng.sample(pool6, m)))
        if family.n < 3:
            continue
        witnessed = any(
            certify_by_witness(family, x) for x in range(1, family.n + 1)
        )
        assert witnessed == is_extremal(family)
