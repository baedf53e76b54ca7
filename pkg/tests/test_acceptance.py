"""Acceptance suite: ten end-to-end criteria, one pass/fail line each.

Run with `pytest -v tests/test_acceptance.py`; the lines are printed even
under output capture.  Every criterion either re-derives its expected values from
closed forms, or checks two independently computed structures against each
other; fixed reference numbers live in shardcalc.manifest.
"""

import itertools
import random
from collections import Counter
from math import comb

import pytest

from shardcalc import coxbraid as cb
from shardcalc import manifest
from shardcalc import salvetti as sv
from shardcalc import shardmonoid as sm
from shardcalc import shards as sh
from shardcalc.salvetti import GalleryCat, PositiveGallery, one_skeleton

I2_TAGS = ("I2:3", "I2:4", "I2:5", "I2:6")


@pytest.fixture
def report(capsys):
    """Print one ACCEPTANCE line per criterion, bypassing output capture."""
    def _report(num: int, name: str, ok: bool) -> None:
        with capsys.disabled():
            print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}")
        assert ok, f"criterion {num} ({name}) failed"
    return _report


def test_criterion_01_rank2_census(arrfam, report):
    ok = True
    for m in range(3, 8):
        ip = sm.enumerate_interval(sm.rank2_data(m).arr)
        ok &= sm.rank_generating_function(ip) == manifest.rank2_rank_vector(m)
        ok &= sm.max_chain_count(ip) == manifest.rank2_chain_count(m)
        ok &= sm.is_lattice(ip)[0]
        rd, mapping = sm.rank2_classify(m)
        ok &= len(mapping) == len(ip.elements) - 2
        ok &= sm.rank2_delta_word_census(m)
        ok &= sm.rank2_pow_image_check(m)
        ok &= sm.rank2_layout_crossing_check(m)
    report(1, "rank-2 interval census and crossing-free layout", ok)


def test_criterion_02_a3_interval(arrfam, report):
    ip = sm.enumerate_interval(arrfam("A3"))
    lat, witness = sm.is_lattice(ip)
    ok = (len(ip.elements) == 152 and sm.max_chain_count(ip) == 588
          and not lat and witness is not None and len(witness) == 4)
    report(2, "A3 interval: 152 elements, 588 chains, not a lattice", ok)


def test_criterion_03_loop_classes_are_shards(arrfam, report):
    ok = True
    for tag in I2_TAGS + ("A3",):
        arr = arrfam(tag)
        calc = sv.loop_calc(arr)
        classes = {calc.loop_of_edge(e) for e in calc.poset.covers}
        ok &= len(classes) == len(sh.compute_shards(arr))
        if tag == "I2:4":
            ok &= len(calc.poset.covers) == 8 and len(classes) == 6
        if tag == "A3":
            ok &= len(calc.poset.covers) == 36 and len(classes) == 11
    report(3, "edge-loop classes coincide with shards", ok)


def test_criterion_04_omega(arrfam, report):
    ok = True
    for tag in I2_TAGS + ("A3",):
        ip = sm.enumerate_interval(arrfam(tag))
        ids = [x.id for x in ip.elements]
        ok &= all(ip.omega(ip.omega(x)) == x for x in ids)
        ok &= all(ip.leq(a, b) == ip.leq(ip.omega(b), ip.omega(a))
                  for a in ids for b in ids)
        rv = ip.rank_generating_function()
        ok &= rv == rv[::-1]
    report(4, "omega is an order-reversing involution; palindromic ranks", ok)


def test_criterion_05_crackle_embedding(arrfam, report):
    ok = True
    for tag in I2_TAGS + ("A3",):
        ok &= sm.crackle_embedding_check(arrfam(tag))
    arr = arrfam("I2:4")
    ip = sm.enumerate_interval(arr)
    image = {sm.crackle(arr, r.id).id for r in arr.poset().regions}
    ok &= image == {x.id for x in ip.elements if x.rank <= 1} | {ip.top}
    report(5, "crackle embeds the shard order; I2(4) image census", ok)


def test_criterion_06_snap(arrfam, report):
    ok = True
    for tag in I2_TAGS + ("A3", "B3"):
        g = cb.parse_group(tag)
        ok &= cb.snap_check(g)
        ok &= cb.snap_embedding_check(g)
        ok &= cb.shard_conjugate_check(g)
        ok &= cb.inv_decomposition_check(g)
        if tag == "I2:4":
            ok &= len(cb.shard_conjugate_classes(g)) == 6
        if tag == "A3":
            ok &= len(cb.shard_conjugate_classes(g)) == 11
    # the worked S4 inversion-multiset example
    a3 = cb.parse_group("A3")
    w = a3.e
    for gi in (0, 1, 2, 1):
        w = a3.mult(w, a3.S[gi])

    def transp(i, j):
        p = list(range(1, 5))
        p[i - 1], p[j - 1] = j, i
        return tuple(p)

    expected = Counter({transp(1, 2): 1, transp(1, 3): 2,
                        transp(1, 4): 2, transp(3, 4): 2})
    ok &= cb.inv_multiset(a3, cb.snap(a3, w)) == expected
    report(6, "snap embedding, conjugate classes, inversion multisets", ok)


def test_criterion_07_pow_embedding(arrfam, report):
    ok = True
    for tag in I2_TAGS + ("A3",):
        ok &= sm.pow_embedding_check(arrfam(tag))
    report(7, "pow embeds weak order into the interval", ok)


def test_criterion_08_pow_gallery_independence(arrfam, report):
    arr = arrfam("A3")
    ok = all(sm.pow_gallery_independence(arr, r.id)
             for r in arr.poset().regions)
    report(8, "pow is independent of the chosen minimal gallery (A3)", ok)


def test_criterion_09_noncrossing(arrfam, report):
    ok = True
    for m in (3, 4, 5, 6):
        g = cb.parse_group(f"I2:{m}")
        for c in ((0, 1), (1, 0)):
            ok &= cb.catalan_corollary_checks(g, c)
            ok &= len(cb.sortables(g, c)) == m + 2
            ok &= len(cb.nc_lattice(g, c).elements) == m + 2
    a3 = cb.parse_group("A3")
    for c in cb.all_coxeter_words(a3):
        ok &= cb.catalan_corollary_checks(a3, c)
        ok &= len(cb.sortables(a3, c)) == \
            manifest.MANIFEST["nc"]["s4-sortables"]["expected"]
    # I2(4), c = st: four noncrossing shards, the two full hyperplanes plus
    # one shard of each middle hyperplane
    g4 = cb.parse_group("I2:4")
    ncs = cb.noncrossing_shards(g4, (0, 1))
    shards = sh.shard_data(cb.weak_order_iso(g4).arr).shards()
    ok &= len(ncs) == 4
    ok &= sorted(bool(shards[sid].cut_signs) for sid in ncs) == \
        [False, False, True, True]
    ok &= {shards[sid].hyperplane for sid in ncs} == {0, 1, 2, 3}
    report(9, "sortables, snap/crackle images and NC(W, c) agree", ok)


# -- criterion 10: property suites against independent oracles ---------------


def _braid_word_suite(tag: str, maxlen: int) -> bool:
    """Braid-move closure classes are exactly the normal-form classes."""
    g = cb.parse_group(tag)
    by_nf = {}
    for length in range(maxlen + 1):
        for word in itertools.product(range(g.n), repeat=length):
            by_nf.setdefault((length, cb.garside_normal_form(g, word)),
                             set()).add(word)
    for (_, _), words in by_nf.items():
        rep = next(iter(words))
        if cb.braid_move_closure(g, rep) != words:
            return False
    return True


def _gallery_suite_exhaustive(arr, maxlen: int) -> bool:
    """Greedy gallery normal form agrees with flip reachability."""
    poset = arr.poset()
    cat = GalleryCat(poset)
    skel = one_skeleton(poset)
    for src in (poset.base, poset.top):
        frontier = [PositiveGallery(src, ())]
        galleries = [PositiveGallery(src, ())]
        for _ in range(maxlen):
            frontier = [PositiveGallery(src, gal.steps + (step,))
                        for gal in frontier for step in skel[gal.target]]
            galleries.extend(frontier)
        by_nf = {}
        for gal in galleries:
            key = (gal.target, len(gal.steps),
                   cat.from_steps(gal.source, gal.steps))
            by_nf.setdefault(key, []).append(gal)
        for gals in by_nf.values():
            for gal in gals[1:]:
                if not sv.positive_equivalent(arr, gals[0], gal,
                                              force_bfs=True):
                    return False
        keys = sorted(by_nf, key=str)
        rng = random.Random(19)
        for _ in range(40):
            k1, k2 = rng.choice(keys), rng.choice(keys)
            if k1 != k2 and k1[:2] == k2[:2]:
                if sv.positive_equivalent(arr, by_nf[k1][0], by_nf[k2][0],
                                          force_bfs=True):
                    return False
    return True


def _gallery_suite_sampled(arr, samples: int, maxlen: int) -> bool:
    poset = arr.poset()
    cat = GalleryCat(poset)
    skel = one_skeleton(poset)
    rng = random.Random(23)
    regions = [r.id for r in poset.regions]

    def random_gallery(src, length):
        steps = []
        cur = src
        for _ in range(length):
            step = rng.choice(skel[cur])
            steps.append(step)
            cur = step.target
        return PositiveGallery(src, tuple(steps))

    for _ in range(samples):
        src = rng.choice(regions)
        length = rng.randrange(2, maxlen + 1)
        g1 = random_gallery(src, length)
        g2 = random_gallery(src, length)
        if g2.target != g1.target:
            continue
        nf_equal = cat.from_steps(src, g1.steps) == cat.from_steps(src, g2.steps)
        if nf_equal != sv.positive_equivalent(arr, g1, g2, force_bfs=True):
            return False
    return True


def _inv_fuzz(iterations: int) -> bool:
    groups = [cb.parse_group(t) for t in ("I2:4", "A3", "B3")]
    rng = random.Random(29)
    for _ in range(iterations):
        g = rng.choice(groups)
        word = tuple(rng.randrange(g.n) for _ in range(rng.randrange(0, 13)))
        base = cb.inv_multiset(g, word)
        for w2 in cb.braid_move_neighbors(g, word):
            if cb.inv_multiset(g, w2) != base:
                return False
    return True


def _loop_associativity(triples: int) -> bool:
    rng = random.Random(31)
    calcs = []
    for tag in ("I2:4", "I2:5", "A3"):
        from shardcalc.arrangement import parse_family
        arr = parse_family(tag)
        calc = sv.loop_calc(arr)
        loops = [calc.shard_loop(s) for s in sh.shard_data(arr).shards()]
        loops += [calc.inv(x) for x in loops]
        calcs.append((calc, loops))
    for _ in range(triples):
        calc, loops = calcs[rng.randrange(len(calcs))]
        a, b, c = (rng.choice(loops) for _ in range(3))
        lhs = calc.mul(calc.mul(a, b), c)
        rhs = calc.mul(a, calc.mul(b, c))
        if not (calc.eq(lhs, rhs) and calc.eq_by_common_multiple(lhs, rhs)):
            return False
    return True


def test_criterion_10_property_suites(arrfam, report):
    ok = True
    for tag in ("I2:3", "I2:4", "I2:5"):
        ok &= _braid_word_suite(tag, 8)
    ok &= _braid_word_suite("A3", 8)
    ok &= _gallery_suite_exhaustive(arrfam("I2:3"), 6)
    ok &= _gallery_suite_exhaustive(arrfam("I2:4"), 5)
    ok &= _gallery_suite_sampled(arrfam("A3"), 200, 6)
    ok &= _inv_fuzz(10 ** 4)
    ok &= _loop_associativity(10 ** 3)
    report(10, "normal forms vs move closures; randomized invariants", ok)
