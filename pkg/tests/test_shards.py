import itertools

from shardcalc import shards as sh


def test_i2_shard_census(arrfam):
    for m in (3, 4, 5, 6):
        arr = arrfam(f"I2:{m}")
        data = sh.shard_data(arr)
        assert len(data.shards()) == 2 * m - 2
        # the two walls of the base chamber are basic: one shard each
        per_h = {}
        for s in data.shards():
            per_h[s.hyperplane] = per_h.get(s.hyperplane, 0) + 1
        assert per_h[0] == per_h[m - 1] == 1
        assert all(per_h[h] == 2 for h in range(1, m - 1))


def test_a3_shard_census(arrfam):
    assert len(sh.shard_data(arrfam("A3")).shards()) == 11


def test_cutting_is_from_full_rank2s(arrfam):
    arr = arrfam("A3")
    data = sh.shard_data(arr)
    n = len(arr.hyperplanes)
    for a, b in itertools.combinations(range(n), 2):
        r2 = data.rank2_containing(a, b)
        # cuts(a, b) only when the basic pair of their rank-2 sub excludes b
        if data.cuts(a, b):
            assert b not in r2.basic and a != b
        if b in r2.basic:
            assert not data.cuts(a, b)


def test_shard_of_edge_consistency(arrfam):
    arr = arrfam("I2:4")
    data = sh.shard_data(arr)
    poset = arr.poset()
    for e in poset.covers:
        s = data.shard_of_edge(e)
        assert s.hyperplane == e.hyperplane
        # every point of the open edge lies in the shard; its witness does
        assert s.contains(arr, s.witness)


def test_negate_is_an_involution(arrfam):
    data = sh.shard_data(arrfam("A3"))
    for s in data.shards():
        t = data.negate(s)
        assert t.hyperplane == s.hyperplane
        assert data.negate(t).id == s.id


def test_join_irreducibles_biject_with_shards(arrfam):
    arr = arrfam("A3")
    data = sh.shard_data(arr)
    shards = data.shards()
    ji = data.join_irreducibles()
    assert len(ji) == len(shards)
    for s in shards:
        r = data.join_irreducible_of_shard(s)
        assert r in ji
        assert data.shard_of_join_irreducible(r).id == s.id


def test_canonical_join_representations(arrfam):
    arr = arrfam("A3")
    data = sh.shard_data(arr)
    for r in arr.poset().regions:
        assert data.canonical_join_check(r.id)


def test_shard_order_triple_agreement_and_covers(arrfam):
    # the constructor cross-checks three definitions and raises on mismatch
    spo = sh.shard_data(arrfam("I2:5")).intersection_order()
    for b, c in spo.covers():
        assert spo.leq(b, c) and not spo.leq(c, b)
    dot = spo.to_dot()
    assert dot.startswith("digraph")
