"""Shards of a central arrangement and the shard intersection order.

A shard of a hyperplane H is the closure of a connected piece of H left
after removing the hyperplanes that cut H.  Cutting is decided inside full
rank-2 subarrangements: among the hyperplanes through a common codimension-2
subspace, exactly two bound the sector containing the base region (the basic
pair), and a basic hyperplane cuts every non-basic one.

Shards are stored as the hyperplane index plus strict sign conditions over
the cutting hyperplanes, with a generic rational witness in the relative
interior (on no other hyperplane of the arrangement).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .arrangement import Arrangement, CoverEdge, RegionPoset
from .ratlin import row_echelon_basis, in_span, strict_cone_point, dot, span_leq


@dataclass(frozen=True)
class Rank2Subarrangement:
    indices: tuple[int, ...]        # all hyperplanes through the common flat
    basic: tuple[int, int]          # the two bounding the base sector


@dataclass(frozen=True)
class Shard:
    id: int
    hyperplane: int
    cut_signs: tuple[tuple[int, int], ...]   # (cutting hyperplane, sign)
    witness: tuple

    def contains(self, arr: Arrangement, point: Sequence) -> bool:
        """Closed-cone membership: on H, cut signs weakly satisfied."""
        if dot(arr.hyperplanes[self.hyperplane].normal, point) != 0:
            return False
        return all(s * dot(arr.hyperplanes[h].normal, point) >= 0
                   for h, s in self.cut_signs)


class ShardData:
    """All shard structure of one arrangement, computed lazily and cached."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self.poset = arr.poset()
        self._rank2: Optional[list[Rank2Subarrangement]] = None
        self._cutting: Optional[dict[int, list[int]]] = None
        self._shards: Optional[list[Shard]] = None
        self._by_key: dict[tuple, int] = {}
        self._edge_shard: dict[int, int] = {}
        self._order: Optional["ShardPoset"] = None

    # -- rank-2 subarrangements and cutting -----------------------------------

    def rank2_subarrangements(self) -> list[Rank2Subarrangement]:
        if self._rank2 is not None:
            return self._rank2
        arr = self.arr
        seen: dict[tuple[int, ...], Rank2Subarrangement] = {}
        nh = len(arr.hyperplanes)
        for i in range(nh):
            for j in range(i + 1, nh):
                span = row_echelon_basis(
                    [arr.hyperplanes[i].normal, arr.hyperplanes[j].normal])
                members = tuple(k for k in range(nh)
                                if in_span(arr.hyperplanes[k].normal, span))
                if members in seen:
                    continue
                basic = tuple(k for k in members if self._is_basic(k, members))
                assert len(basic) == 2, "a base sector has exactly two walls"
                seen[members] = Rank2Subarrangement(members, basic)
        self._rank2 = sorted(seen.values(), key=lambda a: a.indices)
        return self._rank2

    def _is_basic(self, k: int, members: tuple[int, ...]) -> bool:
        arr = self.arr
        ineqs = [tuple(arr.base_signs[h] * x for x in arr.hyperplanes[h].normal)
                 for h in members if h != k]
        eqs = [arr.hyperplanes[k].normal]
        return strict_cone_point(ineqs, eqs) is not None

    def rank2_containing(self, a: int, b: int) -> Rank2Subarrangement:
        for sub in self.rank2_subarrangements():
            if a in sub.indices and b in sub.indices:
                return sub
        raise ValueError("hyperplanes share no codimension-2 flat")

    def cuts(self, a: int, b: int) -> bool:
        """True iff hyperplane a cuts hyperplane b."""
        if a == b:
            raise ValueError("a hyperplane does not cut itself")
        sub = self.rank2_containing(a, b)
        return a in sub.basic and b not in sub.basic

    def cutting(self, h: int) -> list[int]:
        """All hyperplanes that cut h."""
        if self._cutting is None:
            cutting: dict[int, set[int]] = {
                i: set() for i in range(len(self.arr.hyperplanes))}
            for sub in self.rank2_subarrangements():
                for k in sub.indices:
                    if k not in sub.basic:
                        cutting[k].update(sub.basic)
            self._cutting = {k: sorted(v) for k, v in cutting.items()}
        return self._cutting[h]

    # -- shard computation ----------------------------------------------------

    def shards(self) -> list[Shard]:
        if self._shards is not None:
            return self._shards
        arr = self.arr
        out: list[Shard] = []
        for h in range(len(arr.hyperplanes)):
            cut = self.cutting(h)
            for signs in self._feasible_cells(h, cut):
                witness = self._generic_witness(h, dict(zip(cut, signs)))
                out.append(Shard(len(out), h, tuple(zip(cut, signs)), witness))
        self._shards = out
        self._by_key = {(s.hyperplane, s.cut_signs): s.id for s in out}
        return out

    def _feasible_cells(self, h: int, cut: list[int]):
        arr = self.arr
        eqs = [arr.hyperplanes[h].normal]

        def extend(prefix: list[int]):
            if len(prefix) == len(cut):
                yield tuple(prefix)
                return
            for s in (1, -1):
                ineqs = [tuple(sg * x for x in arr.hyperplanes[c].normal)
                         for sg, c in zip(prefix + [s], cut)]
                if strict_cone_point(ineqs, eqs) is not None:
                    yield from extend(prefix + [s])

        yield from extend([])

    def _generic_witness(self, h: int, fixed: dict[int, int]) -> tuple:
        """A point on hyperplane h, respecting the fixed signs, and strictly
        off every other hyperplane of the arrangement."""
        arr = self.arr
        others = [k for k in range(len(arr.hyperplanes)) if k != h]
        eqs = [arr.hyperplanes[h].normal]

        def extend(assigned: dict[int, int], rest: list[int]):
            ineqs = [tuple(sg * x for x in arr.hyperplanes[k].normal)
                     for k, sg in assigned.items()]
            pt = strict_cone_point(ineqs, eqs)
            if pt is None:
                return None
            if not rest:
                return pt
            k, tail = rest[0], rest[1:]
            for s in (1, -1):
                got = extend({**assigned, k: s}, tail)
                if got is not None:
                    return got
            return None

        free = [k for k in others if k not in fixed]
        pt = extend(dict(fixed), free)
        assert pt is not None, "shard cell lost its witness"
        return pt

    def shard_by_key(self, h: int, cut_signs) -> Shard:
        self.shards()
        return self._shards[self._by_key[(h, tuple(cut_signs))]]

    def negate(self, s: Shard) -> Shard:
        """The antipodal shard -S: same hyperplane, all cut signs negated."""
        return self.shard_by_key(
            s.hyperplane, tuple((h, -sg) for h, sg in s.cut_signs))

    # -- edge labels ----------------------------------------------------------

    def shard_of_edge(self, e: CoverEdge) -> Shard:
        got = self._edge_shard.get(e.id)
        if got is not None:
            return self._shards[got]
        arr = self.arr
        lower = self.poset.regions[e.lower]
        h = e.hyperplane
        ineqs = [tuple(lower.signs[k] * x for x in arr.hyperplanes[k].normal)
                 for k in range(len(arr.hyperplanes)) if k != h]
        pt = strict_cone_point(ineqs, [arr.hyperplanes[h].normal])
        assert pt is not None, "cover edge without a facet interior point"
        signs = []
        for c in self.cutting(h):
            v = dot(arr.hyperplanes[c].normal, pt)
            assert v != 0, "facet interior point on a cutting hyperplane"
            signs.append((c, 1 if v > 0 else -1))
        shard = self.shard_by_key(h, signs)
        self._edge_shard[e.id] = shard.id
        e.shard = shard.id
        return shard

    def label_all_edges(self) -> None:
        for e in self.poset.covers:
            self.shard_of_edge(e)

    def lower_shards(self, rid: int) -> frozenset[int]:
        """cov_Sha(C): shards crossed by the lower cover edges of region rid."""
        return frozenset(self.shard_of_edge(e).id
                         for e in self.poset.cover_down[rid])

    # -- join-irreducibles ----------------------------------------------------

    def join_irreducible_of_shard(self, s: Shard) -> int:
        self.poset.require_simplicial()
        cands = [r.id for r in self.poset.regions
                 if s.id in self.lower_shards(r.id)]
        minimal = [c for c in cands
                   if not any(self.poset.leq(o, c) for o in cands if o != c)]
        assert len(minimal) == 1, "minimal region with given lower shard not unique"
        return minimal[0]

    def shard_of_join_irreducible(self, rid: int) -> Shard:
        down = self.poset.cover_down[rid]
        if len(down) != 1:
            raise ValueError("region is not join-irreducible")
        return self.shard_of_edge(down[0])

    def join_irreducibles(self) -> list[int]:
        return [r.id for r in self.poset.regions
                if len(self.poset.cover_down[r.id]) == 1]

    def canonical_join_check(self, rid: int) -> bool:
        """C is the join of the join-irreducibles of its lower shards."""
        self.poset.require_simplicial()
        out = self.poset.base
        for sid in sorted(self.lower_shards(rid)):
            j = self.join_irreducible_of_shard(self.shards()[sid])
            out = self.poset.join(out, j)
        return out == rid

    # -- shard intersection order ---------------------------------------------

    def intersection_order(self) -> "ShardPoset":
        if self._order is None:
            self.poset.require_simplicial()
            self._order = ShardPoset(self)
        return self._order


class ShardPoset:
    """The shard intersection order on regions, as a precomputed matrix.

    The relation is computed three independent ways (geometric containment,
    shard labels of [Pop(C), C], weak order plus cover-hyperplane spans) and
    any disagreement is an internal error.
    """

    def __init__(self, data: ShardData):
        self.data = data
        poset = data.poset
        arr = data.arr
        regions = poset.regions
        n = len(regions)
        data.label_all_edges()
        shards = data.shards()

        cov_spans = []       # echelon basis of span{normals of cover hyperplanes}
        cov_shards = []      # lower shard id sets
        witnesses = []       # relative-interior point of the shard intersection
        labels = []          # shard labels of all edges in [Pop(C), C]
        pops = [poset.pop(r.id) for r in regions]
        for r in regions:
            down = poset.cover_down[r.id]
            normals = [arr.hyperplanes[e.hyperplane].normal for e in down]
            cov_spans.append(row_echelon_basis(normals))
            sh = data.lower_shards(r.id)
            cov_shards.append(sh)
            ineqs = []
            for sid in sorted(sh):
                for h, sg in shards[sid].cut_signs:
                    ineqs.append(tuple(sg * x
                                       for x in arr.hyperplanes[h].normal))
            w = strict_cone_point(ineqs, normals)
            assert w is not None, "empty lower-shard intersection"
            witnesses.append(w)
            pm, rm = poset.mask(pops[r.id]), poset.mask(r.id)
            lab = set()
            for e in poset.covers:
                lm, um = poset.mask(e.lower), poset.mask(e.upper)
                if pm & ~lm == 0 and um & ~rm == 0:
                    lab.add(e.shard)
            labels.append(frozenset(lab))
        self.interval_labels = labels
        self.pops = pops

        self.rows = [0] * n      # bit j of rows[i]: regions[j] <= regions[i]
        for c in range(n):
            for cp in range(n):
                geo = (span_leq(cov_spans[cp], cov_spans[c])
                       and all(shards[sid].contains(arr, witnesses[c])
                               for sid in cov_shards[cp]))
                lab = labels[cp] <= labels[c]
                hyp = (poset.leq(cp, c)
                       and span_leq(cov_spans[cp], cov_spans[c]))
                if not geo == lab == hyp:
                    raise AssertionError(
                        "shard order characterizations disagree on "
                        f"regions {cp}, {c}: {geo}/{lab}/{hyp}")
                if geo:
                    self.rows[c] |= 1 << cp
        self.n = n

    def leq(self, cp: int, c: int) -> bool:
        """True iff region cp precedes region c in the shard order."""
        return self.rows[c] >> cp & 1 == 1

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for c in range(self.n):
            below = [b for b in range(self.n) if b != c and self.leq(b, c)]
            for b in below:
                if not any(self.leq(b, m) and self.leq(m, c)
                           for m in below if m != b):
                    out.append((b, c))
        return out

    def to_dot(self) -> str:
        lines = ["digraph shard_order {"]
        for b, c in self.covers():
            lines.append(f"  r{b} -> r{c};")
        lines.append("}")
        return "\n".join(lines)


_cache: dict[int, ShardData] = {}


def shard_data(arr: Arrangement) -> ShardData:
    """Per-arrangement cached shard structure."""
    got = _cache.get(id(arr))
    if got is None or got.arr is not arr:
        got = _cache[id(arr)] = ShardData(arr)
    return got


def cuts(arr: Arrangement, a: int, b: int) -> bool:
    return shard_data(arr).cuts(a, b)


def compute_shards(arr: Arrangement) -> list[Shard]:
    return shard_data(arr).shards()


def shard_of_edge(arr: Arrangement, e: CoverEdge) -> Shard:
    return shard_data(arr).shard_of_edge(e)


def join_irreducible_of_shard(arr: Arrangement, s: Shard) -> int:
    return shard_data(arr).join_irreducible_of_shard(s)


def shard_intersection_order(arr: Arrangement) -> ShardPoset:
    return shard_data(arr).intersection_order()


def canonical_join_check(arr: Arrangement, rid: int) -> bool:
    return shard_data(arr).canonical_join_check(rid)
