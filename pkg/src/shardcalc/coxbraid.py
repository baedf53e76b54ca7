"""Finite Coxeter groups, positive braid monoids, and the Snap map.

Supported group families and their element models:

  A_n    permutations of {1..n+1}, stored as the image tuple (w(1),...,w(n+1));
  B_n    signed permutations of {1..n}, stored as a tuple of signed images;
  D_n    signed permutations with an even number of sign changes;
  I2(m)  the dihedral group of order 2m, stored as a pair (c, eps) acting on
         Z_m by x -> c + eps*x.

The generator list S consists of adjacent transpositions; for B_n the last
generator negates the final coordinate and for D_n it is the swap-and-negate
of the last two coordinates.  These are exactly the wall reflections of the
all-plus base chamber of the matching builtin arrangement, so the orbit map
w -> w(B) is a poset isomorphism from weak order on W to weak order on
regions.  The isomorphism is certified edge by edge, which also produces the
bijection between reflections and hyperplanes used to transport shard labels.

Positive braids over W are handled through the Garside structure of the
braid monoid: a positive braid is stored as its left-greedy normal form, a
tuple of nonidentity group elements ("simples") in which each consecutive
pair (x, y) is left-weighted, meaning every simple generator that can start
y can also end x.  A general braid element is stored as delta^k * positive
with k (the infimum) maximal, where delta lifts the longest element; moving
a positive braid past a power of delta applies the diagram automorphism
w -> w0 * w * w0 factorwise.

On top of this the module builds the Snap map w -> lift(w) * lift(w0(des w)),
inversion multisets of braid words, braid conjugates of lifted cover
reflections, c-sorting words, and the noncrossing partition lattice NC(W, c),
together with exhaustive cross-checks tying all of these to the shard
structure of the reflection arrangement.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .arrangement import Arrangement, ArrangementError, builtin_arrangement
from . import shards as shards_mod

Elem = tuple  # group element; concrete shape depends on the family


class CoxeterError(ValueError):
    pass


# ---------------------------------------------------------------------------
# group models


class CoxeterGroupModel:
    """A finite Coxeter group of type A, B, D or I2 with cached order data.

    Elements are plain tuples; all structural data (lengths, inversion sets,
    descents, reflections, the Coxeter matrix) is computed once by closure
    and kept in dictionaries on the model.
    """

    def __init__(self, family: str, param: int):
        self.family = family
        self.param = param
        self.name = f"I2({param})" if family == "I2" else f"{family}{param}"
        self.e, self.S, self.gen_names = self._generators()
        self.n = len(self.S)
        self._build_elements()
        self._check_order()
        self.reflections = self._find_reflections()
        self.w0 = max(self.elements, key=lambda w: (self.length[w], w))
        assert sum(1 for w in self.elements
                   if self.length[w] == self.length[self.w0]) == 1, \
            "longest element is not unique"
        self._inv_sets: Dict[Elem, FrozenSet[Elem]] = {}
        self._meet_cache: Dict[Tuple[Elem, Elem], Elem] = {}
        self._w0_of_cache: Dict[Tuple[int, ...], Elem] = {}
        self.coxeter_matrix = [[self.order(self.mult(s, t)) for t in self.S]
                               for s in self.S]
        for i in range(self.n):
            if self.coxeter_matrix[i][i] != 1:
                raise AssertionError("generator is not an involution")

    # -- family-specific kernel --------------------------------------------

    def _generators(self):
        fam, p = self.family, self.param
        if fam == "I2":
            if p < 3:
                raise CoxeterError("I2(m) needs m >= 3")
            return (0, 1), [(0, -1), (1, -1)], ["s", "t"]
        if fam == "A":
            if p < 1:
                raise CoxeterError("A_n needs n >= 1")
            d = p + 1
        elif fam == "B":
            if p < 2:
                raise CoxeterError("B_n needs n >= 2")
            d = p
        elif fam == "D":
            if p < 3:
                raise CoxeterError("D_n needs n >= 3")
            d = p
        else:
            raise CoxeterError(f"unsupported family {fam!r} "
                               "(H, F, E and generic matrices are out of scope)")
        e = tuple(range(1, d + 1))
        gens = []
        names = []
        for i in range(d - 1):
            g = list(e)
            g[i], g[i + 1] = g[i + 1], g[i]
            gens.append(tuple(g))
            names.append(f"s{i + 1}")
        if fam == "B":
            g = list(e)
            g[d - 1] = -d
            gens.append(tuple(g))
            names.append(f"s{d}")
        if fam == "D":
            g = list(e)
            g[d - 2], g[d - 1] = -d, -(d - 1)
            gens.append(tuple(g))
            names.append(f"s{d}")
        return e, gens, names

    def mult(self, a: Elem, b: Elem) -> Elem:
        if self.family == "I2":
            c1, e1 = a
            c2, e2 = b
            return ((c1 + e1 * c2) % self.param, e1 * e2)
        return tuple(a[v - 1] if v > 0 else -a[-v - 1] for v in b)

    def inv(self, a: Elem) -> Elem:
        if self.family == "I2":
            c, eps = a
            return ((-c) % self.param, 1) if eps == 1 else a
        r = [0] * len(a)
        for i, v in enumerate(a):
            if v > 0:
                r[v - 1] = i + 1
            else:
                r[-v - 1] = -(i + 1)
        return tuple(r)

    # -- closure and cached structure --------------------------------------

    def _build_elements(self) -> None:
        length = {self.e: 0}
        frontier = [self.e]
        while frontier:
            nxt = []
            for w in frontier:
                for s in self.S:
                    ws = self.mult(w, s)
                    if ws not in length:
                        length[ws] = length[w] + 1
                        nxt.append(ws)
            frontier = nxt
        self.length = length
        self.elements = sorted(length, key=lambda w: (length[w], w))
        self.index = {w: i for i, w in enumerate(self.elements)}

    def _check_order(self) -> None:
        import math
        fam, p = self.family, self.param
        if fam == "A":
            expect = math.factorial(p + 1)
        elif fam == "B":
            expect = 2 ** p * math.factorial(p)
        elif fam == "D":
            expect = 2 ** (p - 1) * math.factorial(p)
        else:
            expect = 2 * p
        if len(self.elements) != expect:
            raise AssertionError(f"group order {len(self.elements)} != {expect}")

    def _find_reflections(self) -> Tuple[Elem, ...]:
        out = set()
        for u in self.elements:
            ui = self.inv(u)
            for s in self.S:
                out.add(self.mult(self.mult(u, s), ui))
        return tuple(sorted(out, key=lambda w: (self.length[w], w)))

    def order(self, w: Elem) -> int:
        k, p = 1, w
        while p != self.e:
            p = self.mult(p, w)
            k += 1
        return k

    # -- order-theoretic helpers -------------------------------------------

    def inv_set(self, w: Elem) -> FrozenSet[Elem]:
        """Left inversion set {t reflection : len(t*w) < len(w)}."""
        cached = self._inv_sets.get(w)
        if cached is None:
            lw = self.length[w]
            cached = frozenset(t for t in self.reflections
                               if self.length[self.mult(t, w)] < lw)
            assert len(cached) == lw
            self._inv_sets[w] = cached
        return cached

    def right_descents(self, w: Elem) -> Tuple[int, ...]:
        lw = self.length[w]
        return tuple(i for i, s in enumerate(self.S)
                     if self.length[self.mult(w, s)] < lw)

    def left_descents(self, w: Elem) -> Tuple[int, ...]:
        lw = self.length[w]
        return tuple(i for i, s in enumerate(self.S)
                     if self.length[self.mult(s, w)] < lw)

    def reduced_word(self, w: Elem) -> Tuple[int, ...]:
        """Lexicographically least reduced word, as generator indices."""
        out = []
        while w != self.e:
            gi = self.left_descents(w)[0]
            out.append(gi)
            w = self.mult(self.S[gi], w)
        return tuple(out)

    def leq_weak(self, u: Elem, v: Elem) -> bool:
        return self.inv_set(u) <= self.inv_set(v)

    def covers(self) -> List[Tuple[Elem, int]]:
        """All pairs (u, i) with u lessdot u*S[i] in weak order."""
        out = []
        for u in self.elements:
            lu = self.length[u]
            for i, s in enumerate(self.S):
                if self.length[self.mult(u, s)] == lu + 1:
                    out.append((u, i))
        return out

    def cov(self, w: Elem) -> FrozenSet[Elem]:
        """Cover reflections {w s w^-1 : s a right descent of w}."""
        wi = self.inv(w)
        return frozenset(self.mult(self.mult(w, self.S[i]), wi)
                         for i in self.right_descents(w))

    def w0_of(self, J: Sequence[int]) -> Elem:
        """Longest element of the standard parabolic generated by S[j], j in J."""
        key = tuple(sorted(set(J)))
        cached = self._w0_of_cache.get(key)
        if cached is None:
            seen = {self.e}
            frontier = [self.e]
            gens = [self.S[j] for j in key]
            while frontier:
                nxt = []
                for w in frontier:
                    for s in gens:
                        ws = self.mult(w, s)
                        if ws not in seen:
                            seen.add(ws)
                            nxt.append(ws)
                frontier = nxt
            top = max(seen, key=lambda w: (self.length[w], w))
            assert sum(1 for w in seen
                       if self.length[w] == self.length[top]) == 1
            cached = self._w0_of_cache[key] = top
        return cached

    def subgroup_reflections(self, gens: Sequence[Elem]) -> FrozenSet[Elem]:
        """Reflections lying in the subgroup generated by `gens`."""
        seen = {self.e}
        frontier = [self.e]
        gl = list(gens)
        while frontier:
            nxt = []
            for w in frontier:
                for g in gl:
                    wg = self.mult(w, g)
                    if wg not in seen:
                        seen.add(wg)
                        nxt.append(wg)
            frontier = nxt
        return frozenset(t for t in self.reflections if t in seen)

    def meet(self, u: Elem, v: Elem) -> Elem:
        """Meet in weak order (the prefix order; a lattice for finite W)."""
        if u == v:
            return u
        key = (u, v) if self.index[u] <= self.index[v] else (v, u)
        cached = self._meet_cache.get(key)
        if cached is None:
            cap = self.inv_set(u) & self.inv_set(v)
            cands = [w for w in self.elements if self.inv_set(w) <= cap]
            best = max(cands, key=lambda w: self.length[w])
            assert all(self.inv_set(w) <= self.inv_set(best) for w in cands), \
                "weak order meet is not unique"
            cached = self._meet_cache[key] = best
        return cached

    def tau(self, w: Elem) -> Elem:
        """Diagram automorphism w -> w0 * w * w0 (conjugation by delta)."""
        return self.mult(self.mult(self.w0, w), self.w0)

    def __repr__(self) -> str:
        return f"CoxeterGroupModel({self.name})"


_group_cache: Dict[Tuple[str, int], CoxeterGroupModel] = {}


def build_group(family: str, param: int) -> CoxeterGroupModel:
    key = (family.upper(), param)
    g = _group_cache.get(key)
    if g is None:
        g = _group_cache[key] = CoxeterGroupModel(key[0], param)
    return g


def parse_group(spec: str) -> CoxeterGroupModel:
    """Parse a tag like 'A3', 'B2', 'D4' or 'I2:5' into a group model."""
    s = spec.strip()
    if ":" in s:
        fam, _, p = s.partition(":")
        return build_group(fam, int(p))
    if s[:2].upper() == "I2":
        return build_group("I2", int(s[2:]))
    return build_group(s[0], int(s[1:]))


# ---------------------------------------------------------------------------
# the orbit map w -> w(B) onto regions of the reflection arrangement


@dataclass
class WeakOrderIso:
    """Certified isomorphism from weak order on W to weak order on regions.

    `region_of` maps group elements to region ids of `arr`, `hyper_of_refl`
    is the induced bijection from reflections to hyperplane indices.
    """
    group: CoxeterGroupModel
    arr: Arrangement
    region_of: Dict[Elem, int]
    elem_of: Dict[int, Elem]
    hyper_of_refl: Dict[Elem, int]
    refl_of_hyper: Dict[int, Elem]


def _builtin_for(model: CoxeterGroupModel) -> Arrangement:
    if model.family == "I2":
        return builtin_arrangement("I2", model.param)
    return builtin_arrangement(model.family, model.param)


def _act_point(model: CoxeterGroupModel, w: Elem, x: Sequence) -> List:
    """Image of a point under the linear action (types A, B, D)."""
    p = [None] * len(x)
    for i, v in enumerate(w):
        if v > 0:
            p[v - 1] = x[i]
        else:
            p[-v - 1] = -x[i]
    return p


def _region_map_linear(model: CoxeterGroupModel, arr: Arrangement) -> Dict[Elem, int]:
    x = arr.base_region.witness
    out = {}
    for w in model.elements:
        p = _act_point(model, w, x)
        signs = []
        for h in arr.hyperplanes:
            v = h.eval(p)
            assert v != 0, "orbit point landed on a hyperplane"
            signs.append(1 if v > 0 else -1)
        r = arr.region_by_signs(signs)
        assert r is not None, "orbit left the region census"
        out[w] = r.id
    return out


def _region_map_dihedral(model: CoxeterGroupModel, arr: Arrangement) -> Dict[Elem, int]:
    """Match the two maximal chains of the 2m-cycle on each side.

    There is no rational linear action for general m, but weak order on a
    dihedral group is a pair of chains from 1 to w0 and so is the region
    poset; gluing the chain through S[0] to the route through the smaller
    wall index of B pins down the bijection, and certification validates it.
    """
    poset = arr.poset()
    base = poset.base
    walls = [h for h, r in enumerate(poset.neighbor[base]) if r is not None]
    assert len(walls) == 2

    def route(first_wall: int) -> List[int]:
        seq = [base, poset.neighbor[base][first_wall]]
        while True:
            nbrs = [r for r in poset.neighbor[seq[-1]] if r is not None]
            nxt = [r for r in nbrs if r != seq[-2]]
            assert len(nxt) == 1
            if nxt[0] == base:
                return seq
            seq.append(nxt[0])

    def chain(first_gen: int) -> List[Elem]:
        seq = [model.e]
        k = 0
        while len(seq) <= model.param:
            seq.append(model.mult(seq[-1], model.S[(first_gen + k) % 2]))
            k += 1
        return seq

    out: Dict[Elem, int] = {}
    for first_gen, first_wall in ((0, min(walls)), (1, max(walls))):
        regions = route(first_wall)
        for w, rid in zip(chain(first_gen), regions):
            assert out.setdefault(w, rid) == rid, "chain gluing mismatch"
    return out


def _certify_iso(model: CoxeterGroupModel, arr: Arrangement,
                 region_of: Dict[Elem, int]) -> Tuple[Dict[Elem, int], Dict[int, Elem]]:
    """Check the orbit map is a weak order isomorphism, cover by cover.

    Returns the induced reflection <-> hyperplane bijection.  Every cover
    u lessdot u*s must cross exactly one new hyperplane, the hyperplane must
    depend only on the reflection u s u^-1, and inversion sets must match
    separation masks bit for bit.
    """
    poset = arr.poset()
    assert len(region_of) == len(model.elements) == len(poset.regions)
    assert len(set(region_of.values())) == len(model.elements)
    tmap: Dict[Elem, int] = {}
    for u, i in model.covers():
        s = model.S[i]
        w = model.mult(u, s)
        mu, mw = poset.mask(region_of[u]), poset.mask(region_of[w])
        diff = mu ^ mw
        assert mu & mw == mu and diff.bit_count() == 1, \
            "cover does not cross exactly one wall upward"
        h = diff.bit_length() - 1
        t = model.mult(model.mult(u, s), model.inv(u))
        assert tmap.setdefault(t, h) == h, "reflection crossed two hyperplanes"
    assert len(tmap) == len(model.reflections) == len(arr.hyperplanes)
    assert len(set(tmap.values())) == len(tmap)
    for w, rid in region_of.items():
        mask = poset.mask(rid)
        expect = 0
        for t in model.inv_set(w):
            expect |= 1 << tmap[t]
        assert mask == expect, "inversion set does not match separation mask"
    return tmap, {h: t for t, h in tmap.items()}


_iso_cache: Dict[int, WeakOrderIso] = {}


def weak_order_iso(model: CoxeterGroupModel) -> WeakOrderIso:
    iso = _iso_cache.get(id(model))
    if iso is None:
        arr = _builtin_for(model)
        if model.family == "I2":
            region_of = _region_map_dihedral(model, arr)
        else:
            region_of = _region_map_linear(model, arr)
        tmap, hmap = _certify_iso(model, arr, region_of)
        iso = WeakOrderIso(model, arr, region_of,
                           {rid: w for w, rid in region_of.items()},
                           tmap, hmap)
        _iso_cache[id(model)] = iso
    return iso


def reflection_arrangement(model: CoxeterGroupModel) -> Arrangement:
    return weak_order_iso(model).arr


# ---------------------------------------------------------------------------
# positive braids in Garside normal form


class PosBraid:
    """A positive braid stored as its left-greedy normal form."""

    __slots__ = ("group", "factors")

    def __init__(self, group: CoxeterGroupModel, factors: Tuple[Elem, ...]):
        self.group = group
        self.factors = factors

    def word(self) -> Tuple[int, ...]:
        out: List[int] = []
        for f in self.factors:
            out.extend(self.group.reduced_word(f))
        return tuple(out)

    def wlen(self) -> int:
        return sum(self.group.length[f] for f in self.factors)

    def proj(self) -> Elem:
        w = self.group.e
        for f in self.factors:
            w = self.group.mult(w, f)
        return w

    def __eq__(self, other) -> bool:
        return (isinstance(other, PosBraid) and self.group is other.group
                and self.factors == other.factors)

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"PosBraid{self.factors!r}"


def _normal_form(G: CoxeterGroupModel, factors: Sequence[Elem]) -> Tuple[Elem, ...]:
    """Left-greedy normal form by local absorption.

    For a consecutive pair (x, y), the largest prefix of y that x can absorb
    is the weak order meet of y with the complement x^-1 w0; sliding these
    prefixes left until no pair moves yields the unique left-weighted form.
    """
    fs = [f for f in factors if f != G.e]
    j = 0
    while j < len(fs) - 1:
        x, y = fs[j], fs[j + 1]
        a = G.meet(G.mult(G.inv(x), G.w0), y)
        if a == G.e:
            j += 1
            continue
        fs[j] = G.mult(x, a)
        yq = G.mult(G.inv(a), y)
        if yq == G.e:
            del fs[j + 1]
        else:
            fs[j + 1] = yq
        j = max(0, j - 1)
    return tuple(fs)


def lift(G: CoxeterGroupModel, w: Elem) -> PosBraid:
    """The canonical positive lift of a group element (single simple)."""
    return PosBraid(G, () if w == G.e else (w,))


def garside_normal_form(G: CoxeterGroupModel, word: Sequence[int]) -> PosBraid:
    """Normal form of a word over the generator alphabet (indices into S)."""
    return PosBraid(G, _normal_form(G, [G.S[i] for i in word]))


def braid_multiply(u: PosBraid, v: PosBraid) -> PosBraid:
    assert u.group is v.group
    return PosBraid(u.group, _normal_form(u.group, u.factors + v.factors))


def delta(G: CoxeterGroupModel) -> PosBraid:
    return lift(G, G.w0)


def delta_squared(G: CoxeterGroupModel) -> PosBraid:
    return PosBraid(G, (G.w0, G.w0))


# ---------------------------------------------------------------------------
# general braid elements: delta^k * positive with k maximal


class BraidElem:
    """An element of the braid group as delta^inf * positive part.

    The infimum is maximal, equivalently the positive part does not start
    with the full twist factor w0.  Conjugating a positive braid by a power
    of delta applies the diagram automorphism factorwise.
    """

    __slots__ = ("group", "inf", "factors")

    def __init__(self, group: CoxeterGroupModel, inf: int,
                 factors: Sequence[Elem]):
        pos = _normal_form(group, factors)
        while pos and pos[0] == group.w0:
            pos = pos[1:]
            inf += 1
        self.group = group
        self.inf = inf
        self.factors = pos

    def is_positive(self) -> bool:
        return self.inf >= 0

    def proj(self) -> Elem:
        G = self.group
        w = G.w0 if self.inf % 2 else G.e
        for f in self.factors:
            w = G.mult(w, f)
        return w

    def __eq__(self, other) -> bool:
        return (isinstance(other, BraidElem) and self.group is other.group
                and self.inf == other.inf and self.factors == other.factors)

    def __hash__(self) -> int:
        return hash((self.inf, self.factors))

    def __repr__(self) -> str:
        return f"BraidElem(inf={self.inf}, factors={self.factors!r})"


def braid_from_positive(u: PosBraid) -> BraidElem:
    return BraidElem(u.group, 0, u.factors)


def braid_elem_mul(a: BraidElem, b: BraidElem) -> BraidElem:
    assert a.group is b.group
    G = a.group
    pa = a.factors if b.inf % 2 == 0 else tuple(G.tau(x) for x in a.factors)
    return BraidElem(G, a.inf + b.inf, pa + b.factors)


def braid_elem_inv(a: BraidElem) -> BraidElem:
    G = a.group
    out = BraidElem(G, -a.inf, ())
    # the inverse of a simple x is delta^-1 * tau(x^-1 w0)
    for x in reversed(a.factors):
        out = braid_elem_mul(out, BraidElem(G, -1, (G.tau(G.mult(G.inv(x), G.w0)),)))
    return out


def left_divides(u: PosBraid, v: PosBraid) -> bool:
    """Prefix order on the positive braid monoid: u <= v iff u^-1 v is positive."""
    q = braid_elem_mul(braid_elem_inv(braid_from_positive(u)),
                       braid_from_positive(v))
    return q.is_positive()


def lift_iso_check(model: CoxeterGroupModel) -> bool:
    """lift embeds weak order on W isomorphically onto [1, lift(w0)]."""
    G = model
    lifted = {w: lift(G, w) for w in G.elements}
    top = lifted[G.w0]
    for u in G.elements:
        if not left_divides(lifted[u], top):
            return False
        for v in G.elements:
            if G.leq_weak(u, v) != left_divides(lifted[u], lifted[v]):
                return False
    return True


def delta_central_check(model: CoxeterGroupModel) -> bool:
    """The full twist delta^2 commutes with every generator."""
    G = model
    d2 = delta_squared(G)
    for s in G.S:
        b = lift(G, s)
        if braid_multiply(d2, b) != braid_multiply(b, d2):
            return False
    return True


# ---------------------------------------------------------------------------
# inversion multisets of braid words

ReflMultiset = Counter


def inv_multiset(G: CoxeterGroupModel, w) -> "Counter":
    """Multiset of prefix conjugates s1..s(k-1) sk s(k-1)..s1 of a word.

    Accepts a PosBraid or a raw word of generator indices.  The result is
    invariant under braid moves, so it only depends on the braid element.
    """
    word = w.word() if isinstance(w, PosBraid) else tuple(w)
    out: Counter = Counter()
    p = G.e
    for gi in word:
        s = G.S[gi]
        out[G.mult(G.mult(p, s), G.inv(p))] += 1
        p = G.mult(p, s)
    return out


def braid_move_neighbors(G: CoxeterGroupModel, word: Tuple[int, ...]):
    """Words obtained by one application of a defining relation."""
    n = len(word)
    for i in range(G.n):
        for j in range(G.n):
            if i == j:
                continue
            m = G.coxeter_matrix[i][j]
            pat = tuple((i, j)[k % 2] for k in range(m))
            rep = tuple((j, i)[k % 2] for k in range(m))
            for pos in range(n - m + 1):
                if word[pos:pos + m] == pat:
                    yield word[:pos] + rep + word[pos + m:]


def braid_move_closure(G: CoxeterGroupModel, word: Sequence[int],
                       budget: int = 10 ** 5) -> FrozenSet[Tuple[int, ...]]:
    """All words reachable from `word` by braid moves (length-preserving)."""
    from .salvetti import ResourceLimitError
    start = tuple(word)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for w2 in braid_move_neighbors(G, w):
                if w2 not in seen:
                    if len(seen) >= budget:
                        raise ResourceLimitError("braid move closure budget")
                    seen.add(w2)
                    nxt.append(w2)
        frontier = nxt
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Pop, Snap and Crackle on the braid side


def pop_elem(G: CoxeterGroupModel, w: Elem) -> Elem:
    """Meet of the lower covers of w: strip the longest descent suffix."""
    return G.mult(w, G.w0_of(G.right_descents(w)))


def snap(G: CoxeterGroupModel, w: Elem) -> PosBraid:
    """The positive braid lift(Pop(w)) * lift(w0(des w))^2 = lift(w) * lift(w0(des w))."""
    wj = G.w0_of(G.right_descents(w))
    return PosBraid(G, _normal_form(G, (w, wj)))


def pop_braid(G: CoxeterGroupModel, w: Elem) -> PosBraid:
    return lift(G, pop_elem(G, w))


def crackle_braid(G: CoxeterGroupModel, w: Elem) -> BraidElem:
    """The conjugate Pop(w)-lift * lift(w0(des w))^2 * Pop(w)-lift^-1."""
    wj = G.w0_of(G.right_descents(w))
    p = braid_from_positive(pop_braid(G, w))
    mid = BraidElem(G, 0, (wj, wj))
    return braid_elem_mul(braid_elem_mul(p, mid), braid_elem_inv(p))


def snap_check(model: CoxeterGroupModel) -> bool:
    """phi(Snap(w)) = Pop(w); Snap(1) = 1; Snap(w0) = delta^2; images in [1, delta^2]."""
    G = model
    d2 = delta_squared(G)
    if snap(G, G.e).factors != () or snap(G, G.w0) != d2:
        return False
    for w in G.elements:
        sw = snap(G, w)
        if sw.proj() != pop_elem(G, w):
            return False
        if braid_multiply(lift(G, w), lift(G, G.w0_of(G.right_descents(w)))) != sw:
            return False
        if not left_divides(sw, d2):
            return False
    return True


def snap_crackle_pop_check(model: CoxeterGroupModel) -> bool:
    """Snap(w) = Crackle(w) * lift(Pop(w)) in the braid group, for every w."""
    G = model
    for w in G.elements:
        lhs = braid_from_positive(snap(G, w))
        rhs = braid_elem_mul(crackle_braid(G, w),
                             braid_from_positive(pop_braid(G, w)))
        if lhs != rhs:
            return False
    return True


def inv_decomposition_check(model: CoxeterGroupModel) -> bool:
    """Inv(Snap(w)) = inv(w) plus one extra copy of the cover reflections' span.

    The reflections of the subgroup generated by cov(w) appear twice and the
    rest of inv(w) once; equivalently inv(w) splits as inv(Pop(w)) plus the
    reflections of <cov(w)>.
    """
    G = model
    for w in G.elements:
        covs = G.subgroup_reflections(G.cov(w))
        got = inv_multiset(G, snap(G, w))
        want = Counter(G.inv_set(w)) + Counter(covs)
        if got != want:
            return False
        if G.inv_set(w) - G.inv_set(pop_elem(G, w)) != covs:
            return False
        if Counter(inv_multiset(G, lift(G, w))) != Counter(G.inv_set(w)):
            return False
    return True


# ---------------------------------------------------------------------------
# shard order on W and the Snap embedding


def shard_order_elements(model: CoxeterGroupModel):
    """Join-irreducible group elements indexed by the shards they label."""
    iso = weak_order_iso(model)
    sd = shards_mod.shard_data(iso.arr)
    out = {}
    for sh in sd.shards():
        out[sh.id] = iso.elem_of[sd.join_irreducible_of_shard(sh)]
    return out


def _shard_leq_reformulated(G: CoxeterGroupModel, u: Elem, v: Elem) -> bool:
    """Order on join-irreducibles: inversion sets and cover spans both nest."""
    if not G.inv_set(u) <= G.inv_set(v):
        return False
    return G.subgroup_reflections(G.cov(u)) <= G.subgroup_reflections(G.cov(v))


def snap_embedding_check(model: CoxeterGroupModel) -> bool:
    """Shard order (with bottom and top adjoined) embeds into [1, delta^2].

    The order is computed geometrically from the arrangement and re-derived
    from inversion sets plus cover-reflection spans; Snap of the labelling
    join-irreducibles must reproduce it via left divisibility, injectively.
    """
    G = model
    iso = weak_order_iso(model)
    sd = shards_mod.shard_data(iso.arr)
    spo = sd.intersection_order()
    ji = shard_order_elements(model)
    jir = {sid: sd.join_irreducible_of_shard(sd.shards()[sid]) for sid in ji}
    sids = sorted(ji)
    images = {sid: snap(G, ji[sid]) for sid in sids}
    d2 = delta_squared(G)
    one = PosBraid(G, ())
    for a in sids:
        if not left_divides(one, images[a]) or not left_divides(images[a], d2):
            return False
        for b in sids:
            geo = spo.leq(jir[a], jir[b])
            if geo != _shard_leq_reformulated(G, ji[a], ji[b]):
                return False
            if geo != left_divides(images[a], images[b]):
                return False
    distinct = set(images.values()) | {one, d2}
    return len(distinct) == len(sids) + 2


def shard_conjugate_classes(model: CoxeterGroupModel):
    """Group the cover pairs (u, i) by the braid conjugate u-lift s u-lift^-1.

    Returns a list of classes, each a sorted list of (u, generator index),
    in a deterministic order.
    """
    G = model
    buckets: Dict[BraidElem, List[Tuple[Elem, int]]] = {}
    for u, i in G.covers():
        bu = braid_from_positive(lift(G, u))
        g = braid_elem_mul(braid_elem_mul(bu, braid_from_positive(lift(G, G.S[i]))),
                           braid_elem_inv(bu))
        buckets.setdefault(g, []).append((u, i))
    classes = [sorted(v) for v in buckets.values()]
    classes.sort()
    return classes


def shard_conjugate_check(model: CoxeterGroupModel) -> bool:
    """Braid conjugates of cover generators coincide with shard labels."""
    G = model
    iso = weak_order_iso(model)
    sd = shards_mod.shard_data(iso.arr)
    poset = iso.arr.poset()
    by_shard: Dict[int, set] = {}
    for u, i in G.covers():
        w = G.mult(u, G.S[i])
        edge = poset.edge_between(iso.region_of[u], iso.region_of[w])
        by_shard.setdefault(sd.shard_of_edge(edge).id, set()).add((u, i))
    want = sorted(sorted(v) for v in by_shard.values())
    return shard_conjugate_classes(model) == want


# ---------------------------------------------------------------------------
# c-sorting words, sortable elements, noncrossing shards


def _check_cox_word(G: CoxeterGroupModel, c: Sequence[int]) -> Tuple[int, ...]:
    cw = tuple(c)
    if sorted(cw) != list(range(G.n)):
        raise CoxeterError("c must list each generator exactly once")
    return cw


def coxeter_element(G: CoxeterGroupModel, c: Sequence[int]) -> Elem:
    w = G.e
    for gi in _check_cox_word(G, c):
        w = G.mult(w, G.S[gi])
    return w


def c_sorting_blocks(G: CoxeterGroupModel, c: Sequence[int],
                     w: Elem) -> List[Tuple[int, ...]]:
    """Greedy leftmost subword of (c)^infinity, reported one pass at a time."""
    cw = _check_cox_word(G, c)
    blocks: List[Tuple[int, ...]] = []
    r = w
    while r != G.e:
        block = []
        for gi in cw:
            s = G.S[gi]
            if G.length[G.mult(s, r)] < G.length[r]:
                block.append(gi)
                r = G.mult(s, r)
        assert block, "sorting word stalled"
        blocks.append(tuple(block))
    return blocks


def c_sorting_word(G: CoxeterGroupModel, c: Sequence[int], w: Elem) -> Tuple[int, ...]:
    return tuple(gi for b in c_sorting_blocks(G, c, w) for gi in b)


def c_sortable(G: CoxeterGroupModel, c: Sequence[int], w: Elem) -> bool:
    """Sortable iff the letter supports of consecutive sorting blocks nest."""
    blocks = c_sorting_blocks(G, c, w)
    return all(set(blocks[k + 1]) <= set(blocks[k])
               for k in range(len(blocks) - 1))


def sortables(G: CoxeterGroupModel, c: Sequence[int]) -> List[Elem]:
    return [w for w in G.elements if c_sortable(G, c, w)]


def noncrossing_shards(model: CoxeterGroupModel, c: Sequence[int]) -> FrozenSet[int]:
    """Shards labelling the gallery of the c-sorting word of w0."""
    G = model
    iso = weak_order_iso(model)
    sd = shards_mod.shard_data(iso.arr)
    poset = iso.arr.poset()
    out = set()
    u = G.e
    for gi in c_sorting_word(G, c, G.w0):
        w = G.mult(u, G.S[gi])
        edge = poset.edge_between(iso.region_of[u], iso.region_of[w])
        out.add(sd.shard_of_edge(edge).id)
        u = w
    assert u == G.w0
    return frozenset(out)


# ---------------------------------------------------------------------------
# absolute order and the noncrossing partition lattice


def reflection_length(G: CoxeterGroupModel) -> Dict[Elem, int]:
    lt = {G.e: 0}
    frontier = [G.e]
    while frontier:
        nxt = []
        for w in frontier:
            for t in G.reflections:
                wt = G.mult(w, t)
                if wt not in lt:
                    lt[wt] = lt[w] + 1
                    nxt.append(wt)
        frontier = nxt
    assert len(lt) == len(G.elements)
    return lt


class NCPoset:
    """The interval [1, c] in absolute order, graded by reflection length."""

    def __init__(self, model: CoxeterGroupModel, c: Sequence[int]):
        G = self.group = model
        self.c = coxeter_element(G, c)
        self._lt = reflection_length(G)
        lc = self._lt[self.c]
        self.elements = [w for w in G.elements
                         if self._lt[w] + self._lt[G.mult(G.inv(w), self.c)] == lc]
        self.elements.sort(key=lambda w: (self._lt[w], w))

    def rank(self, w: Elem) -> int:
        return self._lt[w]

    def leq(self, u: Elem, v: Elem) -> bool:
        G = self.group
        return self._lt[u] + self._lt[G.mult(G.inv(u), v)] == self._lt[v]


def nc_lattice(model: CoxeterGroupModel, c: Sequence[int]) -> NCPoset:
    return NCPoset(model, c)


def _poset_isomorphic(ea: Sequence, la, eb: Sequence, lb) -> bool:
    """Brute-force poset isomorphism with up/down-degree pruning."""
    if len(ea) != len(eb):
        return False
    n = len(ea)
    rel_a = [[la(x, y) for y in ea] for x in ea]
    rel_b = [[lb(x, y) for y in eb] for x in eb]

    def sig(rel, i):
        return (sum(rel[j][i] for j in range(n)), sum(rel[i][j] for j in range(n)))

    sig_a = [sig(rel_a, i) for i in range(n)]
    sig_b = [sig(rel_b, i) for i in range(n)]
    if sorted(sig_a) != sorted(sig_b):
        return False
    order = sorted(range(n), key=lambda i: (sig_a.count(sig_a[i]), i))
    match: List[Optional[int]] = [None] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if used[j] or sig_a[i] != sig_b[j]:
                continue
            ok = True
            for k2 in range(k):
                i2 = order[k2]
                j2 = match[i2]
                if rel_a[i][i2] != rel_b[j][j2] or rel_a[i2][i] != rel_b[j2][j]:
                    ok = False
                    break
            if ok:
                match[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                match[i] = None
                used[j] = False
        return False

    return extend(0)


def weak_orders_isomorphic(m1: CoxeterGroupModel, m2: CoxeterGroupModel) -> bool:
    return _poset_isomorphic(m1.elements, m1.leq_weak, m2.elements, m2.leq_weak)


def catalan_corollary_checks(model: CoxeterGroupModel, c: Sequence[int]) -> bool:
    """Snap and Crackle of the sortable elements realize NC(W, c).

    Both (Snap(Sort), left divisibility) and (Crackle(Sort), interval order)
    must be isomorphic as posets to the absolute-order interval [1, c].
    """
    from . import shardmonoid
    G = model
    nc = nc_lattice(model, c)
    srt = sortables(G, c)
    if len(srt) != len(nc.elements):
        return False
    snaps = [snap(G, w) for w in srt]
    if len(set(snaps)) != len(snaps):
        return False
    if not _poset_isomorphic(snaps, left_divides, nc.elements, nc.leq):
        return False
    iso = weak_order_iso(model)
    ip = shardmonoid.enumerate_interval(iso.arr)
    cracks = [shardmonoid.crackle(iso.arr, iso.region_of[w]) for w in srt]
    if len({x.id for x in cracks}) != len(cracks):
        return False
    return _poset_isomorphic(cracks, lambda a, b: ip.leq(a.id, b.id),
                             nc.elements, nc.leq)


def all_coxeter_words(G: CoxeterGroupModel):
    """All orderings of the generators, as index tuples."""
    return [tuple(p) for p in itertools.permutations(range(G.n))]
