"""The Salvetti 1-skeleton and a decidable word problem for its loops.

Each weak-order cover edge C' <. C contributes two positive letters: e
(traversing away from the base region) and e* (traversing back).  A positive
gallery is a path in this doubled graph; flips replace one boundary arc of a
2-cell (a full rank-2 crossing sequence) with the complementary arc.

Word problem
------------
For simplicial arrangements positive galleries form a cancellative category
with Garside-like structure: the minimal positive galleries P -> Q are
exactly the square-free elements ("simples"), and the simples starting at P
ordered by left-divisibility are a lattice isomorphic to the poset of regions
re-based at P.  An element is stored as its greedy normal form, which is
just the chain of factor endpoints

    (source region, (Q1, Q2, ..., Qk))

meaning s(P,Q1) s(Q1,Q2) ... with every factor a minimal gallery and each
consecutive pair left-weighted.  Absorption between consecutive factors is a
meet computation in a re-based poset of regions, so normalization needs no
path enumeration at all.  Loops at B are reduced right-fractions of two
positive elements.

For non-simplicial arrangements only flip-closure breadth-first search under
a state budget is offered; it never returns a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .arrangement import (Arrangement, CoverEdge, RegionPoset, Step, UP, STAR,
                          UnsupportedOperationError)
from .shards import Shard, ShardData, shard_data

DEFAULT_BUDGET = 10 ** 6

# A positive element of the gallery category: (source region, factor targets).
Pos = tuple[int, tuple[int, ...]]
# A loop at B as a right fraction numerator * denominator^{-1}.
Frac = tuple[Pos, Pos]


class ResourceLimitError(RuntimeError):
    """A bounded search exceeded its configured state budget."""


# ---------------------------------------------------------------------------
# 1-skeleton and positive galleries


@dataclass(frozen=True)
class PositiveGallery:
    source: int
    steps: tuple[Step, ...]

    @property
    def target(self) -> int:
        return self.steps[-1].target if self.steps else self.source

    def word(self) -> tuple[tuple[int, str], ...]:
        return tuple((s.edge.id, s.direction) for s in self.steps)


def one_skeleton(poset: RegionPoset) -> dict[int, list[Step]]:
    """Outgoing positive letters per region: e from lower, e* from upper."""
    out: dict[int, list[Step]] = {r.id: [] for r in poset.regions}
    for e in poset.covers:
        out[e.lower].append(Step(e, UP))
        out[e.upper].append(Step(e, STAR))
    return out


def gallery(poset: RegionPoset, source: int,
            steps: Iterable[Step]) -> PositiveGallery:
    g = PositiveGallery(source, tuple(steps))
    cur = source
    for s in g.steps:
        if s.source != cur:
            raise ValueError("gallery steps do not chain")
        cur = s.target
    return g


def gallery_between(poset: RegionPoset, src: int, dst: int) -> PositiveGallery:
    return PositiveGallery(src, tuple(poset.minimal_gallery(src, dst)))


# ---------------------------------------------------------------------------
# flips


@dataclass(frozen=True)
class TwoCellRelation:
    subarrangement: tuple[int, ...]
    side_a: tuple[Step, ...]
    side_b: tuple[Step, ...]


class FlipEngine:
    def __init__(self, data: ShardData):
        self.data = data
        self.poset = data.poset
        self.arr = data.arr
        self._flat_ok: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}

    def _flat_feasible(self, members: tuple[int, ...], region: int) -> bool:
        """Is the codim-2 flat of `members` on the boundary of the star of
        the outside-sign pattern of `region`?"""
        signs = self.poset.regions[region].signs
        key = (members, tuple(signs[h] for h in range(len(signs))
                              if h not in members))
        got = self._flat_ok.get(key)
        if got is None:
            arr = self.arr
            eqs = [arr.hyperplanes[h].normal for h in members]
            ineqs = [tuple(signs[h] * x for x in arr.hyperplanes[h].normal)
                     for h in range(len(signs)) if h not in members]
            from .ratlin import strict_cone_point
            got = strict_cone_point(ineqs, eqs) is not None
            self._flat_ok[key] = got
        return got

    def window_flip(self, g: PositiveGallery,
                    at: int) -> Optional[tuple[int, tuple[Step, ...]]]:
        """The flip replacing the 2-cell boundary window starting at `at`,
        or None if no full rank-2 window starts there.  Returns the window
        length and the replacement steps."""
        steps = g.steps
        if at >= len(steps) - 1:
            return None
        h1 = steps[at].edge.hyperplane
        h2 = steps[at + 1].edge.hyperplane
        if h2 == h1:
            return None
        sub = self.data.rank2_containing(h1, h2)
        m = len(sub.indices)
        if at + m > len(steps):
            return None
        window = steps[at:at + m]
        crossed = [s.edge.hyperplane for s in window]
        if sorted(crossed) != list(sub.indices):
            return None
        start = window[0].source
        if not self._flat_feasible(sub.indices, start):
            return None
        # The complementary boundary arc crosses the same hyperplanes in
        # reverse order; all intermediate regions exist because the flat is
        # on the boundary of this sign pattern.
        poset = self.poset
        repl: list[Step] = []
        cur = start
        for h in reversed(crossed):
            nxt = poset.neighbor[cur][h]
            if nxt is None:
                return None
            e = poset.edge_between(cur, nxt)
            repl.append(Step(e, UP if e.lower == cur else STAR))
            cur = nxt
        assert cur == window[-1].target
        return m, tuple(repl)

    def flip(self, g: PositiveGallery, at: int) -> PositiveGallery:
        got = self.window_flip(g, at)
        if got is None:
            raise ValueError("no flippable window at this position")
        m, repl = got
        return PositiveGallery(
            g.source, g.steps[:at] + repl + g.steps[at + m:])

    def all_flips(self, g: PositiveGallery) -> list[PositiveGallery]:
        out = []
        for at in range(len(g.steps)):
            got = self.window_flip(g, at)
            if got is not None:
                m, repl = got
                out.append(PositiveGallery(
                    g.source, g.steps[:at] + repl + g.steps[at + m:]))
        return out

    def flip_class(self, g: PositiveGallery,
                   budget: int = DEFAULT_BUDGET) -> set:
        """All galleries flip-equivalent to g, as words; budget-limited."""
        seen = {g.word(): g}
        queue = [g]
        while queue:
            cur = queue.pop()
            for nxt in self.all_flips(cur):
                w = nxt.word()
                if w not in seen:
                    if len(seen) >= budget:
                        raise ResourceLimitError(
                            "flip closure exceeded state budget")
                    seen[w] = nxt
                    queue.append(nxt)
        return set(seen)

    def equivalent_bfs(self, g1: PositiveGallery, g2: PositiveGallery,
                       budget: int = DEFAULT_BUDGET) -> bool:
        if (g1.source, g1.target, len(g1.steps)) != \
                (g2.source, g2.target, len(g2.steps)):
            return False
        target = g2.word()
        seen = {g1.word()}
        queue = [g1]
        while queue:
            cur = queue.pop()
            if cur.word() == target:
                return True
            for nxt in self.all_flips(cur):
                w = nxt.word()
                if w not in seen:
                    if len(seen) >= budget:
                        raise ResourceLimitError(
                            "flip closure exceeded state budget")
                    seen.add(w)
                    queue.append(nxt)
        return target in seen


# ---------------------------------------------------------------------------
# the gallery category (simplicial fast path)


class GalleryCat:
    """Greedy normal forms for positive galleries of a simplicial arrangement."""

    def __init__(self, poset: RegionPoset):
        poset.require_simplicial()
        self.poset = poset

    # elements -----------------------------------------------------------------

    def identity(self, src: int) -> Pos:
        return (src, ())

    def simple(self, src: int, dst: int) -> Pos:
        return (src, ()) if src == dst else (src, (dst,))

    def end(self, u: Pos) -> int:
        return u[1][-1] if u[1] else u[0]

    def length(self, u: Pos) -> int:
        poset = self.poset
        total = 0
        cur = u[0]
        for t in u[1]:
            total += poset.sep_mask(cur, t).bit_count()
            cur = t
        return total

    def normalize(self, src: int, targets: Sequence[int]) -> Pos:
        poset = self.poset
        chain = [src]
        for t in targets:
            if t != chain[-1]:
                chain.append(t)
        guard = 0
        changed = True
        while changed:
            changed = False
            i = 1
            while i < len(chain) - 1:
                t = poset.meet_at(chain[i], poset.antipode(chain[i - 1]),
                                  chain[i + 1])
                if t != chain[i]:
                    changed = True
                    if t == chain[i + 1]:
                        del chain[i]
                    else:
                        chain[i] = t
                else:
                    i += 1
            guard += 1
            assert guard < 10000, "normalization failed to converge"
        return (chain[0], tuple(chain[1:]))

    def from_steps(self, src: int, steps: Sequence[Step]) -> Pos:
        return self.normalize(src, [s.target for s in steps])

    def mult(self, u: Pos, v: Pos) -> Pos:
        assert self.end(u) == v[0], "source/target mismatch"
        return self.normalize(u[0], u[1] + v[1])

    # divisibility -------------------------------------------------------------

    def _leq_at(self, q: int, a: int, b: int) -> bool:
        poset = self.poset
        return poset.sep_mask(q, a) & ~poset.sep_mask(q, b) == 0

    def _strip_simple(self, t: int, u: Pos) -> Pos:
        """u with the simple prefix s(src, t) removed; t must divide head."""
        src, tg = u
        assert tg and self._leq_at(src, t, tg[0])
        return self.normalize(t, tg)

    def left_divides(self, u: Pos, v: Pos) -> bool:
        assert u[0] == v[0]
        ua, va = u, v
        while ua[1]:
            if not va[1]:
                return False
            a1 = ua[1][0]
            if not self._leq_at(ua[0], a1, va[1][0]):
                return False
            va = self._strip_simple(a1, va)
            ua = (a1, ua[1][1:])
        return True

    def left_quotient(self, u: Pos, v: Pos) -> Pos:
        """w with v = u * w; u must left-divide v."""
        assert u[0] == v[0]
        ua, va = u, v
        while ua[1]:
            a1 = ua[1][0]
            assert va[1] and self._leq_at(ua[0], a1, va[1][0]), \
                "left_quotient without divisibility"
            va = self._strip_simple(a1, va)
            ua = (a1, ua[1][1:])
        return va

    def left_gcd(self, u: Pos, v: Pos) -> Pos:
        assert u[0] == v[0]
        src = u[0]
        out: list[int] = []
        cur = src
        ua, va = u, v
        while ua[1] and va[1]:
            t = self.poset.meet_at(cur, ua[1][0], va[1][0])
            if t == cur:
                break
            out.append(t)
            ua = self._strip_simple(t, ua)
            va = self._strip_simple(t, va)
            cur = t
        return self.normalize(src, out)

    def rev(self, u: Pos) -> Pos:
        """The reversed element (e <-> e*), an anti-automorphism."""
        chain = [u[0], *u[1]]
        chain.reverse()
        return self.normalize(chain[0], chain[1:])

    def right_gcd(self, u: Pos, v: Pos) -> Pos:
        assert self.end(u) == self.end(v)
        return self.rev(self.left_gcd(self.rev(u), self.rev(v)))

    def right_quotient(self, u: Pos, g: Pos) -> Pos:
        """w with u = w * g; g must right-divide u."""
        return self.rev(self.left_quotient(self.rev(g), self.rev(u)))

    # lcm via iterated complements ---------------------------------------------

    def _under_simple(self, p: int, a: int, v: Pos) -> Pos:
        """s(p,a) \\ v: the complement of the simple in lcm(s(p,a), v)."""
        assert v[0] == p
        out: list[int] = []
        q_src, q_tgt = p, a
        for b in v[1]:
            j = self.poset.join_at(q_src, q_tgt, b)
            out.append(j)
            q_src, q_tgt = b, j
        return self.normalize(a, out)

    def under(self, u: Pos, v: Pos) -> Pos:
        """u \\ v: the element with u * (u \\ v) = lcm(u, v)."""
        assert u[0] == v[0]
        cur = v
        p = u[0]
        for a in u[1]:
            cur = self._under_simple(p, a, cur)
            p = a
        return cur

    def left_lcm(self, u: Pos, v: Pos) -> Pos:
        return self.mult(u, self.under(u, v))


# ---------------------------------------------------------------------------
# loops at B as reduced right fractions


class LoopCalc:
    """Arithmetic in the fundamental group of the Salvetti complex at B."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self.data = shard_data(arr)
        self.poset = arr.poset()
        self.cat = GalleryCat(self.poset)
        self.base = self.poset.base
        self._shard_loops: dict[int, Frac] = {}

    # fraction plumbing --------------------------------------------------------

    def identity(self) -> Frac:
        e = self.cat.identity(self.base)
        return (e, e)

    def reduce(self, num: Pos, den: Pos) -> Frac:
        assert num[0] == den[0] == self.base
        assert self.cat.end(num) == self.cat.end(den)
        g = self.cat.right_gcd(num, den)
        return (self.cat.right_quotient(num, g),
                self.cat.right_quotient(den, g))

    def from_positive(self, num: Pos) -> Frac:
        return (num, self.cat.identity(self.base))

    def mul(self, a: Frac, b: Frac) -> Frac:
        (n1, d1), (n2, d2) = a, b
        x = self.cat.under(d1, n2)
        y = self.cat.under(n2, d1)
        return self.reduce(self.cat.mult(n1, x), self.cat.mult(d2, y))

    def inv(self, a: Frac) -> Frac:
        return (a[1], a[0])

    def eq(self, a: Frac, b: Frac) -> bool:
        return a == b

    def eq_by_common_multiple(self, a: Frac, b: Frac) -> bool:
        """Independent equality check: clear denominators via a left lcm."""
        (n1, d1), (n2, d2) = a, b
        p = self.cat.under(d1, d2)
        q = self.cat.under(d2, d1)
        return self.cat.mult(n1, p) == self.cat.mult(n2, q)

    def is_positive_word(self, a: Frac) -> bool:
        return not a[1][1]

    # distinguished loops at the base region -----------------------------------

    def loop_of_edge(self, e: CoverEdge) -> Frac:
        """gal(B, C') . e . e* . gal(B, C')^{-1} for the cover edge e."""
        cat = self.cat
        num = cat.normalize(self.base, (e.lower, e.upper, e.lower))
        den = cat.simple(self.base, e.lower)
        return self.reduce(num, den)

    def canonical_edge(self, s: Shard) -> CoverEdge:
        self.data.label_all_edges()
        best = None
        for e in self.poset.covers:
            if e.shard == s.id:
                k = (self.poset.mask(e.lower).bit_count(), e.lower)
                if best is None or k < best[0]:
                    best = (k, e)
        assert best is not None, "shard crossed by no cover edge"
        return best[1]

    def shard_loop(self, s: Shard) -> Frac:
        got = self._shard_loops.get(s.id)
        if got is None:
            got = self.loop_of_edge(self.canonical_edge(s))
            self._shard_loops[s.id] = got
        return got

    def full_twist(self) -> Frac:
        cat = self.cat
        top = self.poset.top
        return self.from_positive(
            cat.normalize(self.base, (top, self.base)))

    def eval_word(self, word: Sequence[int]) -> Frac:
        """Product of shard loops, letters in left-to-right path order."""
        shards = self.data.shards()
        out = self.identity()
        for sid in word:
            out = self.mul(out, self.shard_loop(shards[sid]))
        return out

    def eval_signed_word(self, word: Sequence[tuple[Frac, int]]) -> Frac:
        out = self.identity()
        for loop, exp in word:
            out = self.mul(out, loop if exp > 0 else self.inv(loop))
        return out


_calc_cache: dict[int, LoopCalc] = {}


def loop_calc(arr: Arrangement) -> LoopCalc:
    got = _calc_cache.get(id(arr))
    if got is None or got.arr is not arr:
        got = _calc_cache[id(arr)] = LoopCalc(arr)
    return got


def flip_engine(arr: Arrangement) -> FlipEngine:
    data = shard_data(arr)
    if not hasattr(data, "_flip_engine"):
        data._flip_engine = FlipEngine(data)
    return data._flip_engine


# ---------------------------------------------------------------------------
# module-level convenience wrappers


def positive_equivalent(arr: Arrangement, g1: PositiveGallery,
                        g2: PositiveGallery, *,
                        budget: int = DEFAULT_BUDGET,
                        force_bfs: bool = False) -> bool:
    """Decide whether two positive galleries are connected by flips."""
    if (g1.source, g1.target, len(g1.steps)) != \
            (g2.source, g2.target, len(g2.steps)):
        return False
    poset = arr.poset()
    if poset.is_simplicial() and not force_bfs:
        cat = GalleryCat(poset)
        return (cat.from_steps(g1.source, g1.steps)
                == cat.from_steps(g2.source, g2.steps))
    return flip_engine(arr).equivalent_bfs(g1, g2, budget)


def gallery_normal_form(arr: Arrangement,
                        g: PositiveGallery) -> list[PositiveGallery]:
    """The greedy factorization into maximal minimal-gallery factors."""
    poset = arr.poset()
    cat = GalleryCat(poset)
    nf = cat.from_steps(g.source, g.steps)
    out = []
    cur = nf[0]
    for t in nf[1]:
        out.append(gallery_between(poset, cur, t))
        cur = t
    return out


def multiply(arr: Arrangement, a: Frac, b: Frac) -> Frac:
    return loop_calc(arr).mul(a, b)


def invert(arr: Arrangement, a: Frac) -> Frac:
    return loop_calc(arr).inv(a)


def shard_loop(arr: Arrangement, s: Shard) -> Frac:
    return loop_calc(arr).shard_loop(s)


def full_twist(arr: Arrangement) -> Frac:
    return loop_calc(arr).full_twist()


def abelian_degree(arr: Arrangement, word: Sequence[int]) -> list[int]:
    """Multiset (sorted list) of hyperplane indices of a shard-loop word."""
    shards = shard_data(arr).shards()
    return sorted(shards[sid].hyperplane for sid in word)


def delta_gallery(arr: Arrangement) -> PositiveGallery:
    """The fixed lexicographic minimal gallery B -> -B."""
    poset = arr.poset()
    return gallery_between(poset, poset.base, poset.top)


def rewrite_in_delta_generators(arr: Arrangement, delta: PositiveGallery,
                                e: CoverEdge) -> list[tuple[int, int]]:
    """t_e as a word over the loops of delta's edges.

    Returns pairs (i, exponent) with i the 1-based position in delta, in
    left-to-right product order: the conjugate
    (d_{i_s} ... d_{i_1})^{-1} d_k (d_{i_s} ... d_{i_1}) where i_1 < ... < i_s
    are the positions before k whose hyperplane is not in inv(lower(e)).
    """
    poset = arr.poset()
    lower_mask = poset.mask(e.lower)
    k = None
    hyps = [st.edge.hyperplane for st in delta.steps]
    for pos, h in enumerate(hyps, start=1):
        if h == e.hyperplane:
            k = pos
    assert k is not None
    conj = [pos for pos, h in enumerate(hyps[:k - 1], start=1)
            if not lower_mask >> h & 1]
    word = [(i, -1) for i in conj]          # d_{i_1}^{-1} ... d_{i_s}^{-1}
    word.append((k, 1))
    word += [(i, 1) for i in reversed(conj)]
    return word


def eval_delta_word(arr: Arrangement, delta: PositiveGallery,
                    word: Sequence[tuple[int, int]]) -> Frac:
    calc = loop_calc(arr)
    letters = [calc.loop_of_edge(st.edge) for st in delta.steps]
    return calc.eval_signed_word([(letters[i - 1], exp) for i, exp in word])


def subarrangement_quotient(arr: Arrangement, indices: Sequence[int],
                            word: Sequence[int]) -> list[int]:
    """Project a shard-loop word to the subarrangement on `indices`.

    Letters whose hyperplane leaves the subarrangement are deleted; the rest
    map to the subarrangement shard containing the shard's witness.  Returned
    letters are shard ids of arr.subarrangement(indices).
    """
    sub = arr.subarrangement(indices)
    sub_data = shard_data(sub)
    sub_shards = sub_data.shards()
    idx = list(sub.parent_indices)
    shards = shard_data(arr).shards()
    out = []
    for sid in word:
        s = shards[sid]
        if s.hyperplane not in idx:
            continue
        sh = idx.index(s.hyperplane)
        hit = [t for t in sub_shards
               if t.hyperplane == sh and t.contains(sub, s.witness)]
        assert len(hit) == 1, "witness fell on a cutting hyperplane"
        out.append(hit[0].id)
    return out
