"""Central hyperplane arrangements with exact arithmetic.

An arrangement is a list of pairwise non-parallel linear hyperplanes in R^n
together with a base region B.  Regions are encoded by their sign vectors
(one sign in {+1, -1} per hyperplane) and carry an exact rational witness
point.  The poset of regions orders regions by containment of separation
sets from B; we store separation sets as bitmasks over hyperplane indices.

Region enumeration walks sign vectors depth-first, pruning infeasible
prefixes with the exact LP solver, so no candidate explosion occurs beyond
the actual face structure.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .ratlin import (Vec, dot, parallel, rank, rat, row_echelon_basis,
                     strict_cone_point, vec)

UP = "up"
STAR = "star"


class ArrangementError(ValueError):
    pass


class UnsupportedOperationError(RuntimeError):
    """Raised when an operation requires a simplicial arrangement."""


@dataclass(frozen=True)
class Hyperplane:
    index: int
    normal: Vec

    def eval(self, point: Sequence[Fraction]) -> Fraction:
        return dot(self.normal, point)


@dataclass(frozen=True)
class Region:
    id: int
    signs: tuple[int, ...]          # one of +1/-1 per hyperplane index
    witness: Vec
    mask: int = 0                   # inv(C) as a bitmask, set once B is known


@dataclass
class CoverEdge:
    id: int
    lower: int                      # region id
    upper: int                      # region id
    hyperplane: int
    shard: Optional[int] = None     # filled by the shards module


@dataclass(frozen=True)
class Step:
    """One traversal step of a cover edge: UP moves away from B, STAR back."""
    edge: CoverEdge
    direction: str

    @property
    def source(self) -> int:
        return self.edge.lower if self.direction == UP else self.edge.upper

    @property
    def target(self) -> int:
        return self.edge.upper if self.direction == UP else self.edge.lower


class Arrangement:
    def __init__(self, dimension: int, normals: Sequence[Sequence], *,
                 base_point: Optional[Sequence] = None,
                 base_signs: Optional[Sequence[int]] = None,
                 name: str = "custom"):
        self.dimension = dimension
        self.name = name
        norms = [vec(n) for n in normals]
        if not norms:
            raise ArrangementError("empty arrangement")
        for n in norms:
            if len(n) != dimension:
                raise ArrangementError("normal has wrong length")
            if all(x == 0 for x in n):
                raise ArrangementError("zero normal")
        for i in range(len(norms)):
            for j in range(i + 1, len(norms)):
                if parallel(norms[i], norms[j]):
                    raise ArrangementError(
                        f"hyperplanes {i} and {j} are parallel duplicates")
        self.hyperplanes = [Hyperplane(i, n) for i, n in enumerate(norms)]
        self.rank = rank(norms)
        self._warn_if_reducible()
        if base_point is not None:
            pt = vec(base_point)
            signs = []
            for h in self.hyperplanes:
                v = h.eval(pt)
                if v == 0:
                    raise ArrangementError("base point lies on a hyperplane")
                signs.append(1 if v > 0 else -1)
            self.base_signs = tuple(signs)
        elif base_signs is not None:
            self.base_signs = tuple(int(s) for s in base_signs)
            if set(self.base_signs) - {1, -1} or len(self.base_signs) != len(norms):
                raise ArrangementError("bad base sign vector")
        else:
            self.base_signs = tuple(1 for _ in norms)
        if self._witness_for(self.base_signs) is None:
            raise ArrangementError("infeasible base sign vector")
        self._regions: Optional[list[Region]] = None
        self._by_signs: dict[tuple[int, ...], int] = {}
        self._poset: Optional[RegionPoset] = None

    # -- construction helpers -------------------------------------------------

    def _warn_if_reducible(self) -> None:
        n = len(self.hyperplanes)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if dot(self.hyperplanes[i].normal, self.hyperplanes[j].normal) != 0:
                    parent[find(i)] = find(j)
        if len({find(i) for i in range(n)}) > 1:
            warnings.warn(
                f"arrangement {self.name!r} decomposes into orthogonal blocks "
                "(reducible); library results remain valid but the underlying "
                "theorems are only exercised on irreducible families",
                stacklevel=3)

    def _witness_for(self, signs: Sequence[int]) -> Optional[Vec]:
        ineqs = [tuple(s * x for x in h.normal)
                 for s, h in zip(signs, self.hyperplanes)]
        return strict_cone_point(ineqs)

    # -- regions --------------------------------------------------------------

    def regions(self) -> list[Region]:
        if self._regions is None:
            found: list[tuple[tuple[int, ...], Vec]] = []

            def extend(prefix: list[int]) -> None:
                if len(prefix) == len(self.hyperplanes):
                    w = self._witness_for(prefix)
                    if w is not None:
                        found.append((tuple(prefix), w))
                    return
                ineqs = [tuple(s * x for x in h.normal)
                         for s, h in zip(prefix, self.hyperplanes)]
                if prefix and strict_cone_point(ineqs) is None:
                    return
                for s in (1, -1):
                    extend(prefix + [s])

            extend([])
            found.sort(key=lambda t: t[0])
            regions = []
            for rid, (signs, w) in enumerate(found):
                mask = sum(1 << i for i, (a, b)
                           in enumerate(zip(signs, self.base_signs)) if a != b)
                regions.append(Region(rid, signs, w, mask))
            self._regions = regions
            self._by_signs = {r.signs: r.id for r in regions}
        return self._regions

    def region_by_signs(self, signs: Sequence[int]) -> Optional[Region]:
        self.regions()
        rid = self._by_signs.get(tuple(signs))
        return None if rid is None else self._regions[rid]

    @property
    def base_region(self) -> Region:
        r = self.region_by_signs(self.base_signs)
        assert r is not None
        return r

    def poset(self) -> "RegionPoset":
        if self._poset is None:
            self._poset = RegionPoset(self)
        return self._poset

    def subarrangement(self, indices: Sequence[int]) -> "Arrangement":
        """The arrangement on a subset of hyperplanes, based at the region
        of the subarrangement containing B."""
        idx = sorted(indices)
        sub = Arrangement(
            self.dimension, [self.hyperplanes[i].normal for i in idx],
            base_signs=[self.base_signs[i] for i in idx],
            name=f"{self.name}|{idx}")
        sub.parent_indices = idx
        return sub


def separation_set(arr: Arrangement, c: Region, cp: Region) -> set[int]:
    return {i for i, (a, b) in enumerate(zip(c.signs, cp.signs)) if a != b}


def enumerate_regions(arr: Arrangement) -> list[Region]:
    return arr.regions()


class RegionPoset:
    """Weak order on regions: C <= C' iff inv(C) is a subset of inv(C')."""

    def __init__(self, arr: Arrangement):
        self.arr = arr
        self.regions = arr.regions()
        self.base = arr.base_region.id
        nh = len(arr.hyperplanes)
        self._by_mask = {r.mask: r.id for r in self.regions}
        # neighbor[rid][h] = region id across hyperplane h, or None
        self.neighbor: list[list[Optional[int]]] = []
        for r in self.regions:
            row = []
            for h in range(nh):
                row.append(self._by_mask.get(r.mask ^ (1 << h)))
            self.neighbor.append(row)
        self.covers: list[CoverEdge] = []
        self.cover_up: list[list[CoverEdge]] = [[] for _ in self.regions]
        self.cover_down: list[list[CoverEdge]] = [[] for _ in self.regions]
        for r in self.regions:
            for h in range(nh):
                if not r.mask >> h & 1:
                    other = self.neighbor[r.id][h]
                    if other is not None:
                        e = CoverEdge(len(self.covers), r.id, other, h)
                        self.covers.append(e)
                        self.cover_up[r.id].append(e)
                        self.cover_down[other].append(e)
        self._meet_cache: dict[tuple[int, int, int], int] = {}
        self._join_cache: dict[tuple[int, int, int], int] = {}
        self._simplicial: Optional[bool] = None

    # -- basic order structure ------------------------------------------------

    def mask(self, rid: int) -> int:
        return self.regions[rid].mask

    def leq(self, a: int, b: int) -> bool:
        return self.mask(a) & ~self.mask(b) == 0

    def antipode(self, rid: int) -> int:
        full = (1 << len(self.arr.hyperplanes)) - 1
        return self._by_mask[self.mask(rid) ^ full]

    @property
    def top(self) -> int:
        return self.antipode(self.base)

    def sep_mask(self, a: int, b: int) -> int:
        return self.mask(a) ^ self.mask(b)

    def is_simplicial(self) -> bool:
        if self._simplicial is None:
            r = self.arr.rank
            self._simplicial = all(
                sum(1 for x in row if x is not None) == r
                for row in self.neighbor)
        return self._simplicial

    def require_simplicial(self) -> None:
        if not self.is_simplicial():
            raise UnsupportedOperationError(
                "operation requires a simplicial arrangement")

    # -- meet / join at an arbitrary base -------------------------------------

    def meet_at(self, q: int, a: int, b: int) -> int:
        """Meet of a and b in the weak order re-based at region q."""
        key = (q, a, b) if a <= b else (q, b, a)
        got = self._meet_cache.get(key)
        if got is not None:
            return got
        qm = self.mask(q)
        target = (self.mask(a) ^ qm) & (self.mask(b) ^ qm)
        bounds = [r.id for r in self.regions
                  if (r.mask ^ qm) & ~target == 0]
        best = max(bounds, key=lambda rid: (self.mask(rid) ^ qm).bit_count())
        bm = self.mask(best) ^ qm
        for rid in bounds:
            if (self.mask(rid) ^ qm) & ~bm != 0:
                raise UnsupportedOperationError(
                    "meet does not exist (non-lattice poset of regions)")
        self._meet_cache[key] = best
        return best

    def join_at(self, q: int, a: int, b: int) -> int:
        key = (q, a, b) if a <= b else (q, b, a)
        got = self._join_cache.get(key)
        if got is not None:
            return got
        qm = self.mask(q)
        target = (self.mask(a) ^ qm) | (self.mask(b) ^ qm)
        bounds = [r.id for r in self.regions
                  if target & ~(r.mask ^ qm) == 0]
        best = min(bounds, key=lambda rid: (self.mask(rid) ^ qm).bit_count())
        bm = self.mask(best) ^ qm
        for rid in bounds:
            if bm & ~(self.mask(rid) ^ qm) != 0:
                raise UnsupportedOperationError(
                    "join does not exist (non-lattice poset of regions)")
        self._join_cache[key] = best
        return best

    def meet(self, a: int, b: int) -> int:
        self.require_simplicial()
        return self.meet_at(self.base, a, b)

    def join(self, a: int, b: int) -> int:
        self.require_simplicial()
        return self.join_at(self.base, a, b)

    def pop(self, c: int) -> int:
        """Meet of c with everything it covers (pop-stack sorting)."""
        self.require_simplicial()
        out = c
        for e in self.cover_down[c]:
            out = self.meet_at(self.base, out, e.lower)
        return out

    # -- galleries ------------------------------------------------------------

    def edge_between(self, a: int, b: int) -> CoverEdge:
        h = self.sep_mask(a, b).bit_length() - 1
        assert self.sep_mask(a, b).bit_count() == 1
        lower = a if not self.mask(a) >> h & 1 else b
        for e in self.cover_up[lower]:
            if e.hyperplane == h:
                return e
        raise AssertionError("adjacent regions without a cover edge")

    def minimal_gallery(self, src: int, dst: int) -> list[Step]:
        """The lexicographically-least positive minimal gallery src -> dst.

        At each step the smallest-index separating hyperplane whose crossing
        stays inside the region graph is chosen, so the result is a fixed
        function of (src, dst).
        """
        steps: list[Step] = []
        cur = src
        nh = len(self.arr.hyperplanes)
        while cur != dst:
            sep = self.sep_mask(cur, dst)
            for h in range(nh):
                if sep >> h & 1:
                    nxt = self.neighbor[cur][h]
                    if nxt is not None:
                        e = self.edge_between(cur, nxt)
                        d = UP if e.lower == cur else STAR
                        steps.append(Step(e, d))
                        cur = nxt
                        break
            else:
                raise AssertionError("stuck gallery; no crossable wall")
        return steps

    # -- export ---------------------------------------------------------------

    def to_dot(self, *, edge_label: str = "hyperplane") -> str:
        lines = ["digraph weak_order {"]
        for r in self.regions:
            shape = "doublecircle" if r.id in (self.base, self.top) else "circle"
            lines.append(f'  r{r.id} [label="{r.id}", shape={shape}];')
        for e in self.covers:
            label = e.shard if edge_label == "shard" else e.hyperplane
            lines.append(f'  r{e.lower} -> r{e.upper} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "regions": [
                {"id": r.id,
                 "signs": ["+" if s > 0 else "-" for s in r.signs],
                 "inv": sorted(i for i in range(len(self.arr.hyperplanes))
                               if r.mask >> i & 1)}
                for r in self.regions],
            "covers": [
                {"lower": e.lower, "upper": e.upper, "hyperplane": e.hyperplane,
                 "shard": e.shard}
                for e in self.covers],
        }


# -- ingestion ----------------------------------------------------------------

def parse_arrangement(doc) -> Arrangement:
    """Build an Arrangement from a JSON document (string or parsed dict)."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        dim = int(doc["dimension"])
        normals = [[rat(x) for x in row] for row in doc["hyperplanes"]]
        base = doc.get("base", {})
    except (KeyError, TypeError) as exc:
        raise ArrangementError(f"malformed arrangement document: {exc}")
    kwargs = {}
    if "point" in base:
        kwargs["base_point"] = [rat(x) for x in base["point"]]
    elif "signs" in base:
        kwargs["base_signs"] = [1 if str(s) in ("+", "1") else -1
                                for s in base["signs"]]
    return Arrangement(dim, normals, name=doc.get("name", "parsed"), **kwargs)


def _i2_normals(m: int) -> list[Vec]:
    """Rational normals for m lines through the origin at angles k*pi/m.

    The exact values of cos/sin are irrational for most m; high-precision
    rational approximations preserve the cyclic order, which is all the
    combinatorics depends on.  The order is verified exactly below.
    """
    import math

    scalebits = 10 ** 6
    normals = []
    for k in range(m):
        a = math.pi * k / m
        nx = Fraction(round(-math.sin(a) * scalebits), scalebits)
        ny = Fraction(round(math.cos(a) * scalebits), scalebits)
        normals.append((nx, ny))
    for j in range(m):
        for k in range(j + 1, m):
            cross = (normals[j][0] * normals[k][1]
                     - normals[j][1] * normals[k][0])
            if cross <= 0:
                raise AssertionError("cyclic order lost in rational rounding")
    return normals


def builtin_arrangement(name: str, *params: int) -> Arrangement:
    """Built-in families: I2(m), braid A_{n}, type B_n, type D_n.

    The base region is always the all-plus region of the listed normals:
    for I2(m) the sector between the first and last line; for A/B/D the
    dominant chamber x_1 > x_2 > ... (> 0 / > |x_n|).
    """
    tag = name.upper()
    if tag == "I2":
        (m,) = params
        if m < 3:
            raise ArrangementError("I2(m) needs m >= 3")
        return Arrangement(2, _i2_normals(m), name=f"I2({m})")
    if tag == "A":
        (n,) = params
        if n < 1:
            raise ArrangementError("A_n needs n >= 1")
        d = n + 1
        normals = []
        for i in range(d):
            for j in range(i + 1, d):
                v = [0] * d
                v[i], v[j] = 1, -1
                normals.append(v)
        return Arrangement(d, normals, name=f"A{n}")
    if tag == "B":
        (n,) = params
        if n < 2:
            raise ArrangementError("B_n needs n >= 2")
        normals = []
        for i in range(n):
            for j in range(i + 1, n):
                v = [0] * n
                v[i], v[j] = 1, -1
                normals.append(list(v))
        for i in range(n):
            for j in range(i + 1, n):
                v = [0] * n
                v[i], v[j] = 1, 1
                normals.append(list(v))
        for i in range(n):
            v = [0] * n
            v[i] = 1
            normals.append(v)
        return Arrangement(n, normals, name=f"B{n}")
    if tag == "D":
        (n,) = params
        if n < 3:
            raise ArrangementError("D_n needs n >= 3")
        normals = []
        for i in range(n):
            for j in range(i + 1, n):
                v = [0] * n
                v[i], v[j] = 1, -1
                normals.append(list(v))
        for i in range(n):
            for j in range(i + 1, n):
                v = [0] * n
                v[i], v[j] = 1, 1
                normals.append(list(v))
        return Arrangement(n, normals, name=f"D{n}")
    raise ArrangementError(f"unknown builtin family {name!r}")


def parse_family(spec: str) -> Arrangement:
    """Parse a tag like 'I2:5', 'A3', 'B3' into a builtin arrangement."""
    s = spec.strip()
    if ":" in s:
        fam, _, p = s.partition(":")
        return builtin_arrangement(fam, int(p))
    if s[:2].upper() == "I2":
        return builtin_arrangement("I2", int(s[2:]))
    return builtin_arrangement(s[0], int(s[1:]))
