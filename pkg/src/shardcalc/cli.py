"""Command line front end.

Subcommands mirror the library modules: `arr` (regions and weak order),
`shards` (shard census and shard order), `salvetti` (gallery normal forms
and loops), `monoid` (the divisor interval of the full twist), `cox`
(Coxeter groups, braids, Snap) and `verify` (theorem checks producing a
pass/fail report).

Every command prints deterministic output; `--json` switches to a stable
machine-readable report.  Exit codes: 0 success / all checks pass, 1 a
verification check failed, 2 usage error, 3 a search exceeded its state
budget.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, List, Optional, Sequence

from . import coxbraid, manifest, salvetti, shardmonoid
from . import shards as shards_mod
from .arrangement import (Arrangement, ArrangementError, parse_arrangement,
                          parse_family)
from .salvetti import ResourceLimitError


def _load_arrangement(args) -> Arrangement:
    if getattr(args, "builtin", None):
        return parse_family(args.builtin)
    if getattr(args, "file", None):
        with open(args.file, "r", encoding="utf-8") as fh:
            return parse_arrangement(json.load(fh))
    raise ArrangementError("need --builtin TAG or --file PATH")


def _emit(args, payload: dict, text_lines: List[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)


def _int_list(text: str) -> List[int]:
    text = text.strip()
    if not text:
        return []
    return [int(p) for p in text.replace(",", " ").split()]


# ---------------------------------------------------------------------------
# verification reports


class Report:
    """Accumulates (check id, status, observed, expected, provenance) rows."""

    def __init__(self, suite: str, descriptor: str):
        self.suite = suite
        self.descriptor = descriptor
        self.rows: List[dict] = []

    def check(self, cid: str, observed, expected, provenance: str,
              seconds: float) -> None:
        self.rows.append({
            "check": cid,
            "status": "PASS" if observed == expected else "FAIL",
            "observed": observed,
            "expected": expected,
            "provenance": provenance,
            "seconds": round(seconds, 3),
        })

    def run(self, cid: str, fn: Callable[[], object], expected,
            provenance: str) -> None:
        t0 = time.monotonic()
        observed = fn()
        self.check(cid, observed, expected, provenance, time.monotonic() - t0)

    @property
    def ok(self) -> bool:
        return all(r["status"] == "PASS" for r in self.rows)

    def payload(self) -> dict:
        return {
            "suite": self.suite,
            "descriptor": self.descriptor,
            "checks": self.rows,
            "ok": self.ok,
        }

    def lines(self) -> List[str]:
        out = []
        for r in self.rows:
            out.append(f"{r['check']}: {r['status']} "
                       f"observed={r['observed']!r} expected={r['expected']!r} "
                       f"[{r['provenance']}] ({r['seconds']}s)")
        out.append(f"suite {self.suite} ({self.descriptor}): "
                   f"{'PASS' if self.ok else 'FAIL'}")
        return out


# ---------------------------------------------------------------------------
# arr / shards / salvetti / monoid commands


def cmd_arr(args) -> int:
    arr = _load_arrangement(args)
    poset = arr.poset()
    if args.action == "regions":
        regions = arr.regions()
        if args.count:
            _emit(args, {"arrangement": arr.name, "regions": len(regions)},
                  [str(len(regions))])
            return 0
        payload = {"arrangement": arr.name,
                   "regions": [{"id": r.id, "signs": list(r.signs)}
                               for r in regions]}
        _emit(args, payload,
              [f"{r.id}: {''.join('+' if s > 0 else '-' for s in r.signs)}"
               for r in regions])
        return 0
    # action == "poset"
    if args.dot:
        print(poset.to_dot())
        return 0
    payload = poset.to_json()
    _emit(args, payload,
          [f"arrangement {arr.name}: {len(poset.regions)} regions, "
           f"{len(poset.covers)} cover edges, base {poset.base}, "
           f"simplicial {poset.is_simplicial()}"])
    return 0


def cmd_shards(args) -> int:
    arr = _load_arrangement(args)
    data = shards_mod.shard_data(arr)
    if args.action == "list":
        rows = []
        lines = []
        for s in data.shards():
            cuts = sorted(s.cut_signs)
            rows.append({"id": s.id, "hyperplane": s.hyperplane,
                         "cut_signs": [list(c) for c in cuts]})
            lines.append(f"shard {s.id}: hyperplane {s.hyperplane}, "
                         f"cut by {cuts if cuts else 'nothing'}")
        _emit(args, {"arrangement": arr.name, "shards": rows}, lines)
        return 0
    # action == "order": the shard intersection order on regions
    spo = data.intersection_order()
    if args.dot:
        print(spo.to_dot())
        return 0
    covers = spo.covers()
    _emit(args, {"arrangement": arr.name, "regions": spo.n,
                 "covers": [list(c) for c in covers]},
          [f"{a} -> {b}" for a, b in covers])
    return 0


def _frac_payload(frac) -> dict:
    (num, den) = frac
    return {"source": num[0],
            "numerator": list(num[1]),
            "denominator": list(den[1])}


def cmd_salvetti(args) -> int:
    arr = _load_arrangement(args)
    calc = salvetti.loop_calc(arr)
    if args.action == "loop":
        shard = shards_mod.shard_data(arr).shards()[args.shard]
        frac = calc.shard_loop(shard)
        payload = {"arrangement": arr.name, "shard": args.shard,
                   "loop": _frac_payload(frac)}
        _emit(args, payload,
              [f"shard {args.shard} loop: num factors "
               f"{list(frac[0][1])}, den factors {list(frac[1][1])} "
               f"(targets of gallery factors from region {frac[0][0]})"])
        return 0
    if args.action == "full-twist":
        frac = calc.full_twist()
        _emit(args, {"arrangement": arr.name, "full_twist": _frac_payload(frac)},
              [f"full twist: num factors {list(frac[0][1])}"])
        return 0
    # action == "normal-form": normalize a positive gallery given by the
    # regions its factors should reach, starting at the base region
    targets = tuple(_int_list(args.targets))
    pos = calc.cat.normalize(calc.base, targets)
    _emit(args, {"arrangement": arr.name, "source": pos[0],
                 "factors": list(pos[1])},
          [f"normal form from region {pos[0]}: factor targets {list(pos[1])}"])
    return 0


def cmd_monoid(args) -> int:
    arr = _load_arrangement(args)
    ip = shardmonoid.enumerate_interval(arr)
    if args.action == "interval":
        if args.dot:
            print(ip.to_dot())
            return 0
        lat, witness = ip.is_lattice()
        payload = {"arrangement": arr.name,
                   "elements": len(ip.elements),
                   "rank_generating_function": ip.rank_generating_function(),
                   "maximal_chains": ip.max_chain_count(),
                   "lattice": lat}
        if witness is not None:
            payload["witness"] = list(witness)
        if args.json:
            print(json.dumps(payload | {"interval": ip.to_json()}, indent=2))
            return 0
        _emit(args, payload,
              [f"elements {payload['elements']}",
               f"rank generating function {payload['rank_generating_function']}",
               f"maximal chains {payload['maximal_chains']}",
               f"lattice {lat}"])
        return 0
    if args.action == "crackle":
        x = shardmonoid.crackle(arr, args.region)
        _emit(args, {"region": args.region, "element": x.id,
                     "word": list(x.word)},
              [f"crackle({args.region}) = element {x.id}, word {list(x.word)}"])
        return 0
    if args.action == "pow":
        x = shardmonoid.pow_map(arr, args.region)
        _emit(args, {"region": args.region, "element": x.id,
                     "word": list(x.word)},
              [f"pow({args.region}) = element {x.id}, word {list(x.word)}"])
        return 0
    # action == "omega"
    y = ip.omega(args.element)
    _emit(args, {"element": args.element, "omega": y},
          [f"omega({args.element}) = {y}"])
    return 0


# ---------------------------------------------------------------------------
# cox commands


def cmd_cox(args) -> int:
    model = coxbraid.parse_group(args.type)
    if args.action == "group":
        payload = {"group": model.name, "order": len(model.elements),
                   "longest_length": model.length[model.w0],
                   "reflections": len(model.reflections),
                   "generators": list(model.gen_names)}
        _emit(args, payload,
              [f"{model.name}: order {payload['order']}, "
               f"longest element length {payload['longest_length']}, "
               f"{payload['reflections']} reflections"])
        return 0
    if args.action == "snap":
        word = _int_list(args.elem)
        w = model.e
        for gi in word:
            w = model.mult(w, model.S[gi])
        sn = coxbraid.snap(model, w)
        factors = [list(model.reduced_word(f)) for f in sn.factors]
        _emit(args, {"group": model.name, "element_word": word,
                     "snap_factors": factors,
                     "snap_word": list(sn.word())},
              [f"Snap factors (reduced words): {factors}",
               f"Snap word: {list(sn.word())}"])
        return 0
    if args.action == "nc":
        c = _int_list(args.c) if args.c else list(range(model.n))
        nc = coxbraid.nc_lattice(model, c)
        ranks: List[int] = []
        for w in nc.elements:
            r = nc.rank(w)
            while len(ranks) <= r:
                ranks.append(0)
            ranks[r] += 1
        _emit(args, {"group": model.name, "c": c,
                     "elements": len(nc.elements), "rank_sizes": ranks},
              [f"NC({model.name}, c={c}): {len(nc.elements)} elements, "
               f"rank sizes {ranks}"])
        return 0
    # action == "verify"
    suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    reports = [run_cox_suite(model, name) for name in suites]
    return _finish_reports(args, reports)


# ---------------------------------------------------------------------------
# verification suites


def run_cox_suite(model: coxbraid.CoxeterGroupModel, name: str) -> Report:
    rep = Report(name, model.name)
    if name == "snap":
        rep.run("phi-snap-pop-and-anchors",
                lambda: coxbraid.snap_check(model), True,
                manifest.PROV_ORACLE + ": projection and anchor elements")
        rep.run("snap-embedding",
                lambda: coxbraid.snap_embedding_check(model), True,
                manifest.PROV_ORACLE + ": shard order vs left divisibility")
        rep.run("snap-crackle-pop",
                lambda: coxbraid.snap_crackle_pop_check(model), True,
                manifest.PROV_ORACLE + ": braid normal-form equality")
        rep.run("conjugates-match-shards",
                lambda: coxbraid.shard_conjugate_check(model), True,
                manifest.PROV_ORACLE + ": conjugate classes vs shard labels")
        if model.name == "I2(4)":
            ent = manifest.MANIFEST["snap"]["i2-4-classes"]
            rep.run("i2-4-classes",
                    lambda: len(coxbraid.shard_conjugate_classes(model)),
                    ent["expected"], ent["provenance"])
    elif name == "inv":
        rep.run("inv-decomposition",
                lambda: coxbraid.inv_decomposition_check(model), True,
                manifest.PROV_ORACLE + ": multiset identity for every element")
        rep.run("lift-weak-order-iso",
                lambda: coxbraid.lift_iso_check(model), True,
                manifest.PROV_ORACLE + ": exhaustive divisibility comparison")
    elif name == "nc":
        for c in coxbraid.all_coxeter_words(model):
            rep.run(f"catalan-c={''.join(map(str, c))}",
                    lambda c=c: coxbraid.catalan_corollary_checks(model, c),
                    True, manifest.PROV_ORACLE + ": brute-force poset isomorphism")
    elif name == "sort":
        if model.family == "I2":
            ent = manifest.MANIFEST["nc"]["i2-sortables"]
            rep.run("sortable-count",
                    lambda: len(coxbraid.sortables(model, (0, 1))),
                    model.param + 2, ent["provenance"])
        else:
            for c in coxbraid.all_coxeter_words(model):
                expected = (manifest.MANIFEST["nc"]["s4-sortables"]["expected"]
                            if model.name == "A3"
                            else len(coxbraid.nc_lattice(model, c).elements))
                rep.run(f"sortable-count-c={''.join(map(str, c))}",
                        lambda c=c: len(coxbraid.sortables(model, c)),
                        expected,
                        manifest.MANIFEST["nc"]["s4-sortables"]["provenance"]
                        if model.name == "A3" else
                        manifest.PROV_ORACLE + ": compared with |NC(W, c)|")
    else:
        raise UsageError(f"unknown cox suite {name!r} "
                         "(choose from snap, inv, nc, sort)")
    return rep


def run_suite(name: str, args) -> Report:
    if name == "rank2":
        m = args.m
        if m is None:
            raise UsageError("suite rank2 needs --m")
        arr = parse_family(f"I2:{m}")
        ip = shardmonoid.enumerate_interval(arr)
        rep = Report(name, arr.name)
        man = manifest.MANIFEST["rank2"]
        rep.run("rank-generating-function", ip.rank_generating_function,
                manifest.rank2_rank_vector(m),
                man["rank-generating-function"]["provenance"])
        rep.run("maximal-chains", ip.max_chain_count,
                manifest.rank2_chain_count(m),
                man["maximal-chains"]["provenance"])
        rep.run("lattice", lambda: ip.is_lattice()[0],
                man["lattice"]["expected"], man["lattice"]["provenance"])
        return rep
    if name == "a3-interval":
        arr = parse_family("A3")
        ip = shardmonoid.enumerate_interval(arr)
        rep = Report(name, arr.name)
        man = manifest.MANIFEST["a3-interval"]
        rep.run("elements", lambda: len(ip.elements),
                man["elements"]["expected"], man["elements"]["provenance"])
        rep.run("maximal-chains", ip.max_chain_count,
                man["maximal-chains"]["expected"],
                man["maximal-chains"]["provenance"])
        rep.run("lattice", lambda: ip.is_lattice()[0],
                man["lattice"]["expected"], man["lattice"]["provenance"])
        return rep
    arr = _load_arrangement(args)
    rep = Report(name, arr.name)
    if name == "loops":
        calc = salvetti.loop_calc(arr)
        man = manifest.MANIFEST["loops"]

        def loop_classes():
            return len({calc.loop_of_edge(e) for e in calc.poset.covers})

        shard_count = len(shards_mod.compute_shards(arr))
        rep.run("classes-equal-shards", loop_classes, shard_count,
                man["classes-equal-shards"]["provenance"])
        if arr.name == "A3":
            rep.run("a3-classes", loop_classes, man["a3-classes"]["expected"],
                    man["a3-classes"]["provenance"])
        if arr.name.startswith("I2("):
            m = int(arr.name[3:-1])
            rep.run("i2-classes", loop_classes, 2 * m - 2,
                    man["i2-classes"]["provenance"])
        return rep
    ip = shardmonoid.enumerate_interval(arr)
    if name == "omega":
        def involution():
            return all(ip.omega(ip.omega(x.id)) == x.id for x in ip.elements)

        def order_reversing():
            return all(ip.leq(a.id, b.id) == ip.leq(ip.omega(b.id), ip.omega(a.id))
                       for a in ip.elements for b in ip.elements)

        def palindrome():
            rv = ip.rank_generating_function()
            return rv == rv[::-1]

        rep.run("involution", involution, True,
                manifest.PROV_ORACLE + ": checked on every element")
        rep.run("order-reversing", order_reversing, True,
                manifest.PROV_ORACLE + ": all pairs compared")
        rep.run("palindromic-ranks", palindrome, True,
                manifest.PROV_ORACLE + ": rank vector equals its reverse")
        return rep
    if name == "crackle":
        rep.run("crackle-embedding",
                lambda: shardmonoid.crackle_embedding_check(arr), True,
                manifest.PROV_ORACLE + ": shard order vs interval order")
        return rep
    if name == "pow":
        rep.run("pow-embedding",
                lambda: shardmonoid.pow_embedding_check(arr), True,
                manifest.PROV_ORACLE + ": weak order vs interval order")
        return rep
    if name == "all-shards":
        rep.run("letters-below-crackle",
                lambda: shardmonoid.all_shards_check(arr), True,
                manifest.PROV_ORACLE + ": letters of lower edges vs shard order")
        return rep
    raise UsageError(f"unknown suite {name!r}")


class UsageError(Exception):
    pass


def _finish_reports(args, reports: List[Report]) -> int:
    payload = {"reports": [r.payload() for r in reports],
               "ok": all(r.ok for r in reports)}
    lines: List[str] = []
    for r in reports:
        lines.extend(r.lines())
    _emit(args, payload, lines)
    return 0 if payload["ok"] else 1


def cmd_verify(args) -> int:
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    return _finish_reports(args, [run_suite(n, args) for n in names])


# ---------------------------------------------------------------------------
# argument parsing


def _add_source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", help="builtin family tag, e.g. I2:4, A3, B3")
    p.add_argument("--file", help="JSON arrangement file")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="JSON output")
    p.add_argument("--budget", type=int, default=salvetti.DEFAULT_BUDGET,
                   help="state budget for fallback searches")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="shardcalc",
        description="shard combinatorics of real central hyperplane arrangements")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("arr", help="regions and weak order")
    p.add_argument("action", choices=["regions", "poset"])
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--count", action="store_true")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=cmd_arr)

    p = sub.add_parser("shards", help="shard census and shard order")
    p.add_argument("action", choices=["list", "order"])
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=cmd_shards)

    p = sub.add_parser("salvetti", help="gallery normal forms and loops")
    p.add_argument("action", choices=["loop", "full-twist", "normal-form"])
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--shard", type=int, default=0)
    p.add_argument("--targets", default="",
                   help="comma-separated region targets of the gallery factors")
    p.set_defaults(fn=cmd_salvetti)

    p = sub.add_parser("monoid", help="divisor interval of the full twist")
    p.add_argument("action", choices=["interval", "crackle", "pow", "omega"])
    _add_source_flags(p)
    _add_common_flags(p)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--region", type=int, default=0)
    p.add_argument("--element", type=int, default=0)
    p.set_defaults(fn=cmd_monoid)

    p = sub.add_parser("cox", help="Coxeter groups, braids and Snap")
    p.add_argument("action", choices=["group", "snap", "nc", "verify"])
    p.add_argument("--type", required=True, help="group tag, e.g. A3, B3, I2:5")
    _add_common_flags(p)
    p.add_argument("--elem", default="", help="word of generator indices")
    p.add_argument("--c", default="", help="generator order for c, e.g. 0,1,2")
    p.add_argument("--suite", default="snap,inv",
                   help="comma-separated list from snap,inv,nc,sort")
    p.set_defaults(fn=cmd_cox)

    p = sub.add_parser("verify", help="theorem verification suites")
    p.add_argument("--suite", required=True,
                   help="comma-separated list from rank2, a3-interval, loops, "
                        "omega, crackle, pow, all-shards")
    p.add_argument("--m", type=int, help="parameter for the rank2 suite")
    _add_source_flags(p)
    _add_common_flags(p)
    p.set_defaults(fn=cmd_verify)
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ArrangementError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
