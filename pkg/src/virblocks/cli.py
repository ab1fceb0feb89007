"""Command-line entry point: ``virblocks <command> ...``.

Exit codes: 0 when everything checked passes, 1 when a verification fails,
2 on usage errors (including cap violations).  Rationals print as "p/q".
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import indsys, picbasis, positivity, stability, verify
from .divclass import divisor0_from_vir, divisor1_from_vir, fingerprint0
from .fusion import FusionError, VirRing, multi_fusion, rank_genus0, rank_genus1, rank_genus_g
from .rational import fmt, parse

SCHEMA = "v1"
DEFAULT_CAPS = {"k": 6, "n": 12, "g": 2}


class CapError(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    k_max: int = DEFAULT_CAPS["k"]
    n_max: int = DEFAULT_CAPS["n"]
    genus_max: int = DEFAULT_CAPS["g"]

    @classmethod
    def from_env(cls, value: str | None = None) -> Caps:
        """Parse VIRBLOCKS_CAPS, e.g. ``k=8,n=16,g=2``; missing keys keep their defaults."""
        value = os.environ.get("VIRBLOCKS_CAPS", "") if value is None else value
        caps = dict(DEFAULT_CAPS)
        for part in filter(None, (p.strip() for p in value.split(","))):
            key, _, num = part.partition("=")
            key = key.strip().lower()
            if key not in caps or not num.strip().isdigit():
                raise CapError(f"bad VIRBLOCKS_CAPS entry {part!r}; expected k=.., n=.., g=..")
            caps[key] = int(num)
        return cls(caps["k"], caps["n"], caps["g"])

    def check(self, k: int | None = None, n: int | None = None, genus: int | None = None) -> None:
        if k is not None and k > self.k_max:
            raise CapError(f"k={k} exceeds the cap k<={self.k_max} (set VIRBLOCKS_CAPS to raise it)")
        if n is not None and n > self.n_max:
            raise CapError(f"n={n} exceeds the cap n<={self.n_max} (set VIRBLOCKS_CAPS to raise it)")
        if genus is not None and genus > self.genus_max:
            raise CapError(f"genus={genus} exceeds the cap g<={self.genus_max} (set VIRBLOCKS_CAPS to raise it)")


def _labels(s: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"labels must be comma-separated integers, got {s!r}")
    if not out:
        raise argparse.ArgumentTypeError("at least one label is needed")
    return out


def _rational(s: str) -> Fraction:
    try:
        return parse(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/2, got {s!r}")


def _default(o):
    if isinstance(o, Fraction):
        return fmt(o)
    if isinstance(o, (tuple, set, frozenset)):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, default=_default, sort_keys=True)


def _out(obj) -> None:
    print(dumps(obj))


# ---------------------------------------------------------------- commands


def cmd_fusion(args, caps: Caps) -> int:
    caps.check(k=args.k, n=len(args.labels))
    ring = VirRing(args.k)
    prod = multi_fusion(ring, args.labels)
    _out({"k": args.k, "labels": list(args.labels), "product": {str(b): m for b, m in sorted(prod.items())}})
    return 0


def cmd_rank(args, caps: Caps) -> int:
    caps.check(k=args.k, n=len(args.labels), genus=args.genus)
    ring = VirRing(args.k)
    if args.genus == 0:
        r = rank_genus0(ring, args.labels)
    elif args.genus == 1:
        r = rank_genus1(ring, args.labels)
    else:
        r = rank_genus_g(ring, args.genus, args.labels, cap=caps.genus_max)
    print(r)
    return 0


def cmd_divisor(args, caps: Caps) -> int:
    caps.check(k=args.k, n=len(args.labels), genus=args.genus)
    ring = VirRing(args.k)
    d = divisor0_from_vir(ring, args.labels) if args.genus == 0 else divisor1_from_vir(ring, args.labels)
    if args.conformal_block:
        d = -d
    out = {"genus": args.genus, "k": args.k, "labels": list(args.labels),
           "sign": "conformal_block" if args.conformal_block else "coinvariant", "class": d.to_json()}
    if args.genus == 0:
        out["fingerprint"] = [fmt(v) for v in fingerprint0(d)]
    else:
        out["canonical"] = d.canonical_form().to_json()
    _out(out)
    return 0


def cmd_fnef(args, caps: Caps) -> int:
    caps.check(k=args.k, n=len(args.labels), genus=args.genus)
    rep = positivity.check_fnef(VirRing(args.k), args.genus, args.labels, cap=caps.genus_max)
    _out(rep.to_json())
    return 0 if rep.fnef else 1


def cmd_verify(args, caps: Caps) -> int:
    if args.what == "virdeg":
        caps.check(k=args.k_max)
        res = verify.criterion_1(k04_max=args.k_max, k11_max=max(args.k_max, args.k11_max or 0))
    elif args.what == "genvireff":
        if not args.allow_large:
            caps.check(k=args.k)
        res = verify.criterion_5(k=args.k, jobs=args.jobs, keep_records=True)
        records = res.pop("records")
        if args.records:
            _write_jsonl(Path(args.records), records)
    else:
        try:
            reports = [picbasis.basis_report(n) for n in range(1, args.n + 1)]
        except ValueError as e:
            raise CapError(str(e))
        res = {"name": "basis", "reports": reports, "ok": all(r["invertible"] and r["t_ok"] for r in reports)}
    _out(res)
    return 0 if res["ok"] else 1


def cmd_stable(args, caps: Caps) -> int:
    t = stability.TupleSpec(args.labels)
    caps.check(n=t.n)
    lvl = max(stability.critical_level(t), stability.min_level(t))
    caps.check(k=lvl + 1)
    d = stability.stable_divisor(t)
    rep = stability.check_stabilization(t, lvl, lvl + 1)
    out = {
        "labels": list(t.a), "parity": t.parity, "critical_level": stability.critical_level(t),
        "k_first_stable": rep.k_first_stable, "zero": rep.zero, "class": d.to_json(),
        "fingerprint": [fmt(v) for v in fingerprint0(d)],
    }
    if all(a >= 2 for a in t.a) and not rep.zero:
        out["effectivity"] = stability.stable_effectivity(t)
    _out(out)
    return 0 if rep.agree else 1


def cmd_diff(args, caps: Caps) -> int:
    t = stability.TupleSpec(args.labels)
    caps.check(k=args.k, n=t.n)
    rep = stability.check_difference_fnef(t, args.k)
    hyp = stability.difference_hypotheses(t, args.k)
    out = rep.to_json()
    out["hypotheses_hold"] = hyp
    _out(out)
    return 1 if hyp and not rep.fnef else 0


def cmd_indsys(args, caps: Caps) -> int:
    caps.check(n=args.n)
    if args.p < 0:
        raise CapError("p must be nonnegative")
    d = indsys.d_np_class(args.p, args.n)
    rep = indsys.check_dnp_positivity(args.p, args.n)
    axioms = indsys.verify_axioms(indsys.TwoModuleSystem(args.p), min(args.n, args.axiom_n))
    out = {"p": args.p, "n": args.n, "class": d.to_json(), "positivity": rep.to_json(),
           "axioms": {"ok": axioms["ok"], "n_max": axioms["n_max"], "errors": axioms["errors"][:5]}}
    _out(out)
    ok = rep.fnef and axioms["ok"] and (args.p == 0 or rep.fample)
    return 0 if ok else 1


def _write_jsonl(path: Path, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        fh.write(f'{{"schema": "{SCHEMA}"}}\n')
        for row in rows:
            fh.write(dumps(row) + "\n")


def cmd_report(args, caps: Caps) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for cid, fn in verify.CRITERIA.items():
        if cid == 5:
            res = fn(k=5, jobs=args.jobs, keep_records=True)
            _write_jsonl(out_dir / "genvireff_k5.jsonl", res.pop("records"))
        else:
            res = fn()
        if cid == 6:
            (out_dir / "stabilization.csv").write_text(res.pop("csv"))
        results.append(res)
        print(f"{'PASS' if res['ok'] else 'FAIL'} criterion {cid}: {res['name']} ({res['seconds']} s)", file=sys.stderr)
    if args.with_k6:
        res = verify.criterion_5(k=6, jobs=args.jobs, keep_records=True)
        _write_jsonl(out_dir / "genvireff_k6.jsonl", res.pop("records"))
        res["id"] = "5b"
        results.append(res)
        print(f"{'PASS' if res['ok'] else 'FAIL'} criterion 5 (k=6)", file=sys.stderr)
    _write_jsonl(out_dir / "acceptance.jsonl", results)
    ok = all(r["ok"] for r in results)
    _out({"out": str(out_dir), "ok": ok, "passed": sum(r["ok"] for r in results), "total": len(results)})
    return 0 if ok else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="virblocks", description="Virasoro conformal block divisors on M̄_{g,n}.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_kgl(p, genus=True):
        p.add_argument("--k", type=int, required=True, help="Vir_{2,2k+1}")
        if genus:
            p.add_argument("--genus", type=int, default=0)
        p.add_argument("--labels", type=_labels, required=True, help="comma-separated, e.g. 2,2,3")
        return p

    with_kgl(sub.add_parser("fusion", help="fusion product of the labels"), genus=False).set_defaults(func=cmd_fusion)
    with_kgl(sub.add_parser("rank", help="rank of the bundle of coinvariants")).set_defaults(func=cmd_rank)
    p = with_kgl(sub.add_parser("divisor", help="divisor class of the coinvariants"))
    p.add_argument("--conformal-block", action="store_true", help="negate: the conformal block divisor")
    p.set_defaults(func=cmd_divisor)
    with_kgl(sub.add_parser("fnef", help="F-curve intersections of the conformal block divisor")).set_defaults(func=cmd_fnef)

    p = sub.add_parser("verify", help="exhaustive checks")
    vs = p.add_subparsers(dest="what", required=True)
    v = vs.add_parser("virdeg", help="degree-rank law on M̄_{0,4} and M̄_{1,1}")
    v.add_argument("--k-max", type=int, default=6)
    v.add_argument("--k11-max", type=int, default=None, help="upper k for M̄_{1,1} (default: --k-max)")
    v = vs.add_parser("genvireff", help="strict effectivity scan for one k")
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    v.add_argument("--records", help="write per-tuple JSONL here")
    v.add_argument("--allow-large", action="store_true", help="opt in to k beyond the caps (hours of compute)")
    v = vs.add_parser("basis", help="Vir_5 basis of Pic(M̄_{1,n}) and T-values")
    v.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stable", help="stable divisor of a tuple of raw indices")
    p.add_argument("--labels", type=_labels, required=True)
    p.set_defaults(func=cmd_stable)
    p = sub.add_parser("diff", help="difference of divisors at levels k and k+1")
    p.add_argument("--labels", type=_labels, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_diff)
    p = sub.add_parser("indsys", help="the two-module inductive family D_n^p")
    p.add_argument("--p", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--axiom-n", type=int, default=6, help="largest n for the axiom check")
    p.set_defaults(func=cmd_indsys)

    p = sub.add_parser("report", help="run the acceptance suite")
    p.add_argument("what", choices=["all"])
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--with-k6", action="store_true", help="also scan k=6 (about three minutes)")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        caps = Caps.from_env()
        return args.func(args, caps)
    except CapError as e:
        print(f"virblocks: cap violation: {e}", file=sys.stderr)
        return 2
    except (FusionError, ValueError) as e:
        print(f"virblocks: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
