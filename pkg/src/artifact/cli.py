"""Command-line front end: build, inspect, export and verify.

Every report is JSON with a ``schema_version`` field unless a text or dot
format is requested.  ``verify`` exits 0 when everything is Proved, 2 when
something is Unknown within budget and 1 on a refutation or mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from pathlib import Path

from .arrangement import arrangement_of
from .dic import Budget, functoriality_configurations, functoriality_words, prove_equal, verify_proto_langlands
from .errors import ArtifactError
from .stratpi1 import Verdict, coinvariant_presentation, presentation_invariants, stratum_presentation
from .rootsys import parse_simple_subset, parse_system
from .weylact import build_orbit_table, orbit_report

SCHEMA_VERSION = 1
OUTPUT_ENV = "ARTIFACT_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN = 0, 1, 2


@dataclass
class RunConfig:
    """Options shared by all commands.  The seed determines every sampled choice."""

    system: str | None = None
    seed: int = 0
    budget: Budget = field(default_factory=Budget)
    output: str | None = None
    format: str = "json"
    jobs: int = 1

    def to_json(self) -> dict:
        return {"system": self.system, "seed": self.seed,
                "budget": {"max_len": self.budget.max_len, "max_states": self.budget.max_states}}


def _config(args) -> RunConfig:
    return RunConfig(
        system=getattr(args, "system", None),
        seed=args.seed,
        budget=Budget(args.max_len, args.max_states),
        output=args.output,
        format=getattr(args, "format", "json"),
        jobs=max(1, args.jobs),
    )


# ---------------------------------------------------------------------- output


def _csv(rows: list) -> str:
    buf = io.StringIO()
    keys = list(rows[0]) if rows else []
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def _emit(cfg: RunConfig, name: str, payload, text: str | None = None, rows: list | None = None) -> None:
    """Write a report; csv needs ``rows`` and text/dot need ``text``, otherwise JSON is written."""
    if cfg.format == "csv" and rows is not None:
        out = f"# schema_version={SCHEMA_VERSION}\n" + _csv(rows)
    elif cfg.format in ("text", "dot") and text is not None:
        out = text if text.endswith("\n") else text + "\n"
    else:
        out = json.dumps({"schema_version": SCHEMA_VERSION, **payload}, indent=2, sort_keys=True) + "\n"
    target = cfg.output
    if target is None and os.environ.get(OUTPUT_ENV):
        ext = {"json": "json", "dot": "dot", "csv": "csv"}.get(cfg.format, "txt")
        target = str(Path(os.environ[OUTPUT_ENV]) / f"{name}.{ext}")
    if target is None or target == "-":
        sys.stdout.write(out)
    else:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(out)


def _pmap(fn, items, jobs: int) -> list:
    """Map in order, in worker processes when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _exit_code(verdicts) -> int:
    verdicts = list(verdicts)
    if any(v in (str(Verdict.REFUTED), False, "mismatch") for v in verdicts):
        return EXIT_FAIL
    if any(v in (str(Verdict.UNKNOWN), None) for v in verdicts):
        return EXIT_UNKNOWN
    return EXIT_OK


def _bool_verdict(ok: bool) -> str:
    # the equality checks below only ever prove; failing to prove is Unknown
    return str(Verdict.PROVED if ok else Verdict.UNKNOWN)


# ---------------------------------------------------------------------- parsing helpers


def parse_flat(rs, text: str):
    """``full``, ``bottom``, a flat id such as ``z0.2`` or a Levi type such as ``l=alpha*`` / ``l=1,2``."""
    arr = arrangement_of(rs)
    t = text.strip()
    if t in ("full", "top"):
        return arr.flat(frozenset())
    if t in ("bottom", "zero"):
        return arr.flat(frozenset(range(arr.n)))
    if t.startswith("z"):
        return arr.flat(frozenset(int(x) for x in t[1:].split(".")))
    if t.startswith("l="):
        t = t[2:]
    subset = parse_simple_subset(rs, t)
    return arr.flat(frozenset(rs.simple_roots[i] for i in subset))


def _all_types(rs) -> list[frozenset]:
    return [frozenset(c) for k in range(rs.rank + 1) for c in combinations(range(rs.rank), k)]


# ---------------------------------------------------------------------- inspection commands


def cmd_faces(args) -> int:
    cfg = _config(args)
    rs = parse_system(args.system)
    arr = arrangement_of(rs)
    if args.level == "chambers":
        faces = list(arr.chambers)
    elif args.level == "rays":
        faces = arr.faces_of_dim(arr.lineality_dim + 1)
    elif args.level == "minimal":
        faces = arr.faces_of_dim(arr.lineality_dim)
    elif args.level == "codim1":
        faces = arr.faces_of_dim(arr.ambient_dim - 1)
    else:
        faces = list(range(len(arr.faces)))
    if cfg.format == "dot":
        _emit(cfg, "faces", {}, arr.to_dot())
        return EXIT_OK
    rows = [{"id": arr.faces[f].id, "dim": arr.faces[f].dim} for f in faces]
    payload = {"system": rs.name, "level": args.level, "count": len(rows), "faces": rows}
    _emit(cfg, "faces", payload, f"{rs.name} {args.level}: {len(rows)} faces", rows)
    return EXIT_OK


def cmd_flats(args) -> int:
    cfg = _config(args)
    rs = parse_system(args.system)
    arr = arrangement_of(rs)
    table = build_orbit_table(rs)
    orbit_of = {z: k for k, orb in enumerate(table.flat_orbits) for z in orb}
    rows = []
    for fl in arr.flats():
        rows.append({"id": fl.id, "dim": fl.dim, "codim": arr.ambient_dim - fl.dim,
                     "orbit": orbit_of[fl.zero_set], "wall_classes": len(fl.induced_walls)})
    by_codim: dict = {}
    for r in rows:
        c = by_codim.setdefault(r["codim"], {"flats": 0, "orbits": set()})
        c["flats"] += 1
        c["orbits"].add(r["orbit"])
    summary = {str(k): {"flats": v["flats"], "orbits": len(v["orbits"])} for k, v in sorted(by_codim.items())}
    lines = [f"{rs.name}: {len(rows)} flats"] + [f"  codim {k}: {v['flats']} flats in {v['orbits']} orbits"
                                                 for k, v in summary.items()]
    _emit(cfg, "flats", {"system": rs.name, "flats": rows, "by_codim": summary}, "\n".join(lines), rows)
    return EXIT_OK


def cmd_orbits(args) -> int:
    cfg = _config(args)
    rs = parse_system(args.system)
    rep = orbit_report(rs)
    rep.pop("schema_version", None)
    lines = [f"{rs.name}: {len(rep['face_orbits'])} face orbits, {len(rep['flat_orbits'])} flat orbits"]
    for lv in rep["levi"]:
        lines.append(f"  flat {lv['flat']} dim {lv['dim']}: orbit {lv['orbit_size']}, W(l) = {lv['W(l)']}")
    _emit(cfg, "orbits", rep, "\n".join(lines))
    return EXIT_OK


def cmd_groupoid(args) -> int:
    cfg = _config(args)
    rs = parse_system(args.system)
    fl = parse_flat(rs, args.flat)
    P = coinvariant_presentation(rs, fl) if args.quotient else stratum_presentation(rs, fl)
    inv = presentation_invariants(P)
    if cfg.format == "dot":
        _emit(cfg, "groupoid", {}, P.to_dot())
        return EXIT_OK
    pj = P.to_json()
    pj.pop("schema_version", None)
    payload = {"system": rs.name, "flat": fl.id, "quotient": bool(args.quotient), "presentation": pj,
               "invariants": inv, "meta": {k: v for k, v in P.meta.items() if k != "object_chambers"}}
    text = (f"{rs.name} flat {fl.id}{' (quotient)' if args.quotient else ''}: {inv['object_count']} objects, "
            f"{inv['generator_count']} generators, {inv['relation_count']} relations, "
            f"vertex group abelianization {inv['abelianization']}")
    _emit(cfg, "groupoid", payload, text)
    return EXIT_OK


# ---------------------------------------------------------------------- verify


def _proto_job(item):
    name, faces, budget = item
    arr = arrangement_of(parse_system(name))
    rep = verify_proto_langlands(arr, *faces, budget=budget)
    js = rep.to_json()
    return {"faces": js["faces"], "collinearity_cert": js["collinearity_cert"], "verdict": js["proof"]["verdict"],
            "proved": rep.proved, "moves": js["proof"]["moves"]}


def verify_proto(cfg: RunConfig, args) -> tuple[dict, list]:
    rs = parse_system(args.system)
    arr = arrangement_of(rs)
    if args.instance:
        toks = [t.strip() for t in args.instance.split(",")]
        triples = [tuple(arr.idx(t) for t in toks)]
    else:
        n = len(arr.faces)
        triples = [(p1, p, p2) for p in range(n) for p1 in range(n) if arr.leq(p, p1)
                   for p2 in range(n) if arr.leq(p, p2)]
    reports = _pmap(_proto_job, [(rs.name, t, cfg.budget) for t in triples], cfg.jobs)
    verdicts = [r["verdict"] if r["collinearity_cert"]["valid"] else "mismatch" for r in reports]
    return {"system": rs.name, "count": len(reports), "instances": reports}, verdicts


def _langlands_job(item):
    from .pcox import verify_langlands
    name, t1, t2, t3, budget = item
    rs = parse_system(name)
    rep = verify_langlands(rs, t1, t2, t3, budget)
    js = rep.to_json()
    js["term_count"] = rep.term_count
    return js


def verify_langlands_cmd(cfg: RunConfig, args) -> tuple[dict, list]:
    rs = parse_system(args.system)
    types = _all_types(rs)
    if args.all:
        t3s = [parse_simple_subset(rs, args.through)] if args.through else [frozenset(range(rs.rank))]
        items = [(rs.name, a, b, t3, cfg.budget) for t3 in t3s for a in types for b in types if a <= t3 and b <= t3]
    else:
        t1, t2 = parse_simple_subset(rs, args.p1), parse_simple_subset(rs, args.p2)
        t3 = parse_simple_subset(rs, args.through) if args.through else frozenset(range(rs.rank))
        items = [(rs.name, t1, t2, t3, cfg.budget)]
    reports = _pmap(_langlands_job, items, cfg.jobs)
    verdicts = []
    for r in reports:
        verdicts.append(r["verdict"] if r["bijection"]["valid"] else "mismatch")
        verdicts.extend(t["verdict"] for t in r["terms"])
    return {"system": rs.name, "count": len(reports), "reports": reports}, verdicts


def verify_functoriality(cfg: RunConfig, args) -> tuple[dict, list]:
    rs = parse_system(args.system)
    arr = arrangement_of(rs)
    out, verdicts = [], []
    for c in functoriality_configurations(arr):
        for k, (lhs, rhs) in enumerate(functoriality_words(arr, *c)):
            res = prove_equal(lhs, rhs, cfg.budget)
            out.append({"faces": [arr.faces[f].id for f in c], "identity": k, "verdict": str(res.verdict)})
            verdicts.append(str(res.verdict))
    return {"system": rs.name, "count": len(out), "instances": out}, verdicts


def verify_sb3(cfg: RunConfig, args) -> tuple[dict, list]:
    from .glnspecies import all_decompositions, verify_SB3
    ns = range(1, args.n + 1) if args.all else [args.n]
    out = []
    for n in ns:
        decs = all_decompositions(n)
        for J1, J2 in decs:
            for L1, L2 in decs:
                out.append(verify_SB3(J1, J2, L1, L2, cfg.budget))
    return {"n": args.n, "all_up_to_n": bool(args.all), "count": len(out), "instances": out}, \
        [r["verdict"] for r in out]


def verify_lambda(cfg: RunConfig, args) -> tuple[dict, list]:
    from .glnspecies import verify_lambda_partial_hom
    perms = list(permutations(range(1, args.n + 1)))
    out = []
    for s1 in perms:
        for s2 in perms:
            r = verify_lambda_partial_hom(s1, s2)
            if r["length_additive"]:
                out.append(r)
    return {"n": args.n, "count": len(out), "instances": out}, [r["verdict"] for r in out]


def verify_exchange(cfg: RunConfig, args) -> tuple[dict, list]:
    from .glnspecies import exchange_bijection
    out = []
    for n in range(args.n + 1):
        for p1 in range(n + 1):
            for q1 in range(n + 1):
                out.append(exchange_bijection(p1, n - p1, q1, n - q1))
    return {"max_n": args.n, "count": len(out), "instances": out}, \
        [str(Verdict.PROVED) if r["valid"] else "mismatch" for r in out]


def verify_braided(cfg: RunConfig, args) -> tuple[dict, list]:
    from .glnspecies import double_crossing, generators, ordered_set_partitions, verify_hexagons, verify_naturality, \
        wall_count
    hexes, nats = [], []
    parts = {k: ordered_set_partitions(k) for k in range(1, args.n + 1)}
    for a in parts:
        for b in parts:
            for c in parts:
                if a + b + c > args.n:
                    continue
                for I in parts[a]:
                    for J in parts[b]:
                        for K in parts[c]:
                            r = verify_hexagons(I, J, K, cfg.budget)
                            hexes.append({"args": r["args"], "first": _bool_verdict(r["first"]),
                                          "second": _bool_verdict(r["second"])})
    for a in parts:
        for b in parts:
            if a + b > args.n:
                continue
            for f in generators(a):
                for J in parts[b]:
                    for side in ("left", "right"):
                        ok = verify_naturality(f, J, side, cfg.budget)
                        nats.append({"f": [str(x) for x in f], "J": str(J), "side": side, "verdict": _bool_verdict(ok)})
    dc = double_crossing(1, 1)
    (path, perm), = dc.terms.keys()
    counts = wall_count(path)
    crossing = {"path": [str(x) for x in path], "permutation": list(perm), "wall_count": list(counts),
                "non_identity": any(counts)}
    verdicts = [h["first"] for h in hexes] + [h["second"] for h in hexes] + [x["verdict"] for x in nats]
    verdicts.append(str(Verdict.PROVED) if crossing["non_identity"] else "mismatch")
    return {"max_degree": args.n, "hexagons": hexes, "naturality": nats, "double_crossing": crossing}, verdicts


def verify_appendix(cfg: RunConfig, args) -> tuple[dict, list]:
    from .orbitcat import load_corpus, run_appendix
    corpus = None if args.corpus == "default" else load_corpus(Path(args.corpus).read_text())
    rep = run_appendix(cfg.seed, corpus)
    rep = json.loads(json.dumps(rep, default=str))
    rep["note"] = "finite-dimensional corpus over Q"
    return rep, [str(Verdict.PROVED) if rep["ok"] else "mismatch"]


VERIFIERS = {
    "proto-langlands": verify_proto,
    "langlands": verify_langlands_cmd,
    "functoriality": verify_functoriality,
    "sb3": verify_sb3,
    "lambda": verify_lambda,
    "exchange": verify_exchange,
    "braided": verify_braided,
    "appendix": verify_appendix,
}


def cmd_verify(args) -> int:
    cfg = _config(args)
    payload, verdicts = VERIFIERS[args.kind](cfg, args)
    code = _exit_code(verdicts)
    status = {EXIT_OK: "Proved", EXIT_UNKNOWN: "Unknown", EXIT_FAIL: "Refuted"}[code]
    payload = {"kind": args.kind, "config": cfg.to_json(), "status": status, **payload}
    counts = {v: sum(1 for x in verdicts if x == v) for v in sorted(set(map(str, verdicts)))}
    payload["verdict_counts"] = counts
    rows = [{"index": k, "verdict": str(v)} for k, v in enumerate(verdicts)]
    _emit(cfg, f"verify-{args.kind}", payload, f"verify {args.kind}: {status} {counts}", rows)
    return code


# ---------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    common.add_argument("--max-len", type=int, default=Budget().max_len, help="prover word-length bound")
    common.add_argument("--max-states", type=int, default=Budget().max_states, help="prover state bound")
    common.add_argument("--output", "-o", default=None,
                        help=f"output file; default stdout, or ${OUTPUT_ENV}/<command>.<ext> when set")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--format", choices=["json", "text", "dot", "csv"], default="json")

    p = argparse.ArgumentParser(prog="artifact", description="Root arrangements, stratum groupoids and their verifiers.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("faces", parents=[common], help="list faces of the root arrangement")
    f.add_argument("--system", required=True)
    f.add_argument("--level", choices=["all", "chambers", "codim1", "rays", "minimal"], default="all")
    f.set_defaults(func=cmd_faces)

    f = sub.add_parser("flats", parents=[common], help="list flats with their W-orbits")
    f.add_argument("--system", required=True)
    f.set_defaults(func=cmd_flats)

    f = sub.add_parser("orbits", parents=[common], help="face and flat orbits with Levi data")
    f.add_argument("--system", required=True)
    f.set_defaults(func=cmd_orbits)

    f = sub.add_parser("groupoid", parents=[common], help="presentation of a stratum groupoid")
    f.add_argument("--system", required=True)
    f.add_argument("--flat", required=True, help="full, bottom, a flat id like z0.2, or a Levi type like l=alpha*")
    f.add_argument("--quotient", action="store_true", help="the coinvariant quotient by W(l)")
    f.set_defaults(func=cmd_groupoid)

    v = sub.add_parser("verify", help="run a verifier")
    vs = v.add_subparsers(dest="kind", required=True)
    x = vs.add_parser("proto-langlands", parents=[common])
    x.add_argument("--system", required=True)
    x.add_argument("--instance", help="three face tokens p1,p,p2; default is every valid triple")
    x.add_argument("--all", action="store_true")
    x = vs.add_parser("langlands", parents=[common])
    x.add_argument("--system", required=True)
    x.add_argument("--p1", default="none")
    x.add_argument("--p2", default="none")
    x.add_argument("--through", default=None, help="type of the third parabolic (default: everything)")
    x.add_argument("--all", action="store_true", help="every ordered pair of types inside --through")
    x = vs.add_parser("functoriality", parents=[common])
    x.add_argument("--system", required=True)
    x = vs.add_parser("sb3", parents=[common])
    x.add_argument("-n", type=int, default=3)
    x.add_argument("--all", action="store_true", help="every n' <= n")
    x = vs.add_parser("lambda", parents=[common])
    x.add_argument("-n", type=int, default=4)
    x = vs.add_parser("exchange", parents=[common])
    x.add_argument("-n", type=int, default=6, help="largest total size")
    x = vs.add_parser("braided", parents=[common])
    x.add_argument("-n", type=int, default=5, help="largest total degree")
    x = vs.add_parser("appendix", parents=[common])
    x.add_argument("--corpus", default="default", help="'default' or a JSON corpus file")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ArtifactError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
