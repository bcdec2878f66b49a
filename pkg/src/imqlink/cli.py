"""Command line front end: single-diagram reports, pairwise comparisons,
and cached corpus runs.

Exit codes: 0 success, 1 usage or parse failure, 2 diagram validation
failure, 3 resource cap tripped, 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent import futures
from pathlib import Path

from . import __version__
from .abelian import FgAbGroup
from .arcquandle import (
    build_arc_quandle,
    characteristic_compatibility,
    marking_equivalent,
    reindexing_sensitivity,
)
from .diagram import (
    DiagramSyntaxError,
    DiagramValidationError,
    LinkDiagram,
    make_even,
    parse_diagram,
    serialize_diagram,
)
from .imq import check_size_bounds, compute_imq, surjection_to_arc_quandle
from .linkmodule import (
    InternalCheckError,
    build_link_module,
    link_determinant,
    longitude_zero_subset,
    longitudes,
    torsion_parity_profile,
    weight_kernel,
)
from .quandle import (
    CapExceeded,
    group_from_quandle,
    is_isomorphic,
    orbits,
    serialize_quandle,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 1, not argparse's 2
        raise UsageError(message)


def _group_dict(g: FgAbGroup) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.torsion), "text": g.describe()}


def _load(path: str) -> LinkDiagram:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise DiagramSyntaxError(f"cannot read {path}: {e}") from e
    return parse_diagram(text)


def build_report(
    d: LinkDiagram,
    name: str,
    run_imq: bool = True,
    imq_cap: int | None = None,
) -> dict:
    """All report fields for one diagram, as a JSON-ready dict."""
    mod = build_link_module(d)
    det = link_determinant(mod)
    kw = weight_kernel(mod)
    even = make_even(d)
    even_mod = mod if even is d else build_link_module(even)
    longs = longitudes(even_mod)
    zero_subset = (
        list(longitude_zero_subset(even_mod, longs) or ()) if d.mu >= 2 else None
    )
    report: dict = {
        "name": name,
        "engine_version": __version__,
        "components": d.mu,
        "arcs": d.n_arcs,
        "crossings": len(d.crossings),
        "evenized": even is not d,
        "determinant": det,
        "module": _group_dict(mod.group),
        "weight_kernel": _group_dict(kw.group),
        "longitude_orders": [l.order() for l in longs],
        "longitude_zero_subset": zero_subset,
        "parity_profile": [list(v) for v in torsion_parity_profile(mod)],
        "characteristic_compatibility": characteristic_compatibility(mod).status,
    }
    checks: dict = {}
    if det == 0:
        report["arc_quandle"] = "infinite"
        report["imq"] = "infinite"
    else:
        qa = build_arc_quandle(mod)
        report["arc_quandle"] = {
            "size": qa.quandle.n,
            "orbit_sizes": sorted(len(o) for o in orbits(qa.quandle)),
        }
        checks["arc_quandle_size_formula"] = (
            qa.quandle.n * (1 << (d.mu - 1)) == d.mu * det
        )
        sens = reindexing_sensitivity(mod)
        report["component_classes"] = [list(c) for c in sens.classes]
        if not run_imq:
            report["imq"] = "skipped"
        else:
            res = compute_imq(d, max_elements=imq_cap)
            q = res.quandle
            report["imq"] = {
                "size": q.n,
                "orbit_sizes": sorted(len(o) for o in orbits(q)),
            }
            checks["size_bounds"] = check_size_bounds(q, det, d.mu)
            checks["imq_group_reconstruction"] = group_from_quandle(q) == mod.group
            surjection_to_arc_quandle(res, qa)  # raises on failure
            checks["surjection_onto_arc_quandle"] = True
            lower = (d.mu * det) // (1 << (d.mu - 1))
            upper = (d.mu * det) // 2
            report["imq_strictly_between_bounds"] = (
                d.mu > 1 and lower < q.n < upper
            )
    report["checks"] = checks
    report["checks_passed"] = all(checks.values())
    return report


def render_report_text(rep: dict) -> str:
    lines = [f"diagram: {rep['name']}"]
    lines.append(
        f"  components {rep['components']}, arcs {rep['arcs']}, "
        f"crossings {rep['crossings']}"
        + (", evenized for longitudes" if rep["evenized"] else "")
    )
    lines.append(f"  determinant: {rep['determinant']}")
    lines.append(f"  module: {rep['module']['text']}")
    lines.append(f"  weight kernel (double cover homology): {rep['weight_kernel']['text']}")
    lines.append(f"  longitude orders: {rep['longitude_orders']}")
    if rep["longitude_zero_subset"] is not None:
        lines.append(f"  longitude zero subset: {rep['longitude_zero_subset'] or 'none'}")
    qa = rep["arc_quandle"]
    if isinstance(qa, dict):
        lines.append(f"  coset quandle: {qa['size']} elements, orbits {qa['orbit_sizes']}")
    else:
        lines.append(f"  coset quandle: {qa}")
    imq = rep["imq"]
    if isinstance(imq, dict):
        lines.append(f"  presented quandle: {imq['size']} elements, orbits {imq['orbit_sizes']}")
    else:
        lines.append(f"  presented quandle: {imq}")
    lines.append(
        f"  characteristic compatibility: {rep['characteristic_compatibility']}"
    )
    profile = ["".join(str(b) for b in v) for v in rep["parity_profile"]]
    lines.append(f"  parity profile: {' '.join(profile) if profile else '(empty)'}")
    if "component_classes" in rep:
        lines.append(f"  interchangeable components: {rep['component_classes']}")
    lines.append(f"  checks passed: {rep['checks_passed']}")
    return "\n".join(lines)


def _emit(rep: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "machine":
        print(json.dumps(rep, sort_keys=True, separators=(",", ":")), file=out)
    else:
        print(render_report_text(rep), file=out)


def cmd_report(args) -> int:
    d = _load(args.path)
    code = EXIT_OK
    try:
        rep = build_report(
            d, Path(args.path).stem, run_imq=not args.no_imq, imq_cap=args.imq_cap
        )
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    _emit(rep, args.format)
    if args.dump_quandle:
        if isinstance(rep["imq"], dict):
            res = compute_imq(d, max_elements=args.imq_cap)
            Path(args.dump_quandle).write_text(serialize_quandle(res.quandle))
        else:
            print("no finite presented quandle to dump", file=sys.stderr)
            code = EXIT_VALIDATION
    return code


def cmd_compare(args) -> int:
    d1, d2 = _load(args.path1), _load(args.path2)
    m1, m2 = build_link_module(d1), build_link_module(d2)
    det1, det2 = link_determinant(m1), link_determinant(m2)
    marking = marking_equivalent(m1, m2)
    record: dict = {
        "first": Path(args.path1).stem,
        "second": Path(args.path2).stem,
        "module_isomorphic": m1.group == m2.group,
        "marking_equivalent": marking.status,
        "marking_reason": marking.reason,
        "h1_isomorphic": weight_kernel(m1).group == weight_kernel(m2).group,
    }
    if det1 != 0 and det2 != 0:
        qa1, qa2 = build_arc_quandle(m1), build_arc_quandle(m2)
        record["arc_quandle_isomorphic"] = (
            is_isomorphic(qa1.quandle, qa2.quandle) is not None
        )
        if args.no_imq:
            record["imq_isomorphic"] = None
        else:
            r1 = compute_imq(d1, max_elements=args.imq_cap)
            r2 = compute_imq(d2, max_elements=args.imq_cap)
            record["imq_isomorphic"] = (
                is_isomorphic(r1.quandle, r2.quandle) is not None
            )
    else:
        record["arc_quandle_isomorphic"] = None
        record["imq_isomorphic"] = None

    # implication chain: imq iso => markings equivalent => coset quandles
    # iso (when defined) => double-cover homology iso
    chain_ok = True
    if record["imq_isomorphic"] is True and marking.status != "equivalent":
        chain_ok = False
    if marking.status == "equivalent":
        if record["arc_quandle_isomorphic"] is False:
            chain_ok = False
        if not record["h1_isomorphic"]:
            chain_ok = False
    if record["arc_quandle_isomorphic"] is True and not record["h1_isomorphic"]:
        chain_ok = False
    record["implication_chain_ok"] = chain_ok

    if args.format == "machine":
        print(json.dumps(record, sort_keys=True, separators=(",", ":")))
    else:
        print(f"compare {record['first']} vs {record['second']}")
        for key in (
            "module_isomorphic",
            "marking_equivalent",
            "arc_quandle_isomorphic",
            "imq_isomorphic",
            "h1_isomorphic",
        ):
            print(f"  {key}: {record[key]}")
        print(f"  ({record['marking_reason']})")
    if not chain_ok:
        print("internal error: implication chain violated", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


# ---------------------------------------------------------------------------
# corpus runs with a content-addressed cache


def _cache_key(d: LinkDiagram, no_imq: bool, imq_cap: int | None) -> str:
    material = serialize_diagram(d) + "\n" + __version__
    if no_imq or imq_cap is not None:
        material += f"\nflags:no_imq={no_imq},imq_cap={imq_cap}"
    return hashlib.sha256(material.encode()).hexdigest()


def _load_cache(path: Path) -> dict[str, dict]:
    cache: dict[str, dict] = {}
    if path.exists():
        for line in path.read_text().splitlines():
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                cache[entry["key"]] = entry["report"]
            except (ValueError, KeyError):
                continue  # ignore corrupt records
    return cache


def _write_cache(path: Path, cache: dict[str, dict]) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w") as fh:
        for key in sorted(cache):
            fh.write(json.dumps({"key": key, "report": cache[key]}, sort_keys=True))
            fh.write("\n")
    os.replace(tmp, path)


def _corpus_worker(path_str: str, no_imq: bool, imq_cap: int | None) -> dict:
    try:
        d = _load(path_str)
        return build_report(
            d, Path(path_str).stem, run_imq=not no_imq, imq_cap=imq_cap
        )
    except DiagramValidationError as e:
        return {"name": Path(path_str).stem, "error": str(e), "exit": EXIT_VALIDATION}
    except (DiagramSyntaxError, ValueError) as e:
        return {"name": Path(path_str).stem, "error": str(e), "exit": EXIT_USAGE}
    except CapExceeded as e:
        return {"name": Path(path_str).stem, "error": str(e), "exit": EXIT_CAP}
    except (InternalCheckError, AssertionError) as e:
        return {"name": Path(path_str).stem, "error": str(e), "exit": EXIT_INTERNAL}


def cmd_corpus(args) -> int:
    base = Path(args.dir)
    if not base.is_dir():
        raise UsageError(f"not a directory: {args.dir}")
    files = sorted(p for p in base.iterdir() if p.suffix == ".json")
    cache_path = Path(
        args.cache or os.environ.get("QUANDLE_CACHE") or ".quandle-cache"
    )
    cache = _load_cache(cache_path)

    rows: list[dict] = []
    hits = 0
    worst = EXIT_OK
    to_compute: list[tuple[int, Path]] = []
    for p in files:
        try:
            d = _load(str(p))
        except (DiagramSyntaxError, DiagramValidationError, ValueError) as e:
            code = (
                EXIT_VALIDATION
                if isinstance(e, DiagramValidationError)
                else EXIT_USAGE
            )
            rows.append({"name": p.stem, "error": str(e), "exit": code})
            worst = max(worst, code)
            continue
        key = _cache_key(d, args.no_imq, args.imq_cap)
        if key in cache:
            hits += 1
            rows.append({**cache[key], "cached": True})
        else:
            rows.append({"pending": key, "path": p})
            to_compute.append((len(rows) - 1, p))

    if to_compute:
        if args.jobs > 1:
            with futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
                computed = list(
                    pool.map(
                        _corpus_worker,
                        [str(p) for _, p in to_compute],
                        [args.no_imq] * len(to_compute),
                        [args.imq_cap] * len(to_compute),
                    )
                )
        else:
            computed = [
                _corpus_worker(str(p), args.no_imq, args.imq_cap)
                for _, p in to_compute
            ]
        for (idx, p), rep in zip(to_compute, computed):
            if "error" in rep:
                worst = max(worst, rep["exit"])
                rows[idx] = rep
            else:
                key = rows[idx]["pending"]
                cache[key] = rep
                rows[idx] = {**rep, "cached": False}

    _write_cache(cache_path, cache)

    ok_rows = [r for r in rows if "error" not in r]
    all_checks = all(r.get("checks_passed", False) for r in ok_rows)
    flagged = [r["name"] for r in ok_rows if r.get("imq_strictly_between_bounds")]
    summary = {
        "diagrams": len(files),
        "reported": len(ok_rows),
        "errors": len(rows) - len(ok_rows),
        "cache_hits": hits,
        "all_property_checks_passed": all_checks,
        "imq_strictly_between_bounds": flagged,
    }
    if args.format == "machine":
        print(
            json.dumps(
                {"rows": rows, "summary": summary},
                sort_keys=True,
                separators=(",", ":"),
                default=str,
            )
        )
    else:
        for r in rows:
            if "error" in r:
                print(f"{r['name']}: ERROR ({r['error']})")
            else:
                qa = r["arc_quandle"]
                imq = r["imq"]
                qa_s = qa["size"] if isinstance(qa, dict) else qa
                imq_s = imq["size"] if isinstance(imq, dict) else imq
                print(
                    f"{r['name']:10s} mu={r['components']} det={r['determinant']:<3d} "
                    f"QA={qa_s:<8} IMQ={imq_s:<8} "
                    f"char={r['characteristic_compatibility']:7s} "
                    f"checks={'ok' if r['checks_passed'] else 'FAIL'}"
                    f"{' (cached)' if r.get('cached') else ''}"
                )
        print(
            f"summary: {summary['reported']}/{summary['diagrams']} reported, "
            f"{summary['errors']} errors, {summary['cache_hits']} cache hits, "
            f"property checks {'pass' if all_checks else 'FAIL'}"
        )
        if flagged:
            print(f"note: size strictly between bounds for: {', '.join(flagged)}")
    if not all_checks:
        worst = max(worst, EXIT_INTERNAL)
    return worst


def _build_parser() -> _Parser:
    parser = _Parser(prog="imqlink", description=__doc__)
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    parser.add_argument("--no-imq", action="store_true", help="skip the presented quandle")
    parser.add_argument("--imq-cap", type=int, default=None, metavar="N")
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="full invariant report for one diagram")
    p_report.add_argument("path")
    p_report.add_argument("--dump-quandle", metavar="PATH", default=None)
    p_report.set_defaults(func=cmd_report)

    p_compare = sub.add_parser("compare", help="pairwise comparison record")
    p_compare.add_argument("path1")
    p_compare.add_argument("path2")
    p_compare.set_defaults(func=cmd_compare)

    p_corpus = sub.add_parser("corpus", help="report every diagram in a directory")
    p_corpus.add_argument("dir")
    p_corpus.add_argument("--cache", metavar="PATH", default=None)
    p_corpus.add_argument("--jobs", type=int, default=1, metavar="N")
    p_corpus.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DiagramSyntaxError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DiagramValidationError as e:
        print("validation error:", file=sys.stderr)
        for v in e.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapExceeded as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InternalCheckError, AssertionError) as e:
        print(f"internal consistency failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
