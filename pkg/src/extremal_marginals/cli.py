"""Command-line front end: list, verify, export and batch-report catalog cases."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .catalog import CatalogCase, UnknownCaseError, get_case, list_cases, report_case_ids
from .certify import MODES, Certificate, certify
from .cpmap import choi_matrix, operators_hermitian, state_normalized
from .linalg import float_csv, to_float_matrix

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

# exact arithmetic up to this product d_in * d_out, float above
EXACT_SIZE_LIMIT = 225


def default_mode(case: CatalogCase) -> str:
    return "exact" if case.family.d_in * case.family.d_out <= EXACT_SIZE_LIMIT else "float"


def _tol(value):
    return "auto" if value is None else value


def compare(case: CatalogCase, cert: Certificate) -> List[dict]:
    """One row per claimed property: name, claimed value, computed value, match."""
    e = case.expected
    rows = [
        ("choi_rank", e.choi_rank, cert.choi_rank),
        ("bound", e.bound, cert.bound),
        ("verdict", e.verdict, cert.verdict),
        ("hermitian_ops", e.hermitian_ops, operators_hermitian(case.family)),
    ]
    if e.gram_independent is not None:
        rows.append(("gram_independent", e.gram_independent, cert.gram_independent))
    if e.dual_gram_independent is not None:
        rows.append(("dual_gram_independent", e.dual_gram_independent, cert.dual_gram_independent))
    out = [{"property": k, "claimed": a, "computed": b, "match": a == b} for k, a, b in rows]
    for k in ("marginal_left", "marginal_right"):
        claimed, computed = getattr(e, k), getattr(cert, k)
        out.append({
            "property": k,
            "claimed": claimed.to_json(),
            "computed": computed.to_json(),
            "match": claimed == computed,
        })
    for k, ok in cert.checks.items():
        out.append({"property": f"check:{k}", "claimed": True, "computed": ok, "match": ok})
    return out


def run_case(case_id: str, mode: Optional[str], tol) -> dict:
    case = get_case(case_id)
    m = mode or default_mode(case)
    cert = certify(case.family, case.marginal_pair(), case.id, mode=m, tol=tol)
    rows = compare(case, cert)
    return {
        "case": case,
        "certificate": cert,
        "comparison": rows,
        "passed": all(r["match"] for r in rows),
    }


def _short(value) -> str:
    if isinstance(value, dict) and "entries" in value:
        return f"<{value['rows']}x{value['cols']} matrix>"
    return str(value)


def format_report(result: dict) -> str:
    case, cert = result["case"], result["certificate"]
    lines = [
        f"case      {case.id}",
        f"shape     {cert.d_in} -> {cert.d_out}, {cert.family_size} operators, scale {case.family.scale}",
        f"mode      {cert.mode}",
        f"ranks     {cert.ranks}",
        f"{'property':40s} {'claimed':28s} {'computed':28s} ok",
    ]
    for r in result["comparison"]:
        mark = "yes" if r["match"] else "NO"
        lines.append(f"{r['property']:40s} {_short(r['claimed']):28s} {_short(r['computed']):28s} {mark}")
    for n in list(case.notes) + list(cert.notes):
        lines.append(f"note: {n}")
    lines.append("PASS" if result["passed"] else "FAIL")
    return "\n".join(lines)


def result_json(result: dict) -> dict:
    return {
        "case_id": result["case"].id,
        "passed": result["passed"],
        "certificate": result["certificate"].to_json(),
        "comparison": result["comparison"],
        "notes": list(result["case"].notes),
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# -- commands ------------------------------------------------------------------


def cmd_list(args) -> int:
    cases = list_cases()
    if args.json:
        print(_dump([c.to_json() for c in cases]))
    else:
        for c in cases:
            rng = ", ".join(f"{k}{v}" for k, v in c.params.items())
            print(c.id + (f"  [{rng}]" if rng else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    result = run_case(args.case, args.mode, _tol(args.tol))
    print(_dump(result_json(result)) if args.json else format_report(result))
    return EXIT_OK if result["passed"] else EXIT_MISMATCH


def cmd_choi(args) -> int:
    case = get_case(args.case)
    fam = state_normalized(case.family) if args.state else case.family
    j = choi_matrix(fam)
    text = _dump(j.to_json()) if args.format == "json" else float_csv(to_float_matrix(j))
    if args.out:
        try:
            Path(args.out).write_text(text + ("" if text.endswith("\n") else "\n"))
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        print(text)
    return EXIT_OK


def cmd_report_all(args) -> int:
    results = []
    for cid in report_case_ids():
        try:
            results.append(run_case(cid, args.mode, _tol(args.tol)))
        except Exception as exc:  # collected, not fatal
            results.append({"case_id": cid, "error": f"{type(exc).__name__}: {exc}", "passed": False})
    ok = all(r["passed"] for r in results)
    if args.json:
        payload = [result_json(r) if "case" in r else r for r in results]
        print(_dump({"passed": ok, "cases": payload}))
    else:
        print(f"{'case':44s} {'d1':>3s} {'d2':>3s} {'CR':>4s} {'bound':>5s} {'mode':5s} {'verdict':28s} result")
        for r in results:
            if "case" not in r:
                print(f"{r['case_id']:44s} ERROR {r['error']}")
                continue
            c = r["certificate"]
            print(
                f"{c.case_id:44s} {c.d_in:3d} {c.d_out:3d} {c.choi_rank:4d} {c.bound:5d} {c.mode:5s} "
                f"{c.verdict:28s} {'pass' if r['passed'] else 'FAIL'}"
            )
        print(f"{sum(r['passed'] for r in results)}/{len(results)} cases pass")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_export(args) -> int:
    print(_dump(get_case(args.case).to_json()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extremal-marginals", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list", help="list case ids with parameter ranges")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_list)

    def mode_flags(sp):
        sp.add_argument("--mode", choices=MODES, default=None,
                        help="exact or float rank (default: exact when d1*d2 <= 225)")
        sp.add_argument("--tol", type=float, default=None, help="float rank threshold override")
        sp.add_argument("--json", action="store_true")

    s = sub.add_parser("verify", help="certify a case and compare with its claimed properties")
    s.add_argument("case")
    mode_flags(s)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("choi", help="write the Choi matrix of a case")
    s.add_argument("case")
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--state", action="store_true", help="rescale to unit trace first")
    s.set_defaults(func=cmd_choi)

    s = sub.add_parser("report-all", help="certify every case and preset")
    mode_flags(s)
    s.set_defaults(func=cmd_report_all)

    s = sub.add_parser("catalog", help="catalog operations")
    csub = s.add_subparsers(dest="catalog_command", required=True)
    e = csub.add_parser("export", help="emit the Kraus family JSON with expected properties")
    e.add_argument("case")
    e.add_argument("--json", action="store_true", help="JSON output (the only format)")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UnknownCaseError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
