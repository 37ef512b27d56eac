"""Command line front end.

Exit codes: 0 success, 1 usage or validation error, 2 search budget
exhausted, 3 search space exhausted (nonexistence proven), 4 verification
failure. Every file-producing run writes a config sidecar next to its
output so the run can be regenerated bit for bit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import bounds as bnd
from . import cfr as cfrmod
from .constructions import (
    interleaved_family,
    measured_alphabet,
    multi_null_family,
    phase_ramp_family,
    verify_difference_set,
    zcz_family,
)
from .core import _emit, energy, load_family, save_family
from .spectral import (
    check_spectrum,
    check_unimodular,
    pccf_fast,
    summarize,
    sum_of_squares_check,
    write_correlation_csv,
    write_spectrum_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_EXHAUSTED = 3
EXIT_VERIFY = 4

DEFAULT_TOL = 1e-9


def _tol() -> float:
    raw = os.environ.get("SCS_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"SCS_TOL is not a number: {raw!r}")
    if value <= 0:
        raise ValueError("SCS_TOL must be positive")
    return value


def _stem(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root


def _write_config(out_path: str, config: dict) -> str:
    cfg_path = _stem(out_path) + ".config.json"
    with open(cfg_path, "w") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return cfg_path


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        digest.update(fh.read())
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# gen-cfr

def cmd_gen_cfr(args) -> int:
    if args.prime is not None:
        rect = cfrmod.cfr_from_prime(args.prime)
        source = {"prime": args.prime}
        nodes = None
    else:
        if args.rows is None:
            print("--search needs --rows", file=sys.stderr)
            return EXIT_USAGE
        result = cfrmod.search_cfr(args.search, args.rows, args.budget)
        if result.status == cfrmod.BUDGET_HIT:
            print(
                f"budget of {args.budget} nodes exhausted after {result.nodes} "
                f"attempts without settling {args.rows} x {args.search}",
                file=sys.stderr,
            )
            return EXIT_BUDGET
        if result.status == cfrmod.EXHAUSTED:
            print(
                f"no {args.rows} x {args.search} rectangle exists: canonical search "
                f"space exhausted after {result.nodes} nodes",
                file=sys.stderr,
            )
            return EXIT_EXHAUSTED
        rect = result.cfr
        source = {"search": {"order": args.search, "rows": args.rows,
                             "budget": args.budget}}
        nodes = result.nodes

    if args.output:
        cfrmod.write_cfr(rect, args.output)
        config = {"command": "gen-cfr", "source": source, "output": args.output}
        if nodes is not None:
            config["nodes"] = nodes
        cfg = _write_config(args.output, config)
        print(f"wrote {args.output} ({rect.num_rows} x {rect.order}), config {cfg}")
    else:
        sys.stdout.write(f"{rect.order} {rect.num_rows}\n")
        for row in rect.rows:
            sys.stdout.write(" ".join(str(v) for v in row) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen-scs

def _parse_insert(text: str) -> frozenset:
    try:
        return frozenset(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise ValueError(f"bad insert list {text!r}; expected comma-separated integers")


def _load_h(path: str) -> np.ndarray:
    with open(path) as fh:
        rows = json.load(fh)
    return np.array([[complex(re, im) for re, im in row] for row in rows],
                    dtype=np.complex128)


def _build_family(args, rect):
    kind = args.construction
    if kind == "c1":
        if args.s0 is not None or args.insert is not None:
            raise ValueError("c1 takes neither --s0 nor --insert")
        return phase_ramp_family(rect), {}
    if kind == "c2":
        if args.s0 is None or args.insert is not None:
            raise ValueError("c2 needs --s0 (and no --insert)")
        return interleaved_family(rect, args.s0), {"s0": args.s0}
    if kind == "c3":
        if args.insert is None:
            raise ValueError("c3 needs --insert")
        insert = _parse_insert(args.insert)
        return multi_null_family(rect, insert), {"insert": sorted(insert)}
    # c4
    insert = _parse_insert(args.insert) if args.insert is not None else None
    h = None if args.h_matrix == "dft" else _load_h(args.h_matrix)
    fam = zcz_family(rect, insert=insert, s0=args.s0, h=h, num_sets=args.sets)
    extra = {"h": args.h_matrix, "sets": args.sets}
    if insert is not None:
        extra["insert"] = sorted(insert)
    else:
        extra["s0"] = args.s0
    return fam, extra


def cmd_gen_scs(args) -> int:
    tol = _tol()
    rect = cfrmod.load_cfr(args.cfr)
    family, extra = _build_family(args, rect)
    summary = summarize(family, window=args.window, tol=tol)

    n = family.constraint.n
    period = family.length // rect.order
    print(f"construction  = {args.construction}")
    print(f"cfr           = {args.cfr} (order {rect.order}, rows {rect.num_rows})")
    print(f"L             = {family.length}")
    print(f"K x M         = {family.num_sets} x {family.set_size}")
    print(f"n             = {n}")
    print(f"omega         = {' '.join(str(f) for f in family.constraint.sorted_forbidden())}")
    print(f"alphabet      = {family.alphabet_order} (used {measured_alphabet(family)})")
    print(f"window        = {summary.window}")
    print(f"theta_a       = {summary.theta_a:.9g}")
    print(f"theta_c       = {summary.theta_c:.9g}")
    print(f"theta_max     = {summary.theta_max:.9g}")
    print(f"zcz           = {' '.join(str(s.zcz_width) for s in summary.per_set)}")
    if args.construction in ("c3", "c4"):
        cols = sorted(set(range(period)) - set(f % period for f in family.constraint.forbidden))
        chk = verify_difference_set(cols, period)
        if chk.is_ds:
            print(f"admissible columns form a ({period},{chk.k},{chk.lam}) difference set")
        else:
            print("admissible columns do not form a difference set")

    if args.output:
        save_family(family, args.output)
        stem = _stem(args.output)
        spec_csv = stem + ".spectrum.csv"
        write_spectrum_csv(check_spectrum(family.sets[0][0], family.constraint, tol), spec_csv)
        config = {
            "command": "gen-scs",
            "construction": args.construction,
            "cfr_path": args.cfr,
            "cfr_sha256": _sha256(args.cfr),
            "cfr_rows": [list(r) for r in rect.rows],
            "order": rect.order,
            "window": args.window,
            "tol": tol,
            "output": args.output,
        }
        config.update(extra)
        cfg = _write_config(args.output, config)
        written = [args.output, spec_csv, cfg]
        for spec in args.corr_pair:
            parts = [int(v) for v in spec.split(",")]
            if len(parts) != 4:
                raise ValueError(f"--corr-pair wants I,J,K,L; got {spec!r}")
            i, j, k, l = parts
            profile = pccf_fast(family.sets[i][j], family.sets[k][l])
            corr_csv = stem + f".corr.{i}-{j}x{k}-{l}.csv"
            write_correlation_csv(profile, corr_csv)
            written.append(corr_csv)
        if args.plot:
            from .report import render_family_report

            written += render_family_report(family, stem + "_report",
                                            window=args.window, tol=tol)
        print("wrote " + " ".join(written))
    elif args.corr_pair or args.plot:
        raise ValueError("--corr-pair and --plot need -o")
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds

def _infer_order(family) -> int | None:
    """Recover the base-matrix side N from the forbidden comb, when the
    carriers form full combs {s + a*P} with P = N + (combs)."""
    length = family.length
    omega = family.constraint.forbidden
    if not omega:
        return None
    for p in range(1, length):
        if length % p:
            continue
        if {(f + p) % length for f in omega} == omega:
            n_order = length // p
            t = len(omega) // n_order
            if n_order * t == len(omega) and n_order + t == p:
                return n_order
            return None
    return None


def cmd_bounds(args) -> int:
    tol = _tol()
    raw_mode = args.L is not None or args.n is not None or args.M is not None
    if args.family and raw_mode:
        print("give either --family or raw --M/--L/--n, not both", file=sys.stderr)
        return EXIT_USAGE
    if args.family:
        family = load_family(args.family)
        order = args.order
        if order is None:
            cfg_path = _stem(args.family) + ".config.json"
            if os.path.exists(cfg_path):
                with open(cfg_path) as fh:
                    order = json.load(fh).get("order")
        if order is None:
            order = _infer_order(family)
        report = bnd.evaluate_family(family, window=args.window, tol=tol, order=order)
    else:
        if args.M is None or args.L is None or args.n is None:
            print("raw mode needs --M, --L and --n", file=sys.stderr)
            return EXIT_USAGE
        report = bnd.bounds_from_params(args.M, args.L, args.n,
                                        theta_max=args.theta_max, order=args.order)

    print(bnd.format_table([report]))
    print(f"floors: theta_opti={report.theta_opti:.6f} "
          f"theta_a={report.theta_a_floor:.6f} theta_c={report.theta_c_floor:.6f}")
    if report.verdicts:
        print("verdicts: " + " ".join(f"{k}={v}" for k, v in sorted(report.verdicts.items())))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(_emit(report.to_record()))
            fh.write("\n")
        print(f"wrote {args.output}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _verify_family(path: str, tol: float, allow_non_unimodular: bool) -> int:
    failures = 0

    def check(name, ok, detail):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures += 1

    try:
        family = load_family(path)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"FAIL load: {exc}")
        return EXIT_VERIFY
    check("load", True,
          f"L={family.length} K={family.num_sets} M={family.set_size} "
          f"n={family.constraint.n}")

    worst_energy = max(abs(energy(seq) - family.length) / family.length
                       for _, _, seq in family.members())
    check("energy", worst_energy <= tol, f"worst relative deviation {worst_energy:.3e}")

    worst_leak = 0.0
    worst_dev = 0.0
    spectrum_ok = True
    for _, _, seq in family.members():
        rep = check_spectrum(seq, family.constraint, tol)
        worst_leak = max(worst_leak, rep.max_leakage)
        worst_dev = max(worst_dev, rep.max_deviation)
        spectrum_ok = spectrum_ok and rep.ok
    check("uniform-power", spectrum_ok,
          f"worst leakage {worst_leak:.3e}, worst deviation {worst_dev:.3e}")

    if not allow_non_unimodular:
        worst_uni = max(float(np.max(np.abs(np.abs(seq.values) - 1.0)))
                        for _, _, seq in family.members())
        check("unimodular", worst_uni <= tol, f"worst deviation {worst_uni:.3e}")

    if spectrum_ok:
        members = [seq for _, _, seq in family.members()]
        worst_rel = 0.0
        for a in range(len(members)):
            for b in range(a, len(members)):
                lhs, rhs, _ = sum_of_squares_check(members[a], members[b],
                                                   family.constraint,
                                                   spectrum_tol=max(tol, 1e-6))
                worst_rel = max(worst_rel, abs(lhs - rhs) / rhs)
        check("correlation-energy", worst_rel <= tol,
              f"worst relative error {worst_rel:.3e} over all pairs")
    else:
        check("correlation-energy", False, "skipped: spectra are not compliant")

    zcz = [s.zcz_width for s in summarize(family, tol=tol).per_set]
    print(f"info zcz: widths {' '.join(str(z) for z in zcz)}")
    return EXIT_VERIFY if failures else EXIT_OK


def _verify_cfr(path: str) -> int:
    failures = 0

    def check(name, ok, detail):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failures += 1

    try:
        rect = cfrmod.load_cfr(path)
    except ValueError as exc:
        print(f"FAIL load: {exc}")
        return EXIT_VERIFY
    check("axioms", True, f"order {rect.order}, rows {rect.num_rows}")

    if rect.num_rows > 1:
        bad = sum(
            1
            for i in range(rect.num_rows)
            for r in range(rect.num_rows)
            if i != r
            for shift in range(rect.order)
            if cfrmod.count_alignments(rect, i, r, shift) != 1
        )
        check("alignment-counts", bad == 0,
              f"{bad} (row pair, shift) combinations off the single-coincidence count")
        inv = cfrmod.inverse_rows(rect)
        bad_perm = sum(
            1
            for i in range(rect.num_rows)
            for r in range(rect.num_rows)
            if i != r and sorted(inv.difference_row(i, r)) != list(range(rect.order))
        )
        check("inverse-differences", bad_perm == 0,
              f"{bad_perm} row pairs whose inverse difference is not a permutation")
    return EXIT_VERIFY if failures else EXIT_OK


def cmd_verify(args) -> int:
    kind = args.kind
    if kind is None:
        kind = "family" if args.path.endswith(".json") else "cfr"
    if kind == "family":
        return _verify_family(args.path, _tol(), args.allow_non_unimodular)
    return _verify_cfr(args.path)


# ---------------------------------------------------------------------------
# report

def cmd_report(args) -> int:
    from .report import render_family_report

    family = load_family(args.family)
    written = render_family_report(family, args.out, window=args.window, tol=_tol())
    print("wrote " + " ".join(written))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scs",
        description="spectrally constrained sequence families from circular "
                    "Florentine rectangles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-cfr", help="generate or search for a CFR")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--prime", type=int, help="multiplication-table CFR of Z_p")
    src.add_argument("--search", type=int, metavar="N", help="backtracking search at order N")
    p.add_argument("--rows", type=int, help="row target for --search")
    p.add_argument("--budget", type=int, default=10_000_000, help="search node budget")
    p.add_argument("-o", "--output", help="CFR text file (stdout when omitted)")
    p.set_defaults(func=cmd_gen_cfr)

    p = sub.add_parser("gen-scs", help="build a sequence family from a CFR")
    p.add_argument("construction", choices=["c1", "c2", "c3", "c4"])
    p.add_argument("--cfr", required=True, help="CFR text file")
    p.add_argument("--s0", type=int, help="single inserted column (c2, c4)")
    p.add_argument("--insert", help="comma-separated inserted columns (c3, c4)")
    p.add_argument("--h-matrix", default="dft",
                   help="c4 modulation: 'dft' or a JSON file of [re,im] rows")
    p.add_argument("--sets", type=int, help="c4: use only the first K CFR rows")
    p.add_argument("--window", type=int, help="correlation window (default L)")
    p.add_argument("-o", "--output", help="family JSON file")
    p.add_argument("--corr-pair", action="append", default=[], metavar="I,J,K,L",
                   help="write the correlation CSV of set I member J vs set K member L")
    p.add_argument("--plot", action="store_true", help="render figures next to the output")
    p.set_defaults(func=cmd_gen_scs)

    p = sub.add_parser("bounds", help="floors and optimality verdicts")
    p.add_argument("--family", help="family JSON file to measure and certify")
    p.add_argument("--M", type=int, help="raw mode: family size")
    p.add_argument("--L", type=int, help="raw mode: length")
    p.add_argument("--n", type=int, help="raw mode: forbidden-carrier count")
    p.add_argument("--theta-max", type=float, help="raw mode: measured peak for eta")
    p.add_argument("--order", type=int, help="base-matrix side N for the table")
    p.add_argument("--window", type=int)
    p.add_argument("-o", "--output", help="JSON report file")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="check a family or CFR file")
    p.add_argument("path")
    p.add_argument("--kind", choices=["family", "cfr"],
                   help="default: family for .json, otherwise cfr")
    p.add_argument("--allow-non-unimodular", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="render CSVs and figures for a family")
    p.add_argument("--family", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--window", type=int)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
