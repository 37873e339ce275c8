"""Command-line entry points ``kovacic`` and ``bianchi``.

Exit codes: 0 success, 1 domain error, 2 usage error (including malformed
expressions).  Data goes to stdout, diagnostics to stderr.
"""

import argparse
import json
import sys
from fractions import Fraction

from .errors import DomainError, ParseError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def rational(text):
    """Parse ``p/q``, an integer or a decimal into an exact Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _globals(p):
    p.add_argument("--config", help="JSON file of option defaults (command-line flags win)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default 1)")
    p.add_argument("--seed", type=int, default=None, help="reserved; sampling is deterministic")


def _merge_config(args, defaults):
    """Fill unset options from --config, then from ``defaults``; return the resolved dict."""
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
    resolved = {}
    for key, val in vars(args).items():
        if key == "func" or key.startswith("_"):
            continue
        if val is None and key in cfg:
            val = cfg[key]
            if key in ("lam", "energy") and val is not None:
                val = rational(val)
        if val is None and key in defaults:
            val = defaults[key]
        setattr(args, key, val)
        resolved[key] = val
    return resolved


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    return v


def _dump(obj, path=None):
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True)
    if path:
        try:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise DomainError(f"cannot write {path}: {exc}") from exc
        print(path)
    else:
        print(text)


def _run(parser, argv):
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_usage(sys.stderr)
            raise UsageError(f"{parser.prog}: error: a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


# ----------------------------------------------------------------------
# kovacic
# ----------------------------------------------------------------------
def _kovacic_solve(args):
    from .kovacic import run

    resolved = _merge_config(args, {"order": "canonical", "audit": False, "threads": 1})
    if args.r is None:
        args._parser.print_usage(sys.stderr)
        raise UsageError("kovacic solve: error: --r is required")
    report = run(args.r, order=args.order, exhaustive=bool(args.audit))
    if args.json:
        d = report.to_dict()
        d["config"] = _jsonable({k: v for k, v in resolved.items() if k != "r"})
        print(json.dumps(d, indent=2, sort_keys=True))
    else:
        print(f"input: {report.input}")
        for a in report.attempts:
            tag = f"case {a.case_id}" + (f" (n={a.n})" if a.case_id == 3 else "")
            print(f"{tag}: {a.status}" + (f" - {a.reason}" if a.reason else ""))
        print(f"outcome: {report.outcome}")
        if report.galois_label:
            print(f"galois group: {report.galois_label}")
        if report.degree is not None:
            print(f"degree: {report.degree}")
        if report.omega_data:
            print("omega minimal polynomial coefficients: " + ", ".join(str(c) for c in report.omega_data))
        for n in report.notes:
            print(f"note: {n}")
    return EXIT_OK


def kovacic_parser():
    p = _Parser(prog="kovacic", description="Kovacic algorithm for xi'' = r xi over Q(x).")
    _globals(p)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    s = sub.add_parser("solve", help="run the algorithm on a rational function r")
    _globals(s)
    s.add_argument("--r", help="rational function of x, e.g. '3/(4*x^2)'")
    s.add_argument("--order", choices=["canonical", "paper"], default=None)
    s.add_argument("--json", action="store_true", help="print the full report as JSON")
    s.add_argument("--audit", action="store_true", default=None, help="attempt every case")
    s.set_defaults(_parser=s, func=_kovacic_solve)
    return p


def kovacic_main(argv=None):
    return _run(kovacic_parser(), sys.argv[1:] if argv is None else argv)


# ----------------------------------------------------------------------
# bianchi
# ----------------------------------------------------------------------
def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        if getattr(args, "_parser", None) is not None:
            args._parser.print_usage(sys.stderr)
        flags = ", ".join("--" + ("lambda" if n == "lam" else n.replace("_", "-")) for n in missing)
        raise UsageError(f"bianchi {args.command}: error: missing required {flags}")


def _params(args):
    from .model import ModelParams

    return ModelParams(args.lam, args.energy)


def _bianchi_ve(args):
    from .algebra import AlgebraicPoint
    from .model import build_ve_suite
    from .model.second_ve import render_mu, second_ve_source

    resolved = _merge_config(args, {"emit": "g", "threads": 1})
    _need(args, "lam", "energy")
    suite = build_ve_suite(_params(args))
    what = args.emit
    if what == "c1":
        val = str(suite.C1)
    elif what == "c2":
        val = str(suite.C2)
    elif what in ("p", "q", "g"):
        val = str(getattr(suite, what))
    elif what == "delta":
        val = str(suite.discriminant)
    elif what == "rho":
        val = [repr(r) if isinstance(r, AlgebraicPoint) else str(r) for r in suite.rho]
    else:
        src = second_ve_source(suite)
        val = {"printed": {f"a{k}": render_mu(c) for k, c in enumerate(src.printed)},
               "derived": {f"a{k}": render_mu(c) for k, c in enumerate(src.derived)}}
    if args.json:
        print(json.dumps({"lambda": str(args.lam), "energy": str(args.energy), "emit": what, "value": val,
                          "config": _jsonable(resolved)}, indent=2, sort_keys=True))
    elif isinstance(val, dict):
        for group, coeffs in val.items():
            for k, v in coeffs.items():
                print(f"{group} {k} = {v}")
    elif isinstance(val, list):
        print("\n".join(val))
    else:
        print(val)
    return EXIT_OK


def _bianchi_sections(args):
    from .dynamics import GridSpec, IntegratorConfig, emit, section_batch

    resolved = _merge_config(args, {"a_range": "0.5:3.0:20", "pa_range": "-2:2:20", "tmax": 300.0,
                                    "escape_radius": 20.0, "threads": 1, "rtol": 1e-10, "atol": 1e-12})
    _need(args, "lam", "energy", "out")
    try:
        grid = GridSpec.parse(args.a_range, args.pa_range)
    except ValueError as exc:
        raise UsageError(f"bianchi sections: error: {exc}") from exc
    cfg = IntegratorConfig(rtol=float(args.rtol), atol=float(args.atol), t_max=float(args.tmax),
                           escape_radius=float(args.escape_radius))
    res = section_batch(args.lam, args.energy, grid, cfg, threads=int(args.threads))
    emit(res, args.out, args.svg)
    meta = {"config": _jsonable({k: v for k, v in resolved.items()}), "summary": res.summary(),
            "infeasible": res.infeasible, "ambiguous": res.ambiguous,
            "fates": [vars(f) for f in res.fates], "integrator": res.config["integrator"]}
    meta_path = args.out + ".meta.json"
    with open(meta_path, "w") as fh:
        fh.write(json.dumps(_jsonable(meta), indent=2, sort_keys=True) + "\n")
    print(args.out)
    if args.svg:
        print(args.svg)
    print(meta_path)
    return EXIT_OK


def _choose_path(suite):
    from .contour import Path
    from .evidence import REFERENCE_PATH, default_path

    ref = Path(list(REFERENCE_PATH))
    if ref.min_distance(suite.avoid_points()) >= 0.05:
        return ref
    return default_path(suite)


def verify_report(lam, energy, suite_name="all", source="printed"):
    """Build the verification report used by ``bianchi verify``."""
    from .evidence import (ave_check, default_loops, galois_identities, monodromy_increments,
                           resolve_constants, second_ve_equivalence)
    from .model import ModelParams, VEPath, build_ve_suite

    suite = build_ve_suite(ModelParams(lam, energy))
    path = _choose_path(suite)
    vp = VEPath(suite, path)
    res = resolve_constants(suite, vp)
    out = {"lambda": str(suite.lam), "energy": str(suite.energy), "suite": suite_name,
           "resolution": res.to_dict()}
    s = res.suite
    cand = res.candidate
    if cand is None:
        out["verdict"] = "inconclusive"
        return out
    if suite_name in ("closed-form", "all"):
        out["closed_form"] = {"ave": ave_check(s, vp, cand).to_dict(), "wronskian": res.wronskian}
    if suite_name in ("identities", "all"):
        out["identities"] = [r.to_dict() for r in galois_identities(s, vp, cand)]
    if suite_name in ("second-ve", "all"):
        out["second_ve"] = [r.to_dict() for r in second_ve_equivalence(s, vp, cand)]
    if suite_name in ("monodromy", "all"):
        loops, radius = default_loops(s)
        out["monodromy"] = {"radius": radius, "source": source,
                            "loops": {k: monodromy_increments(s, lp, cand, source=source).to_dict()
                                      for k, lp in loops.items()}}
    return out


def _bianchi_verify(args):
    resolved = _merge_config(args, {"suite": "all", "source": "printed", "threads": 1})
    _need(args, "lam", "energy")
    report = verify_report(args.lam, args.energy, args.suite, args.source)
    report["config"] = resolved
    _dump(report, args.json)
    return EXIT_OK


def bianchi_parser():
    p = _Parser(prog="bianchi", description="Axisymmetric Bianchi IX: VE data, sections, verification.")
    _globals(p)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(s):
        _globals(s)
        s.add_argument("--lambda", dest="lam", type=rational, default=None, help="cosmological constant p/q")
        s.add_argument("--energy", type=rational, default=None, help="energy level p/q")

    ve = sub.add_parser("ve", help="exact variational-equation data")
    common(ve)
    ve.add_argument("--emit", choices=["c1", "c2", "p", "q", "g", "delta", "rho", "pcoeffs"], default=None)
    ve.add_argument("--json", action="store_true")
    ve.set_defaults(_parser=ve, func=_bianchi_ve)

    sec = sub.add_parser("sections", help="Poincare sections P_B = 0, P_B' > 0")
    common(sec)
    sec.add_argument("--a-range", dest="a_range", default=None, help="lo:hi:n (default 0.5:3.0:20)")
    sec.add_argument("--pa-range", dest="pa_range", default=None, help="lo:hi:n (default -2:2:20)")
    sec.add_argument("--tmax", type=float, default=None, help="integration horizon (default 300)")
    sec.add_argument("--escape-radius", dest="escape_radius", type=float, default=None)
    sec.add_argument("--rtol", type=float, default=None)
    sec.add_argument("--atol", type=float, default=None)
    sec.add_argument("--out", default=None, help="CSV destination")
    sec.add_argument("--svg", default=None, help="optional SVG scatter destination")
    sec.set_defaults(_parser=sec, func=_bianchi_sections)

    ver = sub.add_parser("verify", help="numerical checks of the closed forms and identities")
    common(ver)
    ver.add_argument("--suite", choices=["closed-form", "identities", "second-ve", "monodromy", "all"],
                     default=None)
    ver.add_argument("--source", choices=["printed", "derived"], default=None,
                     help="coefficients of P used in the monodromy integrands")
    ver.add_argument("--json", default=None, help="write the report here instead of stdout")
    ver.set_defaults(_parser=ver, func=_bianchi_verify)
    return p


def bianchi_main(argv=None):
    return _run(bianchi_parser(), sys.argv[1:] if argv is None else argv)


def main(argv=None):
    """Dispatch on the first word: ``kovacic ...`` or ``bianchi ...``."""
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv and argv[0] == "kovacic":
        return kovacic_main(argv[1:])
    if argv and argv[0] == "bianchi":
        return bianchi_main(argv[1:])
    print("usage: python -m bianchi_galois {kovacic,bianchi} ...", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
