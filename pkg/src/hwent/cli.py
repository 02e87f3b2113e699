"""Command-line front end.

Exit codes: 0 success, 1 invalid input or usage, 2 numerical failure.

Examples::

    hwent basis --dim 3
    hwent analyze state.json --out report.json
    hwent analyze --family ghz3-white-noise --x 0.3
    hwent scan --family ghz4-white-noise --steps 101 --format csv
    hwent threshold --family ghz4-white-noise --criterion gme4-corollary2
    hwent compare --family ghz3-white-noise --x 0.9
    hwent dump-tensors state.json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import correlations as corr
from . import criteria, sweep, verify
from .errors import HWEntError, InputError, NumericalError
from .hw_basis import PHASES, basis_set
from .states import FAMILIES, DensityMatrix, family, load_state, random_pure

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
SIG_DIGITS = 12


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    """Fixed 12-significant-digit float formatting for CSV cells."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    return format(float(value), f".{SIG_DIGITS}g")


def _round(obj):
    """Round every float in a JSON-like tree to 12 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(format(obj, f".{SIG_DIGITS}g"))
    if isinstance(obj, (np.floating, np.integer)):
        return _round(obj.item())
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(_round(obj), indent=2) + "\n", out)


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"bad dims {text!r}; expected e.g. 2,2,2") from None


def _state_from_args(args) -> tuple[DensityMatrix, dict]:
    sources = [args.state is not None, args.family is not None, args.random_pure is not None]
    if sum(sources) != 1:
        raise InputError("give exactly one of: a state file, --family (with --x), --random-pure DIMS")
    if args.state is not None:
        return load_state(args.state), {"source": args.state}
    if args.family is not None:
        if args.x is None:
            raise InputError("--family needs --x when analyzing a single state")
        return family(args.family)(args.x), {"family": args.family, "x": args.x}
    dims = _parse_dims(args.random_pure)
    return random_pure(dims, args.seed), {"random_pure": list(dims), "seed": args.seed}


def cmd_basis(args) -> int:
    basis = basis_set(args.dim, args.phase)
    gram = basis.gram()
    deviation = float(np.max(np.abs(gram - basis.d * np.eye(len(basis)))))
    hermiticity = float(np.max(np.abs(basis.observables - basis.observables.conj().transpose(0, 2, 1))))
    out = basis.to_dict()
    out["orthogonality"] = {"max_deviation": deviation, "hermiticity_defect": hermiticity, "ok": deviation <= 1e-12}
    _emit_json(out, args.out)
    return EXIT_OK


def _analysis(args) -> tuple[dict, DensityMatrix, criteria.CriterionReport]:
    rho, source = _state_from_args(args)
    rho.checked()
    data = corr.extract(rho, args.phase)
    report = criteria.evaluate_data(data, args.bound_variant)
    out = {"state": source, **report.to_dict()}
    if getattr(args, "dump_tensors", False):
        out["tensors"] = data.to_dict()["tensors"]
    return out, rho, report


def cmd_analyze(args) -> int:
    out, _, _ = _analysis(args)
    _emit_json(out, args.out)
    return EXIT_OK


def cmd_dump_tensors(args) -> int:
    rho, source = _state_from_args(args)
    rho.checked()
    out = {"state": source, **corr.extract(rho, args.phase).to_dict()}
    _emit_json(out, args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    result = sweep.scan(args.family, args.start, args.stop, args.steps, args.phase, args.bound_variant)
    if args.format == "json":
        _emit_json(result.to_dict(), args.out)
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(result.columns())
    for row in result.rows():
        writer.writerow([fmt(v) for v in row])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_threshold(args) -> int:
    t = sweep.find_threshold(args.family, args.criterion, args.tol, phase=args.phase, bound_variant=args.bound_variant)
    _emit_json(t.to_dict(), args.out)
    return EXIT_OK


_CUT_KINDS = ("tri-bipartition", "quad-1v3", "quad-2v2")


def _cut_of(record: criteria.PartitionRecord) -> str:
    """Bipartition label ``"1|23"`` for a bipartite record."""
    left = record.partition.split("[")[0].split("|")[0]
    n = 3 if record.kind.startswith("tri") else 4
    right = "".join(str(p) for p in range(1, n + 1) if str(p) not in left)
    return left + "|" + right


def _family_thresholds(name: str, phase: str, variant: str, tol: float) -> list[dict]:
    n = len(FAMILIES[name].dims)
    names = ["theorem1", "theorem2", "gme3-theorem3", "gme3-corollary1"] if n == 3 else [
        "theorem4", "theorem5", "theorem6", "gme4-theorem7", "gme4-corollary2"
    ]
    out = []
    for crit in names + ["ppt"]:
        try:
            out.append(sweep.find_threshold(name, crit, tol, phase=phase, bound_variant=variant).to_dict())
        except InputError as exc:
            out.append({"family": name, "criterion": crit, "threshold": None, "note": str(exc)})
    return out


def cmd_compare(args) -> int:
    out = {}
    if args.family is not None and args.x is None and args.state is None and args.random_pure is None:
        out["thresholds"] = _family_thresholds(args.family, args.phase, args.bound_variant, args.tol)
        _emit_json(out, args.out)
        return EXIT_OK
    analysis, rho, report = _analysis(args)
    ppt = {r.cut: r for r in verify.ppt_report(rho)}
    discrepancies = []
    for rec in report.records:
        if rec.detected and rec.kind in _CUT_KINDS:
            cut = _cut_of(rec)
            mirror = "|".join(reversed(cut.split("|")))
            pr = ppt.get(cut) or ppt.get(mirror)
            if pr is not None and not pr.npt:
                discrepancies.append({"partition": rec.partition, "cut": pr.cut, "min_eigenvalue": pr.min_eigenvalue})
    out.update(analysis)
    out["ppt"] = [r.to_dict() for r in ppt.values()]
    out["hw_detected_but_ppt"] = discrepancies
    if args.family is not None:
        out["thresholds"] = _family_thresholds(args.family, args.phase, args.bound_variant, args.tol)
    _emit_json(out, args.out)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phase", choices=PHASES, default="plus", help="sign of the HW phase coefficient (1 +- i)/2")
    p.add_argument("--bound-variant", choices=criteria.BOUND_VARIANTS, default="proof",
                   help="constant used for the fully separable f|g|h bound")
    p.add_argument("--out", help="write output here instead of stdout")


def _add_state_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("state", nargs="?", help="JSON density-matrix file")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--x", type=float, help="family parameter in [0, 1]")
    p.add_argument("--random-pure", metavar="DIMS", help="random pure state with comma-separated dims")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hwent", description="Heisenberg-Weyl correlation-tensor entanglement criteria")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", help="print the HW observable basis for one dimension")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--phase", choices=PHASES, default="plus")
    p.add_argument("--out")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("analyze", help="evaluate every criterion on one state")
    _add_state_source(p)
    _add_common(p)
    p.add_argument("--dump-tensors", action="store_true", help="include all correlation tensors")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="sweep a state family and tabulate margins")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("threshold", help="bisect the detection threshold of one criterion")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--criterion", choices=sweep.criterion_names(), required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("compare", help="HW criteria next to PPT minimum eigenvalues")
    _add_state_source(p)
    p.add_argument("--tol", type=float, default=1e-6, help="bisection tolerance for family thresholds")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dump-tensors", help="print all correlation tensors of a state")
    _add_state_source(p)
    p.add_argument("--phase", choices=PHASES, default="plus")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump_tensors)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"hwent: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (HWEntError, ValueError, OSError) as exc:
        print(f"hwent: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
