"""Command-line front end: ``meyerkit generate | verify | qm | bounds``.

Exit codes: 0 all requested checks verified, 1 usage or I/O error,
2 a mathematical check failed or a hypothesis was violated.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .cert import (
    covering_radius,
    massicot_wagner_bound,
    min_gap,
    product_cover_check,
    vector_view,
)
from .cps import (
    CutProjectScheme,
    SchemeError,
    Window,
    _IntegerForm,
    box_to_json,
    generate_patch,
    good_model_tower,
    graph_min_gap,
    parse_box,
    scale_box,
    validate_scheme,
    window_commensurability_witness,
    window_sumset,
)
from .exact import parse_rational
from .freegroup import (
    BrooksQM,
    ConjugatedQM,
    DomainError,
    defect_max,
    homogenize_estimate,
    parse_word,
    qm_commensurability_witness,
    quasi_kernel_bound,
    quasi_kernel_cover,
    quasi_kernel_patch,
)

SCHEMA = "meyerkit/1"
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
KNOWN_CHECKS = ("discrete3", "dense", "cover", "tower", "graph")
DEFAULT_CHECKS = "discrete3,dense,cover,tower:5,graph"


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def inputs_digest(self) -> str:
        blob = json.dumps(self.inputs, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "warnings": self.warnings,
            "version": __version__,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _r12(x):
    return None if x is None else float(_fmt(x))


# ---------------------------------------------------------------------------
# inputs


def bundled_scheme_names() -> list[str]:
    return sorted(p.name for p in resources.files("meyerkit").joinpath("schemes").iterdir() if p.name.endswith(".json"))


def load_scheme(name: str) -> CutProjectScheme:
    path = Path(name)
    if path.exists():
        text = path.read_text()
    else:
        fname = path.name if path.suffix == ".json" else path.name + ".json"
        bundled = resources.files("meyerkit").joinpath("schemes", fname)
        if not bundled.is_file():
            raise FileNotFoundError(name)
        text = bundled.read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemeError(f"scheme file is not JSON: {exc}") from exc
    return CutProjectScheme.from_json(obj)


def _window(args, s: CutProjectScheme) -> Window:
    text = args.window or ""
    W = Window.parse(text, closed=not args.open_window)
    if W.dim != s.internal_dim:
        if W.dim == 1 and s.internal_dim > 1:
            W = Window(W.half_widths * s.internal_dim, W.closed)
        else:
            raise UsageError(f"window has {W.dim} half-widths, scheme internal dim is {s.internal_dim}")
    return W


def _box(args, s: CutProjectScheme):
    box = parse_box(args.box)
    if len(box) == 1 and s.physical_dim > 1:
        box = box * s.physical_dim
    if len(box) != s.physical_dim:
        raise UsageError(f"box has {len(box)} components, scheme physical dim is {s.physical_dim}")
    return box


def _scheme_inputs(s: CutProjectScheme, W: Window, box) -> dict:
    return {"scheme": s.to_json(), "window": W.to_json(), "box": box_to_json(box)}


# ---------------------------------------------------------------------------
# generate


def write_patch_csv(patch, out) -> None:
    s = patch.scheme
    header = (
        [f"idx_{i}" for i in range(s.rank)]
        + [f"phys_{i}" for i in range(s.physical_dim)]
        + [f"int_{i}" for i in range(s.internal_dim)]
    )
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for p in patch.points:
        w.writerow(list(p.index) + [_fmt(x) for x in p.physical_float()] + [_fmt(x) for x in p.internal_float()])


def cmd_generate(args) -> tuple[RunReport, int]:
    s = load_scheme(args.scheme)
    W, box = _window(args, s), _box(args, s)
    report = RunReport("generate", _scheme_inputs(s, W, box))
    validation = validate_scheme(s)
    report.results["validation"] = validation.to_json()
    if not validation.internal_dense_necessary:
        report.warnings.append("internal projection fails the necessary density condition")
    if not validation.ok:
        report.results["failed_checks"] = validation.failed_checks()
        return report, EXIT_FAILED
    patch = generate_patch(s, W, box, args.jobs)
    report.results["point_count"] = len(patch)
    report.results["index_bounds"] = [list(b) for b in patch.index_bounds]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_patch_csv(patch, fh)
    else:
        write_patch_csv(patch, sys.stdout)
    if args.exact_json:
        sidecar = dict(_scheme_inputs(s, W, box), points=[p.to_json() for p in patch.points])
        Path(args.exact_json).write_text(json.dumps(sidecar, sort_keys=True, indent=1) + "\n")
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# verify


def parse_checks(text: str) -> list[tuple[str, int | None]]:
    if text.strip() == "all":
        text = DEFAULT_CHECKS
    out = []
    for item in text.split(","):
        name, _, param = item.strip().partition(":")
        if name not in KNOWN_CHECKS:
            raise UsageError(f"unknown check {name!r}; known: {', '.join(KNOWN_CHECKS)}")
        if name == "tower":
            try:
                depth = int(param) if param else 5
            except ValueError:
                raise UsageError(f"bad tower depth {param!r}") from None
            if depth < 1:
                raise UsageError("tower depth must be >= 1")
            out.append((name, depth))
        else:
            if param:
                raise UsageError(f"check {name!r} takes no parameter")
            out.append((name, None))
    return out


def _physical_embed(s: CutProjectScheme):
    form = _IntegerForm(s.physical_block)
    return lambda z: tuple(float(form.value(p)) for p in form.eval(z))


def _check_discrete3(s, W, box, patch) -> dict:
    view = vector_view(s.rank)
    idx = [p.index for p in patch.points]
    gap = min_gap(idx, 3, view, embed=_physical_embed(s), box=box_to_json(scale_box(box, 3)))
    out = gap.to_json()
    out["gap"] = _r12(gap.gap)
    out["verified"] = gap.gap is not None and gap.gap > 0 and not gap.degenerate
    return out


def _check_dense(s, W, box, patch, grid_step) -> dict:
    pts = [p.physical_float() for p in patch.points]
    cr = covering_radius(pts, box, grid_step)
    out = cr.to_json()
    out["radius"] = _r12(cr.radius)
    out["certified_radius"] = _r12(cr.certified_radius)
    out["worst_node"] = [_r12(x) for x in cr.worst_node] if cr.worst_node else None
    if s.physical_dim == 1 and len(patch.points) > 1:
        xs = [p.physical[0] for p in patch.points]
        out["largest_gap"] = _r12(max(float(b - a) for a, b in zip(xs, xs[1:])))
    out["verified"] = cr.radius < float("inf")
    out["note"] = "covering radius measured on the box; relative denseness beyond it is not claimed"
    return out


def _check_cover(s, W, box, patch, jobs) -> dict:
    W2 = window_sumset(W, W)
    witness = window_commensurability_witness(s, W2, W, box, jobs)
    F = witness.forward.F
    internal = s.internal_block
    prod = product_cover_check(
        lambda z: W.contains(internal.matvec(z)), [p.index for p in patch.points], F, vector_view(s.rank)
    )
    return {
        "F": [list(f) for f in F],
        "F_size": len(F),
        "witness": witness.to_json(),
        "product_check": prod.to_json(),
        "verified": witness.verified and prod.verified,
    }


def _check_tower(s, W, box, depth, jobs) -> dict:
    res = good_model_tower(s, W, depth, box, jobs)
    return {
        "depth": depth,
        "verified_depth": res.tower.verified_depth,
        "levels": [l.to_json() for l in res.levels],
        "level0_point_count": len(res.patches[0]),
        "verified": res.verified,
    }


def _check_graph(s, radius) -> dict:
    g = graph_min_gap(s, radius)
    out = g.to_json()
    out["min_norm"] = _r12(g.min_norm)
    out["verified"] = g.squared_norm > 0
    return out


def cmd_verify(args) -> tuple[RunReport, int]:
    checks = parse_checks(args.checks)
    s = load_scheme(args.scheme)
    W, box = _window(args, s), _box(args, s)
    grid_step = parse_rational(args.grid_step)
    inputs = _scheme_inputs(s, W, box)
    inputs.update(checks=[f"{n}:{p}" if p else n for n, p in checks], grid_step=str(grid_step), graph_radius=args.graph_radius)
    report = RunReport("verify", inputs)
    validation = validate_scheme(s)
    report.results["validation"] = validation.to_json()
    if not validation.internal_dense_necessary:
        report.warnings.append("internal projection fails the necessary density condition")
    if not validation.ok:
        report.results["failed_checks"] = validation.failed_checks()
        return report, EXIT_FAILED
    patch = generate_patch(s, W, box, args.jobs)
    report.results["point_count"] = len(patch)
    if not patch.points:
        report.results["degenerate"] = True
        report.warnings.append("empty patch: nothing to verify")
        return report, EXIT_FAILED
    report.results["degenerate"] = False
    verdicts = {}
    for name, param in checks:
        if name == "discrete3":
            r = _check_discrete3(s, W, box, patch)
        elif name == "dense":
            r = _check_dense(s, W, box, patch, grid_step)
        elif name == "cover":
            r = _check_cover(s, W, box, patch, args.jobs)
        elif name == "tower":
            r = _check_tower(s, W, box, param, args.jobs)
            name = f"tower:{param}"
        else:
            r = _check_graph(s, args.graph_radius)
        report.results[name] = r
        verdicts[name] = bool(r["verified"])
    report.results["verdicts"] = verdicts
    report.results["all_verified"] = all(verdicts.values())
    return report, EXIT_OK if all(verdicts.values()) else EXIT_FAILED


# ---------------------------------------------------------------------------
# qm


def _qm(args, report: RunReport) -> BrooksQM:
    w, changed = parse_word(args.word, args.rank)
    if changed:
        report.warnings.append(f"pattern {args.word!r} was freely reduced to {w}")
    if not w.text:
        raise UsageError("the pattern word reduces to the identity")
    f = BrooksQM(w)
    if not f.non_meyer_pattern:
        report.warnings.append(
            f"pattern {w} is a generator or its inverse: the lemmas apply, the non-Meyer example does not"
        )
    return f


def cmd_qm(args) -> tuple[RunReport, int]:
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "jobs", "report", "out") and v is not None}
    report = RunReport("qm", {k: str(v) for k, v in inputs.items()})
    f = _qm(args, report)
    res = report.results
    res["pattern"] = str(f.w)
    res["pattern_length"] = f.length
    res["analytic_defect_bound"] = f.defect_bound
    action = args.action
    if action == "defect":
        d = defect_max(f, args.radius, args.budget)
        res["defect"] = d.to_json()
        return report, EXIT_OK if d.within_bound else EXIT_FAILED
    if action == "homogenize":
        g, _ = parse_word(args.g, args.rank)
        est = homogenize_estimate(f, g, args.N)
        est2 = homogenize_estimate(f, g, 2 * args.N)
        res["homogenize"] = {
            "g": str(g),
            "N": args.N,
            "estimate": str(est),
            "estimate_2N": str(est2),
            "difference": str(est2 - est),
            "scale_C_over_N": str(Fraction(f.defect_bound, args.N)),
        }
        return report, EXIT_OK
    R = parse_rational(args.R)
    if action == "kernel":
        patch = quasi_kernel_patch(f, R, args.radius)
        res["kernel"] = {"R": str(R), "radius": args.radius, "size": len(patch)}
        if args.out:
            Path(args.out).write_text(patch.to_lines())
        return report, EXIT_OK
    C = parse_rational(args.C) if args.C is not None else Fraction(f.defect_bound)
    if action == "cover":
        try:
            cert = quasi_kernel_cover(f, R, C, args.radius)
        except DomainError as exc:
            res["error"] = f"hypothesis R > C(f) of the quasi-kernel lemma violated: {exc}"
            return report, EXIT_FAILED
        res["cover"] = cert.to_json()
        res["cover"]["F"] = [str(x) for x in cert.F]
        res["cover"]["failures"] = [str(x) for x in cert.failures]
        res["lemma_bound"] = str(quasi_kernel_bound(R, C))
        ok = cert.verified and cert.bound_satisfied
        return report, EXIT_OK if ok else EXIT_FAILED
    # commensurate
    conj, _ = parse_word(args.conj, args.rank)
    f2 = ConjugatedQM(f, conj) if conj.text else f
    R2 = parse_rational(args.R2) if args.R2 is not None else R
    try:
        wit = qm_commensurability_witness(f, R, C, f2, R2, C, args.radius)
    except DomainError as exc:
        res["error"] = str(exc)
        return report, EXIT_FAILED
    out = wit.to_json()
    for side in ("forward", "backward"):
        out[side]["F"] = [str(x) for x in getattr(wit, side).F]
        out[side]["failures"] = [str(x) for x in getattr(wit, side).failures]
    res["second_map"] = str(f2)
    res["commensurate"] = out
    return report, EXIT_OK if wit.verified else EXIT_FAILED


# ---------------------------------------------------------------------------
# bounds


def cmd_bounds(args) -> tuple[RunReport, int]:
    report = RunReport("bounds", {"K": args.K, "m": args.m})
    try:
        b = massicot_wagner_bound(args.K, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report.results.update(b.to_json())
    return report, EXIT_OK


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--report", help="also write the JSON report to this file")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for patch generation")

    # the same options after a qm action word; suppressed defaults keep earlier values
    late = _Parser(add_help=False)
    late.add_argument("--report", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    late.add_argument("--jobs", type=_positive_int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    scheme = _Parser(add_help=False)
    scheme.add_argument("--scheme", required=True, help=f"scheme JSON file or bundled name ({', '.join(bundled_scheme_names())})")
    scheme.add_argument("--window", default="", help="internal half-widths r1,r2,...")
    scheme.add_argument("--box", required=True, help="physical box lo..hi[,lo..hi...]")
    scheme.add_argument("--open-window", action="store_true", help="drop the upper faces of the window")

    p = _Parser(prog="meyerkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"meyerkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", parents=[common, scheme], help="write a model-set patch as CSV")
    g.add_argument("--out", help="CSV output file (default: stdout, report then goes to --report only)")
    g.add_argument("--exact-json", help="write exact coordinates to this JSON sidecar")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", parents=[common, scheme], help="certify Meyer properties of a patch")
    v.add_argument("--checks", default="all", help=f"comma list from discrete3,dense,cover,tower:N,graph (default: {DEFAULT_CHECKS})")
    v.add_argument("--grid-step", default="1/10", help="grid step for the covering radius")
    v.add_argument("--graph-radius", type=_positive_int, default=20, help="index search radius for the graph gap")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("qm", parents=[common], help="Brooks quasi-morphism analyses")
    q.add_argument("--word", required=True, help="pattern word, e.g. ab or aB (capital = inverse)")
    q.add_argument("--rank", type=_positive_int, default=2)
    qsub = q.add_subparsers(dest="action", required=True, parser_class=_Parser)
    qd = qsub.add_parser("defect", parents=[late])
    qd.add_argument("--radius", type=_positive_int, required=True)
    qd.add_argument("--budget", type=_positive_int, default=None, help="max number of pairs to scan")
    qh = qsub.add_parser("homogenize", parents=[late])
    qh.add_argument("--g", required=True)
    qh.add_argument("--N", type=_positive_int, default=64)
    qk = qsub.add_parser("kernel", parents=[late])
    qk.add_argument("--R", required=True)
    qk.add_argument("--radius", type=int, required=True)
    qk.add_argument("--out", help="write kernel words with their f-values")
    qc = qsub.add_parser("cover", parents=[late])
    qc.add_argument("--R", required=True)
    qc.add_argument("--C", default=None, help="defect bound to use (default 3(l-1))")
    qc.add_argument("--radius", type=int, required=True)
    qm_ = qsub.add_parser("commensurate", parents=[late])
    qm_.add_argument("--R", required=True, help="level of the first quasi-kernel")
    qm_.add_argument("--R2", default=None, help="level of the second quasi-kernel (default R)")
    qm_.add_argument("--C", default=None, help="defect bound for both maps (default 3(l-1))")
    qm_.add_argument("--conj", default="e", help="second map is f(c g c^-1) for this word c")
    qm_.add_argument("--radius", type=int, required=True)
    q.set_defaults(func=cmd_qm)

    b = sub.add_parser("bounds", parents=[common], help="Massicot-Wagner constants")
    b.add_argument("--K", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b.set_defaults(func=cmd_bounds)
    return p


_VALUE_OPTIONS = ("--box", "--window", "--R", "--R2", "--C")


def _attach_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "--box -50..50" as two options; glue such values on
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        report, code = args.func(args)
    except UsageError as exc:
        print(f"meyerkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"meyerkit: file not found: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemeError as exc:
        print(f"meyerkit: invalid scheme: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"meyerkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.dumps()
    if args.report:
        Path(args.report).write_text(text)
    # generate without --out streams CSV on stdout; the report goes there only on failure
    if not (args.command == "generate" and not args.out and code == EXIT_OK):
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
