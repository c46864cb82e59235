"""Command-line front end.

Usage::

    normprobe classify --spec l1_dim2.json --out results/
    normprobe scan     --spec linf_dim2.json --probe degenerate_zero --out results/
    normprobe ray      --spec l1_dim2.json --y 1,0 --direction 0,1 --out results/
    normprobe polarize --spec quadratic_diag41.json --out results/
    normprobe analyze  --spec combo_sum.json --out results/

``--spec`` takes a path to a norm JSON file or the name of a bundled spec
(``normprobe list`` prints them).  Every run writes ``manifest.json`` next
to its outputs.  Exit status: 0 on success (``classify``/``analyze``:
inner-product consistent), 2 for a ``NotInnerProduct`` verdict, 1 on error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .axioms import axiom_scan
from .diagnostics import (DEFAULT_THRESHOLD, DEFAULT_Y_DRAWS, CoherenceError, Outcome,
                          classify, degenerate_zero_probe, homogeneity_defect,
                          identity_defect, parallelogram_scan, scaling_tension_probe,
                          unit_ys)
from .norms import Lp, NormSpec, ScalarField, SpecError, basis_vector
from .pfunc import PContext, RadicandError, default_schedule, sandwich_check
from .polarization import form_axiom_scan, gram_reconstruct
from .reports import encode_vector, merge_reports
from .sampling import SampleConfig
from .specio import bundled_spec_names, bundled_spec_path, load_spec, spec_to_dict

EXIT_OK, EXIT_ERROR, EXIT_NOT_INNER = 0, 1, 2

COMMANDS = ("analyze", "classify", "scan", "polarize", "ray")
DEFAULT_PROBES = ("sandwich", "homogeneity", "identity", "parallelogram")
ALL_PROBES = DEFAULT_PROBES + ("degenerate_zero", "axioms", "form_axioms")


class CLIError(Exception):
    pass


@dataclass
class RunManifest:
    spec_path: str
    command: str
    cfg: SampleConfig
    output_dir: str
    format: str = "json"
    threshold: float = DEFAULT_THRESHOLD
    probes: tuple = DEFAULT_PROBES
    t_max: float = 2.0**20
    ts: list = None
    y: list = None
    direction: list = None
    n_y: int = DEFAULT_Y_DRAWS
    spec: dict = field(default=None, repr=False)

    def to_dict(self):
        d = {
            "command": self.command,
            "spec_path": self.spec_path,
            "spec": self.spec,
            "cfg": self.cfg.to_dict(),
            "output_dir": self.output_dir,
            "format": self.format,
            "threshold": self.threshold,
            "n_y": self.n_y,
        }
        if self.command in ("scan", "analyze"):
            d["probes"] = list(self.probes)
        if self.command in ("ray", "analyze"):
            d["t_max"] = self.t_max
            d["ts"] = self.ts
            d["y"] = self.y
            d["direction"] = self.direction
        return d


# -- output helpers ----------------------------------------------------------

def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


class _Writer:
    """Collects outputs and writes them once the run has succeeded."""

    def __init__(self, out: Path):
        self.out = out
        self.files = {}

    def add(self, name, text):
        self.files[name] = text

    def flush(self):
        try:
            self.out.mkdir(parents=True, exist_ok=True)
            for name, text in self.files.items():
                (self.out / name).write_text(text, encoding="utf-8")
        except OSError as e:
            raise CLIError(f"cannot write to output directory {self.out}: {e.strerror or e}")


def _reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["probe_name", "sup_defect", "raw_sup", "n_samples", "tolerance", "seed",
                "exceeds"])
    for r in reports:
        w.writerow([r.probe_name, repr(r.sup_defect),
                    "" if r.raw_sup is None else repr(float(r.raw_sup)),
                    r.n_samples, repr(r.tolerance), r.seed, int(r.exceeds)])
    return buf.getvalue()


def _reports_text(title, reports) -> str:
    lines = [title]
    for r in reports:
        flag = "EXCEEDS" if r.exceeds else "ok"
        lines.append(f"  {r.probe_name:<18} sup={r.sup_defect:.6e}  tol={r.tolerance:.1e}  "
                     f"n={r.n_samples}  {flag}")
        if r.witness is not None and r.exceeds:
            lines.append(f"    witness x={np.array2string(np.asarray(r.witness.x), precision=6)}")
    return "\n".join(lines) + "\n"


def _write_reports(writer, stem, title, reports, fmt, extra=None):
    if fmt == "csv":
        writer.add(f"{stem}.csv", _reports_csv(reports))
    elif fmt == "text":
        writer.add(f"{stem}.txt", _reports_text(title, reports))
    else:
        payload = {"reports": [r.to_dict() for r in reports]}
        if extra:
            payload.update(extra)
        writer.add(f"{stem}.json", _dumps(payload))


# -- commands ----------------------------------------------------------------

def _parse_vec(text, spec: NormSpec, what: str):
    if text is None:
        return None
    try:
        vals = [complex(v.strip().replace("i", "j")) for v in text.split(",")]
    except ValueError:
        raise CLIError(f"--{what}: expected comma-separated numbers, got {text!r}")
    if len(vals) != spec.dim:
        raise CLIError(f"--{what}: expected {spec.dim} entries, got {len(vals)}")
    if spec.field is ScalarField.REAL:
        if any(v.imag for v in vals):
            raise CLIError(f"--{what}: complex entries for a real norm")
        return np.array([v.real for v in vals])
    return np.array(vals, dtype=np.complex128)


def _ys(spec, m: RunManifest):
    if m.y is not None:
        return [PContext(spec, _parse_vec(m.y, spec, "y")).y]
    return unit_ys(spec, m.cfg, m.n_y)


def run_classify(spec, m, writer, workers):
    v = classify(spec, m.cfg, m.threshold, m.n_y, workers)
    if m.format == "csv":
        writer.add("verdict.csv", _reports_csv(v.evidence))
    if m.format == "text":
        writer.add("verdict.txt", _reports_text(f"verdict: {v.outcome.value}", v.evidence))
    writer.add("verdict.json", _dumps(v.to_dict()))
    return v


def run_scan(spec, m, writer, workers):
    cfg, tol = m.cfg, m.threshold
    ys = _ys(spec, m)
    reports = []
    for probe in m.probes:
        if probe == "sandwich":
            reports.append(merge_reports(
                [sandwich_check(PContext(spec, y), cfg, 1e-9, workers, f"sandwich/{k}")
                 for k, y in enumerate(ys)]))
        elif probe == "homogeneity":
            reports.append(merge_reports(
                [homogeneity_defect(PContext(spec, y), cfg, tol, workers, f"homogeneity/{k}")
                 for k, y in enumerate(ys)]))
        elif probe == "identity":
            reports.append(merge_reports(
                [identity_defect(PContext(spec, y), cfg, tol, workers, f"identity/{k}")
                 for k, y in enumerate(ys)]))
        elif probe == "parallelogram":
            reports.append(parallelogram_scan(spec, cfg, tol, workers))
        elif probe == "degenerate_zero":
            reports.append(merge_reports(
                [degenerate_zero_probe(PContext(spec, y), cfg) for y in ys]))
        elif probe == "axioms":
            reports.extend(axiom_scan(spec, cfg, 1e-9, workers))
        elif probe == "form_axioms":
            reports.extend(form_axiom_scan(spec, cfg, tol, workers))
    _write_reports(writer, "scan", f"scan of {spec.describe()}", reports, m.format)
    return reports


def run_ray(spec, m, writer, workers):
    y = _parse_vec(m.y, spec, "y")
    if y is None:
        y = basis_vector(spec, 0)
    ctx = PContext(spec, y)
    direction = _parse_vec(m.direction, spec, "direction")
    if direction is None:
        direction = basis_vector(spec, spec.dim - 1)
    direction = PContext(spec, direction).y
    ts = m.ts if m.ts is not None else default_schedule(m.t_max)
    summary = scaling_tension_probe(ctx, direction, ts)
    writer.add("ray.csv", summary.profile.to_csv())
    extra = summary.to_dict()
    extra.update(y=encode_vector(ctx.y), direction=encode_vector(direction))
    if m.format == "text":
        writer.add("ray.txt", "\n".join(f"{k}: {v}" for k, v in sorted(extra.items())) + "\n")
    else:
        writer.add("ray_summary.json", _dumps(extra))
    return summary


def run_polarize(spec, m, writer, workers):
    recon = gram_reconstruct(spec, m.cfg, workers)
    axioms = form_axiom_scan(spec, m.cfg, m.threshold, workers)
    payload = recon.to_dict()
    payload["form_axioms"] = [r.to_dict() for r in axioms]
    writer.add("gram.json", _dumps(payload))
    if m.format == "text":
        lines = [f"gram:\n{np.array2string(recon.gram, precision=8)}",
                 f"residual_sup: {recon.residual_sup:.6e}",
                 f"spd_margin: {recon.spd_margin:.6e}"]
        writer.add("gram.txt", "\n".join(lines) + "\n" + _reports_text("form axioms", axioms))
    elif m.format == "csv":
        writer.add("form_axioms.csv", _reports_csv(axioms))
    return recon, axioms


def _override(spec: NormSpec, dim, fld) -> NormSpec:
    if dim is None and fld is None:
        return spec
    dim = spec.dim if dim is None else dim
    fld = spec.field if fld is None else ScalarField.parse(fld)
    if (dim, fld) == (spec.dim, spec.field):
        return spec
    if isinstance(spec.kind, Lp):
        return NormSpec(dim, fld, spec.kind)
    raise SpecError("--dim/--field can only override plain lp specs")


def _resolve_spec_path(text: str) -> Path:
    p = Path(text)
    if not p.exists() and p.parent == Path(".") and p.stem in bundled_spec_names():
        return bundled_spec_path(p.stem)
    return p


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; status 2 is reserved for NotInnerProduct verdicts
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CLIError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="normprobe", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list bundled norm specs")
    helps = {
        "analyze": "run classify, scan, polarize and ray together",
        "classify": "decide whether the norm comes from an inner product",
        "scan": "run individual defect probes",
        "polarize": "reconstruct the Gram matrix by polarization",
        "ray": "profile p_y along a ray t -> t*direction",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--spec", required=True, help="norm spec JSON file or bundled name")
        p.add_argument("--out", default="normprobe-out", help="output directory")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
        p.add_argument("--dim", type=int, default=None, help="override the spec dimension")
        p.add_argument("--field", choices=("real", "complex"), default=None)
        p.add_argument("--probe", action="append", choices=ALL_PROBES,
                       help="probe to run (repeatable; scan/analyze)")
        p.add_argument("--y-draws", type=int, default=DEFAULT_Y_DRAWS,
                       help="random unit y per scan, besides the basis vectors")
        p.add_argument("--y", default=None, help="fixed unit vector y, comma-separated")
        p.add_argument("--direction", default=None, help="ray direction, comma-separated")
        p.add_argument("--t-max", type=float, default=2.0**20)
        p.add_argument("--ts", default=None, help="explicit comma-separated t schedule")
        p.add_argument("--workers", type=int, default=1,
                       help="threads for sample evaluation (results do not depend on it)")
    return parser


def _manifest(args, spec) -> RunManifest:
    if args.samples < 1:
        raise CLIError("n_samples must be positive")
    if not (args.threshold > 0):
        raise CLIError("threshold must be > 0")
    if args.workers < 1:
        raise CLIError("workers must be >= 1")
    ts = None
    if args.ts is not None:
        try:
            ts = [float(v) for v in args.ts.split(",")]
        except ValueError:
            raise CLIError(f"--ts: expected comma-separated numbers, got {args.ts!r}")
        if any(not math.isfinite(t) or t <= 0 for t in ts):
            raise CLIError("all t must be finite and > 0")
    cfg = SampleConfig.for_spec(spec, n_samples=args.samples, seed=args.seed)
    return RunManifest(
        spec_path=args.spec, command=args.command, cfg=cfg, output_dir=args.out,
        format=args.format, threshold=args.threshold,
        probes=tuple(args.probe) if args.probe else DEFAULT_PROBES,
        t_max=args.t_max, ts=ts, y=args.y, direction=args.direction,
        n_y=args.y_draws, spec=spec_to_dict(spec),
    )


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in bundled_spec_names():
            print(name, file=stdout)
        return EXIT_OK
    spec = _override(load_spec(_resolve_spec_path(args.spec)), args.dim, args.field)
    m = _manifest(args, spec)
    writer = _Writer(Path(args.out))
    status = EXIT_OK
    cmd = args.command
    if cmd in ("classify", "analyze"):
        v = run_classify(spec, m, writer, args.workers)
        print(f"verdict: {v.outcome.value} (worst {v.worst.probe_name} "
              f"sup={v.worst.sup_defect:.3e}, threshold {m.threshold:g})", file=stdout)
        if v.outcome is Outcome.NOT_INNER_PRODUCT:
            status = EXIT_NOT_INNER
    if cmd in ("scan", "analyze"):
        for r in run_scan(spec, m, writer, args.workers):
            print(f"{r.probe_name}: sup={r.sup_defect:.3e}", file=stdout)
    if cmd in ("polarize", "analyze"):
        recon, _ = run_polarize(spec, m, writer, args.workers)
        print(f"residual_sup={recon.residual_sup:.3e} spd_margin={recon.spd_margin:.3e}",
              file=stdout)
    if cmd in ("ray", "analyze"):
        s = run_ray(spec, m, writer, args.workers)
        print(f"ray: sup|d|={s.sup_abs_defect:.6f} final d={s.final_defect:.6f} "
              f"trend={s.trend}", file=stdout)
    writer.add("manifest.json", _dumps(m.to_dict()))
    writer.flush()
    return status


def main(argv=None) -> int:
    try:
        return run(argv)
    except (SpecError, CLIError, RadicandError, CoherenceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
