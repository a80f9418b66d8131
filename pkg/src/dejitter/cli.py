"""Command-line front end: synthesize | dejitter | evaluate.

``synthesize`` corrupts a PNG with seeded jitter and writes the corrupted
image, the ground-truth displacement file and a JSON manifest.  ``dejitter``
estimates the displacement field and writes the reconstruction; ``--rho
auto`` reads the realised maximum from a manifest.  ``evaluate`` prints MSE,
PSNR and displacement accuracy as JSON.  Exit status is 0 on success, 2 for
usage errors and 1 for runtime failures, with a one-line message on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import fields, line, line_pixel, metrics, pixel, synthesis
from .fields import EnergyParams
from .image import load_png, save_png

MANIFEST_NAME = "manifest.json"


def _json_value(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _emit(report: dict) -> None:
    print(json.dumps({k: _json_value(v) for k, v in report.items()}, indent=2))


def cmd_synthesize(args) -> int:
    img = load_png(args.input)
    spec = synthesis.SynthesisSpec(
        sigma2=args.sigma2, noise_sigma2=args.noise_sigma2, seed=args.seed, kind=args.kind
    )
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    if args.kind == "line":
        corrupted, truth = synthesis.synthesize_line(img, spec)
        fields.save_line_displacement(truth, outdir / "truth.txt")
    elif args.kind == "line-pixel":
        corrupted, truth = synthesis.synthesize_line_pixel(img, spec)
        fields.save_scalar_field(truth, outdir / "truth.txt")
    else:
        corrupted, truth = synthesis.synthesize_pixel(img, spec)
        fields.save_vector_field(truth, outdir / "truth.txt")

    save_png(corrupted, outdir / "corrupted.png")
    manifest = {
        "kind": args.kind,
        "seed": args.seed,
        "sigma2": args.sigma2,
        "noise_sigma2": args.noise_sigma2,
        "rho": truth.rho,
        "width": img.width,
        "height": img.height,
        "channels": img.channels,
    }
    (outdir / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")
    _emit(manifest)
    return 0


def _resolve_rho(args) -> int:
    if args.rho != "auto":
        try:
            rho = int(args.rho)
        except ValueError:
            raise SystemExit(f"dejitter: --rho must be an integer or 'auto', got {args.rho!r}")
        if rho < 0:
            raise SystemExit("dejitter: --rho must be non-negative")
        return rho
    manifest_path = Path(args.manifest) if args.manifest else Path(args.input).parent / MANIFEST_NAME
    if not manifest_path.is_file():
        raise SystemExit(f"dejitter: --rho auto requires a manifest, none found at {manifest_path}")
    return int(json.loads(manifest_path.read_text())["rho"])


def cmd_dejitter(args) -> int:
    img = load_png(args.input)
    rho = _resolve_rho(args)
    params = EnergyParams(alpha=args.alpha, p=args.p, order=args.order, rho=rho)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    report = {"kind": args.kind, "alpha": args.alpha, "p": args.p, "rho": rho}
    if args.kind == "line":
        est, rec, energy = line.dejitter_line(img, params)
        fields.save_line_displacement(est, outdir / "estimate.txt")
        report["order"] = args.order
    elif args.kind == "line-pixel":
        est, rec, energy = line_pixel.dejitter_line_pixel(img, params, threads=args.threads)
        fields.save_scalar_field(est, outdir / "estimate.txt")
        report["order"] = args.order
    else:
        est, rec, trace = pixel.dejitter_pixel(
            img, params, max_rounds=args.rounds, threads=args.threads
        )
        fields.save_vector_field(est, outdir / "estimate.txt")
        energy = trace.records[-1].energy if trace.records else trace.initial_energy
        report["initial_energy"] = trace.initial_energy
        report["sweeps"] = len(trace.records)
        if args.trace:
            trace.to_csv(args.trace)

    save_png(rec, outdir / "reconstructed.png")
    report["energy"] = energy
    _emit(report)
    return 0


def cmd_evaluate(args) -> int:
    original = load_png(args.original)
    reconstructed = load_png(args.reconstructed)
    report = {
        "mse": metrics.mse(original, reconstructed),
        "psnr": metrics.psnr(original, reconstructed),
    }
    if args.truth or args.estimate:
        if not (args.truth and args.estimate and args.kind):
            raise SystemExit(
                "dejitter: displacement accuracy needs --truth, --estimate and --kind"
            )
        if args.kind == "line":
            truth = fields.load_line_displacement(args.truth)
            est = fields.load_line_displacement(args.estimate)
            acc = metrics.displacement_accuracy
        elif args.kind == "line-pixel":
            truth = fields.load_scalar_field(args.truth)
            est = fields.load_scalar_field(args.estimate)
            acc = metrics.scalar_field_accuracy
        else:
            truth = fields.load_vector_field(args.truth)
            est = fields.load_vector_field(args.estimate)
            acc = metrics.vector_field_accuracy
        report["accuracy"] = acc(est, truth)
        report["accuracy_modulo"] = acc(est, truth, modulo_shift=True)
    _emit(report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dejitter", description="Jitter synthesis, removal and evaluation for PNG images."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kinds = ("line", "line-pixel", "pixel")

    p_syn = sub.add_parser("synthesize", help="corrupt an image with seeded jitter")
    p_syn.add_argument("input", help="input PNG (8-bit grayscale or RGB)")
    p_syn.add_argument("outdir", help="output directory")
    p_syn.add_argument("--kind", choices=kinds, required=True)
    p_syn.add_argument("--sigma2", type=float, default=1.5, help="displacement variance")
    p_syn.add_argument("--noise-sigma2", type=float, default=0.0, help="intensity noise variance")
    p_syn.add_argument("--seed", type=int, default=0)
    p_syn.set_defaults(func=cmd_synthesize)

    p_dej = sub.add_parser("dejitter", help="estimate and remove jitter")
    p_dej.add_argument("input", help="corrupted PNG")
    p_dej.add_argument("outdir", help="output directory")
    p_dej.add_argument("--kind", choices=kinds, required=True)
    p_dej.add_argument("--alpha", type=float, default=0.0, help="displacement penalty weight")
    p_dej.add_argument("--p", type=float, default=0.5, help="difference exponent")
    p_dej.add_argument("--order", type=int, choices=(1, 2), default=1,
                       help="highest vertical-derivative order (line kinds only)")
    p_dej.add_argument("--rho", default="auto",
                       help="displacement bound, or 'auto' to read the manifest")
    p_dej.add_argument("--manifest", default=None,
                       help="manifest path for --rho auto (default: next to the input)")
    p_dej.add_argument("--rounds", type=int, default=4, help="descent cycles (pixel kind)")
    p_dej.add_argument("--trace", default=None, help="write per-sweep energies as CSV (pixel kind)")
    p_dej.add_argument("--threads", type=int, default=1, help="worker threads for line solves")
    p_dej.set_defaults(func=cmd_dejitter)

    p_eval = sub.add_parser("evaluate", help="compare a reconstruction against the original")
    p_eval.add_argument("--original", required=True)
    p_eval.add_argument("--reconstructed", required=True)
    p_eval.add_argument("--truth", default=None, help="ground-truth displacement file")
    p_eval.add_argument("--estimate", default=None, help="estimated displacement file")
    p_eval.add_argument("--kind", choices=kinds, default=None)
    p_eval.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kind", None) == "pixel" and getattr(args, "order", 1) == 2:
        parser.error("--order 2 is not supported for --kind pixel")
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"dejitter: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
