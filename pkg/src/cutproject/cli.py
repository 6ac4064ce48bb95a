"""Command-line interface: generate patches, transform schemes, verify claims.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 enumeration
budget exceeded, 4 certification failure.  All outputs are deterministic for
a fixed configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import analysis, hull, transforms
from .fibonacci import fibonacci_scheme, fibonacci_window
from .scalars import Scalar, parse_scalar, set_float_tolerance
from .scheme import Box, CutProjectScheme, EnumerationOverflowError
from .windows import Window, interval_window, window_from_obj

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_CERT = 4


class InputError(ValueError):
    pass


def _dump_json(obj, path: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def load_scheme(source: str, mode: str = "exact") -> CutProjectScheme:
    if source == "builtin:fibonacci":
        scheme = fibonacci_scheme()
        obj = scheme.to_obj()
    else:
        obj = _load_json(source)
    if mode == "float":
        obj = _floatify(obj)
    try:
        return CutProjectScheme.from_obj(obj)
    except Exception as exc:
        raise InputError(f"invalid scheme file {source}: {exc}") from exc


def _floatify(obj):
    """Replace every exact scalar encoding with its float value."""
    if isinstance(obj, dict):
        if obj.get("type") in ("rat", "quad", "alg", "float"):
            return {"type": "float", "value": float(Scalar.from_obj(obj))}
        return {k: _floatify(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_floatify(v) for v in obj]
    return obj


def load_window(source: str, scheme: CutProjectScheme) -> Window:
    if source == "builtin:fibonacci":
        return fibonacci_window()
    if source == "builtin:fibonacci-open":
        return fibonacci_window().interior()
    if source == "builtin:fibonacci-closed":
        return fibonacci_window().closure()
    if source.startswith("interval:"):
        parts = source.split(":")
        if len(parts) not in (3, 4):
            raise InputError("interval window syntax: interval:LO:HI[:cc|co|oc|oo]")
        lo = _scalar(parts[1])
        hi = _scalar(parts[2])
        ends = parts[3] if len(parts) == 4 else "co"
        if ends not in ("cc", "co", "oc", "oo"):
            raise InputError("interval ends must be one of cc, co, oc, oo")
        try:
            return interval_window(
                scheme.space, lo, hi, ends[0] == "c", ends[1] == "c"
            )
        except Exception as exc:
            raise InputError(f"cannot build interval window: {exc}") from exc
    obj = _load_json(source)
    try:
        return window_from_obj(scheme.space, obj)
    except Exception as exc:
        raise InputError(f"invalid window file {source}: {exc}") from exc


def _scalar(text: str) -> Scalar:
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_box(text: str, dim: int) -> Box:
    axes = text.split(";")
    if len(axes) == 1 and dim > 1:
        axes = axes * dim
    if len(axes) != dim:
        raise InputError(f"box needs {dim} axis ranges separated by ';'")
    los = []
    his = []
    for axis in axes:
        parts = axis.split(":")
        if len(parts) != 2:
            raise InputError("each box axis must be LO:HI")
        los.append(_scalar(parts[0]))
        his.append(_scalar(parts[1]))
    try:
        return Box(los, his)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _apply_mode(args):
    if getattr(args, "tol", None):
        set_float_tolerance(args.tol)


def cmd_generate(args) -> int:
    _apply_mode(args)
    scheme = load_scheme(args.scheme, args.mode)
    window = load_window(args.window, scheme)
    box = parse_box(args.box, scheme.d)
    patch = scheme.project_points(box, window, max_candidates=args.max_candidates)
    if args.format == "csv":
        text = patch.to_csv_text()
        if args.out is None or args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
    else:
        _dump_json(patch.to_obj(), args.out)
    return EXIT_OK


def cmd_transform(args) -> int:
    _apply_mode(args)
    scheme = load_scheme(args.scheme)
    if args.kind == "translate":
        if not args.a:
            raise InputError("translate needs --a")
        a = tuple(_scalar(t) for t in args.a.split(";"))
        window = load_window(args.window, scheme) if args.window else None
        box = parse_box(args.box, scheme.d) if args.box else None
        ext = transforms.translate_cps(scheme, a, args.bound, window=window, box=box)
        _dump_json(ext.scheme.to_obj(), args.out_scheme)
        _dump_json(ext.certificate.to_obj(), args.out_cert)
        return EXIT_OK
    if args.kind == "extend":
        window = load_window(args.window, scheme) if args.window else None
        box = parse_box(args.box, scheme.d) if args.box else None
        if args.c:
            diag = tuple(_scalar(t) for t in args.c.split(";"))
        else:
            gens = [g for g, _ in scheme.generators]
            diag, _cert = transforms.choose_generic_lattice(
                gens, scheme.d, args.strategy, args.bound,
                rng=random.Random(args.seed),
            )
        ext = transforms.extend_injective(
            scheme,
            diag,
            relation_bound=args.bound,
            injectivity_bound=args.injectivity_bound,
            window=window,
            box=box,
        )
        _dump_json(ext.scheme.to_obj(), args.out_scheme)
        _dump_json(ext.certificate.to_obj(), args.out_cert)
        return EXIT_OK
    if args.kind == "augment":
        if not args.witness:
            raise InputError("augment needs --witness")
        witness = hull.AlmostModelSetWitness.from_obj(scheme, _load_json(args.witness))
        box = parse_box(args.box, scheme.d) if args.box else None
        aug = transforms.almost_to_model(scheme, witness, witness.truncation, box=box)
        _dump_json(aug.window.to_obj(), args.out_window)
        _dump_json(aug.certificate.to_obj(), args.out_cert)
        return EXIT_OK
    raise InputError(f"unknown transform kind {args.kind!r}")


def cmd_verify(args) -> int:
    _apply_mode(args)
    suite = args.suite
    report: dict
    passed: bool
    if suite == "density":
        scheme = load_scheme(args.scheme)
        window = load_window(args.window, scheme)
        n_values = [int(t) for t in args.n_list.split(",")]
        rep = analysis.empirical_density(scheme, window, n_values)
        tol = args.tol or 1e-3
        closest = abs(rep.empirical[-1] - (rep.lower + rep.upper) / 2)
        passed = rep.sandwich_ok and (not rep.counts or closest <= tol + (rep.upper - rep.lower))
        if args.format == "csv":
            text = rep.to_csv_text()
            if args.out is None or args.out == "-":
                sys.stdout.write(text)
            else:
                with open(args.out, "w") as fh:
                    fh.write(text)
            return EXIT_OK if passed else EXIT_VERIFY
        report = {"suite": suite, "tolerance": tol, "report": rep.to_obj()}
    elif suite == "fb":
        scheme = load_scheme(args.scheme)
        window = load_window(args.window, scheme)
        tol = args.tol or 0.05
        chis = [tuple(float(x) for x in chunk.split(",")) for chunk in args.chi.split(";")]
        density = analysis.empirical_density(scheme, window, [args.n]).empirical[-1]
        values = {}
        passed = True
        for chi in chis:
            a = analysis.fourier_bohr(scheme, window, chi, args.n)
            values[",".join(map(str, chi))] = [a.real, a.imag]
            if all(c == 0 for c in chi):
                passed = passed and abs(a - density) < 1e-12
            else:
                passed = passed and abs(a) < tol
        report = {
            "suite": suite,
            "n": args.n,
            "tolerance": tol,
            "density": density,
            "coefficients": values,
        }
    elif suite == "equidist":
        scheme = load_scheme(args.scheme)
        window = load_window(args.window, scheme)
        tol = args.tol or 0.05
        rep = analysis.equidistribution_check(scheme, window, args.chi_bound, args.n)
        passed = rep.status == "pass" and rep.max_fb < tol
        report = {"suite": suite, "tolerance": tol, "report": rep.to_obj()}
    elif suite == "hull":
        scheme = load_scheme(args.scheme)
        witness = hull.AlmostModelSetWitness.from_obj(scheme, _load_json(args.witness))
        K = parse_box(args.box, scheme.d)
        shift = hull.generic_shift(
            scheme,
            witness.lower,
            witness.upper,
            truncation=args.truncation,
            rng=random.Random(args.seed),
        )
        lower_patch = scheme.project_points(K, witness.lower.translate(shift))
        upper_patch = scheme.project_points(K, witness.upper.closure().translate(shift))
        collapse = lower_patch.point_set() == upper_patch.point_set()
        rng = random.Random(args.seed)
        limits = []
        all_ok = True
        for _ in range(args.targets):
            t_val = Scalar(rng.randint(-400, 400)) / 1000
            t = hull.shift_point(scheme.space, t_val)
            rep = hull.limit_patch_check(scheme, witness, t, K)
            limits.append(rep.to_obj())
            all_ok = all_ok and rep.ok
        passed = collapse and all_ok
        report = {
            "suite": suite,
            "generic_shift_collapses": collapse,
            "limits": limits,
        }
    elif suite == "repetitivity":
        scheme = load_scheme(args.scheme)
        window = load_window(args.window, scheme)
        K = parse_box(args.k_box, scheme.d)
        probe = parse_box(args.box, scheme.d)
        source = lambda b: scheme.project_points(b, window)  # noqa: E731
        rep = analysis.repetitivity_check(source, K, _scalar(args.radius), probe)
        passed = rep.ok
        report = {"suite": suite, "report": rep.to_obj()}
    elif suite == "theorem":
        scheme = load_scheme(args.scheme)
        scheme2 = load_scheme(args.scheme2)
        cert = transforms.TransformCertificate.from_obj(_load_json(args.cert))
        rechecks = transforms.reverify_certificate(cert, scheme, scheme2)
        passed = all(c.passed for c in rechecks)
        report = {
            "suite": suite,
            "kind": cert.kind,
            "checks": [c.to_obj() for c in rechecks],
        }
    else:
        raise InputError(f"unknown suite {suite!r}")
    report["passed"] = passed
    _dump_json(report, args.out)
    return EXIT_OK if passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutproject",
        description="Exact cut-and-project schemes: generation, transforms, verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="enumerate a projection-set patch")
    gen.add_argument("--scheme", required=True)
    gen.add_argument("--window", required=True)
    gen.add_argument("--box", required=True)
    gen.add_argument("--out", default=None)
    gen.add_argument("--format", choices=("csv", "json"), default="csv")
    gen.add_argument("--mode", choices=("exact", "float"), default="exact")
    gen.add_argument("--tol", type=float, default=None)
    gen.add_argument("--max-candidates", type=int, default=5_000_000)
    gen.set_defaults(func=cmd_generate)

    tr = sub.add_parser("transform", help="build a derived scheme with a certificate")
    tr.add_argument("kind", choices=("translate", "extend", "augment"))
    tr.add_argument("--scheme", required=True)
    tr.add_argument("--a", default=None, help="translation vector (semicolon-separated scalars)")
    tr.add_argument("--c", default=None, help="torus diagonal entries (semicolon-separated)")
    tr.add_argument("--strategy", default="named-constants")
    tr.add_argument("--witness", default=None)
    tr.add_argument("--window", default=None)
    tr.add_argument("--box", default=None)
    tr.add_argument("--bound", type=int, default=10 ** 6)
    tr.add_argument("--injectivity-bound", type=int, default=200)
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--tol", type=float, default=None)
    tr.add_argument("--out-scheme", default=None)
    tr.add_argument("--out-cert", default=None)
    tr.add_argument("--out-window", default=None)
    tr.set_defaults(func=cmd_transform)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", required=True,
                     choices=("density", "fb", "equidist", "hull", "repetitivity", "theorem"))
    ver.add_argument("--scheme", default=None)
    ver.add_argument("--scheme2", default=None)
    ver.add_argument("--window", default=None)
    ver.add_argument("--witness", default=None)
    ver.add_argument("--cert", default=None)
    ver.add_argument("--box", default="-20:20")
    ver.add_argument("--k-box", default="0:5")
    ver.add_argument("--radius", default="20")
    ver.add_argument("--n", type=int, default=1000)
    ver.add_argument("--n-list", default="100,200,400")
    ver.add_argument("--chi", default="0")
    ver.add_argument("--chi-bound", type=float, default=3.0)
    ver.add_argument("--targets", type=int, default=3)
    ver.add_argument("--truncation", type=int, default=500)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--tol", type=float, default=None)
    ver.add_argument("--format", choices=("json", "csv"), default="json")
    ver.add_argument("--out", default=None)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationOverflowError as exc:
        print(f"enumeration budget exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (
        transforms.CertificationError,
        transforms.InjectivityError,
        transforms.CommensurabilityUndecidedError,
        transforms.WitnessInclusionError,
    ) as exc:
        witness = getattr(exc, "witness", None)
        print(f"certification failed: {exc}", file=sys.stderr)
        if witness is not None:
            print(f"witness: {witness}", file=sys.stderr)
        return EXIT_CERT
    except (ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
