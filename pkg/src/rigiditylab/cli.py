"""Command-line entry point.

Machine output is JSON (or SVG for ``render``) on stdout or ``--out``; a
short human summary goes to stderr. Exit codes: 0 affirmative, 1 mismatch or
failed suite, 2 usage error, 3 model validation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .conjugacy import reconcile_nonorientable, synthesize_conjugacy
from .errors import PreconditionError, RigidityError, ValidationError
from .models import builtin_model, random_conjugator
from .orbitspace import PRESETS, Scene, Viewport, preset, render_svg
from .reps import Representation, apply_automorphism, fiber_twist_automorphism, spectrum
from .serialize import config_hash, dumps, rep_from_json, rep_to_json
from .suites import dense_suite, linked_suite, pairs_dense_suite, unlinked_suite

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3


class UsageError(Exception):
    pass


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _rational(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


# model loading -------------------------------------------------------------

def _model_sources(args) -> List[dict]:
    """Model sources in order: --model, then --model2, with --builtin names
    filling the remaining slots."""
    builtins = list(args.builtin or [])
    out = []
    for path in (getattr(args, "model", None), getattr(args, "model2", None)):
        if path is not None:
            out.append({"path": path})
        elif builtins:
            out.append({"builtin": builtins.pop(0)})
    out.extend({"builtin": b} for b in builtins)
    return out


def _describe_source(src: dict) -> dict:
    if "builtin" in src:
        return {"builtin": src["builtin"]}
    try:
        data = Path(src["path"]).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read model file: {exc}") from None
    return {"path": src["path"], "sha256": hashlib.sha256(data).hexdigest()}


def _load(src: dict, seed: Optional[int], backend: Optional[str]) -> Representation:
    if "builtin" in src:
        name = src["builtin"]
        if name.startswith("random_pl") and seed is None:
            raise UsageError(f"builtin {name} is randomized; pass --seed")
        try:
            rep = builtin_model(name, seed)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc).strip("'\"")) from None
    else:
        try:
            data = json.loads(Path(src["path"]).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read model {src['path']}: {exc}") from None
        rep = rep_from_json(data)
    if backend is not None and rep.backend() != backend:
        raise UsageError(f"model {rep.name} uses the {rep.backend()} backend, not {backend}")
    return rep


def _report(command: str, config: dict, body: dict) -> dict:
    return {"command": command, "config": config, "config_hash": config_hash(config),
            "tool_version": __version__, **body}


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _base_config(args, models: Sequence[dict]) -> dict:
    return {"command": args.command, "models": [_describe_source(m) for m in models],
            "seed": args.seed, "backend": args.backend}


def _validation_report(command: str, config: dict, exc: ValidationError) -> dict:
    return _report(command, config, {
        "verdict": "validation_error", "error": str(exc),
        "witness_word": None if exc.word is None else str(exc.word)})


# commands -----------------------------------------------------------------

def cmd_spectrum(args) -> int:
    models = _model_sources(args)
    if len(models) != 1:
        raise UsageError("spectrum takes exactly one model")
    config = {**_base_config(args, models), "L": args.L, "oriented": args.oriented}
    try:
        rep = _load(models[0], args.seed, args.backend).validate(min(args.L, 3))
    except ValidationError as exc:
        _emit(dumps(_validation_report("spectrum", config, exc)), args.out)
        _say(f"validation failed: {exc}")
        return EXIT_VALIDATION
    spec = spectrum(rep, args.L, args.oriented)
    with_fp = sum(e.has_fixed_points for e in spec.entries)
    report = _report("spectrum", config, {
        "verdict": "ok", "model": rep.name, "classes": len(spec),
        "classes_with_fixed_points": with_fp, "entries": spec.to_json()})
    _emit(dumps(report), args.out)
    _say(f"{rep.name}: {len(spec)} classes up to length {args.L}, {with_fp} with fixed points")
    return EXIT_OK


def _slim(conj: Optional[dict], full: bool) -> Optional[dict]:
    if conj is None or full:
        return conj
    out = {k: v for k, v in conj.items() if k not in ("theta", "samples")}
    out["sample_count"] = len(conj.get("samples") or [])
    return out


def cmd_compare(args) -> int:
    models = _model_sources(args)
    if len(models) != 2:
        raise UsageError("compare takes exactly two models")
    config = {**_base_config(args, models), "L": args.L, "oriented": args.oriented,
              "full": args.full}
    try:
        rep1 = _load(models[0], args.seed, args.backend).validate(min(args.L, 3))
        rep2 = _load(models[1], args.seed, args.backend).validate(min(args.L, 3))
    except ValidationError as exc:
        _emit(dumps(_validation_report("compare", config, exc)), args.out)
        _say(f"validation failed: {exc}")
        return EXIT_VALIDATION
    if rep1.names != rep2.names:
        raise UsageError(f"generator names differ: {list(rep1.names)} vs {list(rep2.names)}")
    if rep1.is_orientable() and rep2.is_orientable():
        res = synthesize_conjugacy(rep1, rep2, args.L, args.oriented)
        verdict = res.status.value
        body = {"verdict": verdict, "conjugacy": _slim(res.to_json(), args.full)}
        ok = res.is_conjugate
        witness = res.witness
    else:
        rec = reconcile_nonorientable(rep1, rep2, args.L)
        verdict = rec.verdict.value
        data = rec.to_json()
        data["conjugacy"] = _slim(data["conjugacy"], args.full)
        body = {"verdict": verdict, "reconciliation": data}
        ok = not rec.flagged
        witness = None if rec.witness is None else (rec.witness,)
    report = _report("compare", config, {"models": [rep1.name, rep2.name], **body})
    _emit(dumps(report), args.out)
    if ok:
        _say(f"{rep1.name} and {rep2.name}: {verdict}")
        return EXIT_OK
    w = ", ".join(str(x) for x in witness) if witness else "none"
    _say(f"{rep1.name} and {rep2.name}: {verdict} (witness {w})")
    return EXIT_MISMATCH


def cmd_lemmas(args) -> int:
    if args.seed is None:
        raise UsageError("lemmas needs --seed")
    if args.N < 1:
        raise UsageError("-N must be positive")
    models = _model_sources(args) or [{"builtin": "geodesic_genus2"}]
    if len(models) != 1:
        raise UsageError("lemmas takes at most one model (for the density suites)")
    config = {**_base_config(args, models), "N": args.N, "epsilon": str(args.epsilon),
              "targets": args.targets, "scan": args.scan}
    try:
        rep = _load(models[0], args.seed, args.backend).validate(3)
    except ValidationError as exc:
        _emit(dumps(_validation_report("lemmas", config, exc)), args.out)
        _say(f"validation failed: {exc}")
        return EXIT_VALIDATION
    eps = float(args.epsilon)
    suites = [
        linked_suite(args.N, args.seed, args.scan),
        unlinked_suite(args.N, args.seed),
        dense_suite(rep, args.targets, args.seed, eps),
        pairs_dense_suite(rep, args.targets, args.seed, eps),
    ]
    passed = all(s.passed for s in suites)
    report = _report("lemmas", config, {
        "verdict": "pass" if passed else "fail", "suites": [s.to_json() for s in suites]})
    _emit(dumps(report), args.out)
    for s in suites:
        _say(f"{s.name:12s} {'pass' if s.passed else 'FAIL'}  {s.cases - s.failures}/{s.cases}")
    return EXIT_OK if passed else EXIT_MISMATCH


def cmd_render(args) -> int:
    if (args.preset is None) == (args.scene is None):
        raise UsageError("render takes exactly one of --preset or --scene")
    if args.preset is not None:
        try:
            scene, vp = preset(args.preset)
        except KeyError as exc:
            raise UsageError(str(exc).strip("'\"")) from None
    else:
        try:
            data = json.loads(Path(args.scene).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read scene: {exc}") from None
        try:
            scene = Scene.from_json(data)
            vp = Viewport(*data.get("viewport", [0, 4, 0, 4]))
        except (ValidationError, PreconditionError, TypeError) as exc:
            raise UsageError(f"invalid scene: {exc}") from None
    svg = render_svg(scene, vp)
    _emit(svg, args.out)
    _say(f"rendered {args.preset or args.scene}: {len(svg)} bytes")
    return EXIT_OK


def _parse_twist(text: str) -> dict:
    out = {}
    for part in filter(None, text.split(",")):
        name, _, k = part.partition("=")
        try:
            out[name.strip()] = int(k)
        except ValueError:
            raise UsageError(f"bad twist entry {part!r}; expected name=int") from None
    return out


def cmd_model(args) -> int:
    models = _model_sources(args)
    if len(models) != 1:
        raise UsageError("model takes exactly one model")
    try:
        rep = _load(models[0], args.seed, args.backend)
        if args.twist:
            sigma = fiber_twist_automorphism(rep, _parse_twist(args.twist))
            rep = apply_automorphism(rep, sigma)
        if args.conjugate_seed is not None:
            h = random_conjugator(random.Random(args.conjugate_seed))
            rep = rep.conjugate_by(h)
        rep.validate(3)
    except ValidationError as exc:
        _say(f"validation failed: {exc}")
        return EXIT_VALIDATION
    _emit(dumps(rep_to_json(rep)), args.out)
    _say(f"wrote model {rep.name} ({rep.backend()} backend)")
    return EXIT_OK


# parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model JSON file")
    common.add_argument("--builtin", action="append", metavar="NAME",
                        help="builtin model (geodesic_genus2, triangle_237, random_pl(k), "
                             "random_pl_twisted(k)); repeat for a second model")
    common.add_argument("--seed", type=int, help="seed for randomized models and suites")
    common.add_argument("--backend", choices=["pl", "moebius"],
                        help="require the model to use this backend")
    common.add_argument("--out", help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="rigiditylab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"rigiditylab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="word-length spectrum of a model")
    s.add_argument("-L", type=_positive_int, default=3, help="word length bound")
    s.add_argument("--oriented", action="store_true", help="do not identify w with w^-1")
    s.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("compare", parents=[common],
                       help="compare spectra and synthesize a conjugacy")
    c.add_argument("--model2", help="second model JSON file")
    c.add_argument("-L", type=_positive_int, default=5, help="word length bound")
    c.add_argument("--oriented", action="store_true", help="do not identify w with w^-1")
    c.add_argument("--full", action="store_true", help="include theta and all samples")
    c.set_defaults(func=cmd_compare)

    m = sub.add_parser("lemmas", parents=[common], help="run the seeded lemma suites")
    m.add_argument("-N", type=int, default=100, help="number of random pairs per suite")
    m.add_argument("--epsilon", type=_rational, default=Fraction(1, 1000),
                   help="target radius for the density suites")
    m.add_argument("--targets", type=_positive_int, default=20,
                   help="number of density targets")
    m.add_argument("--scan", type=_positive_int, default=5,
                   help="half-width of the a^n b^m scan box")
    m.set_defaults(func=cmd_lemmas)

    r = sub.add_parser("render", parents=[common], help="render an orbit-space figure as SVG")
    r.add_argument("--preset", help=f"one of {', '.join(sorted(PRESETS))}")
    r.add_argument("--scene", help="scene JSON file")
    r.set_defaults(func=cmd_render)

    d = sub.add_parser("model", parents=[common], help="write a model as JSON")
    d.add_argument("--conjugate-seed", type=int,
                   help="conjugate by a random PL map drawn from this seed")
    d.add_argument("--twist", help="fiber twist, e.g. 'a=1,b=-1'")
    d.set_defaults(func=cmd_model)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        _say(f"usage error: {exc}")
        return EXIT_USAGE
    except PreconditionError as exc:
        _say(f"usage error: {exc}")
        return EXIT_USAGE
    except ValidationError as exc:
        _say(f"validation failed: {exc}")
        return EXIT_VALIDATION
    except RigidityError as exc:
        _say(f"error: {exc}")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
