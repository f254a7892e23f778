"""Command-line entry point: ``carnot-forge <command> ...``.

Every command writes one JSON report to stdout and a short summary to stderr.  Exit codes:
0 success, 1 I/O or parse error, 2 validation or invariant failure, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import math
import os
import sys
from fractions import Fraction

from . import __version__
from .dsl import parse_frame_doc
from .errors import (AlgebraError, BracketConditionError, CarnotError, DimensionError, FlowDomainError,
                     FrameError, ParseError, PreconditionError)
from .frames import default_jet_order, structure_constants_at_base, validate_frame
from .nilpotent import (CanonicalBasis, GradedLieAlgebra, check_law, class_membership, dynkin,
                        heisenberg_algebra, heisenberg_basis, heisenberg_expected_last, law_from_basis,
                        standard_levi)
from .numeric import FlowConfig, first_kind_rate_test, sample_box, second_kind_rate_test, thread_count
from .poly import Poly, format_poly
from .privileged import coordinate_orders, is_privileged, model_fields, privilege
from .vf import format_field

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

DEFAULTS = {"assoc_budget": 12, "trials": 1000, "steps": 256, "guard": 10.0, "box": 0.25, "samples": 16,
            "seed": 0}


class _Failure(Exception):
    """Carries an exit code and a JSON-able payload out of a command."""

    def __init__(self, code: int, message: str, detail=None):
        super().__init__(message)
        self.code = code
        self.detail = detail


# serialization ---------------------------------------------------------------------

def _clean(obj):
    """Make a report JSON-safe and deterministic (Fractions as ``p/q`` strings, non-finite floats as null)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if hasattr(obj, "item"):  # numpy scalars
        return _clean(obj.item())
    if hasattr(obj, "to_json"):
        return _clean(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def build_manifest(command: str, input_bytes: bytes | None, options: dict, outputs: dict) -> dict:
    """RunManifest: input digest, command, effective options, tool version and hashed outputs."""
    return {
        "tool": "carnot-forge",
        "version": __version__,
        "command": command,
        "input_sha256": sha256_hex(input_bytes) if input_bytes is not None else None,
        "options": options,
        "outputs": [{"name": name, "sha256": sha256_hex(canonical_json(value))}
                    for name, value in sorted(outputs.items())],
    }


def report_digest(report: dict) -> str:
    """Hash of a report with the timestamp removed."""
    body = {k: v for k, v in report.items() if k not in ("timestamp", "report_sha256")}
    return sha256_hex(canonical_json(body))


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch else _dt.datetime.now(_dt.timezone.utc)
    return now.replace(microsecond=0).isoformat()


# input helpers ---------------------------------------------------------------------

def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load_frame(raw: bytes):
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not UTF-8: {exc.reason}", offset=exc.start) from None
    return parse_frame_doc(text)


def _rational(v) -> Fraction:
    if isinstance(v, bool):
        raise ParseError(f"not a rational number: {v!r}")
    try:
        return Fraction(str(v).strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {v!r}") from None


def _vector(text: str) -> list:
    """``[1, "1/2"]`` or ``1,1/2``."""
    text = text.strip()
    if text.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed vector: {exc.msg}", offset=exc.pos) from None
    else:
        items = [t for t in text.split(",") if t.strip()]
    return [_rational(v) for v in items]


def _matrix(text: str) -> list:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed matrix: {exc.msg}", offset=exc.pos) from None
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a JSON list of rows")
    return [[_rational(v) for v in row] for row in rows]


def _pick(flag, doc_value, default):
    if flag is not None:
        return flag
    if doc_value is not None:
        return doc_value
    return default


def _require_valid(frame, jet_order: int) -> dict:
    report = validate_frame(frame, jet_order)
    if not report.valid:
        raise _Failure(EXIT_INVARIANT, "frame violates the bracket condition",
                       {"validation": report.to_json()})
    return report.to_json()


def _privileged_frame(frame, auto: bool):
    """Return ``(frame, privilege_result_or_None)``; refuse non-privileged input unless ``auto``."""
    report = is_privileged(frame)
    if report.verdict:
        return frame, None
    if not auto:
        raise _Failure(EXIT_INVARIANT, "frame is not in privileged coordinates (use --auto to privilege it first)",
                       {"privileged": report.to_json()})
    result = privilege(frame)
    if not result.report.verdict:
        raise _Failure(EXIT_INVARIANT, "privileging did not produce privileged coordinates",
                       {"privileged": result.report.to_json()})
    return result.frame, result


# commands --------------------------------------------------------------------------

def cmd_validate(args, raw: bytes):
    frame, fopts = _load_frame(raw)
    jet = _pick(args.jet_order, fopts.jet_order, default_jet_order(frame.w))
    options = {"jet_order": jet}
    report = validate_frame(frame, jet)
    outputs = {"validation": report.to_json()}
    n_bad = len(report.violations)
    summary = "frame is valid" if report.valid else f"frame is invalid: {n_bad} bracket violation(s)"
    return (EXIT_OK if report.valid else EXIT_INVARIANT), options, outputs, summary


def cmd_privilege(args, raw: bytes):
    frame, fopts = _load_frame(raw)
    jet = _pick(args.jet_order, fopts.jet_order, default_jet_order(frame.w))
    cap = args.cap if args.cap is not None else frame.r + 2
    options = {"jet_order": jet, "cap": cap}
    validation = _require_valid(frame, jet)
    result = privilege(frame)
    outputs = result.to_json()
    outputs["validation"] = {"valid": validation["valid"], "jet_order": jet}
    outputs["coordinate_orders"] = coordinate_orders(result.frame, cap)
    outputs["psi_hat_is_identity"] = result.psi_hat.is_identity()
    ok = result.report.verdict
    summary = ("privileged coordinates found" if ok else "privileging failed") + \
        ("; psi_hat is the identity" if result.psi_hat.is_identity() else "")
    return (EXIT_OK if ok else EXIT_INVARIANT), options, outputs, summary


def cmd_approx(args, raw: bytes):
    frame, fopts = _load_frame(raw)
    jet = _pick(args.jet_order, fopts.jet_order, default_jet_order(frame.w))
    budget = _pick(args.assoc_budget, None, DEFAULTS["assoc_budget"])
    trials = _pick(args.trials, None, DEFAULTS["trials"])
    seed = _pick(args.seed, fopts.seed, DEFAULTS["seed"])
    options = {"jet_order": jet, "assoc_budget": budget, "trials": trials, "seed": seed, "auto": args.auto}
    _require_valid(frame, jet)
    pframe, pres = _privileged_frame(frame, args.auto)
    models = model_fields(pframe)
    L = structure_constants_at_base(pframe)
    g = GradedLieAlgebra(pframe.weights, L, validate=False)
    outputs = {
        "model_fields": [format_field(X) for X in models],
        "structure_constants": L.to_json(),
        "algebra": g.to_json(),
    }
    if pres is not None:
        outputs["privilege"] = {"psi": pres.psi.to_json(), "frame": pres.frame.to_json()}
    try:
        g.validate()
    except AlgebraError as exc:
        raise _Failure(EXIT_INVARIANT, f"structure constants: {exc}", dict(outputs, witness=exc.witness)) from None
    basis = CanonicalBasis(models, check=False)
    membership = class_membership(basis, g)
    outputs["membership"] = membership.to_json()
    if not membership.verdict:
        raise _Failure(EXIT_INVARIANT, "model fields do not realize the algebra", outputs)
    law = law_from_basis(basis)
    checks = check_law(law, basis, g, assoc_budget=budget, trials=trials, seed=seed)
    outputs["group_law"] = law.to_json()
    outputs["checks"] = checks.to_json()
    summary = (f"nilpotent approximation of dimension {pframe.n}; associativity {checks.associativity}; "
               + ("all identities hold" if checks.ok else "an identity FAILED"))
    return (EXIT_OK if checks.ok else EXIT_INVARIANT), options, outputs, summary


def cmd_canonical(args, raw: bytes):
    frame, fopts = _load_frame(raw)
    jet = _pick(args.jet_order, fopts.jet_order, default_jet_order(frame.w))
    steps = _pick(args.steps, fopts.steps, DEFAULTS["steps"])
    guard = _pick(args.guard, fopts.guard, DEFAULTS["guard"])
    box = _pick(args.box, fopts.box, DEFAULTS["box"])
    count = _pick(args.samples, fopts.samples, DEFAULTS["samples"])
    seed = _pick(args.seed, fopts.seed, DEFAULTS["seed"])
    options = {"kind": args.kind, "jet_order": jet, "steps": steps, "guard": guard, "box": box, "samples": count,
               "seed": seed, "threads": thread_count(), "auto": args.auto}
    try:
        cfg = FlowConfig(steps=steps, guard=guard)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    _require_valid(frame, jet)
    pframe, _ = _privileged_frame(frame, args.auto)
    X = sample_box(pframe.n, count, box, seed)
    test = first_kind_rate_test if args.kind == 1 else second_kind_rate_test
    report = test(pframe, X, cfg)
    outputs = {"rate_report": report.to_json()}
    summary = (f"kind {args.kind}: verdict {report.verdict}, pass fraction {report.pass_fraction:.3f}, "
               f"max error {report.max_error:.3g}")
    if report.verdict == "inconclusive":
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK if report.ok else EXIT_INVARIANT
    return code, options, outputs, summary


def cmd_heisenberg(args, raw):
    n = args.n
    if n < 3:
        raise ParseError("--n must be at least 3")
    m = n - 1
    levi = _matrix(args.levi) if args.levi is not None else None
    if levi is None:
        if m % 2:
            raise ParseError("the standard Levi form needs n - 1 even; pass --levi explicitly")
        levi = standard_levi(m)
    b = _matrix(args.b) if args.b is not None else [[Fraction(0)] * m for _ in range(m)]
    for name, M in (("levi", levi), ("b", b)):
        if len(M) != m or any(len(row) != m for row in M):
            raise ParseError(f"--{name} must be a {m}x{m} matrix")
    budget = _pick(args.assoc_budget, None, DEFAULTS["assoc_budget"])
    options = {"n": n, "levi": levi, "b": b, "assoc_budget": budget}
    g = heisenberg_algebra(levi)  # AlgebraError unless antisymmetric
    fields = heisenberg_basis(levi, b)
    membership = class_membership(fields, g)
    outputs = {
        "algebra": g.to_json(),
        "basis": [format_field(Y) for Y in fields],
        "membership": membership.to_json(),
        "b_symmetric": all(b[i][j] == b[j][i] for i in range(m) for j in range(m)),
    }
    if not membership.verdict:
        return EXIT_INVARIANT, options, outputs, "basis is not in the class (b must be symmetric)"
    basis = CanonicalBasis(fields)
    law = law_from_basis(basis)
    checks = check_law(law, basis, g, assoc_budget=budget)
    expected = heisenberg_expected_last(levi, b)
    outputs["group_law"] = law.to_json()
    outputs["checks"] = checks.to_json()
    names = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    outputs["expected_last_component"] = format_poly(expected, names)
    outputs["last_component_matches"] = law.components[-1] == expected
    ok = checks.ok and outputs["last_component_matches"]
    return (EXIT_OK if ok else EXIT_INVARIANT), options, outputs, \
        "family member constructed" + ("" if ok else "; an identity FAILED")


def _load_algebra(raw: bytes):
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or "weights" not in doc or "constants" not in doc:
        raise ParseError("constants file needs 'weights' and 'constants' keys", path="$")
    unknown = set(doc) - {"weights", "constants", "pairs", "name"}
    if unknown:
        raise ParseError(f"unknown key {sorted(unknown)[0]!r}", path="$")
    quads = doc["constants"]
    if not isinstance(quads, list) or not all(isinstance(q, list) and len(q) == 4 for q in quads):
        raise ParseError("'constants' must be a list of [i, j, k, value] entries", path="$.constants")
    try:
        weights = [int(v) for v in doc["weights"]]
        data = {(int(i), int(j), int(k)): _rational(v) for i, j, k, v in quads}
    except (TypeError, ValueError):
        raise ParseError("weights and indices must be integers", path="$") from None
    return GradedLieAlgebra(weights, data), doc.get("pairs", [])


def cmd_bch(args, raw: bytes):
    g, pairs = _load_algebra(raw)
    n = g.n
    if args.xi is not None or args.eta is not None:
        if args.xi is None or args.eta is None:
            raise ParseError("--xi and --eta go together")
        pairs = [[args.xi, args.eta]]
    vectors = []
    for idx, pair in enumerate(pairs):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError("each pair must be [xi, eta]", path=f"$.pairs[{idx}]")
        xi, eta = (_vector(v) if isinstance(v, str) else [_rational(c) for c in v] for v in pair)
        if len(xi) != n or len(eta) != n:
            raise DimensionError(f"vectors must have {n} entries")
        vectors.append((xi, eta))
    options = {"pairs": len(vectors)}
    ring = tuple(g.weights) * 2
    xs = [Poly.var(i, ring) for i in range(n)]
    ys = [Poly.var(n + i, ring) for i in range(n)]
    names = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    outputs = {
        "algebra": g.to_json(),
        "formula": [format_poly(p, names) for p in dynkin(g, xs, ys)],
        "products": [{"xi": xi, "eta": eta, "product": dynkin(g, xi, eta)} for xi, eta in vectors],
    }
    return EXIT_OK, options, outputs, f"Dynkin product in dimension {n}, step {g.r}; {len(vectors)} pair(s)"


COMMANDS = {
    "validate": cmd_validate,
    "privilege": cmd_privilege,
    "approx": cmd_approx,
    "canonical": cmd_canonical,
    "heisenberg": cmd_heisenberg,
    "bch": cmd_bch,
}


# argument parsing ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="carnot-forge",
                                description="Privileged coordinates and nilpotent approximations of polynomial frames.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--quiet", action="store_true", help="no summary on stderr")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    sub = p.add_subparsers(dest="command", required=True)

    def frame_cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("input", help="frame document (JSON), '-' for stdin")
        sp.add_argument("--jet-order", type=int, default=None, help="weighted jet order (default 2r+1)")
        return sp

    frame_cmd("validate", "check the bracket condition")
    sp = frame_cmd("privilege", "construct privileged coordinates")
    sp.add_argument("--cap", type=int, default=None, help="order enumeration cap (default r+2)")
    sp = frame_cmd("approx", "model fields, algebra and group law")
    sp.add_argument("--auto", action="store_true", help="privilege the frame first if needed")
    sp.add_argument("--assoc-budget", type=int, default=None,
                    help="max variables for symbolic associativity (3n); above it checks are randomized")
    sp.add_argument("--trials", type=int, default=None, help="random triples for randomized associativity")
    sp.add_argument("--seed", type=int, default=None)
    sp = frame_cmd("canonical", "convergence rate of canonical coordinates")
    sp.add_argument("--kind", type=int, choices=(1, 2), required=True)
    sp.add_argument("--auto", action="store_true", help="privilege the frame first if needed")
    sp.add_argument("--steps", type=int, default=None, help="RK4 steps per unit time (default 256)")
    sp.add_argument("--guard", type=float, default=None, help="escape radius (default 10)")
    sp.add_argument("--box", type=float, default=None, help="sample box half-width (default 1/4)")
    sp.add_argument("--samples", type=int, default=None, help="number of sample points (default 16)")
    sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("heisenberg", help="member of the Heisenberg class for a symmetric b")
    sp.add_argument("--n", type=int, required=True, help="dimension n (n-1 even unless --levi is given)")
    sp.add_argument("--levi", default=None, help="antisymmetric (n-1)x(n-1) matrix as JSON")
    sp.add_argument("--b", default=None, help="(n-1)x(n-1) matrix as JSON (default 0)")
    sp.add_argument("--assoc-budget", type=int, default=None)

    sp = sub.add_parser("bch", help="Dynkin product on a structure-constants file")
    sp.add_argument("input", help="JSON with 'weights', 'constants' and optional 'pairs'; '-' for stdin")
    sp.add_argument("--xi", default=None, help="first vector, e.g. '1,0,1/2'")
    sp.add_argument("--eta", default=None, help="second vector")
    return p


def run(argv=None) -> tuple:
    """Run a command without printing; returns ``(exit_code, report, summary, args)``."""
    args = build_parser().parse_args(argv)
    raw = None
    options: dict = {}
    outputs: dict = {}
    error = None
    try:
        if getattr(args, "input", None) is not None:
            raw = _read_input(args.input)
        code, options, outputs, summary = COMMANDS[args.command](args, raw)
    except OSError as exc:
        code, summary = EXIT_INPUT, f"cannot read input: {exc.strerror or exc}"
        error = {"type": "io", "message": summary}
    except (ParseError, DimensionError) as exc:
        code, summary = EXIT_INPUT, f"parse error: {exc}"
        error = {"type": "parse", "message": str(exc), "offset": getattr(exc, "offset", None),
                 "path": getattr(exc, "path", None)}
    except _Failure as exc:
        code, summary = exc.code, str(exc)
        error = {"type": "invariant", "message": str(exc)}
        outputs = exc.detail or {}
    except (FrameError, AlgebraError, PreconditionError, BracketConditionError, FlowDomainError) as exc:
        code, summary = EXIT_INVARIANT, f"{type(exc).__name__}: {exc}"
        error = {"type": "invariant", "message": str(exc), "witness": getattr(exc, "witness", None)}
    except CarnotError as exc:
        code, summary = EXIT_INVARIANT, f"{type(exc).__name__}: {exc}"
        error = {"type": "error", "message": str(exc)}
    outputs = _clean(outputs)
    options = _clean(options)
    status = {EXIT_OK: "ok", EXIT_INPUT: "error", EXIT_INVARIANT: "failed", EXIT_INCONCLUSIVE: "inconclusive"}[code]
    report = {
        "command": args.command,
        "status": status,
        "exit_code": code,
        "result": outputs,
        "manifest": build_manifest(args.command, raw, options, outputs),
    }
    if error is not None:
        report["error"] = _clean(error)
    report["report_sha256"] = report_digest(report)
    if not args.no_timestamp:
        report["timestamp"] = _timestamp()
    return code, report, summary, args


def main(argv=None) -> int:
    code, report, summary, args = run(argv)
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if not args.quiet:
        sys.stderr.write(f"carnot-forge {report['command']}: {summary}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
