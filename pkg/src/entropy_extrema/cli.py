"""Command-line interface: ``entropy-extrema <subcommand> [options]``.

Matrices and subspaces are read from JSON files in the library's exchange
format. Reports go to standard output (or ``--out``) as JSON, or CSV with
``--format csv``; numbers carry 12 significant digits. Exit status is 0 on
success, 1 for a ``Violated`` verdict under ``--strict`` and 2 on bad input.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import certificates as cert
from .config import get_tolerances, tolerances
from .counterexamples import real_gap_demo
from .entropy import (SpectralFunction, finite_difference_derivative,
                      first_directional_derivative, hs_inner, normalize,
                      normalized_spectrum, vn_entropy)
from .exceptions import EntropyExtremaError
from .optimizer import OptimizerConfig, additivity_gap, optimize_entropy
from .perturbation import (affine_expansion_check, eigenvalue_perturbation_check,
                           necessary_condition)
from .spectral import matrix_from_dict, matrix_to_dict
from .subspaces import (Subspace, block_commutation, canonical_blocks,
                        commutator_norm, local_commutativity_check,
                        second_derivative_finite)

DIGITS = 12


class InputError(Exception):
    pass


def _round(obj):
    """Round floats to ``DIGITS`` significant digits, recursively; non-finite
    floats become strings."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return str(v)
        return float(f"{v:.{DIGITS}g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": _round(obj.real), "im": _round(obj.imag)}
    if isinstance(obj, np.ndarray):
        return _round(matrix_to_dict(obj))
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def load_matrix(path, unit=True):
    m = matrix_from_dict(_load_json(path))
    return normalize(m) if unit else m


def load_subspace(path):
    d = _load_json(path)
    if not isinstance(d, dict) or "basis" not in d:
        raise InputError(f"{path} is not a subspace object")
    return Subspace.from_dict(d)


def _point_for(K, path):
    x = load_matrix(path)
    if K.field == "real":
        if np.iscomplexobj(x) and np.any(x.imag != 0):
            raise InputError("complex point in a real subspace")
        x = np.real(x)
    return x.astype(complex) if K.field == "complex" else x


def _function(args):
    return SpectralFunction.parse(args.function or "vn")


# -- subcommands -------------------------------------------------------------

def cmd_entropy(args):
    x = load_matrix(_need(args, "point"))
    out = {"vn": vn_entropy(x)}
    f = _function(args)
    if f.kind != "vn":
        out[f.label] = f.value(x)
    out["spectrum"] = normalized_spectrum(x).tolist()
    return out


def cmd_derivative(args):
    x = load_matrix(_need(args, "point"))
    y = load_matrix(_need(args, "direction"))
    f = _function(args)
    out = {"function": f.label, "order": args.order}
    if args.order == 1:
        out["closed_form"] = first_directional_derivative(f, x, y)
        closed_note = ""
    else:
        closed, closed_note = None, ""
        if f.kind == "vn":
            if commutator_norm(x, y) <= get_tolerances().comtol:
                closed = cert.vn_second_derivative_commuting(x, y)
            else:
                closed_note = "xx^* and xy^* do not commute; no closed form"
        elif f.p == 2:
            closed = cert.two_norm_second_derivative(x, y)
        else:
            closed_note = "closed form available for vn and p2 only"
        out["closed_form"] = closed
        out["second_derivative_finite"] = second_derivative_finite(x, y)
    fd = finite_difference_derivative(f.value, x, y, args.order)
    out["finite_difference"] = {"value": fd.value, "error": fd.error,
                                "diverging": fd.diverging, "raw": list(fd.raw)}
    if closed_note:
        out["notes"] = closed_note
    return out


def cmd_blocks(args):
    x = load_matrix(_need(args, "point"))
    y = load_matrix(_need(args, "direction"), unit=False)
    b = canonical_blocks(x, y)
    y21, blk = block_commutation(x, y)
    out = {"rank": b.r, "x11": np.diag(b.x11).tolist()}
    for name in ("y11", "y12", "y21", "y22"):
        blockm = getattr(b, name)
        out[name] = matrix_to_dict(blockm) if blockm.size else None
    out.update({"second_derivative_finite": second_derivative_finite(x, y),
                "max_abs_y21": y21, "block_commutator": blk,
                "commutator": commutator_norm(x, y)})
    return out


def cmd_commutativity(args):
    K = load_subspace(_need(args, "subspace"))
    x = _point_for(K, _need(args, "point"))
    return local_commutativity_check(K, x).to_dict()


def cmd_certify(args):
    K = load_subspace(_need(args, "subspace"))
    x = _point_for(K, _need(args, "point"))
    f = _function(args)
    kind = args.kind or ("vn-min" if f.kind == "vn" else "2norm-max" if f.p == 2 else "critical")
    if kind == "vn-min":
        rep = cert.vn_local_min_certificate(K, x, samples=args.samples, seed=args.seed or 0)
    elif kind == "2norm-max":
        rep = cert.two_norm_local_max_certificate(K, x, samples=args.samples, seed=args.seed or 0)
    else:
        rep = cert.criticality_check(K, x, f)
    return {"kind": kind, **rep.to_dict()}


def _optimizer_config(args):
    base = {}
    if args.config:
        base = _load_json(args.config)
    cfg = OptimizerConfig.from_dict(base)
    over = {}
    if args.function is not None:
        over["f"] = _function(args)
    if args.seed is not None:
        over["seed"] = args.seed
    if args.restarts is not None:
        over["restarts"] = args.restarts
    if args.maximize:
        over["sense"] = "maximize"
    return OptimizerConfig(**{**cfg.__dict__, **over})


def cmd_minimize(args):
    K = load_subspace(_need(args, "subspace"))
    res = optimize_entropy(K, _optimizer_config(args))
    if args.format == "csv":
        return res.traces_csv()
    return res.to_dict()


def cmd_gap(args):
    K1 = load_subspace(_need(args, "subspace"))
    K2 = load_subspace(_need(args, "subspace2"))
    return additivity_gap(K1, K2, _optimizer_config(args)).to_dict()


def cmd_counterexample(args):
    cfg = None
    if not args.no_optimizer:
        cfg = _optimizer_config(args)
    return real_gap_demo(args.m1, args.m2, run_optimizer=not args.no_optimizer, cfg=cfg).to_dict()


def cmd_perturb_check(args):
    if args.hermitian:
        A, B, C = (load_matrix(p, unit=False) for p in args.hermitian)
        return eigenvalue_perturbation_check(A, B, C, args.eps or (1e-2, 5e-3, 2.5e-3)).to_dict()
    x = load_matrix(_need(args, "point"))
    y = load_matrix(_need(args, "direction"))
    if abs(np.real(hs_inner(x, y))) > 1e-9:
        raise InputError("direction must satisfy Re Tr[x y^*] = 0")
    schedule = args.eps or (1e-2, 5e-3)
    res = [affine_expansion_check(x, y, e) for e in schedule]
    ratios = [a / b if b > 0 else math.inf for a, b in zip(res, res[1:])]
    return {"schedule": list(schedule), "residuals": res, "ratios": ratios}


def cmd_necessary_condition(args):
    x = load_matrix(_need(args, "point"))
    y = load_matrix(_need(args, "direction"))
    return necessary_condition(x, y)


COMMANDS = {
    "entropy": (cmd_entropy, "entropy and normalized spectrum of a point"),
    "derivative": (cmd_derivative, "directional derivative, closed form and finite difference"),
    "blocks": (cmd_blocks, "canonical block form of (x, y)"),
    "commutativity": (cmd_commutativity, "local commutativity check at a point"),
    "certify": (cmd_certify, "critical point / strong local extremum certificate"),
    "minimize": (cmd_minimize, "minimum (or maximum) entropy output by restarts"),
    "gap": (cmd_gap, "additivity gap of a subspace pair"),
    "counterexample": (cmd_counterexample, "real additivity violation from orthogonal subspaces"),
    "perturb-check": (cmd_perturb_check, "second-order perturbation expansions"),
    "necessary-condition": (cmd_necessary_condition, "relative-entropy necessary condition"),
}


def _tol_pair(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected NAME=VALUE")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--subspace")
    common.add_argument("--subspace2")
    common.add_argument("--point")
    common.add_argument("--direction")
    common.add_argument("--function", default=None, help="vn, p2 or p:REAL (default vn)")
    common.add_argument("--restarts", type=int)
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--strict", action="store_true")
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")

    parser = argparse.ArgumentParser(prog="entropy-extrema", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {name: sub.add_parser(name, parents=[common], help=help_)
            for name, (_, help_) in COMMANDS.items()}
    subs["derivative"].add_argument("--order", type=int, choices=(1, 2), default=1)
    subs["certify"].add_argument("--kind", choices=("vn-min", "2norm-max", "critical"))
    subs["certify"].add_argument("--samples", type=int, default=cert.DEFAULT_SAMPLES)
    for name in ("minimize", "gap", "counterexample"):
        subs[name].add_argument("--config", help="optimizer settings as JSON")
        subs[name].add_argument("--maximize", action="store_true")
    subs["counterexample"].add_argument("--m1", type=int, default=2)
    subs["counterexample"].add_argument("--m2", type=int, default=2)
    subs["counterexample"].add_argument("--no-optimizer", action="store_true")
    subs["perturb-check"].add_argument("--eps", type=float, action="append")
    subs["perturb-check"].add_argument("--hermitian", nargs=3, metavar=("A", "B", "C"))
    return parser


def _to_csv(payload):
    if isinstance(payload, str):
        return payload
    rows = payload.get("directions") if isinstance(payload, dict) else None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        keys = sorted({k for r in rows for k in r})
        w.writerow(keys)
        for r in rows:
            w.writerow([json.dumps(r.get(k)) if isinstance(r.get(k), (dict, list)) else r.get(k, "")
                        for k in keys])
        return buf.getvalue()
    w.writerow(["key", "value"])
    for k, v in payload.items():
        w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
    return buf.getvalue()


def render(payload, fmt="json"):
    if isinstance(payload, str):
        return payload
    payload = _round(payload)
    if fmt == "csv":
        return _to_csv(payload)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = dict(args.tol)
        with tolerances(**overrides):
            payload = COMMANDS[args.command][0](args)
        text = render(payload, args.format)
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2
    except (InputError, EntropyExtremaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.strict and isinstance(payload, dict) and payload.get("verdict") == cert.VIOLATED:
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
