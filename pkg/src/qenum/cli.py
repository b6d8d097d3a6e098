"""``qenum`` command line.

Every subcommand prints one JSON document (sorted keys) to stdout or ``--out``.
Exit status: 0 on success, 2 for bad input or unmet preconditions, 3 when an
identity that must hold was violated.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, constructions, shadow
from .codes import encoder as named_encoder
from .codes import named_code
from .enumerators import KINDS, haar_oracle, unitary_enum_subset
from .errors import ConsistencyError, ContractError
from .hilbert import TOL, as_mask, members
from .io import code_to_json, dumps, load_code, load_operator, scalar_to_json
from .polynomials import (
    EnumPolynomial,
    from_primed,
    macwilliams,
    shadow_from_shor_laflamme,
    shadow_poly,
    to_primed,
)
from .stabilizer import parse_stabilizer

EXIT_OK, EXIT_CONTRACT, EXIT_CONSISTENCY = 0, 2, 3


# ---------------------------------------------------------------------------
# input helpers


def _add_code_inputs(p: argparse.ArgumentParser, operator: bool = False):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--stabilizer", metavar="FILE", help="stabilizer generators, one per line")
    g.add_argument("--code", metavar="NAME", help="built-in code: bell, [[4,2,2]], [[5,1,3]]")
    g.add_argument("--states", metavar="FILE", help="JSON code file (vectors or projector)")
    if operator:
        g.add_argument("--operator", metavar="FILE", help="JSON operator file")
        p.add_argument("--operator2", metavar="FILE", help="second operator (defaults to the first)")


def _read_code(args):
    if args.stabilizer:
        try:
            text = Path(args.stabilizer).read_text(encoding="utf-8")
        except OSError as exc:
            raise ContractError(f"cannot read {args.stabilizer}: {exc.strerror}") from None
        return parse_stabilizer(text)
    if args.code:
        return named_code(args.code)
    return load_code(args.states)


def _read_pair(args):
    """Operators for enumerator-style commands: an explicit pair or a code projector twice."""
    if getattr(args, "operator", None):
        M1 = load_operator(args.operator)
        M2 = load_operator(args.operator2) if args.operator2 else M1
        return M1, M2, None
    C = _read_code(args)
    P = C.projector(exact=True)
    return P, P, C


def _subset_list(table) -> list:
    return [{"subset": list(members(m)), "value": scalar_to_json(v)} for m, v in table.items()]


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args):
    from .enumerators import enumerator_tables, subset_to_weight

    M1, M2, _ = _read_pair(args)
    tables = enumerator_tables(M1, M2)
    out = {"dims": list(M1.dims), "subsets": {k: _subset_list(tables[k]) for k in KINDS}}
    if M1.fact.is_uniform():
        weights = {k: subset_to_weight(tables[k]).coeffs for k in KINDS}
        out["enumerators"] = {k: [scalar_to_json(c) for c in w] for k, w in weights.items()}
        out["polynomials"] = {k: str(EnumPolynomial(w)) for k, w in weights.items()}
    return out


def cmd_distance(args):
    C = _read_code(args)
    cert = analysis.certify_distance(C, max_scan=args.max_scan, tol=args.tolerance)
    out = {
        "n": C.n, "K": C.K, "dims": list(C.dims), "d": cert.d, "witness": cert.witness,
        "vacuous": cert.vacuous, "lower_bound": cert.lower_bound, "method": cert.method,
        "criteria_agree": cert.criteria_agree,
    }
    if not cert.lower_bound:
        out["pure"] = analysis.check_purity(C, cert.d, args.tolerance)
    return out


def cmd_erasures(args):
    C = _read_code(args)
    d = analysis.certify_distance(C, tol=args.tolerance).d
    rep = analysis.erasure_report(C, args.max_size, distance=d, tol=args.tolerance)
    return {
        "d": d,
        "erasures": [{"subset": list(members(m)), "correctable": ok}
                     for m, ok in sorted(rep.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))],
    }


_TRANSFORMS = {
    "macwilliams": lambda p, D: macwilliams(p, D),
    "to_primed": lambda p, D: to_primed(p, D),
    "from_primed": lambda p, D: from_primed(p, D),
    "shadow": lambda p, D: shadow_poly(p),
    "shadow_sl": lambda p, D: shadow_from_shor_laflamme(p, D),
}


def cmd_transform(args):
    try:
        p = EnumPolynomial.parse(args.coeffs)
    except (ValueError, ZeroDivisionError):
        raise ContractError(f"cannot parse coefficients {args.coeffs!r}") from None
    if args.D < 2:
        raise ContractError("D must be at least 2")
    q = _TRANSFORMS[args.which](p, args.D)
    text = ",".join(q.to_strings())
    if args.plain:
        return text
    return {"transform": args.which, "D": args.D, "input": ",".join(p.to_strings()), "coeffs": text}


def _code_summary(C, tol, max_scan=None):
    cert = analysis.certify_distance(C, max_scan=max_scan, tol=tol)
    out = {"n": C.n, "K": C.K, "dims": list(C.dims), "d": cert.d,
           "lower_bound": cert.lower_bound, "vacuous": cert.vacuous}
    if not cert.lower_bound:
        out["pure"] = analysis.check_purity(C, cert.d, tol)
    return out


def cmd_shorten(args):
    C = _read_code(args)
    S = constructions.shorten(C, factor=args.factor, tol=args.tolerance)
    return {"code": _code_summary(S, args.tolerance), "states": code_to_json(S)}


def cmd_extend(args):
    C = _read_code(args)
    E = constructions.extend(C, tol=args.tolerance)
    return {"code": _code_summary(E, args.tolerance), "states": code_to_json(E)}


def cmd_concat(args):
    C1 = _read_code(args)
    if args.inner_states:
        inner = load_code(args.inner_states)
        enc, n2, D2 = inner.vectors, inner.n, inner.dims[0]
        if not inner.fact.is_uniform():
            raise ContractError("inner code must have equal subsystem dimensions")
    else:
        inner = named_code(args.inner)
        enc, n2, D2 = named_encoder(args.inner), inner.n, inner.dims[0]
    out = constructions.concatenate(C1, enc, n2, D2)
    doc = {"code": _code_summary(out, args.tolerance, args.max_scan)}
    if args.emit_states:
        doc["states"] = code_to_json(out)
    return doc


def cmd_fuzz_shadow(args):
    ledger = args.ledger
    recs = shadow.fuzz_conjecture(args.max_n, args.max_D, args.trials, args.seed, ledger=ledger)
    worst = min(recs, key=lambda r: r.min_value)
    return {
        "trials": len(recs),
        "seed": args.seed,
        "flagged": sum(r.flagged for r in recs),
        "violations": sum(r.violation for r in recs),
        "min_value": worst.min_value,
        "min_trial": worst.trial,
    }


def _drop_noise(z: complex) -> complex:
    return complex(z.real) if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)) else z


def cmd_haar_check(args):
    M1, M2, _ = _read_pair(args)
    try:
        picked = [int(t) for t in args.subset.split(",") if t.strip()]
    except ValueError:
        raise ContractError(f"bad subset {args.subset!r}; expected e.g. \"1,2\"") from None
    mask = as_mask(picked, M1.n)
    est = haar_oracle(M1, M2, mask, args.kind, samples=args.samples, seed=args.seed)
    exact = unitary_enum_subset(M1, M2, mask, args.kind)
    return {
        "subset": list(members(mask)),
        "kind": args.kind,
        "samples": est.samples,
        "estimate": scalar_to_json(_drop_noise(complex(est.mean))),
        "stderr": est.stderr,
        "exact": scalar_to_json(exact),
        "agrees": est.agrees(exact),
    }


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=TOL)

    parser = argparse.ArgumentParser(prog="qenum", description="Quantum weight enumerator toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="A, B, A', B' tables and polynomials")
    _add_code_inputs(p, operator=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("distance", parents=[common], help="certify the minimum distance")
    _add_code_inputs(p)
    p.add_argument("--max-scan", type=int, default=None, help="only scan subsets up to this size")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("erasures", parents=[common], help="erasure-correctable subsets")
    _add_code_inputs(p)
    p.add_argument("--max-size", type=int, default=None)
    p.set_defaults(func=cmd_erasures)

    p = sub.add_parser("transform", parents=[common], help="polynomial transforms on a coefficient list")
    which = p.add_mutually_exclusive_group(required=True)
    for flag in ("macwilliams", "to-primed", "from-primed", "shadow", "shadow-sl"):
        which.add_argument(f"--{flag}", dest="which", action="store_const", const=flag.replace("-", "_"))
    p.add_argument("--D", type=int, default=2)
    p.add_argument("--coeffs", required=True, help='comma-separated, e.g. "2,0,0,60,30,36"')
    p.add_argument("--plain", action="store_true", help="print only the resulting coefficients")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("shorten", parents=[common], help="pure ((n,K,d)) -> ((n-1,DK,d-1))")
    _add_code_inputs(p)
    p.add_argument("--factor", type=int, default=1, help="factor to remove (1-based)")
    p.set_defaults(func=cmd_shorten)

    p = sub.add_parser("extend", parents=[common], help="rank-D code -> state on n+1 factors")
    _add_code_inputs(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("concat", parents=[common], help="concatenate with an inner encoder")
    _add_code_inputs(p)
    inner = p.add_mutually_exclusive_group(required=True)
    inner.add_argument("--inner", metavar="NAME", help="built-in inner code")
    inner.add_argument("--inner-states", metavar="FILE", help="inner code file; its vectors are the encoder")
    p.add_argument("--max-scan", type=int, default=None)
    p.add_argument("--emit-states", action="store_true")
    p.set_defaults(func=cmd_concat)

    p = sub.add_parser("fuzz-shadow", parents=[common], help="random search for negative shadow values")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-D", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--ledger", metavar="FILE", help="append JSON lines here")
    p.set_defaults(func=cmd_fuzz_shadow)

    p = sub.add_parser("haar-check", parents=[common], help="Monte-Carlo check of A'_S or B'_S")
    _add_code_inputs(p, operator=True)
    p.add_argument("--subset", default="", help='1-based factors, e.g. "1,2"')
    p.add_argument("--kind", choices=["A'", "B'"], default="A'")
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_haar_check)
    return parser


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONTRACT if exc.code else EXIT_OK
    try:
        result = args.func(args)
    except ConsistencyError as exc:
        print(f"qenum: consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except ContractError as exc:
        print(f"qenum: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    text = result if isinstance(result, str) else dumps(result)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
