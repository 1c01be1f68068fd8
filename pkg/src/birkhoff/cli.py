"""Command-line front end.

Exit codes: 0 success; 1 input, parse or configuration error; 2 failed
verification or oracle mismatch; 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .adele import AdeleMat, global_h0, global_reduce, random_adele, verify_global_witness, GlobalWitness
from .bundle import BundleSpec, h0, splitting_from_h0, splitting_type
from .errors import (
    BirkhoffError,
    OracleMismatch,
    ParseError,
    PotentialStall,
    WitnessCheckFailed,
)
from .ff import FieldSpec
from .matgl import LAURENT, Cocharacter, make_pi_eta, mat_mul, random_gamma, random_k
from .reduce import Witness, local_reduce, verify_witness
from .series import Place
from .suites import SUITES
from .textio import (
    matrix_from_strings,
    matrix_to_strings,
    parse_instance,
    parse_place,
    serialize_adele,
    serialize_matrix,
)

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_INTERNAL = 0, 1, 2, 3
_INTERNAL = (PotentialStall, WitnessCheckFailed, OracleMismatch)


class VerificationFailed(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


def _local_input(obj):
    """(matrix, place) from a local file or an adele file with a single place."""
    if isinstance(obj, AdeleMat):
        if len(obj.components) != 1:
            raise ParseError("local commands need a matrix file or a single place block")
        (v, g), = obj.components.items()
        return g, v
    return obj, None


def _bundle_input(obj) -> BundleSpec:
    g, v = _local_input(obj)
    if v is not None and not v.is_infinite:
        raise ParseError("bundle commands read the transition matrix at 'place inf'")
    return BundleSpec(g)


def _witness_json(w: Witness) -> dict:
    out = {"eta": w.eta.tolist(), "gamma": matrix_to_strings(w.gamma), "k": matrix_to_strings(w.k)}
    if w.place is not None:
        out["place"] = str(w.place)
    return out


def cmd_reduce_local(args) -> int:
    _, obj = _load(args.instance)
    g, place = _local_input(obj)
    w = local_reduce(g, precision=args.precision, place=place)
    if args.verify and not verify_witness(g, w):
        raise VerificationFailed("witness failed exact verification")
    out = _witness_json(w) if args.witness else {"eta": w.eta.tolist()}
    if args.verify:
        out["verified"] = True
    _emit(out)
    return EXIT_OK


def cmd_reduce_global(args) -> int:
    _, A = _load(args.instance)
    if not isinstance(A, AdeleMat):
        A = AdeleMat(A.field, A.n, {Place.infinity(): A.map(Place.infinity().lift)})
    if not (args.witness or args.verify):
        _emit({"eta": global_reduce(A).tolist()})
        return EXIT_OK
    eta, gw = global_reduce(A, witness=True)
    if args.verify and not verify_global_witness(A, gw):
        raise VerificationFailed("global witness failed exact verification")
    out = {"eta": eta.tolist()}
    if args.witness:
        out["gamma"] = matrix_to_strings(gw.gamma)
        out["k"] = {str(v): matrix_to_strings(k) for v, k in sorted(gw.k.items(), key=lambda kv: kv[0].sort_key())}
    if args.verify:
        out["verified"] = True
    _emit(out)
    return EXIT_OK


def cmd_splitting_type(args) -> int:
    _, obj = _load(args.instance)
    b = _bundle_input(obj)
    eta = splitting_type(b).tolist()
    out = {"splitting_type": eta}
    if args.oracle:
        oracle = splitting_from_h0(b).tolist()
        out["oracle"] = oracle
        out["agree"] = oracle == eta
        _emit(out)
        return EXIT_OK if oracle == eta else EXIT_MISMATCH
    _emit(out)
    return EXIT_OK


def cmd_h0(args) -> int:
    _, obj = _load(args.instance)
    if isinstance(obj, AdeleMat) and any(not v.is_infinite for v in obj.components):
        _emit({"m": args.m, "h0": global_h0(obj, args.m)})
        return EXIT_OK
    _emit({"m": args.m, "h0": h0(_bundle_input(obj), args.m)})
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError:
        raise ParseError(f"expected a comma-separated integer list, got {text!r}") from None


def cmd_gen(args) -> int:
    f = FieldSpec.from_q(args.q)
    if args.eta is None:
        rng = random.Random(f"eta:{args.seed}")
        eta = sorted(rng.randint(-5, 5) for _ in range(args.n))
    else:
        eta = _int_list(args.eta)
    if len(eta) != args.n:
        raise ParseError(f"--eta has {len(eta)} entries, expected n={args.n}")
    if eta != sorted(eta):
        raise ParseError("--eta must be nondecreasing (antidominant)")
    params = (
        f"generated: n={args.n} q={args.q} eta={','.join(map(str, eta))} seed={args.seed} "
        f"degree={args.degree} factors={args.factors}"
    )
    if args.places is not None:
        places = [parse_place("a=" + s, f) for s in args.places.split(",") if s.strip()]
        A = random_adele(args.n, f, eta, places, args.seed, args.degree, args.factors)
        sys.stdout.write(serialize_adele(A, [params + f" places={args.places}", "prng: python random.Random"]))
        return EXIT_OK
    gamma = random_gamma(args.n, f, f"gamma:{args.seed}", args.degree, args.factors)
    k = random_k(args.n, f, f"k:{args.seed}", args.degree, args.factors)
    g = mat_mul(mat_mul(gamma, make_pi_eta(eta, f)), k)
    sys.stdout.write(serialize_matrix(g, [params, "prng: python random.Random"]))
    return EXIT_OK


def cmd_verify(args) -> int:
    f, obj = _load(args.instance)
    try:
        data = json.loads(Path(args.witness_file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read witness {args.witness_file}: {exc}") from None
    try:
        eta = Cocharacter(data["eta"])
        gamma_rows = data["gamma"]
        k_rows = data["k"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"witness is missing a field: {exc}") from None
    if isinstance(k_rows, dict):
        if not isinstance(obj, AdeleMat):
            raise ParseError("global witness needs an adele instance")
        gw = GlobalWitness(
            matrix_from_strings(gamma_rows, f, "t"),
            eta,
            {parse_place(p, f): matrix_from_strings(rows, f, "t") for p, rows in k_rows.items()},
        )
        ok = verify_global_witness(obj, gw)
    else:
        g, place = _local_input(obj)
        if "place" in data:
            place = parse_place(data["place"], f)
        var = "x" if g.flavor == LAURENT else "t"
        w = Witness(matrix_from_strings(gamma_rows, f, var), eta, matrix_from_strings(k_rows, f, var), place=place)
        ok = verify_witness(g, w)
    _emit({"valid": ok})
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_selftest(args) -> int:
    report = SUITES[args.suite](args.cases, args.seed)
    _emit(report.to_dict())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="birkhoff", description="Birkhoff reduction over F_q((pi)) and F_q(t).")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce-local", help="local reduction g = gamma pi^eta k")
    s.add_argument("instance")
    s.add_argument("--witness", action="store_true", help="also print gamma and k")
    s.add_argument("--verify", action="store_true", help="re-check the witness exactly")
    s.add_argument("--precision", type=int, default=None, help="initial working precision")
    s.set_defaults(fn=cmd_reduce_local)

    s = sub.add_parser("reduce-global", help="adelic reduction to (1/t)^eta")
    s.add_argument("instance")
    s.add_argument("--witness", action="store_true")
    s.add_argument("--verify", action="store_true")
    s.set_defaults(fn=cmd_reduce_global)

    s = sub.add_parser("splitting-type", help="splitting type of the bundle glued at infinity")
    s.add_argument("instance")
    s.add_argument("--oracle", action="store_true", help="cross-check with section counts")
    s.set_defaults(fn=cmd_splitting_type)

    s = sub.add_parser("h0", help="dimension of global sections of the twist by m")
    s.add_argument("instance")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(fn=cmd_h0)

    s = sub.add_parser("gen", help="seeded instance gamma pi^eta k")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--eta", default=None, help="comma-separated nondecreasing integers")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--factors", type=int, default=6)
    s.add_argument("--places", default=None, help="comma-separated a values: emit an adele instead")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("verify", help="check a witness JSON against an instance")
    s.add_argument("instance")
    s.add_argument("witness_file")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("selftest", help="run a randomized property suite")
    s.add_argument("--suite", choices=sorted(SUITES), required=True)
    s.add_argument("--cases", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except VerificationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except _INTERNAL as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (BirkhoffError, ValueError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
