"""Command-line interface.

Subcommands: pit, trdeg, annihilator, depth4, hitting-set, faithful, verify.
Every command prints one JSON document (sorted keys, stable layout) with the
run configuration embedded, so identical invocations produce byte-identical
output.  Exit codes: 0 zero/success, 1 nonzero, 2 inconclusive, 3 malformed
input, 4 other errors (budget, exhausted search, unsupported field).

Input file formats:

* polynomial family: {"field": {...}, "nvars": n, "polys": ["x1^2 + x2", ...]}
* circuit: {"field": {...}, "nvars": n, "kind": "dag"|"depth4"|"composed", ...}

Polynomial text uses variables x1..xn (or z0..zr, or t), integer or num/den
coefficients, and the operators + - * ^.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import depth4 as depth4mod
from . import hitting as hittingmod
from .circuits import (
    DEFAULT_EXPAND_BUDGET,
    ComposedCircuit,
    Depth4Circuit,
    circuit_from_json_dict,
)
from .fields import DEFAULT_PRIME, FieldError, FieldSpec
from .independence import (
    DEFAULT_COLUMN_BUDGET,
    TrdegCertificate,
    annihilator,
    trdeg,
    verify_trdeg_certificate,
)
from .polynomials import (
    BudgetExceeded,
    ParseError,
    poly_from_text,
    poly_to_text,
)
from .varmaps import (
    SearchExhausted,
    map_from_json_dict,
    search_kronecker_map,
    search_vandermonde_map,
)

EXIT_ZERO = 0
EXIT_NONZERO = 1
EXIT_INCONCLUSIVE = 2
EXIT_PARSE = 3
EXIT_ERROR = 4


class _InputError(Exception):
    """Anything wrong with the user-supplied files or text."""


def _emit(obj):
    print(json.dumps(obj, sort_keys=True, indent=2))


def _fail(message: str, code: int) -> int:
    print(json.dumps({"error": message}, sort_keys=True), file=sys.stderr)
    return code


def _load_json(path: str):
    try:
        with open(path, "r") as fh:
            return json.load(fh)
    except OSError as e:
        raise _InputError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise _InputError("%s is not valid JSON: %s" % (path, e))


def _load_family(path: str):
    obj = _load_json(path)
    try:
        field = FieldSpec.from_json(obj["field"])
        nvars = int(obj["nvars"])
        texts = obj["polys"]
        if not isinstance(texts, list) or not texts:
            raise _InputError("%s: 'polys' must be a nonempty list" % path)
        fs = [poly_from_text(t, field, nvars) for t in texts]
    except (KeyError, TypeError) as e:
        raise _InputError("%s: missing or malformed key (%s)" % (path, e))
    except (ParseError, FieldError) as e:
        raise _InputError("%s: %s" % (path, e))
    return field, nvars, fs


def _load_circuit(path: str):
    obj = _load_json(path)
    try:
        return circuit_from_json_dict(obj)
    except (KeyError, TypeError, ParseError, FieldError, ValueError) as e:
        raise _InputError("%s: %s" % (path, e))


def _parse_field(text: str) -> FieldSpec:
    if text == "rational":
        return FieldSpec("rational")
    try:
        p = int(text)
    except ValueError:
        raise _InputError("--field must be 'rational' or a prime")
    try:
        return FieldSpec("prime", p)
    except FieldError as e:
        raise _InputError(str(e))


def _config(args, keys):
    out = {}
    for k in keys:
        out[k] = getattr(args, k.replace("-", "_"))
    return out


# -- pit -----------------------------------------------------------------------


def _build_hitting_set(circ, args):
    field = circ.field
    n = circ.nvars
    if isinstance(circ, Depth4Circuit):
        return hittingmod.hitting_set_depth4(
            field,
            n,
            circ.delta,
            circ.k,
            circ.s,
            R=args.R,
            mode=args.mode,
            circuit=circ if args.mode == "adaptive" else None,
            seed=args.seed,
            conjecture_R=args.conjecture_R,
        )
    if isinstance(circ, ComposedCircuit):
        inputs = list(circ.inputs)
        cert = trdeg(inputs, mode="auto", seed=args.seed)
        r0 = cert.r
        if r0 == 0:
            return None  # constant composition; decided by one evaluation
        delta = max(1, max((f.degree() or 0) for f in inputs))
        ell = max(1, max(f.num_terms() for f in inputs))
        d = max(1, circ.degree_bound())
        ch = field.characteristic
        if ch == 0 or ch > delta ** r0:
            return hittingmod.hitting_set_sparse_inputs(
                field, n, d, r0, delta, ell,
                mode=args.mode,
                polys=inputs if args.mode == "adaptive" else None,
                seed=args.seed,
            )
        return hittingmod.hitting_set_arbitrary_char(
            field, n, d, r0, delta,
            mode=args.mode,
            polys=inputs if args.mode == "adaptive" else None,
            seed=args.seed,
        )
    # plain dag: evaluation grid sized to the syntactic degree
    d = max(1, circ.syntactic_degree())
    values = field.sample_elements(d + 1)
    # small fields cannot host d+1 points; drop the degree claim there
    return hittingmod.sz_grid(field, values, n, d=d if len(values) > d else None)


def cmd_pit(args) -> int:
    circ = _load_circuit(args.circuit)
    config = _config(args, ["mode", "seed", "max_points", "R", "conjecture_R"])
    hs = _build_hitting_set(circ, args)
    if hs is None:
        # composition of constants: one evaluation decides it outright
        point = tuple(circ.field.zero() for _ in range(circ.nvars))
        value = circ.field.normalize(circ.evaluate(point))
        nonzero = not circ.field.is_zero(value)
        verdict = hittingmod.PitVerdict(
            "nonzero" if nonzero else "zero",
            point if nonzero else None,
            value if nonzero else None,
            1,
            "certified",
            {"construction": "constant-composition"},
        )
    else:
        verdict = hittingmod.pit(circ.oracle(), hs, max_points=args.max_points)
    _emit(
        {
            "command": "pit",
            "config": config,
            "circuit_kind": _kind_of(circ),
            "verdict": verdict.to_json_dict(circ.field),
        }
    )
    if verdict.outcome == "nonzero":
        return EXIT_NONZERO
    if verdict.outcome == "zero":
        return EXIT_ZERO
    return EXIT_INCONCLUSIVE


def _kind_of(circ):
    if isinstance(circ, Depth4Circuit):
        return "depth4"
    if isinstance(circ, ComposedCircuit):
        return "composed"
    return "dag"


# -- trdeg / annihilator ---------------------------------------------------------


def cmd_trdeg(args) -> int:
    field, nvars, fs = _load_family(args.polys)
    cert = trdeg(fs, mode=args.mode, seed=args.seed, col_budget=args.budget_columns)
    _emit(
        {
            "command": "trdeg",
            "config": _config(args, ["mode", "seed", "budget_columns"]),
            "r": cert.r,
            "exact": cert.exact,
            "certificate": cert.to_json_dict(),
        }
    )
    return EXIT_ZERO


def cmd_annihilator(args) -> int:
    field, nvars, fs = _load_family(args.polys)
    F = annihilator(fs, args.cap, col_budget=args.budget_columns)
    _emit(
        {
            "command": "annihilator",
            "config": _config(args, ["cap", "budget_columns"]),
            "found": F is not None,
            "annihilator": None if F is None else poly_to_text(F),
            "m": len(fs),
        }
    )
    return EXIT_ZERO


# -- depth4 ----------------------------------------------------------------------


def cmd_depth4(args) -> int:
    circ = _load_circuit(args.circuit)
    if not isinstance(circ, Depth4Circuit):
        raise _InputError("the depth4 command needs a circuit of kind 'depth4'")
    g = depth4mod.gcd_part(circ)
    sim = depth4mod.simple_part(circ)
    rank = depth4mod.rank(circ, seed=args.seed)
    minimal = None
    if not args.skip_minimal:
        minimal = depth4mod.is_minimal(circ, budget=args.budget_expand)
    _emit(
        {
            "command": "depth4",
            "config": _config(args, ["seed", "budget_expand", "skip_minimal"]),
            "delta": circ.delta,
            "k": circ.k,
            "s": circ.s,
            "gcd": poly_to_text(g),
            "simple": [[poly_to_text(f) for f in row] for row in sim.rows],
            "rank": rank,
            "minimal": minimal,
        }
    )
    return EXIT_ZERO


# -- hitting-set -----------------------------------------------------------------


def cmd_hitting_set(args) -> int:
    field = _parse_field(args.field)
    if args.kind == "sparse-char0":
        if args.r is None or args.d is None or args.ell is None:
            raise _InputError("sparse-char0 needs --n --d --r --delta --ell")
        hs = hittingmod.hitting_set_sparse_inputs(
            field, args.n, args.d, args.r, args.delta, args.ell, mode="exact"
        )
    elif args.kind == "any-char":
        if args.r is None or args.d is None:
            raise _InputError("any-char needs --n --d --r --delta")
        hs = hittingmod.hitting_set_arbitrary_char(
            field, args.n, args.d, args.r, args.delta, mode="exact"
        )
    elif args.kind == "depth4":
        if args.k is None or args.s is None:
            raise _InputError("depth4 needs --n --delta --k --s")
        hs = hittingmod.hitting_set_depth4(
            field,
            args.n,
            args.delta,
            args.k,
            args.s,
            R=args.R,
            mode="exact",
            conjecture_R=args.conjecture_R,
        )
    else:
        raise _InputError("unknown hitting-set kind %r" % args.kind)
    header = {
        "command": "hitting-set",
        "config": _config(
            args, ["kind", "n", "d", "r", "delta", "ell", "k", "s", "R",
                   "conjecture_R", "max_points", "field"]
        ),
        "arity": hs.arity,
        "guarantee": hs.guarantee,
        "size_bound": hs.size_bound,
        "provenance": hs.provenance,
    }
    print(json.dumps(header, sort_keys=True))
    for i, pt in enumerate(hs.points()):
        if i >= args.max_points:
            break
        print(
            json.dumps(
                {"point": [field.scalar_to_json(v) for v in pt]}, sort_keys=True
            )
        )
    return EXIT_ZERO


# -- faithful --------------------------------------------------------------------


def cmd_faithful(args) -> int:
    field, nvars, fs = _load_family(args.polys)
    if args.kind == "phi":
        found = search_kronecker_map(fs, r=args.r, mode=args.mode, seed=args.seed)
    elif args.kind == "psi":
        found = search_vandermonde_map(fs, r=args.r, mode=args.mode, seed=args.seed)
    else:
        raise _InputError("--kind must be 'phi' or 'psi'")
    _emit(
        {
            "command": "faithful",
            "config": _config(args, ["kind", "r", "mode", "seed"]),
            "result": found.to_json_dict(),
        }
    )
    return EXIT_ZERO


# -- verify ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    report = _load_json(args.report)
    if not isinstance(report, dict) or "command" not in report:
        raise _InputError("%s does not look like a command report" % args.report)
    cmd = report["command"]
    if cmd == "trdeg":
        verified, detail = _verify_trdeg(report, args.against)
    elif cmd == "annihilator":
        verified, detail = _verify_annihilator(report, args.against)
    elif cmd == "faithful":
        verified, detail = _verify_faithful(report, args.against)
    elif cmd == "pit":
        verified, detail = _verify_pit(report, args.against)
    elif cmd == "depth4":
        verified, detail = _verify_depth4(report, args.against)
    else:
        raise _InputError("cannot verify reports of command %r" % cmd)
    _emit({"command": "verify", "verified": verified, "detail": detail})
    return EXIT_ZERO if verified else EXIT_ERROR


def _verify_trdeg(report, against):
    field, nvars, fs = _load_family(against)
    cert = TrdegCertificate.from_json_dict(report["certificate"])
    if cert.r != report["r"]:
        return False, "certificate r does not match the reported r"
    ok = verify_trdeg_certificate(fs, cert)
    return ok, "certificate re-checked against the family"


def _verify_annihilator(report, against):
    field, nvars, fs = _load_family(against)
    cap = report["config"]["cap"]
    if report["found"]:
        F = poly_from_text(report["annihilator"], field, len(fs))
        if F.is_zero:
            return False, "reported annihilator is zero"
        d = F.degree()
        if d is not None and d > cap:
            return False, "reported annihilator exceeds the cap"
        if not F.substitute(fs).is_zero:
            return False, "reported annihilator does not vanish on the family"
        return True, "annihilator re-checked by substitution"
    refound = annihilator(fs, cap, col_budget=report["config"]["budget_columns"])
    if refound is not None:
        return False, "a cap-%d annihilator exists but the report found none" % cap
    return True, "absence re-checked by exhaustive search"


def _verify_faithful(report, against):
    field, nvars, fs = _load_family(against)
    result = report["result"]
    mp = map_from_json_dict(result["map"])
    in_cert = TrdegCertificate.from_json_dict(result["input_certificate"])
    img_cert = TrdegCertificate.from_json_dict(result["image_certificate"])
    if in_cert.r != img_cert.r:
        return False, "certificates disagree on r"
    if not verify_trdeg_certificate(fs, in_cert):
        return False, "input certificate failed"
    imgs = [mp.apply(f) for f in fs]
    if not verify_trdeg_certificate(imgs, img_cert):
        return False, "image certificate failed"
    return True, "both certificates re-checked; the map preserves trdeg %d" % in_cert.r


def _verify_pit(report, against):
    circ = _load_circuit(against)
    field = circ.field
    stored = report["verdict"]
    if stored["outcome"] == "nonzero":
        point = tuple(field.scalar_from_json(v) for v in stored["witness"])
        value = field.normalize(circ.evaluate(point))
        if field.is_zero(value):
            return False, "witness point evaluates to zero"
        if value != field.normalize(field.scalar_from_json(stored["value"])):
            return False, "witness value does not match"
        return True, "witness re-evaluated"
    # zero / inconclusive: re-run the identical enumeration and compare
    cfg = report["config"]
    ns = argparse.Namespace(
        mode=cfg["mode"],
        seed=cfg["seed"],
        max_points=cfg["max_points"],
        R=cfg["R"],
        conjecture_R=cfg["conjecture_R"],
    )
    hs = _build_hitting_set(circ, ns)
    if hs is None:
        value = circ.evaluate(tuple(field.zero() for _ in range(circ.nvars)))
        ok = field.is_zero(field.normalize(value)) == (stored["outcome"] == "zero")
        return ok, "constant composition re-evaluated"
    verdict = hittingmod.pit(circ.oracle(), hs, max_points=cfg["max_points"])
    if verdict.to_json_dict(field) != stored:
        return False, "re-run verdict differs"
    return True, "enumeration re-run to the same verdict"


def _verify_depth4(report, against):
    circ = _load_circuit(against)
    if not isinstance(circ, Depth4Circuit):
        return False, "against-file is not a depth4 circuit"
    g = depth4mod.gcd_part(circ)
    if poly_to_text(g) != report["gcd"]:
        return False, "gcd differs"
    sim = depth4mod.simple_part(circ)
    if [[poly_to_text(f) for f in row] for row in sim.rows] != report["simple"]:
        return False, "simple part differs"
    product = g * sim.expand()
    if not (product - circ.expand()).is_zero:
        return False, "gcd * simple part does not reproduce the circuit"
    if depth4mod.rank(circ, seed=report["config"]["seed"]) != report["rank"]:
        return False, "rank differs"
    if report["minimal"] is not None:
        if depth4mod.is_minimal(circ, budget=report["config"]["budget_expand"]) != report["minimal"]:
            return False, "minimality differs"
    return True, "decomposition, rank, and minimality re-checked"


# -- parser ----------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pitkit",
        description="Blackbox polynomial identity testing via algebraic "
        "independence: transcendence degree, annihilators, faithful variable "
        "reductions, and hitting-set generators.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("pit", help="test a circuit for being the zero polynomial")
    p.add_argument("circuit", help="circuit JSON file")
    p.add_argument("--mode", choices=["adaptive", "exact"], default="adaptive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-points", type=int, default=200_000)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--conjecture-R", action="store_true", dest="conjecture_R")
    p.set_defaults(fn=cmd_pit)

    p = sub.add_parser("trdeg", help="transcendence degree of a family")
    p.add_argument("polys", help="polynomial family JSON file")
    p.add_argument("--mode", choices=["auto", "jacobian", "bruteforce"], default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-columns", type=int, default=DEFAULT_COLUMN_BUDGET)
    p.set_defaults(fn=cmd_trdeg)

    p = sub.add_parser("annihilator", help="annihilating polynomial up to a degree cap")
    p.add_argument("polys", help="polynomial family JSON file")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--budget-columns", type=int, default=DEFAULT_COLUMN_BUDGET)
    p.set_defaults(fn=cmd_annihilator)

    p = sub.add_parser("depth4", help="gcd/simple decomposition, rank, minimality")
    p.add_argument("circuit", help="depth-4 circuit JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-expand", type=int, default=DEFAULT_EXPAND_BUDGET)
    p.add_argument("--skip-minimal", action="store_true")
    p.set_defaults(fn=cmd_depth4)

    p = sub.add_parser("hitting-set", help="stream points of a closed-form hitting set")
    p.add_argument("--kind", choices=["sparse-char0", "any-char", "depth4"], required=True)
    p.add_argument("--field", default="rational", help="'rational' or a prime")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--conjecture-R", action="store_true", dest="conjecture_R")
    p.add_argument("--max-points", type=int, default=100)
    p.set_defaults(fn=cmd_hitting_set)

    p = sub.add_parser("faithful", help="search a certified trdeg-preserving map")
    p.add_argument("polys", help="polynomial family JSON file")
    p.add_argument("--kind", choices=["phi", "psi"], required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--mode", choices=["adaptive", "exact"], default="adaptive")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_faithful)

    p = sub.add_parser("verify", help="re-check a previously produced report")
    p.add_argument("report", help="output JSON of an earlier command")
    p.add_argument("--against", required=True, help="the input file the report was produced from")
    p.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _InputError as e:
        return _fail(str(e), EXIT_PARSE)
    except (ParseError, FieldError) as e:
        return _fail(str(e), EXIT_PARSE)
    except (BudgetExceeded, SearchExhausted) as e:
        return _fail(str(e), EXIT_ERROR)
    except ValueError as e:
        return _fail(str(e), EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
