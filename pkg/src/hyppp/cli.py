"""Command-line interface: ``hyppp {gen,density,sample,moments,verify}``.

Exit codes: 0 on success, 2 on validation errors, 3 when a size guard
trips.
"""
import argparse
import json
import sys

from . import jsonio
from .errors import HypppError
from .hdpp import ProcessSpec, density, sample_many
from .kernel import KINDS, gen_system, validate_orthonormal
from .moments import ProductSet, factorial_moments, pmf_from_factorial_moments
from .multilinear import SignancySet
from .verify import run_invariants

ORTHO_TOL = 1e-10
VERIFY_TOL = 1e-9


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _weights(text):
    if text is None:
        return None
    return [[float(tok) for tok in chunk.split(",")] for chunk in text.split(";")]


def _points(args):
    if args.points_file:
        with open(args.points_file) as fh:
            return jsonio.points_from_json(json.load(fh))
    return jsonio.points_from_json([_int_list(chunk) for chunk in args.points.split(";")])


def _spec(args):
    system = jsonio.load_system(args.system)
    return ProcessSpec(system, SignancySet.parse(args.signancy, system.m))


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def fmt(x):
    return format(float(x), ".17g")


def cmd_gen(args):
    sizes = _int_list(args.sizes)
    m = args.m if args.m is not None else len(sizes)
    system = gen_system(m, sizes, args.l, args.kind, args.seed, _weights(args.weights))
    dev = validate_orthonormal(system)["max"]
    if dev > ORTHO_TOL:
        print(f"error: generated system deviates from orthonormality by {dev:.3g}",
              file=sys.stderr)
        return 2
    _write(json.dumps(jsonio.system_to_json(system), indent=1) + "\n", args.output)
    return 0


def cmd_density(args):
    spec = _spec(args)
    value = density(spec, _points(args))
    print(fmt(value))
    return 0


def cmd_sample(args):
    spec = _spec(args)
    draws = sample_many(spec, args.n, args.count, args.seed)
    lines = "".join(json.dumps(jsonio.points_to_json(p)) + "\n" for p in draws)
    _write(lines, args.output)
    return 0


def cmd_moments(args):
    spec = _spec(args)
    cset = ProductSet.parse(args.set)
    max_n = args.max_n if args.max_n is not None else spec.rank
    moments = factorial_moments(spec, cset, max_n)
    out = {"set": str(cset), "factorial_moments": moments}
    if max_n == spec.rank:
        out["pmf"] = pmf_from_factorial_moments(moments).probs.tolist()
    _write(json.dumps(out, indent=1) + "\n", args.output)
    return 0


def cmd_verify(args):
    spec = _spec(args)
    report = run_invariants(spec)
    failed = sorted(k for k, v in report.items() if v > args.tol)
    out = {"tolerance": args.tol, "deviations": report, "failed": failed}
    _write(json.dumps(out, indent=1) + "\n", args.output)
    return 2 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hyppp", description="Hyperdeterminantal point processes on finite spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an orthonormal system")
    p.add_argument("--m", type=int, default=None, help="number of factors")
    p.add_argument("--sizes", required=True, help="factor sizes, e.g. 3,3")
    p.add_argument("--l", type=int, required=True, help="rank L")
    p.add_argument("--kind", choices=KINDS, default="haar")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", default=None,
                   help="per-factor weights, factors separated by ';', e.g. 1,2,1;1,1,1")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    def common(p):
        p.add_argument("--system", required=True, help="system JSON file")
        p.add_argument("--signancy", required=True, help="alternating factors, e.g. 1,3")
        p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("density", help="evaluate p_N at a point configuration")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--points", help="points separated by ';', coordinates by ','")
    group.add_argument("--points-file", help="PointConfig JSON file")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sample", help="draw exact samples (JSON lines)")
    common(p)
    p.add_argument("--n", type=int, required=True, help="points per sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("moments", help="factorial moments of a product-set count")
    common(p)
    p.add_argument("--set", required=True,
                   help="per-factor subsets separated by ';', e.g. 1,2;3 (empty allowed)")
    p.add_argument("--max-n", type=int, default=None)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify", help="check the process identities by enumeration")
    common(p)
    p.add_argument("--tol", type=float, default=VERIFY_TOL)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HypppError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, IndexError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
