"""Command-line front end.

One subcommand per pipeline stage; data goes to stdout, diagnostics to
stderr.  Exit codes: 0 success, 1 domain error, 2 usage error.  Identical
invocations produce byte-identical output (no timestamps; the version
string is printed only under --verbose).
"""

import argparse
import json
import sys

from . import __version__
from .classify import class_invariants_report
from .errors import PsfexpError
from .itinerary import (
    OrderData,
    itinerary_by_algorithm,
    kneading,
    recover_address,
)
from .numerics import classify_convergence, trace_dynamic_ray
from .pararay import (
    ParameterScan,
    address_search,
    find_lambda,
    scan_parameter_plane,
    trace_parameter_ray,
)
from .serialize import (
    format_complex,
    format_real,
    parse_complex,
    psf_parameter_to_json,
    scan_to_csv,
    scan_to_pgm,
)
from .spider import build_graph, export_graph
from .symbolic import parse_address


def _emit(args, human_text, doc):
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(human_text + "\n")


def _cmd_itinerary(args):
    s = parse_address(args.address)
    t = parse_address(args.pivot)
    it = itinerary_by_algorithm(s, t)
    _emit(args, str(it), {"address": str(s), "pivot": str(t), "itinerary": str(it)})


def _cmd_kneading(args):
    s = parse_address(args.address)
    u = kneading(s)
    _emit(args, str(u), {"address": str(s), "kneading": str(u)})


def _cmd_recover(args):
    u = parse_address(args.kneading)
    tokens = args.order.split()
    rels = []
    for tok in tokens:
        if tok == "<":
            rels.append(-1)
        elif tok == ">":
            rels.append(1)
        else:
            raise PsfexpError("order tokens must be '<' or '>', got %r" % tok)
    order = OrderData(u.preperiod_length, len(rels) - u.preperiod_length, tuple(rels))
    s = recover_address(u, order)
    _emit(args, str(s), {"kneading": str(u), "order": args.order, "address": str(s)})


def _cmd_classify(args):
    s = parse_address(args.address)
    report = class_invariants_report(s)
    human = "class of %s: %d member(s): %s  (l=%d k=%d k'=%d)" % (
        report["address"], report["class_size"], ", ".join(report["members"]),
        report["l"], report["k"], report["k_prime"])
    _emit(args, human, report)


def _cmd_graph(args):
    s = parse_address(args.address)
    sys.stdout.write(export_graph(build_graph(s), args.graph_format))


def _cmd_trace_ray(args):
    s = parse_address(args.address)
    lam = parse_complex(args.lam)
    trace = trace_dynamic_ray(lam, s, args.potential)
    doc = {
        "lambda": format_complex(lam),
        "address": str(s),
        "t": args.potential,
        "point": format_complex(trace.point),
        "depth": trace.depth,
        "tail_error_bound": trace.tail_error_bound,
    }
    human = "g_s(%g) = %s  (depth %d, heuristic tail bound %.3g)" % (
        args.potential, format_complex(trace.point), trace.depth,
        trace.tail_error_bound)
    _emit(args, human, doc)


def _cmd_trace_param(args):
    s = parse_address(args.address)
    sample = trace_parameter_ray(s, args.potential)
    doc = {
        "address": str(s),
        "t": sample.t,
        "lambda": format_complex(sample.lam),
        "residual": sample.residual,
    }
    human = "G_s(%g) = %s  (residual %.3g)" % (
        sample.t, format_complex(sample.lam), sample.residual)
    _emit(args, human, doc)


def _cmd_find_lambda(args):
    s = parse_address(args.address)
    p = find_lambda(s)
    if args.format == "json":
        sys.stdout.write(psf_parameter_to_json(p))
    else:
        sys.stdout.write(
            "lambda = %s  (l=%d, k=%d, orbit period %d)\n"
            "newton residual %.3g, landing gap %.3g, |g_s(0.001)| = %.3g\n"
            % (format_complex(p.lam), p.l, p.k, p.orbit_period,
               p.newton_residual, p.landing_gap, p.dynamic_landing_residual))


def _cmd_address_search(args):
    lam = parse_complex(args.lam)
    found = address_search(lam, args.preperiod, args.period, args.bound)
    doc = {
        "lambda": format_complex(lam),
        "l": args.preperiod,
        "k": args.period,
        "bound": args.bound,
        "addresses": [str(a) for a in found],
    }
    _emit(args, "\n".join(str(a) for a in found) if found else "(none)", doc)


def _cmd_scan(args):
    rect = tuple(float(x) for x in args.rect.split(","))
    if len(rect) != 4:
        raise PsfexpError("--rect needs re_min,re_max,im_min,im_max")
    scan = scan_parameter_plane(rect, args.resolution, args.max_iter, args.threads)
    csv_path = args.out + ".csv"
    pgm_path = args.out + ".pgm"
    with open(csv_path, "w") as fh:
        fh.write(scan_to_csv(scan))
    with open(pgm_path, "wb") as fh:
        fh.write(scan_to_pgm(scan))
    doc = {"csv": csv_path, "pgm": pgm_path, "counts": scan.counts()}
    _emit(args, "wrote %s and %s  %s" % (csv_path, pgm_path, scan.counts()), doc)


def _cmd_classify_convergence(args):
    lam = parse_complex(args.lam)
    fate = classify_convergence(lam, args.max_iter)
    witness = fate.witness
    if isinstance(witness, complex):
        witness = format_complex(witness)
    elif isinstance(witness, tuple):
        witness = list(witness)
    doc = {"lambda": format_complex(lam), "class": fate.tag, "witness": witness}
    _emit(args, "%s  (witness: %s)" % (fate.tag, witness), doc)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="psfexp",
        description="Combinatorics and parameters of postsingularly finite "
                    "exponential maps z -> lambda*exp(z).")
    parser.add_argument("--verbose", action="store_true",
                        help="print the version banner to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=("human", "json"), default="human")
        return p

    p = add("itinerary", _cmd_itinerary, "itinerary of an address w.r.t. a pivot")
    p.add_argument("address")
    p.add_argument("pivot")

    p = add("kneading", _cmd_kneading, "kneading sequence of an address")
    p.add_argument("address")

    p = add("recover", _cmd_recover, "address from kneading sequence plus orbit order")
    p.add_argument("kneading")
    p.add_argument("order", help="space-separated '<'/'>' for shift^n vs the address")

    p = add("classify", _cmd_classify, "equivalence class and its invariants")
    p.add_argument("address")

    p = add("graph", _cmd_graph, "spider graph in DOT or JSON")
    p.add_argument("address")
    p.add_argument("--graph-format", choices=("dot", "json"), default="dot")

    p = add("trace-ray", _cmd_trace_ray, "point of a dynamic ray")
    p.add_argument("address")
    p.add_argument("--lam", required=True, help="parameter as a+bi")
    p.add_argument("-t", "--potential", type=float, required=True)

    p = add("trace-param", _cmd_trace_param, "point of a parameter ray")
    p.add_argument("address")
    p.add_argument("-t", "--potential", type=float, required=True)

    p = add("find-lambda", _cmd_find_lambda, "locate the parameter of an address class")
    p.add_argument("address")

    p = add("address-search", _cmd_address_search,
            "addresses of a given shape mapping to a parameter")
    p.add_argument("--lam", required=True)
    p.add_argument("-l", "--preperiod", type=int, required=True)
    p.add_argument("-k", "--period", type=int, required=True)
    p.add_argument("--bound", type=int, default=3)

    p = add("scan", _cmd_scan, "convergence-class scan of a parameter rectangle")
    p.add_argument("--rect", default="-4,4,-4,4")
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--max-iter", type=int, default=64)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True, help="output path prefix")

    p = add("classify-convergence", _cmd_classify_convergence,
            "convergence class of a single parameter")
    p.add_argument("--lam", required=True)
    p.add_argument("--max-iter", type=int, default=256)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        sys.stderr.write("psfexp %s\n" % __version__)
    try:
        args.fn(args)
    except PsfexpError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(json.dumps(
            {"error": "ValueError", "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
