"""Command-line interface.

    hyperoptics decide --gen fig9_no_pm
    hyperoptics state --gen fig2_ghz4
    hyperoptics srv --gen fig7_srv443 --p1 1e-6 --p2 1e-2 --parties "a|b|c"
    hyperoptics sweep --gen zwm --points 16

Decision results go to stdout.  Exit codes: 0 success, 2 usage or parameter
error, 3 I/O or file-format error.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import hypergraph as hg
from .instances import InstanceId, designer_search, gen_instance, verify_design
from .matching import MatchingOverflowError, enumerate_perfect_matchings, has_perfect_matching
from .optics import interference_sweep, sweep_csv
from .states import (
    emission_state, fidelity, format_number, from_kets, ghz_state, post_selected_state,
    srv, w_state,
)

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3

DEFAULT_DETECTORS = {
    "zwm": "d1|d1'",
    "two_source_3photon": "d1,d2|d1',d2'|d1,d2'|d1',d2",
}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    out = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        lo, dash, hi = part.partition("-")
        if dash:
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _blocks(text: str) -> list[list[str]]:
    return [[v.strip() for v in block.split(",") if v.strip()] for block in text.split("|")]


def _load_input(args) -> hg.Hypergraph:
    if args.gen and args.input:
        raise UsageError("give either a hypergraph file or --gen, not both")
    if args.gen:
        instance = InstanceId.parse(args.gen)
        overrides = {}
        for key in ("p1", "p2", "phi"):
            value = getattr(args, key, None)
            if value is not None:
                if not instance.accepts(key):
                    raise UsageError(f"{instance.name} takes no --{key}")
                overrides[key] = value
        return gen_instance(instance, **overrides)
    if not args.input:
        raise UsageError("missing input: hypergraph file or --gen")
    return hg.load(args.input)


def _target(text: str | None, vertices=None):
    """Parse ``ghz:m=..,d=..``, ``w:m=..`` or ``kets:000,111``.

    ``vertices`` names the target's paths when its size matches; otherwise
    letters are used.
    """
    if not text:
        raise UsageError("--target is required")
    kind, _, rest = text.partition(":")
    vertices = list(vertices or [])

    def names(m):
        return vertices if len(vertices) == m else [chr(ord("a") + i) for i in range(m)]

    try:
        if kind == "kets":
            kets = [k.strip() for k in rest.split(",") if k.strip()]
            if not kets:
                raise ValueError("no kets given")
            return from_kets(names(len(kets[0])), {k: 1.0 for k in kets})
        params = {k: int(v) for k, v in (item.split("=", 1) for item in rest.split(",") if item)}
        m = params.get("m", len(vertices))
        if kind == "ghz":
            return ghz_state(m, params.get("d", 2), names(m))
        if kind == "w":
            return w_state(m, names(m))
    except ValueError as exc:
        raise UsageError(f"bad --target {text!r}: {exc}") from exc
    raise UsageError(f"unknown target kind {kind!r} (use ghz:, w: or kets:)")


def _write(text: str, path: str | None, out):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _state(args, H):
    if args.order is not None:
        return emission_state(H, args.order)
    return post_selected_state(H)


# -- verbs -------------------------------------------------------------------

def cmd_decide(args, out):
    out.write("true\n" if has_perfect_matching(_load_input(args)) else "false\n")


def cmd_enumerate(args, out):
    report = enumerate_perfect_matchings(_load_input(args), limit=args.limit)
    for pm in report.matchings:
        out.write(" ".join(map(str, pm)) + "\n")
    if report.truncated:
        out.write("truncated: true\n")
    out.write(f"count: {report.count}\n")


def cmd_state(args, out):
    psi = _state(args, _load_input(args))
    for pattern, re, im in psi.table():
        out.write(f"{pattern} {format_number(re)} {format_number(im)}\n")


def cmd_srv(args, out):
    H = _load_input(args)
    parties = _blocks(args.parties) if args.parties else [[v] for v in H.vertices]
    out.write(f"{srv(_state(args, H), parties)}\n")


def cmd_fidelity(args, out):
    H = _load_input(args)
    psi = _state(args, H)
    if psi.is_empty():
        out.write("0\n")
        return
    out.write(format_number(fidelity(psi, _target(args.target, H.vertices))) + "\n")


def cmd_verify(args, out):
    H = _load_input(args)
    out.write("true\n" if verify_design(H, _target(args.target, H.vertices)) else "false\n")


def cmd_gen(args, out):
    if not args.gen:
        raise UsageError("gen needs --gen INSTANCE")
    _write(hg.dumps(_load_input(args)), args.output, out)


def cmd_sweep(args, out):
    if not args.gen:
        raise UsageError("sweep needs --gen INSTANCE with a phi parameter")
    instance = InstanceId.parse(args.gen)
    if not instance.accepts("phi"):
        raise UsageError(f"{instance.name} has no phase parameter")
    if args.phases:
        phases = [float(s) for s in args.phases.split(",") if s.strip()]
    else:
        if args.points < 1:
            raise UsageError("--points must be positive")
        phases = [2 * math.pi * k / args.points for k in range(args.points)]
    extra = {} if "bs" in instance.params else {"bs": True}
    detectors = _blocks(args.detectors or DEFAULT_DETECTORS.get(instance.name, ""))
    if not detectors or not all(detectors):
        raise UsageError("--detectors is required for this instance")
    rows = interference_sweep(lambda phi: gen_instance(instance, phi=phi, **extra), phases,
                              detectors, order=args.order or 1)
    _write(sweep_csv(rows), args.output, out)


def cmd_design(args, out):
    target = _target(args.target)
    found = designer_search(target, max_edges=args.max_edges, degrees=_int_list(args.degrees),
                            modes=_int_list(args.modes))
    if found is None:
        out.write("none\n")
        return
    text = hg.dumps(found)
    out.write(f"found {len(found.edges)} edges\n")
    if args.output:
        _write(text, args.output, out)
    else:
        out.write(text)


VERBS = {
    "decide": (cmd_decide, "print true/false: does a perfect matching exist"),
    "enumerate": (cmd_enumerate, "list perfect matchings as edge-index sets"),
    "state": (cmd_state, "print the post-selected (or --order emission) state"),
    "srv": (cmd_srv, "print the Schmidt-rank vector A,B,C"),
    "fidelity": (cmd_fidelity, "fidelity of the post-selected state to --target"),
    "sweep": (cmd_sweep, "phase sweep of detection probabilities as CSV"),
    "gen": (cmd_gen, "write a generated instance as a hypergraph file"),
    "design": (cmd_design, "search for a hypergraph producing --target"),
    "verify": (cmd_verify, "print true/false: does the hypergraph produce --target"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperoptics", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for verb, (_, help_text) in VERBS.items():
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("input", nargs="?", help="hypergraph file")
        p.add_argument("--gen", help='instance id, e.g. "w_state:m=5,p1=1e-4,p2=1e-2"')
        p.add_argument("--p1", type=float)
        p.add_argument("--p2", type=float)
        p.add_argument("--phi", type=float)
        p.add_argument("--order", type=int)
        p.add_argument("--parties", help='three vertex blocks, e.g. "a|b|c" or "a,b|c|d"')
        p.add_argument("--limit", type=int)
        p.add_argument("--target", help='"ghz:m=3,d=2", "w:m=3" or "kets:000,111"')
        p.add_argument("--max-edges", type=int, default=8)
        p.add_argument("--degrees", default="1,2")
        p.add_argument("--modes", default="0,1")
        p.add_argument("--points", type=int, default=16)
        p.add_argument("--phases", help="comma-separated phases in radians")
        p.add_argument("--detectors", help='detector sets, e.g. "d1|d1\'" or "d1,d2|d1\',d2\'"')
        p.add_argument("-o", "--output", help="write file output here instead of stdout")
    return parser


def dispatch(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if args.limit is not None and args.limit < 1:
        err.write("error: --limit must be positive\n")
        return EXIT_USAGE
    if args.order is not None and args.order < 1:
        err.write("error: --order must be positive\n")
        return EXIT_USAGE
    handler = VERBS[args.verb][0]
    try:
        handler(args, out)
    except (hg.HypergraphError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_IO
    # instance, state and design errors are ValueErrors too
    except (UsageError, ValueError, MatchingOverflowError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    return EXIT_OK


def main(argv=None):
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
