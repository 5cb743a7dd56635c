"""Command-line interface: ``tbnbarrier <command> ...``.

Exit status: 0 success, 1 a checked property does not hold (or the target
is unreachable), 2 usage or input error, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bonds import BondConfiguration, bond_barrier
from .constructions.grid import GridSpec, gen_grid
from .constructions.translator import TranslatorSpec, gen_translator
from .kinetics import Path, PathError
from .model import TBNError, as_w
from .physical import PhysicalParams, gibbs_energy
from .results import dumps, envelope, fraction_json, path_json
from .search import SearchBudget, barrier, stable_configurations
from .textio import TbnDocument, parse_tbn, render_tbn
from .verify import SUITES, run_suite

OK, VIOLATED, USAGE, BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _read(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _fraction_arg(text: str) -> Fraction:
    try:
        return as_w(text)
    except TBNError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    def options(defaults: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global options without defaults so they do not override them
        parser = argparse.ArgumentParser(add_help=False)
        parser.add_argument("--format", choices=("json", "text"),
                            default="text" if defaults else argparse.SUPPRESS)
        parser.add_argument("--threads", type=_positive_int,
                            default=(os.cpu_count() or 1) if defaults else argparse.SUPPRESS,
                            help="accepted for compatibility; searches run on one thread")
        return parser

    common = options(False)
    p = _Parser(prog="tbnbarrier", description="Energy barriers of thermodynamic binding networks.",
                parents=[options(True)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, help_text):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.add_argument("file", help="TBN document, or - for standard input")
        return sp

    sp = with_file("energy", "energy of a named configuration")
    sp.add_argument("--conf", required=True)
    sp.add_argument("--w", type=_fraction_arg)
    sp.add_argument("--gibbs", action="store_true", help="also report the free energy in kcal/mol")
    sp.add_argument("--length", type=int, default=10, help="domain length in bases")
    sp.add_argument("--conc", type=float, default=1.0, help="strand concentration in mol/L")
    sp.add_argument("--temp", type=float, default=298.15, help="temperature in kelvin")

    sp = with_file("saturated", "whether a named configuration is saturated")
    sp.add_argument("--conf", required=True)

    sp = with_file("stable", "all stable configurations")
    sp.add_argument("--w", type=_fraction_arg)
    sp.add_argument("--max-states", type=_positive_int)

    sp = with_file("barrier", "exact barrier between two named configurations")
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--w", type=_fraction_arg)
    sp.add_argument("--saturated", action="store_true", help="only saturated paths (no makes or breaks when bond-aware)")
    sp.add_argument("--bond-aware", action="store_true", help="track individual bonds")
    sp.add_argument("--no-swap4", action="store_true", help="bond-aware: disable four-way swaps")
    sp.add_argument("--force", action="store_true", help="bond-aware: lift the site-count limit")
    sp.add_argument("--max-states", type=_positive_int)
    sp.add_argument("--max-polymer-size", type=_positive_int,
                    help="skip larger polymers; the result is then only an upper bound")

    sp = with_file("path", "replay a path and report its height")
    sp.add_argument("--path", required=True, help="JSON path (or a barrier result with a witness); - for stdin")
    sp.add_argument("--w", type=_fraction_arg)

    gen = sub.add_parser("gen", help="generate a construction as a TBN document", parents=[common])
    gsub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    tp = gsub.add_parser("translator", parents=[common])
    tp.add_argument("--z", type=int, required=True)
    tp.add_argument("--c", type=int, required=True)
    tp.add_argument("--catalysts", type=_positive_int, default=0)
    gp = gsub.add_parser("grid", parents=[common])
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--catalysts", type=_positive_int, default=0)
    gp.add_argument("--auto", action="store_true", help="autocatalytic network")
    gp.add_argument("--g-copies", type=_positive_int, default=1)
    gp.add_argument("--h-copies", type=_positive_int, default=1)
    gp.add_argument("--v-copies", type=_positive_int, default=1)

    vp = sub.add_parser("verify", help="run a named check", parents=[common])
    vp.add_argument("suite", choices=sorted(SUITES))
    vp.add_argument("--n", type=int)
    vp.add_argument("--z", type=int)
    vp.add_argument("--c", type=int)
    vp.add_argument("--catalysts", type=_positive_int)
    vp.add_argument("--count", type=_positive_int)
    vp.add_argument("--seed", type=int)
    return p


def _w(args, doc: TbnDocument) -> Fraction:
    if getattr(args, "w", None) is not None:
        return args.w
    return doc.w if doc.w is not None else Fraction(2)


def _emit(args, out, obj: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        out.write(dumps(obj) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _cmd_energy(args, doc, out):
    w = _w(args, doc)
    c = doc.conf(args.conf)
    result = {"energy": fraction_json(c.energy(w)), "bonds": c.bonds, "polymers": c.polymer_count,
              "saturated": c.saturated}
    lines = [f"energy {c.energy(w)}", f"bonds {c.bonds}", f"polymers {c.polymer_count}"]
    if args.gibbs:
        params = PhysicalParams(args.length, args.conc, args.temp)
        g = gibbs_energy(c, params)
        result["gibbs_kcal_per_mol"] = g
        lines.append(f"gibbs {g:.4f} kcal/mol")
    _emit(args, out, envelope("energy", doc.tbn, w, result), lines)
    return OK


def _cmd_saturated(args, doc, out):
    c = doc.conf(args.conf)
    _emit(args, out, envelope("saturated", doc.tbn, _w(args, doc), {"saturated": c.saturated}),
          [f"saturated {str(c.saturated).lower()}"])
    return OK if c.saturated else VIOLATED


def _cmd_stable(args, doc, out):
    w = _w(args, doc)
    res = stable_configurations(doc.tbn, w, SearchBudget(max_states=args.max_states))
    confs = [doc.format_configuration(c) for c in res.stable_configurations]
    names = {v: k for k, v in doc.configurations.items()}
    result = {"max_S": res.max_S, "min_energy": fraction_json(res.min_energy), "complete": res.complete,
              "stable_configurations": confs,
              "named": sorted(names[c] for c in res.stable_configurations if c in names)}
    if res.bounds:
        result["bounds"] = list(res.bounds)
    lines = [f"max_S {res.max_S}", f"min_energy {res.min_energy}",
             f"complete {str(res.complete).lower()}"] + [f"stable {c}" for c in confs]
    _emit(args, out, envelope("stable", doc.tbn, w, result, res.explored, not res.complete), lines)
    return OK if res.complete else BUDGET


def _cmd_barrier(args, doc, out):
    w = _w(args, doc)
    a, b = doc.conf(args.source), doc.conf(args.target)
    budget = SearchBudget(max_states=args.max_states, max_polymer_size=args.max_polymer_size)
    if args.bond_aware:
        mode = "no_break" if args.saturated else "all"
        res = bond_barrier(doc.tbn, BondConfiguration.from_configuration(a),
                           BondConfiguration.from_configuration(b), w, mode, budget,
                           swap4=not args.no_swap4, force=args.force)
    else:
        mode = "saturated_only" if args.saturated else "all"
        res = barrier(doc.tbn, a, b, w, mode, budget)
    result = {"barrier": fraction_json(res.barrier), "mode": mode, "status": res.status,
              "bond_aware": args.bond_aware, "upper_bound_only": res.upper_bound_only}
    if res.lower_bound is not None:
        result["lower_bound"] = fraction_json(res.lower_bound)
    if res.status == "unreachable":
        result["unreachable"] = True
    witness = path_json(doc, res.witness, w) if res.witness is not None else None
    lines = [f"barrier {res.barrier if res.barrier is not None else res.status}",
             f"mode {mode}", f"explored {res.explored}"]
    if res.lower_bound is not None:
        lines.append(f"lower_bound {res.lower_bound}")
    if witness:
        for conf, e in zip(witness["configurations"], witness["energies"]):
            shown = conf["configuration"] if isinstance(conf, dict) else conf
            lines.append(f"  {str(Fraction(e)):>6}  {shown}")
    _emit(args, out, envelope("barrier", doc.tbn, w, result, res.explored, res.budget_hit, witness), lines)
    if res.budget_hit:
        return BUDGET
    return VIOLATED if res.status == "unreachable" else OK


def _cmd_path(args, doc, out, stdin):
    w = _w(args, doc)
    data = json.loads(_read(args.path, stdin))
    if isinstance(data, dict) and "witness" in data:
        data = data["witness"]
    confs = data["configurations"] if isinstance(data, dict) else data
    parsed = [doc.parse_configuration(c["configuration"] if isinstance(c, dict) else c) for c in confs]
    result = {"valid": True}
    try:
        path = Path(parsed)
    except PathError as e:
        result.update(valid=False, error=str(e))
        _emit(args, out, envelope("path", doc.tbn, w, result), ["valid false", f"error {e}"])
        return VIOLATED
    result.update(height=fraction_json(path.height(w)), saturated=path.is_saturated(), steps=len(path) - 1)
    _emit(args, out, envelope("path", doc.tbn, w, result, witness=path_json(doc, path, w)),
          ["valid true", f"height {path.height(w)}",
           f"saturated {str(path.is_saturated()).lower()}", f"steps {len(path) - 1}"])
    return OK


def _cmd_gen(args, out):
    if args.family == "translator":
        net = gen_translator(TranslatorSpec(args.z, args.c, extra_catalysts=args.catalysts))
        confs = net.configurations
        tbn = net.tbn
    else:
        spec = GridSpec(args.n, args.h_copies, args.v_copies, args.g_copies, args.catalysts, args.auto)
        net = gen_grid(spec)
        confs = net.configurations
        tbn = net.tbn
    doc = TbnDocument.from_tbn(tbn, confs)
    text = render_tbn(doc)
    if args.format == "json":
        out.write(dumps(envelope("gen", tbn, Fraction(2), {"document": text})) + "\n")
    else:
        out.write(text)
    return OK


def _cmd_verify(args, out):
    params = {k: getattr(args, k) for k in ("n", "z", "c", "catalysts", "count", "seed")}
    rep = run_suite(args.suite, **params)
    details = json.loads(dumps(rep.details))
    obj = {"command": "verify", "tbn_hash": None, "w": None,
           "result": {"suite": rep.suite, "ok": rep.ok, "details": details},
           "explored": "0", "budget_hit": False}
    lines = [f"{rep.suite} {'ok' if rep.ok else 'FAILED'}"] + [f"  {k}: {v}" for k, v in details.items()]
    _emit(args, out, obj, lines)
    return OK if rep.ok else VIOLATED


def cli_main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        parser.print_usage(err)
        err.write(f"tbnbarrier: error: {e}\n")
        return USAGE
    except SystemExit as e:  # --help
        return OK if e.code in (0, None) else USAGE
    try:
        if args.command == "gen":
            return _cmd_gen(args, out)
        if args.command == "verify":
            return _cmd_verify(args, out)
        if args.command == "path" and args.file == "-" and args.path == "-":
            raise _UsageError("only one of FILE and --path can read standard input")
        doc = parse_tbn(_read(args.file, stdin))
        if args.command == "path":
            return _cmd_path(args, doc, out, stdin)
        handler = {"energy": _cmd_energy, "saturated": _cmd_saturated, "stable": _cmd_stable,
                   "barrier": _cmd_barrier}[args.command]
        return handler(args, doc, out)
    except _UsageError as e:
        err.write(f"tbnbarrier: error: {e}\n")
        return USAGE
    except (TBNError, OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        err.write(f"tbnbarrier: error: {e}\n")
        return USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
