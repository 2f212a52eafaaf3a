"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 internal-consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .bridge import round_trip
from .errors import InternalConsistencyError
from .ergopt import ExperimentConfig, run_experiment
from .exact import as_fraction, fmt
from .flower import flower_from_orbit
from .iet import (
    DeckShuffler,
    ab_coding,
    example3_shuffler,
    flower_from_iet,
    h_graph,
    iet_apply,
)
from .orbits import all_orbits, interlacing_number, interlacing_tally, orbit_from_word
from .svg import flower_svg, h_graph_svg
from .symbolic import linear_factors

EXAMPLE_LENGTHS = {
    1: ("2/5", "1/5", "1/5", "1/5"),
    2: ("3/10", "2/10", "2/10", "3/10"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _lengths(text: str) -> list[Fraction]:
    try:
        return [as_fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad --lengths {text!r}: {exc}") from None


def _default_threads() -> int:
    raw = os.environ.get("FLOWER_IET_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _table(rows: list[list], header: list[str], out: str) -> str:
    if out == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    if out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    lines = [" | ".join(header)] + [" | ".join(str(c) for c in r) for r in rows]
    return "\n".join(lines) + "\n"


def _float(v) -> str:
    return f"{float(v):.12g}"


# -- commands ----------------------------------------------------------------

def cmd_orbits_tally(args) -> str:
    tally = interlacing_tally(args.max_period)
    rows = [[k, r.count, r.simplest] for k, r in tally.items()]
    return _table(rows, ["interlacing", "count", "simplest_orbit"], args.out)


def _plateau_rows(T: DeckShuffler):
    g = h_graph(T)
    return g, [[f"[{fmt(p.start)}, {fmt(p.end)})", p.cycle, fmt(p.value), p.period] for p in g.plateaus]


def cmd_example(args) -> str:
    if args.n in EXAMPLE_LENGTHS:
        T = DeckShuffler(list(EXAMPLE_LENGTHS[args.n]))
        g, rows = _plateau_rows(T)
        F = flower_from_iet(T)
        if args.svg_dir:
            _write_example_svgs(args.svg_dir, args.n, g, F, [p.value for p in g.plateaus])
        if args.out != "text":
            if args.out == "json":
                body = {"lengths": T.to_json()["lengths"],
                        "plateaus": [dict(zip(["interval", "cycle", "value", "period"], r)) for r in rows],
                        "flower": [p.to_json() for p in F.petals]}
                return json.dumps(body, indent=2) + "\n"
            return _table(rows, ["interval", "cycle", "value", "period"], "csv")
        text = f"lengths: {', '.join(EXAMPLE_LENGTHS[args.n])}\n"
        text += _table(rows, ["interval", "cycle", "H", "period"], "text")
        orbits = _orbits_of(sorted({p.value for p in g.plateaus}))
        text += "orbits: " + "; ".join("{" + ", ".join(fmt(v) for v in o) + "}" for o in orbits) + "\n"
        text += "flower: " + " ".join(repr(p) for p in F.petals) + "\n"
        return text
    return _example3(args)


def _orbits_of(values: list[Fraction]) -> list[list[Fraction]]:
    left = set(values)
    out = []
    for v in values:
        if v not in left:
            continue
        orbit = [v]
        left.discard(v)
        w = (2 * v) % 1
        while w != v:
            orbit.append(w)
            left.discard(w)
            w = (2 * w) % 1
        out.append(orbit)
    return out


def _example3(args) -> str:
    depth = args.depth
    T = example3_shuffler(args.bits)
    e = T.endpoints
    first = ab_coding(T, e[3], depth)          # left end of B2
    second = ab_coding(T, iet_apply(T, e[3]), depth)
    F = flower_from_iet(T, depth)
    bound = Fraction(1, 1 << (depth - 2))
    periodic = sorted([second, first], key=lambda c: c.value)
    targets = [Fraction(1, 3), Fraction(2, 3)]
    rows = [[c.cycle, _float(c.value), _float(abs(c.value - t)), abs(c.value - t) <= bound]
            for c, t in zip(periodic, targets)]
    codes = complementary_codings(T, depth)
    complexity = [len(linear_factors(codes, n)) for n in range(1, 13)]
    smallest = min(F.petals, key=lambda p: p.length)
    if args.svg_dir:
        _write_example_svgs(args.svg_dir, 3, h_graph(T, 512, depth), F, [])
    if args.out == "json":
        return json.dumps({
            "b_bits": args.bits, "depth": depth,
            "periodic": [{"cycle": r[0], "value": r[1], "error": r[2], "ok": r[3]} for r in rows],
            "complexity": complexity,
            "flower": [[_float(p.left), _float(p.right)] for p in F.petals],
            "smallest_petal_contains_2/3": smallest.contains(Fraction(2, 3)),
        }, indent=2) + "\n"
    text = f"lengths: a=1/2-2b, b+1/4, b, 1/4 with b=(sqrt5-1)/8 to {args.bits} bits; depth {depth}\n"
    text += _table(rows, ["cycle", "H", "distance", f"within 2^-{depth - 2}"], "text" if args.out == "text" else "csv")
    text += "complementary complexity n=1..12: " + " ".join(map(str, complexity)) + "\n"
    text += "flower: " + " ".join(f"[{_float(p.left)}, {_float(p.right)}]" for p in F.petals) + "\n"
    text += f"smallest petal contains 2/3: {smallest.contains(Fraction(2, 3))}\n"
    return text


def complementary_codings(T: DeckShuffler, depth: int, grid: int = 400) -> list[str]:
    """Truncated A/B codings of grid points whose orbits never close up."""
    out = []
    for i in range(grid):
        c = ab_coding(T, Fraction(i, grid), depth)
        if c.cycle is None:
            out.append(c.prefix)
    return out


def _write_example_svgs(directory, n: int, graph, F, points) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / f"example{n}_h.svg").write_text(h_graph_svg(graph))
    (d / f"example{n}_flower.svg").write_text(flower_svg(F, points))


def cmd_iet_code(args) -> str:
    T = DeckShuffler(_lengths(args.lengths))
    c = ab_coding(T, as_fraction(args.x), args.depth, left=args.left)
    body = {"x": fmt(as_fraction(args.x)), "prefix": c.prefix, "cycle": c.cycle, "value": fmt(c.value),
            "exact": c.exact, "error": fmt(c.error)}
    if args.out == "json":
        return json.dumps(body, indent=2) + "\n"
    return _table([list(body.values())], list(body.keys()), args.out)


def cmd_iet_flower(args) -> str:
    T = DeckShuffler(_lengths(args.lengths))
    F = flower_from_iet(T)
    if args.out == "json":
        return json.dumps(F.to_json(), indent=2) + "\n"
    return _table([[i + 1, fmt(p.left), fmt(p.right)] for i, p in enumerate(F.petals)],
                  ["petal", "left", "right"], args.out)


def cmd_orbit_flower(args) -> str:
    o = orbit_from_word(args.word)
    F = flower_from_orbit(o)
    if args.out == "json":
        return json.dumps({"word": o.word, "interlacing": interlacing_number(o), **F.to_json()}, indent=2) + "\n"
    rows = [[i + 1, fmt(p.left), fmt(p.right)] for i, p in enumerate(F.petals)]
    text = _table(rows, ["petal", "left", "right"], args.out)
    if args.out == "text":
        text = f"orbit {o.word}: " + ", ".join(fmt(x) for x in o.points) + \
            f"; interlacing {interlacing_number(o)}\n" + text
    return text


def cmd_round_trip(args) -> str:
    if args.all:
        reports = [round_trip(o) for o in all_orbits(args.max_period) if not o.is_fixed_point]
    elif args.word:
        reports = [round_trip(args.word)]
    else:
        raise ValueError("round-trip needs --word or --all")
    failures = [r for r in reports if not r.ok]
    if args.out == "json":
        return json.dumps([r.to_json() for r in reports], indent=2) + "\n"
    if not args.all:
        r = reports[0]
        rows = [[r.word, r.interlacing, " ".join(repr(p) for p in r.flower.petals),
                 ",".join(fmt(v) for v in r.iet.lengths), *(r.checks[k] for k in sorted(r.checks))]]
        return _table(rows, ["word", "interlacing", "flower", "lengths", *sorted(r.checks)], args.out)
    by_class: dict[int, list[int]] = {}
    for r in reports:
        row = by_class.setdefault(r.interlacing, [0, 0])
        row[0] += 1
        row[1] += not r.ok
    rows = [[k, v[0], v[1]] for k, v in sorted(by_class.items())]
    text = _table(rows, ["interlacing", "orbits", "failures"], args.out)
    if args.out == "text":
        text += f"total {len(reports)} orbits, {len(failures)} failures\n"
    if failures:
        raise InternalConsistencyError(f"{len(failures)} round trips failed",
                                       {"first": failures[0].to_json()})
    return text


def cmd_ergopt(args) -> str:
    cfg = ExperimentConfig(degree=args.degree, samples=args.samples, max_period=args.max_period,
                           seed=args.seed, threads=args.threads)
    result = run_experiment(cfg, log_csv=args.log_csv)
    rows = [[k, v, f"{v / cfg.samples:.4f}"] for k, v in result.tally.items()]
    if args.out == "json":
        return json.dumps({"degree": cfg.degree, "samples": cfg.samples, "seed": cfg.seed,
                           "max_period": cfg.max_period, "tally": {str(k): v for k, v in result.tally.items()},
                           "ties": result.ties}, indent=2) + "\n"
    text = _table(rows, ["interlacing", "count", "fraction"], args.out)
    if args.out == "text":
        text += f"degree {cfg.degree}, {cfg.samples} samples, seed {cfg.seed}, ties {result.ties}\n"
    return text


def cmd_render(args) -> str:
    if args.word:
        o = orbit_from_word(args.word)
        svg = flower_svg(flower_from_orbit(o), o.points)
    elif args.lengths:
        svg = h_graph_svg(h_graph(DeckShuffler(_lengths(args.lengths))))
    else:
        raise ValueError("render needs --word or --lengths")
    Path(args.svg).write_text(svg)
    return f"wrote {args.svg}\n"


# -- parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("text", "csv", "json"), default="text")

    p = _Parser(prog="flowerdyn", description="Flowers, deck-shuffler IETs and interlacing experiments.")
    p.add_argument("--config", help="key=value file whose entries act as default flags")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("orbits-tally", parents=[common], help="interlacing numbers of all periodic orbits")
    s.add_argument("--max-period", type=int, default=14)
    s.set_defaults(func=cmd_orbits_tally)

    s = sub.add_parser("example", parents=[common], help="reproduce a worked deck-shuffler example")
    s.add_argument("n", type=int, choices=(1, 2, 3))
    s.add_argument("--svg-dir")
    s.add_argument("--depth", type=int, default=60, help="coding depth for example 3")
    s.add_argument("--bits", type=int, default=256, help="binary digits of b for example 3")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("iet-code", parents=[common], help="A/B coding and H value of a point")
    s.add_argument("--lengths", required=True, help="comma-separated p/q lengths")
    s.add_argument("--x", required=True)
    s.add_argument("--depth", type=int, default=64)
    s.add_argument("--left", action="store_true", help="code the left limit at x")
    s.set_defaults(func=cmd_iet_code)

    s = sub.add_parser("iet-flower", parents=[common], help="flower containing the image of H")
    s.add_argument("--lengths", required=True)
    s.set_defaults(func=cmd_iet_flower)

    s = sub.add_parser("orbit-flower", parents=[common], help="canonical flower of a periodic orbit")
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_orbit_flower)

    s = sub.add_parser("round-trip", parents=[common], help="orbit -> flower -> IET -> flower checks")
    s.add_argument("--word")
    s.add_argument("--all", action="store_true")
    s.add_argument("--max-period", type=int, default=14)
    s.set_defaults(func=cmd_round_trip)

    s = sub.add_parser("ergopt", parents=[common], help="pseudo-maximizer experiment")
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--max-period", type=int, default=14)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=_default_threads())
    s.add_argument("--log-csv")
    s.set_defaults(func=cmd_ergopt)

    s = sub.add_parser("render", parents=[common], help="write an SVG figure")
    s.add_argument("--svg", required=True)
    s.add_argument("--word", help="draw the canonical flower of this orbit")
    s.add_argument("--lengths", help="draw the H step graph of this deck shuffler")
    s.set_defaults(func=cmd_render)
    return p


def _config_flags(path: str) -> list[str]:
    flags = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            flags.append(flag)
        elif value.lower() not in ("false", "no", "off"):
            flags += [flag, value]
    return flags


def _expand_config(argv: list[str], parser: argparse.ArgumentParser) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return argv
    commands = set(parser._subparsers._group_actions[0].choices)
    for i, tok in enumerate(rest):
        if tok in commands:
            # config entries go first so explicit flags override them
            return rest[: i + 1] + _config_flags(known.config) + rest[i + 1:]
    return rest


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(_expand_config(argv, parser))
        except SystemExit as exc:
            return int(exc.code or 0)
        sys.stdout.write(args.func(args))
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        for k, v in exc.witnesses.items():
            print(f"  {k}: {v}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
