"""Command line front end.

Subcommands wrap the library one to one: translate (arena to matrix sets),
value (solve a game), decide (threshold queries with certificates),
simulate (traces and growth estimates), encode-2cmm / check-2cmm (counter
machine gadgets), and mpg (mean payoff game reduction).

Exit codes: 0 for success (and for decide: the query holds), 1 for a false
verdict or a failed check, 2 for any error.  With --json every command
prints exactly one JSON document on standard output."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import io
from .decide import (
    PositivityRequiredError,
    decide_jsr_le,
    decide_jsr_lt,
    decide_jssr_ge,
    decide_jssr_gt,
    decide_mm_ge,
    decide_mm_lt,
    value_bisection,
)
from .games import (
    Arena,
    MpgArena,
    arena_to_iru,
    eg_payoff_entropy,
    forest_counts,
    mpg_to_weighted_eg,
    mpg_value,
    simulate_payoff,
    solve,
)
from .iru import EnumerationCapError, IruSet, enumerate_members
from .linalg import ReducibleMatrixError
from .minsky import TwoCounterMachine
from .reductions import (
    INTEGER,
    NONNEG,
    check_nonneg_punishment,
    encode_integer,
    encode_nonneg,
    run_scripted_play,
)

QUERIES = {
    "jsr<": ("set", decide_jsr_lt),
    "jsr<=": ("set", decide_jsr_le),
    "jssr>": ("set", decide_jssr_gt),
    "jssr>=": ("set", decide_jssr_ge),
    "mm<": ("pair", decide_mm_lt),
    "mm>=": ("pair", decide_mm_ge),
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: subcommand, inputs, and the knobs shared by all
    commands."""

    subcommand: str
    inputs: tuple[str, ...]
    output: str | None
    tol: Fraction
    cap: int | None
    horizon: int
    seed: int
    threads: int | None
    machine_readable: bool

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.cap is not None and self.cap < 1:
            raise ValueError("enumeration cap must be at least 1")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")


def _emit_text(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(cfg: RunConfig, doc: dict) -> None:
    _emit_text(cfg, json.dumps(doc, indent=2))


def _interval_doc(lower, upper) -> dict:
    return {
        "lower": io.format_rational(lower),
        "upper": io.format_rational(upper),
        "lower_float": float(lower),
        "upper_float": float(upper),
        "width": io.format_rational(Fraction(upper) - Fraction(lower)),
    }


def _certificate_doc(cert) -> dict | None:
    if cert is None:
        return None
    doc = {
        "kind": cert.kind,
        "vector": [io.format_rational(x) for x in cert.vector],
    }
    if cert.chosen_matrix is not None:
        doc["chosen_matrix"] = [
            [io.format_rational(x) for x in row] for row in cert.chosen_matrix.data
        ]
    return doc


def _load(cfg: RunConfig, index: int = 0):
    return io.load_document(cfg.inputs[index])


def cmd_translate(cfg: RunConfig) -> int:
    kind, value = _load(cfg)
    if kind != io.ARENA:
        raise ValueError(f"translate expects an arena document, got {kind}")
    tr = arena_to_iru(value)
    _emit_text(cfg, io.dumps_document((tr.a_set, tr.e_set)))
    return 0


def cmd_value(cfg: RunConfig) -> int:
    kind, value = _load(cfg)
    if kind == io.ARENA:
        sol = solve(value, cfg.tol, cfg.cap, cfg.threads)
        vi = sol.value
        if cfg.machine_readable:
            _emit_json(
                cfg,
                {
                    "value": _interval_doc(vi.lower, vi.upper),
                    "entropy_bits": sol.entropy_bits(),
                    "despot_strategy": dict(sol.despot_strategy.choice),
                    "tribune_strategy": dict(sol.tribune_strategy.choice),
                    "bisections": vi.bisections,
                },
            )
            return 0
        lines = [
            f"value in [{float(vi.lower):.10f}, {float(vi.upper):.10f}]"
            f" (width {float(vi.width()):.3e})",
            f"entropy {sol.entropy_bits():.10f} bits per quarter-move",
            "despot strategy: "
            + ", ".join(f"{s}={a}" for s, a in sorted(sol.despot_strategy.choice.items())),
            "tribune strategy: "
            + ", ".join(f"{s}={a}" for s, a in sorted(sol.tribune_strategy.choice.items())),
        ]
        _emit_text(cfg, "\n".join(lines))
        return 0
    if kind == io.PAIR:
        a_set, e_set = value
        vi = value_bisection(a_set, e_set, cfg.tol, cfg.cap, cfg.threads)
        if cfg.machine_readable:
            _emit_json(
                cfg,
                {
                    "value": _interval_doc(vi.lower, vi.upper),
                    "bisections": vi.bisections,
                    "lower_certificate": _certificate_doc(vi.lower_certificate),
                    "upper_certificate": _certificate_doc(vi.upper_certificate),
                },
            )
            return 0
        _emit_text(
            cfg,
            f"value in [{float(vi.lower):.10f}, {float(vi.upper):.10f}]"
            f" (width {float(vi.width()):.3e}, {vi.bisections} bisections)",
        )
        return 0
    raise ValueError(f"value expects an arena or pair document, got {kind}")


def cmd_decide(cfg: RunConfig, query: str, alpha_text: str) -> int:
    shape, decide = QUERIES[query]
    alpha = io.parse_rational(alpha_text)
    kind, value = _load(cfg)
    if shape == "set":
        if kind != io.MATRIX_SET:
            raise ValueError(f"query {query} expects a matrix-set document, got {kind}")
        answer, cert = decide(value, alpha, cfg.cap)
    else:
        if kind != io.PAIR:
            raise ValueError(f"query {query} expects a pair document, got {kind}")
        a_set, e_set = value
        answer, cert = decide(a_set, e_set, alpha, cfg.cap, cfg.threads)
    if cfg.machine_readable:
        _emit_json(
            cfg,
            {
                "query": query,
                "alpha": io.format_rational(alpha),
                "answer": answer,
                "certificate": _certificate_doc(cert),
            },
        )
    else:
        lines = [f"{query} {io.format_rational(alpha)}: {'true' if answer else 'false'}"]
        if cert is not None:
            lines.append(
                "certificate vector: "
                + " ".join(io.format_rational(x) for x in cert.vector)
            )
            if cert.chosen_matrix is not None:
                lines.append("committed matrix:")
                for row in cert.chosen_matrix.data:
                    lines.append("  " + " ".join(io.format_rational(x) for x in row))
        _emit_text(cfg, "\n".join(lines))
    return 0 if answer else 1


def _parse_strategy(text: str, arena: Arena, seed: int):
    head, sep, rest = text.partition(":")
    if head == "positional" and sep:
        table = {}
        for item in rest.split(","):
            state, eq, action = item.partition("=")
            if not eq:
                raise ValueError(f"bad positional assignment {item!r}")
            table[state.strip()] = action.strip()
        return table
    if head == "constant" and sep:
        return ("constant", rest)
    if head == "script" and sep:
        return ("script", rest)
    if head == "random":
        return ("random", int(rest) if rest else seed)
    raise ValueError(
        f"unrecognised strategy {text!r}; use positional:s=a,..., constant:a, "
        "script:letters or random:seed"
    )


def _parse_matrix_chooser(text: str, s: IruSet, cap, seed: int):
    """Strategy descriptions for matrix games: constant:INDEX fixes the
    member with that enumeration index, random:SEED draws members."""
    head, sep, rest = text.partition(":")
    members = list(enumerate_members(s, cap))
    if head == "constant" and sep:
        return members[int(rest)], None
    if head == "random":
        rng = random.Random(int(rest) if rest else seed)
        return s, lambda turn, history: rng.choice(members)
    raise ValueError(
        f"unrecognised matrix strategy {text!r}; use constant:INDEX or random:SEED"
    )


def cmd_simulate(cfg: RunConfig, despot_text: str, tribune_text: str) -> int:
    kind, value = _load(cfg)
    if kind == io.ARENA:
        despot = _parse_strategy(despot_text, value, cfg.seed)
        tribune = _parse_strategy(tribune_text, value, cfg.seed + 1)
        levels = forest_counts(value, despot, tribune, cfg.horizon)
        # even levels count despot states, odd levels tribune states
        sides = (value.despot_states, value.tribune_states)
        sums = [sum(v.entries) for v in levels]
        if cfg.machine_readable:
            _emit_json(
                cfg,
                {
                    "despot_states": list(value.despot_states),
                    "tribune_states": list(value.tribune_states),
                    "levels": [[io.format_rational(x) for x in v.entries] for v in levels],
                    "level_sums": [io.format_rational(x) for x in sums],
                },
            )
            return 0
        lines = []
        for k, v in enumerate(levels):
            cells = ", ".join(
                f"{s}={io.format_rational(x)}" for s, x in zip(sides[k % 2], v.entries)
            )
            lines.append(f"half-turn {k:3d}: {cells}   total {io.format_rational(sums[k])}")
        _emit_text(cfg, "\n".join(lines))
        return 0
    if kind == io.PAIR:
        a_set, e_set = value
        a_source, a_chooser = _parse_matrix_chooser(despot_text, a_set, cfg.cap, cfg.seed)
        e_source, e_chooser = _parse_matrix_chooser(
            tribune_text, e_set, cfg.cap, cfg.seed + 1
        )
        report = simulate_payoff(
            a_source, e_source, adam=a_chooser, eve=e_chooser, steps=cfg.horizon
        )
        if cfg.machine_readable:
            _emit_json(
                cfg,
                {
                    "steps": report.steps,
                    "growth_tail": report.tail,
                    "entropy_bits": eg_payoff_entropy(report),
                    "zeroed_at": report.zeroed_at,
                    "per_turn": list(report.per_turn),
                },
            )
            return 0
        _emit_text(
            cfg,
            f"growth estimate {report.tail:.6f} after {report.steps} steps"
            f" (entropy {eg_payoff_entropy(report):.6f} bits per quarter-move)"
            + (f"; product vanished at step {report.zeroed_at}" if report.zeroed_at else ""),
        )
        return 0
    raise ValueError(f"simulate expects an arena or pair document, got {kind}")


def _load_machine(cfg: RunConfig) -> TwoCounterMachine:
    kind, value = _load(cfg)
    if kind != io.MACHINE:
        raise ValueError(f"expected a machine description, got {kind}")
    return value


def cmd_encode_2cmm(cfg: RunConfig, variant: str) -> int:
    m = _load_machine(cfg)
    encoded = encode_integer(m) if variant == INTEGER else encode_nonneg(m)
    if encoded.degenerate:
        print(
            "warning: degenerate machine, every state halts and Eve has no matrices",
            file=sys.stderr,
        )
    _emit_text(cfg, io.dumps_document(encoded))
    return 0


def cmd_check_2cmm(cfg: RunConfig, variant: str, cheat_turn: int | None) -> int:
    m = _load_machine(cfg)
    if variant == INTEGER:
        g = encode_integer(m)
        rep = run_scripted_play(g, m, cfg.horizon, cheat_turn)
        deviated = bool(rep.deviations) or bool(rep.undetectable)
        ok = rep.faithful_invariant_ok and (
            rep.annihilation_turn is not None if deviated else True
        )
        doc = {
            "variant": variant,
            "turns": rep.turns,
            "faithful_invariant_ok": rep.faithful_invariant_ok,
            "machine_halted_turn": rep.machine_halted_turn,
            "deviations": [
                {"turn": t, "played": p, "expected": e} for t, p, e in rep.deviations
            ],
            "flashes": [
                {"turn": t, "coordinate": c, "value": io.format_rational(x)}
                for t, c, x in rep.flashes
            ],
            "undetectable": list(rep.undetectable),
            "annihilation_turn": rep.annihilation_turn,
            "cheat_played": rep.cheat_played,
            "ok": ok,
        }
        human = [
            f"integer variant, {rep.turns} turns",
            f"faithful invariant: {'held' if rep.faithful_invariant_ok else 'BROKEN'}",
            f"machine halted: "
            + (f"turn {rep.machine_halted_turn}" if rep.machine_halted_turn else "no"),
            f"deviations: {len(rep.deviations)}"
            + (f", undetectable: {list(rep.undetectable)}" if rep.undetectable else ""),
            "product annihilated: "
            + (f"turn {rep.annihilation_turn}" if rep.annihilation_turn else "no"),
            f"check {'passed' if ok else 'failed'}",
        ]
    else:
        g = encode_nonneg(m)
        rep = check_nonneg_punishment(g, m, cfg.horizon, cheat_turn)
        ok = rep.magnitude_ok and rep.segment_bounds_ok and (
            rep.aggregate_below_two if rep.punished else True
        )
        doc = {
            "variant": variant,
            "turns": rep.turns,
            "halted_turn": rep.halted_turn,
            "punished": rep.punished,
            "magnitude_ok": rep.magnitude_ok,
            "segments": [
                {
                    "start": s.start_turn,
                    "end": s.end_turn,
                    "turns": s.turns,
                    "ratio": io.format_rational(s.ratio),
                    "within_bound": s.within_bound,
                }
                for s in rep.segments
            ],
            "segment_bounds_ok": rep.segment_bounds_ok,
            "aggregate_growth": rep.aggregate_growth,
            "aggregate_below_two": rep.aggregate_below_two,
            "ok": ok,
        }
        human = [
            f"non-negative variant, {rep.turns} turns",
            f"machine halted: " + (f"turn {rep.halted_turn}" if rep.halted_turn else "no"),
            f"punished: {'yes' if rep.punished else 'no'}"
            + (f" ({len(rep.segments)} resets)" if rep.segments else ""),
            f"magnitude structure: {'held' if rep.magnitude_ok else 'BROKEN'}",
            f"segment growth bounds: {'held' if rep.segment_bounds_ok else 'BROKEN'}",
            f"aggregate growth {rep.aggregate_growth:.4f} per turn"
            + (" (< 2)" if rep.aggregate_below_two else " (NOT < 2)"),
            f"check {'passed' if ok else 'failed'}",
        ]
    if cfg.machine_readable:
        _emit_json(cfg, doc)
    else:
        _emit_text(cfg, "\n".join(human))
    return 0 if ok else 1


def cmd_mpg(cfg: RunConfig, do_solve: bool) -> int:
    kind, value = _load(cfg)
    if kind != io.MPG:
        raise ValueError(f"mpg expects a mean payoff game document, got {kind}")
    if not do_solve:
        _emit_text(cfg, io.dumps_document(mpg_to_weighted_eg(value)))
        return 0
    (lo, hi), sol = mpg_value(value, cfg.tol, cfg.cap, cfg.threads)
    if cfg.machine_readable:
        _emit_json(
            cfg,
            {
                "mean_payoff_lower": lo,
                "mean_payoff_upper": hi,
                "entropy_game_value": _interval_doc(sol.value.lower, sol.value.upper),
                "despot_strategy": dict(sol.despot_strategy.choice),
                "tribune_strategy": dict(sol.tribune_strategy.choice),
            },
        )
        return 0
    _emit_text(
        cfg,
        f"mean payoff value in [{lo:.10f}, {hi:.10f}]\n"
        "despot strategy: "
        + ", ".join(f"{s}={a}" for s, a in sorted(sol.despot_strategy.choice.items()))
        + "\ntribune strategy: "
        + ", ".join(f"{s}={a}" for s, a in sorted(sol.tribune_strategy.choice.items())),
    )
    return 0


def _add_shared_flags(parser: argparse.ArgumentParser, top_level: bool) -> None:
    # the same flags exist on the top-level parser (with real defaults) and
    # on every subparser (suppressed defaults), so they are accepted on
    # either side of the subcommand without the subparser wiping out values
    # parsed before it
    d = (lambda v: v) if top_level else (lambda v: argparse.SUPPRESS)
    parser.add_argument(
        "--tol", default=d("1/1000000"), help="tolerance as p/q (default 1/1000000)"
    )
    parser.add_argument("--cap", type=int, default=d(None), help="member enumeration cap")
    parser.add_argument(
        "--threads", type=int, default=d(None), help="worker processes for decisions"
    )
    parser.add_argument("--seed", type=int, default=d(0), help="seed for random strategies")
    if top_level:
        parser.add_argument(
            "--json", action="store_true", help="emit one JSON document on stdout"
        )
    else:
        parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    parser.add_argument(
        "-o", "--output", default=d(None), help="write the result to a file"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropygames",
        description="Solve entropy games and matrix multiplication games "
        "over independent-row-uncertainty sets.",
    )
    _add_shared_flags(parser, top_level=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_shared_flags(common, top_level=False)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("translate", parents=[common], help="arena to matrix-set pair")
    p.add_argument("input")

    p = sub.add_parser(
        "value", parents=[common], help="solve a game from an arena or pair file"
    )
    p.add_argument("input")

    p = sub.add_parser("decide", parents=[common], help="threshold query with certificate")
    p.add_argument("input")
    p.add_argument("--query", required=True, choices=sorted(QUERIES))
    p.add_argument("--alpha", required=True, help="threshold as p/q")

    p = sub.add_parser(
        "simulate", parents=[common], help="trace plays and estimate growth"
    )
    p.add_argument("input")
    p.add_argument("--despot", default="random:", help="despot/adam strategy")
    p.add_argument("--tribune", default="random:", help="tribune/eve strategy")
    p.add_argument("--turns", type=int, default=10)

    p = sub.add_parser(
        "encode-2cmm", parents=[common], help="encode a counter machine as a game"
    )
    p.add_argument("input")
    p.add_argument("--variant", choices=[INTEGER, NONNEG], default=INTEGER)

    p = sub.add_parser(
        "check-2cmm", parents=[common], help="audit the encoding's invariants by play"
    )
    p.add_argument("input")
    p.add_argument("--variant", choices=[INTEGER, NONNEG], default=INTEGER)
    p.add_argument("--turns", type=int, default=50)
    p.add_argument("--cheat-turn", type=int, default=None)

    p = sub.add_parser(
        "mpg", parents=[common], help="mean payoff game to weighted entropy game"
    )
    p.add_argument("input")
    p.add_argument("--solve", action="store_true", help="also solve and report log2 value")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            subcommand=args.subcommand,
            inputs=(args.input,),
            output=args.output,
            tol=io.parse_rational(args.tol),
            cap=args.cap,
            horizon=getattr(args, "turns", 50),
            seed=args.seed,
            threads=args.threads,
            machine_readable=args.json,
        )
        if args.subcommand == "translate":
            return cmd_translate(cfg)
        if args.subcommand == "value":
            return cmd_value(cfg)
        if args.subcommand == "decide":
            return cmd_decide(cfg, args.query, args.alpha)
        if args.subcommand == "simulate":
            return cmd_simulate(cfg, args.despot, args.tribune)
        if args.subcommand == "encode-2cmm":
            return cmd_encode_2cmm(cfg, args.variant)
        if args.subcommand == "check-2cmm":
            return cmd_check_2cmm(cfg, args.variant, args.cheat_turn)
        if args.subcommand == "mpg":
            return cmd_mpg(cfg, args.solve)
        raise ValueError(f"unknown subcommand {args.subcommand!r}")
    except (
        ValueError,
        KeyError,
        IndexError,
        OSError,
        EnumerationCapError,
        PositivityRequiredError,
        ReducibleMatrixError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
