"""Command-line front end.

Every subcommand prints a single JSON document on stdout; diagnostics go to
stderr.  Exit codes: 0 success or pass, 1 domain failure or mismatch, 2
usage or parse error.  Box arguments accept either a JSON file path or one
of the built-in names (uniform, chsh-max-1, chsh-max-2).  The EPRGAMES_TOL
environment variable overrides the default tolerance of flags that take one.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys

from .epr_game import analyze
from .game_core import (
    StrategyProfile,
    block_payoffs_classical,
    enumerate_equilibria,
    mixed_payoffs,
)
from .games_catalog import (
    SCENARIOS,
    classical_equilibria,
    constraint_set_for,
    constraint_targets,
    reproduce,
)
from .montecarlo import PlayConfig, simulate
from .probability_box import (
    BoxValidationError,
    InvalidFreeBlockError,
    NotFactorizable,
    chsh_correlation_sum,
    clauser_horne_value,
    complete_from_free,
    factorize,
    max_ch_violation,
    validate,
)
from .search import InfeasibleConstraintError, SearchConfig, scan_for_new_equilibria
from .serialize import (
    SchemaError,
    dumps,
    load_box,
    load_box_values,
    load_game,
)

__all__ = ["main"]

_CHSH_SIGNS = tuple(
    s for s in itertools.product((1, -1), repeat=4) if s[0] * s[1] * s[2] * s[3] == -1
)


def _tol_from_env(fallback: float = 1e-9) -> float:
    raw = os.environ.get("EPRGAMES_TOL")
    if raw is None:
        return fallback
    try:
        value = float(raw)
    except ValueError:
        raise SchemaError(f"EPRGAMES_TOL must be a number, got {raw!r}") from None
    if not math.isfinite(value) or value <= 0:
        raise SchemaError(f"EPRGAMES_TOL must be a positive finite number, got {raw!r}")
    return value


def _tol(args) -> float:
    return args.tol if args.tol is not None else _tol_from_env()


def _payoff_dicts(pairs) -> list:
    return [{"alice": pp.alice, "bob": pp.bob} for pp in pairs]


def _cmd_box_check(args) -> tuple:
    report = validate(load_box_values(args.box), tol=_tol(args))
    return report.to_dict(), 0 if report.ok else 1


def _cmd_box_complete(args) -> tuple:
    with open(args.free, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or set(doc) != {"free"}:
        raise SchemaError("free-block document must hold exactly the key 'free'")
    values = doc["free"]
    if not isinstance(values, list) or len(values) != 8:
        raise SchemaError("key 'free' must hold a list of 8 numbers")
    box = complete_from_free([float(v) for v in values])
    return {"p": box.tolist()}, 0


def _cmd_box_factorize(args) -> tuple:
    fit = factorize(load_box(args.box), tol=_tol(args))
    if isinstance(fit, NotFactorizable):
        return (
            {
                "factorizable": False,
                "max_residual": fit.max_residual,
                "residuals": list(fit.residuals),
            },
            0,
        )
    coins = {"r": fit.r, "s": fit.s, "rp": fit.rp, "sp": fit.sp}
    return {"factorizable": True, "coins": coins}, 0


def _cmd_box_bell(args) -> tuple:
    box = load_box(args.box)
    best_value, best_signs = None, None
    for signs in _CHSH_SIGNS:
        value = chsh_correlation_sum(box, signs)
        if best_value is None or value > best_value:
            best_value, best_signs = value, signs
    payload = {
        "ch_default": clauser_horne_value(box),
        "ch_max": max_ch_violation(box).to_dict(),
        "chsh_default": chsh_correlation_sum(box),
        "chsh_max": {"value": best_value, "signs": list(best_signs)},
    }
    return payload, 0


def _cmd_game_equilibria(args) -> tuple:
    matrix, family = load_game(args.game)
    if family is not None:
        sol = classical_equilibria(family)
        eq, payoffs = sol.equilibria, sol.payoffs
    else:
        blocks = block_payoffs_classical(matrix)
        eq = enumerate_equilibria(blocks)
        payoffs = tuple(mixed_payoffs(blocks, pt) for pt in eq.points)
    payload = {
        "game": {"K": matrix.K, "L": matrix.L, "M": matrix.M, "N": matrix.N},
        "family": family.kind if family is not None else None,
        "equilibria": eq.to_dict(),
        "payoffs": _payoff_dicts(payoffs),
    }
    return payload, 0


def _cmd_analyze(args) -> tuple:
    matrix, family = load_game(args.game)
    box = load_box(args.box)
    payload = analyze(matrix, box).to_dict()
    payload["family"] = family.kind if family is not None else None
    if args.constraints is not None:
        if family is None:
            raise ValueError(
                "constraint checks need a game from a known family "
                "(prisoners-dilemma, stag-hunt, chicken)"
            )
        names = tuple(args.constraints) or constraint_targets(family)
        tol = _tol(args)
        checks = {}
        for name in names:
            cs = constraint_set_for(family, name)
            checks[name] = {
                "label": cs.label,
                "satisfied": cs.satisfied(box, tol=tol),
                "max_residual": cs.max_residual(box),
            }
        payload["constraints"] = checks
    return payload, 0


def _cmd_reproduce(args) -> tuple:
    if args.scenario == "all":
        reports = [reproduce(name) for name in SCENARIOS]
        passed = all(r.passed for r in reports)
        return {"passed": passed, "reports": [r.to_dict() for r in reports]}, (
            0 if passed else 1
        )
    report = reproduce(args.scenario)
    return report.to_dict(), 0 if report.passed else 1


def _cmd_simulate(args) -> tuple:
    matrix, _ = load_game(args.game)
    box = load_box(args.box)
    config = PlayConfig(
        matrix=matrix,
        box=box,
        profile=StrategyProfile(args.x, args.y),
        runs=args.runs,
        seed=args.seed,
    )
    return simulate(config).to_dict(), 0


def _cmd_search(args) -> tuple:
    matrix, family = load_game(args.game)
    if family is None:
        raise ValueError(
            "search needs a game from a known family "
            "(prisoners-dilemma, stag-hunt, chicken)"
        )
    constraint = (
        None if args.constraint == "none" else constraint_set_for(family, args.constraint)
    )
    config = SearchConfig(
        family=family, constraint=constraint, samples=args.samples, seed=args.seed
    )
    inject = tuple(load_box(source) for source in args.inject)
    hits = scan_for_new_equilibria(config, inject=inject)
    payload = {
        "family": family.kind,
        "constraint": constraint.label if constraint is not None else None,
        "samples": args.samples,
        "seed": args.seed,
        "injected": len(inject),
        "hits": [hit.to_dict() for hit in hits],
    }
    return payload, 0


def _add_tol(parser) -> None:
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="tolerance (default: EPRGAMES_TOL or 1e-9)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprgames",
        description="Two-player 2x2 games played through joint-probability boxes.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("box-check", help="validate a box and report residuals")
    p.add_argument("box", help="box JSON file or built-in name")
    _add_tol(p)
    p.set_defaults(handler=_cmd_box_check)

    p = sub.add_parser("box-complete", help="fill dependent entries from 8 free ones")
    p.add_argument("free", help='JSON file {"free": [8 numbers]}')
    p.set_defaults(handler=_cmd_box_complete)

    p = sub.add_parser("box-factorize", help="fit four independent coins to a box")
    p.add_argument("box", help="box JSON file or built-in name")
    _add_tol(p)
    p.set_defaults(handler=_cmd_box_factorize)

    p = sub.add_parser("box-bell", help="Clauser-Horne and CHSH values of a box")
    p.add_argument("box", help="box JSON file or built-in name")
    p.set_defaults(handler=_cmd_box_bell)

    p = sub.add_parser("game-equilibria", help="classical equilibria of a game")
    p.add_argument("game", help="game JSON file")
    p.set_defaults(handler=_cmd_game_equilibria)

    p = sub.add_parser("analyze", help="full equilibrium analysis of (game, box)")
    p.add_argument("game", help="game JSON file")
    p.add_argument("box", help="box JSON file or built-in name")
    p.add_argument(
        "--constraints",
        nargs="*",
        default=None,
        metavar="NAME",
        help="check these named constraint sets (no names: all for the family)",
    )
    _add_tol(p)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("reproduce", help="re-run a frozen scenario and compare")
    p.add_argument("scenario", choices=SCENARIOS + ("all",))
    p.set_defaults(handler=_cmd_reproduce)

    p = sub.add_parser("simulate", help="Monte Carlo payoff estimate")
    p.add_argument("game", help="game JSON file")
    p.add_argument("box", help="box JSON file or built-in name")
    p.add_argument("--x", type=float, required=True, help="Alice's first-move weight")
    p.add_argument("--y", type=float, required=True, help="Bob's first-move weight")
    p.add_argument("--runs", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("search", help="scan constrained boxes for new equilibria")
    p.add_argument("game", help="game JSON file")
    p.add_argument(
        "--constraint",
        default="none",
        help='constraint target name for the family, or "none"',
    )
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--inject",
        nargs="*",
        default=(),
        metavar="BOX",
        help="boxes examined ahead of the sampled stream",
    )
    p.set_defaults(handler=_cmd_search)

    return parser


def _error_payload(exc) -> dict:
    out = {"error": str(exc)}
    if isinstance(exc, BoxValidationError):
        out["report"] = exc.report.to_dict()
    elif isinstance(exc, InvalidFreeBlockError):
        out["entries"] = [{"index": k, "value": v} for k, v in exc.entries]
    elif isinstance(exc, InfeasibleConstraintError):
        out["constraint"] = exc.label
        out["reason"] = exc.reason
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        payload, code = args.handler(args)
    except (json.JSONDecodeError, OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(dumps(_error_payload(exc)))
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(dumps(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
