"""JSON formats for boxes, games, and reports.

Box files hold exactly one of:
    {"p": [16 numbers]}                      raw entries, validated on load
    {"coins": {"r": , "s": , "rp": , "sp": }}   product box from coin biases
    {"named": "uniform" | "chsh-max-1" | "chsh-max-2"}

Game files hold either a bare payoff matrix {"K": , "L": , "M": , "N": } or a
family form {"family": "pd" | "stag-hunt", "K": , "L": , "M": , "N": } /
{"family": "chicken", "alpha": , "beta": }.

Output floats are printed with 17 significant digits so every double
round-trips exactly; non-finite numbers are rejected.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .game_core import PayoffMatrix
from .games_catalog import GameFamily, chicken, detect_family, prisoners_dilemma, stag_hunt
from .probability_box import CoinProfile, JointBox, from_coins, named_box

__all__ = [
    "SchemaError",
    "dumps",
    "game_to_dict",
    "load_box",
    "load_box_values",
    "load_game",
    "parse_box",
    "parse_box_values",
    "parse_game",
]


class SchemaError(ValueError):
    """The JSON parsed but does not match any documented document shape."""

_FAMILY_ALIASES = {
    "pd": prisoners_dilemma,
    "prisoners-dilemma": prisoners_dilemma,
    "sh": stag_hunt,
    "stag-hunt": stag_hunt,
}


def _format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite number {value!r}")
    return format(value, ".17g")


def dumps(obj) -> str:
    """Serialize to JSON with 17-significant-digit floats."""
    return _emit(obj)


def _emit(obj) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{what} must be a number, got {value!r}")
    return float(value)


def parse_box_values(data: dict) -> list:
    """Schema-check a box document and return its 16 raw entries.

    Unlike :func:`parse_box` this does not validate the numbers, so callers
    can report validation residuals instead of refusing to load.
    """
    if not isinstance(data, dict):
        raise SchemaError(f"box document must be an object, got {type(data).__name__}")
    keys = set(data)
    if keys == {"p"}:
        values = data["p"]
        if not isinstance(values, list) or len(values) != 16:
            raise SchemaError("box key 'p' must hold a list of 16 numbers")
        return [_number(v, "box entry") for v in values]
    if keys == {"coins"}:
        coins = data["coins"]
        expected = {"r", "s", "rp", "sp"}
        if not isinstance(coins, dict) or set(coins) != expected:
            raise SchemaError(f"box key 'coins' must hold exactly the keys {sorted(expected)}")
        profile = CoinProfile(*(_number(coins[k], f"coin {k}") for k in ("r", "s", "rp", "sp")))
        return from_coins(profile).tolist()
    if keys == {"named"}:
        name = data["named"]
        if not isinstance(name, str):
            raise SchemaError(f"box key 'named' must hold a string, got {name!r}")
        return named_box(name).tolist()
    raise SchemaError(
        f"box document must hold exactly one of 'p', 'coins', 'named'; got keys {sorted(keys)}"
    )


def parse_box(data: dict) -> JointBox:
    """Build a validated box from one parsed box document."""
    return JointBox.from_values(parse_box_values(data))


def parse_game(data: dict) -> tuple:
    """Build (matrix, family or None) from one parsed game document."""
    if not isinstance(data, dict):
        raise SchemaError(f"game document must be an object, got {type(data).__name__}")
    keys = set(data)
    if keys == {"K", "L", "M", "N"}:
        matrix = PayoffMatrix(*(_number(data[k], k) for k in ("K", "L", "M", "N")))
        return matrix, detect_family(matrix)
    if "family" not in keys:
        raise SchemaError(
            "game document needs either keys K, L, M, N or a 'family' key; "
            f"got keys {sorted(keys)}"
        )
    family_name = data["family"]
    if family_name == "chicken":
        if keys != {"family", "alpha", "beta"}:
            raise SchemaError("chicken games need exactly the keys family, alpha, beta")
        family = chicken(_number(data["alpha"], "alpha"), _number(data["beta"], "beta"))
        return family.matrix, family
    if family_name in _FAMILY_ALIASES:
        if keys != {"family", "K", "L", "M", "N"}:
            raise SchemaError(f"{family_name} games need exactly the keys family, K, L, M, N")
        family = _FAMILY_ALIASES[family_name](
            *(_number(data[k], k) for k in ("K", "L", "M", "N"))
        )
        return family.matrix, family
    raise SchemaError(
        f"unknown family {family_name!r}; expected pd, stag-hunt, or chicken"
    )


def game_to_dict(matrix: PayoffMatrix, family: GameFamily = None) -> dict:
    out = {"K": matrix.K, "L": matrix.L, "M": matrix.M, "N": matrix.N}
    if family is not None:
        out["family"] = family.kind
    return out


def _load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_box(source: str) -> JointBox:
    """Resolve a CLI box argument: a built-in name or a JSON file path."""
    try:
        return named_box(source)
    except ValueError:
        pass
    return parse_box(_load_document(source))


def load_box_values(source: str) -> list:
    """Like load_box but returns raw entries without validating them."""
    try:
        return named_box(source).tolist()
    except ValueError:
        pass
    return parse_box_values(_load_document(source))


def load_game(source: str) -> tuple:
    """Load a game JSON file: returns (matrix, family or None)."""
    return parse_game(_load_document(source))
