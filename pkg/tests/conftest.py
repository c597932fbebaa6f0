"""Shared helpers for the test suite."""

import numpy as np

from eprgames.game_core import BlockPayoffs, StrategyProfile, deviation_margins


def random_block_game(rng: np.random.Generator, scale: float = 5.0) -> BlockPayoffs:
    return BlockPayoffs(
        a=rng.uniform(-scale, scale, size=(2, 2)),
        b=rng.uniform(-scale, scale, size=(2, 2)),
    )


def grid_margins(blocks: BlockPayoffs, resolution: int = 101):
    """Vectorized deviation margins on a uniform grid.

    Returns (xs, ys, margin) with margin[i, j] = min of both players'
    worst-deviation losses at (xs[i], ys[j]); non-negative entries are weak
    equilibria of the bilinear game.
    """
    a, b = blocks.a, blocks.b
    xs = np.linspace(0.0, 1.0, resolution)
    ys = np.linspace(0.0, 1.0, resolution)
    x = xs[:, None]
    y = ys[None, :]
    top = y * a[0, 0] + (1 - y) * a[0, 1]
    bottom = y * a[1, 0] + (1 - y) * a[1, 1]
    alice = x * top + (1 - x) * bottom - np.maximum(top, bottom)
    left = x * b[0, 0] + (1 - x) * b[1, 0]
    right = x * b[0, 1] + (1 - x) * b[1, 1]
    bob = y * left + (1 - y) * right - np.maximum(left, right)
    return xs, ys, np.minimum(alice, bob)


def check_grid_agreement(
    blocks: BlockPayoffs,
    eq,
    resolution: int = 101,
    detect_tol: float = 1e-12,
    distance_tol: float = 1e-6,
    margin_tol: float = 1e-9,
) -> None:
    """Assert the enumerated set agrees with a brute-force grid oracle.

    Completeness: every grid profile with non-negative margins lies within
    distance_tol of the enumerated set.  Soundness: every enumerated point
    and a sampled cover of every segment has margins above -margin_tol.
    """
    xs, ys, margin = grid_margins(blocks, resolution)
    for i, j in zip(*np.nonzero(margin >= -detect_tol)):
        d = eq.distance_to(float(xs[i]), float(ys[j]))
        assert d <= distance_tol, (
            f"grid equilibrium ({xs[i]}, {ys[j]}) is {d} from the enumerated set"
        )
    for x, y in eq.sample_points(17):
        worst = min(deviation_margins(blocks, StrategyProfile(x, y)))
        assert worst >= -margin_tol, (
            f"enumerated profile ({x}, {y}) has deviation margin {worst}"
        )
