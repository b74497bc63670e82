"""Types shared by both kernel backends."""
from __future__ import annotations

from typing import NamedTuple, Optional

from .orbit import DepthStats, OrbitConfig, decide


class RawExplore(NamedTuple):
    stats: DepthStats
    escape_word: Optional[tuple]
    # lowest node's word per depth (None where the tree was empty)
    min_words: Optional[list]


def stats_from_lists(mins, maxs, escs, survs, indet, streak_depth) -> DepthStats:
    return DepthStats(
        tuple(float(x) for x in mins),
        tuple(float(x) for x in maxs),
        tuple(int(x) for x in escs),
        tuple(int(x) for x in survs),
        int(indet),
        None if streak_depth < 0 else int(streak_depth),
    )


def config_from_params(params) -> OrbitConfig:
    esc_r, bound_r, D, B, G, rho, _cap = params
    return OrbitConfig(esc_r, bound_r, D, B, G, rho)


def decide_codes(stats: DepthStats, params) -> int:
    return int(decide(stats, config_from_params(params)).cls)
