"""Pure-Python beam explorer; reference twin of the compiled kernel.

Per depth every survivor is expanded by every generator.  Children that
overflow are escape events; with a pole-bearing semigroup the point at
infinity survives as an ordinary node, otherwise the branch ends.  Children
are deduplicated on a 1e-12 lattice (first discovery kept, longest growth
streak kept), then truncated to the ``beam`` lowest moduli plus the ``beam``
highest finite moduli, ties broken by discovery order.  Survivors keep
discovery order.
"""
from __future__ import annotations

import math

from .extcomplex import IndeterminateForm, ext_abs
from .funcexpr import evaluate
from .kernel_common import RawExplore, decide_codes, stats_from_lists

name = "python"

_Q = 1e12


def prepare(generators):
    return tuple(generators)


def _key(v):
    if v.is_inf:
        return None
    return (math.floor(v.re * _Q + 0.5), math.floor(v.im * _Q + 0.5))


def explore(prog, has_pole, z, params, want_words):
    esc_r, _bound_r, D, B, G, _rho, _cap = params
    gens = prog
    g = len(gens)
    # survivor: (value, modulus, streak)
    surv = [(z, ext_abs(z), 0)]
    tables = []  # per depth: list of (parent, gen) for survivors
    mins, maxs, escs, survs, min_idx = [], [], [], [], []
    indet = 0
    streak_depth = -1
    witness = None  # (depth, parent, gen)
    for n in range(1, D + 1):
        if not surv:
            mins.append(math.inf)
            maxs.append(0.0)
            escs.append(0)
            survs.append(0)
            min_idx.append(-1)
            tables.append([])
            continue
        children = []  # [value, modulus, streak, parent, gen]
        esc = 0
        top = 0.0
        for p, (v, pmod, pstreak) in enumerate(surv):
            for i in range(g):
                try:
                    c = evaluate(gens[i], v)
                except IndeterminateForm:
                    indet += 1
                    continue
                mod = ext_abs(c)
                if mod > top:
                    top = mod
                if c.is_inf:
                    esc += 1
                    if witness is None:
                        witness = (n, p, i)
                    if not has_pole:
                        continue
                    s = 0
                else:
                    s = pstreak + 1 if (mod > esc_r and mod > pmod) else 0
                    if s >= G:
                        if streak_depth < 0:
                            streak_depth = n
                        if witness is None:
                            witness = (n, p, i)
                children.append([c, mod, s, p, i])
        # dedup, keeping first discovery and the longest streak
        seen = {}
        kept = []
        for ch in children:
            k = _key(ch[0])
            j = seen.get(k)
            if j is None:
                seen[k] = len(kept)
                kept.append(ch)
            elif ch[2] > kept[j][2]:
                kept[j][2] = ch[2]
        order = sorted(range(len(kept)), key=lambda j: (kept[j][1], j))
        chosen = set(order[:B])
        finite_desc = [j for j in reversed(order) if not kept[j][0].is_inf]
        chosen.update(finite_desc[:B])
        idx = sorted(chosen)
        surv = [(kept[j][0], kept[j][1], kept[j][2]) for j in idx]
        tables.append([(kept[j][3], kept[j][4]) for j in idx])
        maxs.append(top)
        escs.append(esc)
        survs.append(len(idx))
        if idx:
            best = order[0]
            mins.append(kept[best][1])
            min_idx.append(idx.index(best))
        else:
            mins.append(math.inf)
            min_idx.append(-1)

    stats = stats_from_lists(mins, maxs, escs, survs, indet, streak_depth)
    if not want_words:
        return RawExplore(stats, None, None)

    def word_of(depth, j):
        w = []
        while depth >= 1:
            parent, gen = tables[depth - 1][j]
            w.append(gen)
            j = parent
            depth -= 1
        return tuple(w)

    escape_word = None
    if witness is not None:
        n, p, i = witness
        escape_word = (i,) + word_of(n - 1, p)
    min_words = [word_of(n + 1, j) if j >= 0 else None for n, j in enumerate(min_idx)]
    return RawExplore(stats, escape_word, min_words)


def classify_many(prog, has_pole, re, im, params):
    from .extcomplex import finite

    out = []
    for x, y in zip(re, im):
        raw = explore(prog, has_pole, finite(float(x), float(y)), params, False)
        out.append(decide_codes(raw.stats, params))
    return out
