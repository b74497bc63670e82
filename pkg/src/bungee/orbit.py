"""Word-tree exploration and Escaping / Bounded / Bungee classification.

A point is classified from the finite word tree of the semigroup at that
point.  The beam explorer lives in the kernel (compiled, with a pure-Python
fallback); this module holds the public types, the decision rules shared by
every exploration route, plain single-map iteration and the exhaustive
brute-force oracle.

Decision rules, applied to per-depth statistics:

1. escape witness: a branch left the plane (overflowed the cap / hit the
   point at infinity) or some branch stayed above ``escape_radius`` while
   strictly growing for ``growth_streak`` consecutive depths;
2. bounded witness: the smallest surviving modulus was ``<= bound_radius`` at
   a fraction ``>= bounded_fraction`` of all depths, and at least once in the
   last ``growth_streak`` depths;
3. Bungee = both witnesses; Escaping = no bounded witness and either the
   whole tree died by escaping or the smallest modulus is above
   ``escape_radius`` and non-decreasing over the last ``growth_streak``
   depths; Bounded = no escape event and every modulus ``<= bound_radius``;
   anything else is Unresolved.
"""
from __future__ import annotations

import enum
import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import extcomplex as xc
from .extcomplex import ExtComplex, IndeterminateForm
from .funcexpr import Expr, evaluate, has_pole as expr_has_pole, parse, substitute, to_text

Word = tuple[int, ...]


class OrbitClass(enum.IntEnum):
    ESCAPING = 0
    BOUNDED = 1
    BUNGEE = 2
    UNRESOLVED = 3

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, text: str) -> "OrbitClass":
        return cls[text.upper()]

    @property
    def resolved(self) -> bool:
        return self is not OrbitClass.UNRESOLVED


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Semigroup:
    """Finitely generated semigroup; word [i1, ..., ik] means h_i1 ∘ ... ∘ h_ik."""

    generators: tuple[Expr, ...]
    labels: tuple[str, ...] = ()
    has_pole: Optional[bool] = None
    # declared commutativity; None means "not declared, test numerically"
    abelian: Optional[bool] = None

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a semigroup needs at least one generator")
        object.__setattr__(self, "generators", gens)
        labels = tuple(self.labels) or tuple(f"h{i + 1}" for i in range(len(gens)))
        if len(labels) != len(gens):
            raise ValueError("one label per generator")
        if len(set(labels)) != len(labels):
            raise ValueError(f"generator labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)
        if self.has_pole is None:
            object.__setattr__(self, "has_pole", any(expr_has_pole(g) for g in gens))

    @classmethod
    def from_texts(cls, texts: Sequence[str], **kw) -> "Semigroup":
        return cls(tuple(parse(t) for t in texts), **kw)

    @property
    def size(self) -> int:
        return len(self.generators)

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(to_text(g) for g in self.generators)

    @functools.cached_property
    def prepared(self):
        from . import kernel

        return kernel.prepare(self.generators)

    def compose(self, word: Word) -> Expr:
        """Symbolic expression of the word (leftmost generator applied last)."""
        expr = self.generators[word[-1]]
        for i in reversed(word[:-1]):
            expr = substitute(self.generators[i], expr)
        return expr


@dataclass(frozen=True)
class OrbitConfig:
    escape_radius: float = 1e10
    bound_radius: float = 1e3
    max_depth: int = 40
    beam_width: int = 64
    growth_streak: int = 10
    bounded_fraction: float = 0.5

    def __post_init__(self):
        cap = xc.get_cap()
        if not (0 < self.bound_radius < self.escape_radius < cap):
            raise ValueError(
                f"need 0 < bound_radius < escape_radius < cap ({cap:g}); got "
                f"{self.bound_radius:g}, {self.escape_radius:g}"
            )
        if self.max_depth < 1 or self.beam_width < 1:
            raise ValueError("max_depth and beam_width must be >= 1")
        if not (1 <= self.growth_streak <= self.max_depth):
            raise ValueError(f"growth_streak must lie in [1, max_depth={self.max_depth}]")
        if not (0 < self.bounded_fraction <= 1):
            raise ValueError("bounded_fraction must lie in (0, 1]")

    def with_depth(self, depth: int) -> "OrbitConfig":
        """Same thresholds at another depth (streak clipped to the depth)."""
        return OrbitConfig(
            self.escape_radius,
            self.bound_radius,
            depth,
            self.beam_width,
            min(self.growth_streak, depth),
            self.bounded_fraction,
        )

    def params(self) -> tuple:
        return (
            float(self.escape_radius),
            float(self.bound_radius),
            int(self.max_depth),
            int(self.beam_width),
            int(self.growth_streak),
            float(self.bounded_fraction),
            float(xc.get_cap()),
        )

    def as_dict(self) -> dict:
        return {
            "escape_radius": self.escape_radius,
            "bound_radius": self.bound_radius,
            "max_depth": self.max_depth,
            "beam_width": self.beam_width,
            "growth_streak": self.growth_streak,
            "bounded_fraction": self.bounded_fraction,
        }


@dataclass(frozen=True)
class DepthStats:
    """Per-depth evidence; index 0 is depth 1.

    ``min_modulus`` is ``inf`` at depths with no survivors (and for a
    surviving point at infinity); ``max_modulus`` is ``0.0`` when nothing was
    generated.
    """

    min_modulus: tuple[float, ...]
    max_modulus: tuple[float, ...]
    escape_events: tuple[int, ...]
    surviving: tuple[int, ...]
    indeterminate: int = 0
    streak_depth: Optional[int] = None

    @property
    def depth(self) -> int:
        return len(self.min_modulus)

    @property
    def escaped(self) -> bool:
        return any(self.escape_events) or self.streak_depth is not None

    def as_dict(self) -> dict:
        def num(x):
            return "inf" if math.isinf(x) else x

        return {
            "min_modulus": [num(m) if s else None for m, s in zip(self.min_modulus, self.surviving)],
            "max_modulus": [num(m) for m in self.max_modulus],
            "escape_events": list(self.escape_events),
            "surviving": list(self.surviving),
            "indeterminate": self.indeterminate,
            "streak_depth": self.streak_depth,
        }


def format_word(w: Word) -> str:
    """Run-length form, e.g. (0, 0, 0, 1) -> "0^3.1"."""
    if not w:
        return "()"
    runs = [(k, sum(1 for _ in g)) for k, g in itertools.groupby(w)]
    return ".".join(f"{k}^{n}" if n > 1 else str(k) for k, n in runs)


@dataclass(frozen=True)
class OrbitDiagnostics:
    cls: OrbitClass
    stats: DepthStats
    escape_witness: Optional[Word] = None
    bounded_witness: Optional[Word] = None

    def summary(self) -> str:
        parts = [self.cls.label, f"depth={self.stats.depth}"]
        if self.escape_witness is not None:
            parts.append(f"escape={format_word(self.escape_witness)}")
        if self.bounded_witness is not None:
            parts.append(f"bounded={format_word(self.bounded_witness)}")
        return " ".join(parts)

    def as_dict(self) -> dict:
        return {
            "class": self.cls.label,
            "escape_witness": None if self.escape_witness is None else list(self.escape_witness),
            "bounded_witness": None if self.bounded_witness is None else list(self.bounded_witness),
            "stats": self.stats.as_dict(),
        }


# ---------------------------------------------------------------- decision


@dataclass(frozen=True)
class Decision:
    cls: OrbitClass
    # depth whose lowest node witnesses boundedness (1-based), if any
    bounded_depth: Optional[int]
    # True when the escape evidence is the runaway of the lowest node
    runaway: bool = False


def decide(stats: DepthStats, cfg: OrbitConfig) -> Decision:
    m = stats.min_modulus
    D = len(m)
    M = cfg.bound_radius
    G = min(cfg.growth_streak, D)
    hits = sum(1 for v in m if v <= M)
    tail_start = D - G
    bounded_depth = None
    # a dead tree has no branch left that can come back
    if hits >= cfg.bounded_fraction * D and stats.surviving[-1] > 0:
        for n in range(D - 1, tail_start - 1, -1):
            if m[n] <= M:
                bounded_depth = n + 1
                break
    escape = stats.escaped
    if escape and bounded_depth is not None:
        return Decision(OrbitClass.BUNGEE, bounded_depth)
    if bounded_depth is None:
        if stats.surviving[-1] == 0 and any(stats.escape_events):
            return Decision(OrbitClass.ESCAPING, None)
        tail = m[tail_start:]
        if m[-1] > cfg.escape_radius and all(a <= b for a, b in zip(tail, tail[1:])):
            return Decision(OrbitClass.ESCAPING, None, runaway=True)
    if not escape and max(stats.max_modulus) <= M:
        return Decision(OrbitClass.BOUNDED, bounded_depth)
    return Decision(OrbitClass.UNRESOLVED, bounded_depth)


def _diagnostics(stats, cfg, escape_word, depth_words) -> OrbitDiagnostics:
    d = decide(stats, cfg)
    bounded_word = None
    if d.cls is OrbitClass.BUNGEE:
        bounded_word = depth_words(d.bounded_depth)
    elif d.cls is OrbitClass.BOUNDED and d.bounded_depth is not None:
        bounded_word = depth_words(d.bounded_depth)
    if d.cls is OrbitClass.ESCAPING and escape_word is None:
        escape_word = depth_words(stats.depth)
    if d.cls is OrbitClass.BOUNDED:
        escape_word = None
    return OrbitDiagnostics(d.cls, stats, escape_word, bounded_word)


# ---------------------------------------------------------------- evaluation


def word_eval(H: Semigroup, w: Word, z: ExtComplex) -> ExtComplex:
    """h_{w[0]}(h_{w[1]}(... h_{w[-1]}(z))); IndeterminateForm propagates."""
    for i in reversed(w):
        z = evaluate(H.generators[i], z)
    return z


def _check_start(H: Semigroup, z: ExtComplex):
    if z.is_inf and not H.has_pole:
        raise ValueError("Infinity is only a valid start point for pole-bearing semigroups")


def explore(H: Semigroup, z: ExtComplex, cfg: OrbitConfig = OrbitConfig()) -> DepthStats:
    from . import kernel

    _check_start(H, z)
    return kernel.explore(H.prepared, H.has_pole, z, cfg.params(), False).stats


def classify_point(H: Semigroup, z: ExtComplex, cfg: OrbitConfig = OrbitConfig()) -> OrbitDiagnostics:
    """Beam-search classification of ``z`` under ``H``."""
    from . import kernel

    _check_start(H, z)
    raw = kernel.explore(H.prepared, H.has_pole, z, cfg.params(), True)
    return _diagnostics(raw.stats, cfg, raw.escape_word, lambda n: raw.min_words[n - 1])


def classify_points(H: Semigroup, points: Sequence[ExtComplex], cfg: OrbitConfig = OrbitConfig()) -> list[OrbitClass]:
    """Classes only, for many points at once (finite points go through the batch kernel)."""
    from . import kernel

    pts = list(points)
    out: list[Optional[OrbitClass]] = [None] * len(pts)
    idx = [k for k, z in enumerate(pts) if not z.is_inf]
    if idx:
        re = np.array([pts[k].re for k in idx], dtype=float)
        im = np.array([pts[k].im for k in idx], dtype=float)
        codes = kernel.classify_many(H.prepared, H.has_pole, re, im, cfg.params())
        for k, c in zip(idx, codes):
            out[k] = OrbitClass(int(c))
    for k, z in enumerate(pts):
        if out[k] is None:
            out[k] = classify_point(H, z, cfg).cls
    return out


def classify_iteration(
    step: Callable[[ExtComplex], ExtComplex],
    z: ExtComplex,
    cfg: OrbitConfig = OrbitConfig(),
    has_pole: bool = False,
) -> OrbitDiagnostics:
    """Classify by plain iteration of a single map (the one-branch tree)."""
    D = cfg.max_depth
    mins, maxs, escs, survs = [], [], [], []
    indeterminate = 0
    streak = 0
    streak_depth = None
    escape_depth = None
    v = z
    prev = xc.ext_abs(z)
    alive = True
    for n in range(1, D + 1):
        if not alive:
            mins.append(math.inf)
            maxs.append(0.0)
            escs.append(0)
            survs.append(0)
            continue
        try:
            v = step(v)
        except IndeterminateForm:
            indeterminate += 1
            alive = False
            mins.append(math.inf)
            maxs.append(0.0)
            escs.append(0)
            survs.append(0)
            continue
        mod = xc.ext_abs(v)
        maxs.append(mod)
        if v.is_inf:
            escs.append(1)
            if escape_depth is None:
                escape_depth = n
            streak = 0
            if not has_pole:
                alive = False
                mins.append(math.inf)
                survs.append(0)
                continue
        else:
            escs.append(0)
            streak = streak + 1 if (mod > cfg.escape_radius and mod > prev) else 0
            if streak >= cfg.growth_streak and streak_depth is None:
                streak_depth = n
                if escape_depth is None:
                    escape_depth = n
        mins.append(mod)
        survs.append(1)
        prev = mod
    stats = DepthStats(tuple(mins), tuple(maxs), tuple(escs), tuple(survs), indeterminate, streak_depth)
    escape_word = None if escape_depth is None else (0,) * escape_depth
    return _diagnostics(stats, cfg, escape_word, lambda n: (0,) * n)


def classify_word(H: Semigroup, w: Word, z: ExtComplex, cfg: OrbitConfig = OrbitConfig()) -> OrbitDiagnostics:
    """Class of ``z`` under the cyclic semigroup [w], by plain iteration of w.

    Witness words are reported in letters of [w] (index 0 = one application of w).
    """
    return classify_iteration(lambda v: word_eval(H, w, v), z, cfg, has_pole=H.has_pole)


def classify_exhaustive(
    H: Semigroup, z: ExtComplex, depth: int, cfg: OrbitConfig = OrbitConfig(), budget: int = 10**7
) -> OrbitDiagnostics:
    """Brute-force oracle: every word up to ``depth``, no pruning, no dedup."""
    _check_start(H, z)
    g = H.size
    if depth > 10:
        raise ValueError("exhaustive classification is limited to depth <= 10")
    if g**depth > budget:
        raise BudgetExceeded(f"{g}^{depth} words exceed the budget of {budget}")
    cfg = cfg.with_depth(depth)
    gens = H.generators
    # (value, modulus, streak, word)
    nodes = [(z, xc.ext_abs(z), 0, ())]
    mins, maxs, escs, survs = [], [], [], []
    indeterminate = 0
    streak_depth = None
    escape_word = None
    min_words = []
    for n in range(1, depth + 1):
        children = []
        esc = 0
        top = 0.0
        for v, mod_parent, streak, word in nodes:
            for i in range(g):
                try:
                    c = evaluate(gens[i], v)
                except IndeterminateForm:
                    indeterminate += 1
                    continue
                w = (i,) + word
                mod = xc.ext_abs(c)
                top = max(top, mod)
                if c.is_inf:
                    esc += 1
                    if escape_word is None:
                        escape_word = w
                    if not H.has_pole:
                        continue
                    s = 0
                else:
                    s = streak + 1 if (mod > cfg.escape_radius and mod > mod_parent) else 0
                    if s >= cfg.growth_streak:
                        if streak_depth is None:
                            streak_depth = n
                        if escape_word is None:
                            escape_word = w
                children.append((c, mod, s, w))
        nodes = children
        maxs.append(top)
        escs.append(esc)
        survs.append(len(nodes))
        if nodes:
            best = min(nodes, key=lambda t: t[1])
            mins.append(best[1])
            min_words.append(best[3])
        else:
            mins.append(math.inf)
            min_words.append(None)
    stats = DepthStats(tuple(mins), tuple(maxs), tuple(escs), tuple(survs), indeterminate, streak_depth)
    return _diagnostics(stats, cfg, escape_word, lambda n: min_words[n - 1])


# ---------------------------------------------------------------- commutativity


@dataclass(frozen=True)
class CommutationReport:
    commutes: bool
    max_residual: float
    checked: int
    skipped: int


def commutes(H: Semigroup, samples: int = 200, seed: int = 0, radius: float = 2.0) -> CommutationReport:
    """Numerical test of h_i∘h_j = h_j∘h_i on random points of |z| <= radius."""
    if H.size < 2:
        raise ValueError("commutation needs at least two generators")
    rng = np.random.default_rng(seed)
    worst = 0.0
    ok = True
    checked = skipped = 0
    pts = rng.uniform(-radius, radius, size=(samples, 2))
    for i, j in itertools.combinations(range(H.size), 2):
        for x, y in pts:
            z = xc.finite(float(x), float(y))
            try:
                a = word_eval(H, (i, j), z)
                b = word_eval(H, (j, i), z)
            except IndeterminateForm:
                skipped += 1
                continue
            if a.is_inf or b.is_inf:
                skipped += 1
                continue
            r = xc.ext_abs(xc.ext_sub(a, b))
            checked += 1
            worst = max(worst, r)
            if r > 1e-6 * (1.0 + max(xc.ext_abs(a), xc.ext_abs(b))):
                ok = False
    return CommutationReport(ok, worst, checked, skipped)


def all_words(g: int, max_len: int):
    for n in range(1, max_len + 1):
        yield from itertools.product(range(g), repeat=n)
