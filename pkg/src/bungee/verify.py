"""Sampled checks of the set identities, plus a Newton fixed-point finder.

Every check quantifies over resolved points only and reports Unresolved
counts next to the verdict.  Identities that need a commuting semigroup are
demoted to informational verdicts when the semigroup is neither declared
abelian nor found to commute numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import extcomplex as xc
from .extcomplex import ExtComplex, IndeterminateForm
from .funcexpr import Add, Const, Div, Expr, Mul, Sub, Z, denominators, differentiate, evaluate, fold, substitute, to_text
from .grid import ClassRaster, Viewport, julia_mask
from .orbit import (
    OrbitClass,
    OrbitConfig,
    Semigroup,
    Word,
    all_words,
    classify_point,
    classify_points,
    classify_word,
    commutes,
)

MAX_EXEMPLARS = 10
POLE_EXCLUSION = 1e-3
BACKWARD_NOTE = "backward invariance not checked: preimages of transcendental maps have no closed form"


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class SampleSet:
    points: tuple[ExtComplex, ...]
    seed: int
    region: str

    def __len__(self):
        return len(self.points)

    def as_dict(self) -> dict:
        return {"seed": self.seed, "size": len(self.points), "region": self.region}


@dataclass
class PropertyVerdict:
    name: str
    total: int
    resolved: int
    violations: int
    exemplars: list = field(default_factory=list)
    informational: bool = False
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    @property
    def unresolved(self) -> int:
        return self.total - self.resolved

    def line(self) -> str:
        tag = "info" if self.informational else ("PASS" if self.passed else "FAIL")
        return (
            f"[{tag}] {self.name}: {self.violations} violations, "
            f"{self.resolved}/{self.total} resolved"
        )

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "total": self.total,
            "resolved": self.resolved,
            "unresolved": self.unresolved,
            "violations": self.violations,
            "passed": self.passed,
            "informational": self.informational,
            "exemplars": list(self.exemplars),
            "extras": dict(self.extras),
        }


@dataclass(frozen=True)
class FixedPointRecord:
    word: Word
    location: ExtComplex
    residual: float
    multiplier: float

    @property
    def repelling(self) -> bool:
        return self.multiplier > 1.0

    def as_dict(self) -> dict:
        return {
            "word": list(self.word),
            "location": xc.format_point(self.location),
            "residual": self.residual,
            "multiplier": self.multiplier,
            "repelling": self.repelling,
        }


class _Tally:
    def __init__(self, name: str, informational: bool = False):
        self.name = name
        self.informational = informational
        self.total = 0
        self.resolved = 0
        self.violations = 0
        self.exemplars = []
        self.extras = {}

    def violation(self, z: ExtComplex, **detail):
        self.violations += 1
        if len(self.exemplars) < MAX_EXEMPLARS:
            self.exemplars.append({"point": xc.format_point(z), **detail})

    def verdict(self) -> PropertyVerdict:
        return PropertyVerdict(
            self.name, self.total, self.resolved, self.violations, self.exemplars, self.informational, self.extras
        )


# ---------------------------------------------------------------- sampling


def _newton_roots(F: Expr, region: Viewport, grid: int = 8, steps: int = 60) -> list[complex]:
    dF = differentiate(F)
    x0, y0, x1, y1 = region.bounds
    roots: list[complex] = []
    for a in range(grid):
        for b in range(grid):
            z = xc.finite(x0 + (a + 0.5) * (x1 - x0) / grid, y0 + (b + 0.5) * (y1 - y0) / grid)
            try:
                for _ in range(steps):
                    fz = evaluate(F, z)
                    dz = evaluate(dF, z)
                    if fz.is_inf or dz.is_inf or xc.ext_abs(dz) == 0.0:
                        break
                    z = xc.ext_sub(z, xc.ext_div(fz, dz))
                    if z.is_inf:
                        break
                if z.is_inf or xc.ext_abs(evaluate(F, z)) > 1e-10:
                    continue
            except IndeterminateForm:
                continue
            c = complex(z.re, z.im)
            if all(abs(c - r) > 1e-6 for r in roots):
                roots.append(c)
    return roots


def find_poles(H: Semigroup, region: Viewport = Viewport(0j, 10.0, 10.0, 1, 1)) -> list[complex]:
    """Zeros of the generators' denominators, found by grid-seeded Newton."""
    poles: list[complex] = []
    for g in H.generators:
        for d in denominators(g):
            for r in _newton_roots(d, region):
                if all(abs(r - p) > 1e-6 for p in poles):
                    poles.append(r)
    return poles


def _draw(n, seed, gen, poles, region):
    rng = np.random.default_rng(seed)
    pts: list[ExtComplex] = []
    while len(pts) < n:
        for re, im in gen(rng, max(16, n - len(pts))):
            c = complex(re, im)
            if any(abs(c - p) < POLE_EXCLUSION for p in poles):
                continue
            pts.append(xc.finite(float(re), float(im)))
            if len(pts) == n:
                break
    return SampleSet(tuple(pts), seed, region)


def sample_region(bounds: tuple[float, float, float, float], n: int, seed: int, poles: Sequence[complex] = ()) -> SampleSet:
    """Uniform points in the rectangle (xmin, ymin, xmax, ymax)."""
    x0, y0, x1, y1 = bounds

    def gen(rng, k):
        return zip(rng.uniform(x0, x1, k), rng.uniform(y0, y1, k))

    return _draw(n, seed, gen, poles, f"rect {x0:g}:{y0:g}:{x1:g}:{y1:g}")


def sample_annulus(
    bands: Sequence[tuple[float, float]], n: int, seed: int, poles: Sequence[complex] = (), center: complex = 0j
) -> SampleSet:
    """Points with modulus uniform over the union of radial bands, angle uniform."""
    bands = [(float(a), float(b)) for a, b in bands]
    if not bands or any(not (0 <= a < b) for a, b in bands):
        raise ValueError("bands must be (rmin, rmax) with 0 <= rmin < rmax")
    widths = np.array([b - a for a, b in bands])
    cum = np.cumsum(widths)

    def gen(rng, k):
        u = rng.uniform(0.0, cum[-1], k)
        theta = rng.uniform(0.0, 2 * math.pi, k)
        j = np.searchsorted(cum, u, side="right").clip(0, len(bands) - 1)
        start = cum[j] - widths[j]
        r = np.array([bands[t][0] for t in j]) + (u - start)
        return zip(center.real + r * np.cos(theta), center.imag + r * np.sin(theta))

    desc = " u ".join(f"({a:g},{b:g})" for a, b in bands)
    return _draw(n, seed, gen, poles, f"annulus {desc}")


def sample_circle(n: int, seed: int, radius: float = 1.0) -> SampleSet:
    """Points on |z| = radius at uniform random angles."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2 * math.pi, n)
    pts = tuple(xc.finite(float(radius * math.cos(t)), float(radius * math.sin(t))) for t in theta)
    return SampleSet(pts, seed, f"circle r={radius:g}")


# ---------------------------------------------------------------- helpers


def is_abelian(H: Semigroup) -> bool:
    if H.size == 1:
        return True
    if H.abelian is not None:
        return H.abelian
    return commutes(H).commutes


def _single(H: Semigroup, i: int) -> Semigroup:
    return Semigroup((H.generators[i],), has_pole=H.has_pole)


def _abelian_note(t: _Tally, H: Semigroup):
    if not is_abelian(H):
        t.informational = True
        t.extras["note"] = "semigroup does not commute; identity only holds for abelian semigroups"


# ---------------------------------------------------------------- checks


def check_partition(H: Semigroup, samples: SampleSet, cfg: OrbitConfig = OrbitConfig()) -> PropertyVerdict:
    """Each point gets exactly one class and its evidence matches that class."""
    t = _Tally("partition")
    batch = classify_points(H, samples.points, cfg)
    for z, fast in zip(samples.points, batch):
        t.total += 1
        d = classify_point(H, z, cfg)
        if not isinstance(d.cls, OrbitClass):
            t.violation(z, reason=f"not a class: {d.cls!r}")
            continue
        if d.cls.resolved:
            t.resolved += 1
        problem = None
        if d.cls is not fast:
            problem = f"batch kernel says {fast.label}"
        elif d.cls is OrbitClass.BUNGEE and (d.escape_witness is None or d.bounded_witness is None):
            problem = "Bungee without both witnesses"
        elif d.cls is OrbitClass.BOUNDED and d.stats.escaped:
            problem = "Bounded with an escape event"
        elif d.cls is OrbitClass.ESCAPING and (d.bounded_witness is not None or not (d.stats.escaped or d.stats.min_modulus[-1] > cfg.escape_radius)):
            problem = "Escaping without escape evidence"
        if problem:
            t.violation(z, cls=d.cls.label, reason=problem)
    return t.verdict()


def check_agreement(
    H: Semigroup, ref: Semigroup, samples: SampleSet, cfg: OrbitConfig = OrbitConfig(), bungee_only: bool = False, name: str = ""
) -> PropertyVerdict:
    """Class (or Bungee membership) under H equals that under ``ref``."""
    t = _Tally(name or ("bungee-agreement" if bungee_only else "class-agreement"))
    a = classify_points(H, samples.points, cfg)
    b = classify_points(ref, samples.points, cfg)
    for z, ca, cb in zip(samples.points, a, b):
        t.total += 1
        if not (ca.resolved and cb.resolved):
            continue
        t.resolved += 1
        same = (ca is OrbitClass.BUNGEE) == (cb is OrbitClass.BUNGEE) if bungee_only else ca is cb
        if not same:
            t.violation(z, semigroup=ca.label, reference=cb.label)
    t.extras["agreement"] = 1.0 - t.violations / t.resolved if t.resolved else None
    return t.verdict()


def check_bungee_union(
    H: Semigroup, samples: SampleSet, cfg: OrbitConfig = OrbitConfig(), max_word_len: int = 3
) -> PropertyVerdict:
    """Bungee under some word [w] implies Bungee under H (pass/fail).

    The converse is tallied in ``extras``: Bungee points of H with no Bungee
    word among those tested are counted as "beyond_tested", not as violations.
    """
    if not 1 <= max_word_len <= 4:
        raise ValueError("max_word_len must lie in [1, 4]")
    t = _Tally("bungee-union")
    _abelian_note(t, H)
    words = list(all_words(H.size, max_word_len))
    confirmed = beyond = 0
    for z, c in zip(samples.points, classify_points(H, samples.points, cfg)):
        t.total += 1
        if not c.resolved:
            continue
        t.resolved += 1
        hit = None
        for w in words:
            if classify_word(H, w, z, cfg).cls is OrbitClass.BUNGEE:
                hit = w
                break
        if hit is not None and c is not OrbitClass.BUNGEE:
            t.violation(z, word=list(hit), semigroup=c.label)
        if c is OrbitClass.BUNGEE:
            if hit is None:
                beyond += 1
            else:
                confirmed += 1
    t.extras.update(max_word_len=max_word_len, subset_confirmed=confirmed, subset_beyond_tested=beyond)
    return t.verdict()


def check_filled_intersection(
    H: Semigroup, samples: SampleSet, cfg: OrbitConfig = OrbitConfig(), max_word_len: int = 3
) -> PropertyVerdict:
    """Bounded under H iff Bounded under every generator (and tested word)."""
    t = _Tally("filled-intersection")
    _abelian_note(t, H)
    words = list(all_words(H.size, max_word_len))
    for z, c in zip(samples.points, classify_points(H, samples.points, cfg)):
        t.total += 1
        if not c.resolved:
            continue
        t.resolved += 1
        per_word = {w: classify_word(H, w, z, cfg).cls for w in words}
        if c is OrbitClass.BOUNDED:
            bad = [w for w in words if len(w) == 1 and per_word[w].resolved and per_word[w] is not OrbitClass.BOUNDED]
            if bad:
                t.violation(z, semigroup=c.label, word=list(bad[0]), word_class=per_word[bad[0]].label)
        elif all(v is OrbitClass.BOUNDED for v in per_word.values()):
            t.violation(z, semigroup=c.label, reason="Bounded under every tested word")
    return t.verdict()


def check_escaping_intersection(H: Semigroup, samples: SampleSet, cfg: OrbitConfig = OrbitConfig()) -> PropertyVerdict:
    """Escaping under H iff Escaping under every generator's iteration."""
    t = _Tally("escaping-intersection")
    _abelian_note(t, H)
    per_gen = [classify_points(_single(H, i), samples.points, cfg) for i in range(H.size)]
    for k, (z, c) in enumerate(zip(samples.points, classify_points(H, samples.points, cfg))):
        t.total += 1
        gens = [p[k] for p in per_gen]
        if not (c.resolved and all(g.resolved for g in gens)):
            continue
        t.resolved += 1
        all_esc = all(g is OrbitClass.ESCAPING for g in gens)
        if all_esc != (c is OrbitClass.ESCAPING):
            t.violation(z, semigroup=c.label, generators=[g.label for g in gens])
    return t.verdict()


def check_forward_invariance(H: Semigroup, samples: SampleSet, cfg: OrbitConfig = OrbitConfig()) -> PropertyVerdict:
    """class(h_i(z)) == class(z) for every generator with a finite image."""
    t = _Tally("forward-invariance")
    _abelian_note(t, H)
    t.extras["backward"] = BACKWARD_NOTE
    base = classify_points(H, samples.points, cfg)
    images: list[tuple[int, int, ExtComplex]] = []
    for k, z in enumerate(samples.points):
        for i, g in enumerate(H.generators):
            try:
                v = evaluate(g, z)
            except IndeterminateForm:
                continue
            if not v.is_inf:
                images.append((k, i, v))
    img_cls = classify_points(H, [v for _, _, v in images], cfg)
    by_point: dict[int, list] = {}
    for (k, i, v), c in zip(images, img_cls):
        by_point.setdefault(k, []).append((i, v, c))
    for k, z in enumerate(samples.points):
        t.total += 1
        c = base[k]
        pairs = [(i, v, ci) for i, v, ci in by_point.get(k, []) if ci.resolved]
        if not c.resolved or not pairs:
            continue
        t.resolved += 1
        for i, v, ci in pairs:
            if ci is not c:
                t.violation(z, cls=c.label, generator=H.labels[i], image=xc.format_point(v), image_cls=ci.label)
                break
    return t.verdict()


def conjugate(f: Expr, a: ExtComplex, b: ExtComplex) -> Expr:
    """g = phi∘f∘phi^-1 for phi(z) = a*z + b."""
    inner = Div(Sub(Z, Const(b)), Const(a))
    return fold(Add(Mul(Const(a), substitute(f, inner)), Const(b)))


def check_conjugacy(
    f: Expr, a: ExtComplex, b: ExtComplex, samples: SampleSet, cfg: OrbitConfig = OrbitConfig()
) -> PropertyVerdict:
    """Class of z under [f] equals class of phi(z) under [phi f phi^-1]."""
    if a.is_inf or xc.ext_abs(a) == 0.0 or b.is_inf:
        raise ValueError("conjugacy needs finite a != 0 and finite b")
    g = conjugate(f, a, b)
    t = _Tally("conjugacy")
    t.extras.update(f=to_text(f), g=to_text(g), a=xc.format_point(a), b=xc.format_point(b))
    F = Semigroup((f,))
    G = Semigroup((g,), has_pole=F.has_pole)
    moved = [xc.ext_add(xc.ext_mul(a, z), b) for z in samples.points]
    cf = classify_points(F, samples.points, cfg)
    keep = [k for k, w in enumerate(moved) if not w.is_inf]
    cg_list = classify_points(G, [moved[k] for k in keep], cfg)
    cg = dict(zip(keep, cg_list))
    for k, z in enumerate(samples.points):
        t.total += 1
        c2 = cg.get(k)
        if c2 is None or not (cf[k].resolved and c2.resolved):
            continue
        t.resolved += 1
        if cf[k] is not c2:
            t.violation(z, f_cls=cf[k].label, g_cls=c2.label)
    return t.verdict()


# ---------------------------------------------------------------- fixed points


def find_repelling_fixed_points(
    H: Semigroup, max_word_len: int, region: Viewport, seeds: int = 64, steps: int = 50, tol: float = 1e-9
) -> list[FixedPointRecord]:
    """Newton on w(z) - z for every word up to ``max_word_len``.

    Seeds sit on a grid over ``region``; converged roots (|w(z) - z| <= tol)
    are kept once per word at 1e-8 separation.  Non-converging seeds are
    dropped.  All records are returned; ``repelling`` tags |w'(z)| > 1.
    """
    if H.size**max_word_len > 64:
        raise ValueError(f"{H.size}^{max_word_len} words exceed the limit of 64")
    k = max(1, math.ceil(math.sqrt(seeds)))
    x0, y0, x1, y1 = region.bounds
    starts = [
        xc.finite(x0 + (a + 0.5) * (x1 - x0) / k, y0 + (b + 0.5) * (y1 - y0) / k) for b in range(k) for a in range(k)
    ]
    out: list[FixedPointRecord] = []
    for w in all_words(H.size, max_word_len):
        wexpr = H.compose(w)
        F = fold(Sub(wexpr, Z))
        dF = differentiate(F)
        dw = differentiate(wexpr)
        found: list[complex] = []
        for z in starts:
            z = _newton(F, dF, z, steps)
            if z is None:
                continue
            try:
                res = xc.ext_abs(evaluate(F, z))
                mult = xc.ext_abs(evaluate(dw, z))
            except IndeterminateForm:
                continue
            if not res <= tol or math.isinf(mult):
                continue
            c = complex(z.re, z.im)
            if any(abs(c - p) <= 1e-8 for p in found):
                continue
            found.append(c)
            out.append(FixedPointRecord(tuple(w), z, res, mult))
    return out


def _newton(F: Expr, dF: Expr, z: ExtComplex, steps: int) -> Optional[ExtComplex]:
    try:
        for _ in range(steps):
            fz = evaluate(F, z)
            dz = evaluate(dF, z)
            if fz.is_inf or dz.is_inf or xc.ext_abs(dz) == 0.0:
                return None
            step = xc.ext_div(fz, dz)
            z = xc.ext_sub(z, step)
            if z.is_inf:
                return None
            if xc.ext_abs(step) <= 1e-15 * (1.0 + xc.ext_abs(z)):
                break
    except IndeterminateForm:
        return None
    return z


def check_boundary_density(H: Semigroup, raster: ClassRaster, records: Sequence[FixedPointRecord]) -> PropertyVerdict:
    """Repelling points inside the viewport sit within 2 cell diagonals of the
    Bungee-adjacent boundary (the whole class boundary if no Bungee cell)."""
    t = _Tally("boundary-density")
    vp = raster.viewport
    mask = julia_mask(raster)
    re, im = vp.pixel_centers()
    mre, mim = re[mask], im[mask]
    diag = vp.cell_diagonal
    t.extras["mask_cells"] = int(mask.sum())
    t.extras["fallback"] = not bool(np.any(raster.cells == OrbitClass.BUNGEE))
    dists = []
    for r in records:
        if not r.repelling or r.location.is_inf:
            continue
        z = complex(r.location.re, r.location.im)
        if not vp.contains(z):
            continue
        t.total += 1
        t.resolved += 1
        d = float(np.min(np.hypot(mre - z.real, mim - z.imag)) / diag) if mre.size else math.inf
        dists.append(d)
        if d > 2.0:
            t.violation(r.location, word=list(r.word), diagonals=d if math.isfinite(d) else "inf")
    t.extras["distances"] = dists
    return t.verdict()


def check_bungee_meets_julia(raster: ClassRaster) -> PropertyVerdict:
    """Informational: some Bungee cell lies on the class boundary."""
    t = _Tally("bungee-meets-boundary", informational=True)
    t.total = t.resolved = 1
    mask = julia_mask(raster)
    hit = bool(np.any(mask & (raster.cells == OrbitClass.BUNGEE)))
    t.extras["satisfied"] = hit
    if not hit:
        t.violations = 1
    return t.verdict()


# ---------------------------------------------------------------- suites

SUITES = ("partition", "union", "filled", "escaping", "invariance", "conjugacy", "density", "theorems", "paper")


@dataclass
class SuiteResult:
    suite: str
    verdicts: list = field(default_factory=list)  # (group, PropertyVerdict)
    fixed_points: list = field(default_factory=list)
    rasters: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for _, v in self.verdicts if not v.informational)

    def add(self, group: str, v: PropertyVerdict):
        self.verdicts.append((group, v))

    def extend(self, other: "SuiteResult"):
        self.verdicts += other.verdicts
        self.fixed_points += other.fixed_points
        self.rasters += other.rasters
        self.notes += other.notes

    def lines(self) -> list[str]:
        return [f"{g}: {v.line()}" for g, v in self.verdicts]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "verdicts": [{"group": g, **v.as_dict()} for g, v in self.verdicts],
            "fixed_points": [r.as_dict() for r in self.fixed_points],
            "rasters": list(self.rasters),
            "notes": list(self.notes),
        }


def density_raster(H: Semigroup, vp: Viewport, records: Sequence[FixedPointRecord], cfg: OrbitConfig, workers=None):
    """Raster for proximity checks.

    Depth is capped where a half-cell offset from a repelling point in view,
    growing at the slowest per-letter rate among them, would overflow; deeper
    exploration resolves sub-pixel detail and empties the boundary mask.
    """
    from .grid import classify_grid, resolution_depth

    rates = [
        r.multiplier ** (1.0 / len(r.word))
        for r in records
        if r.repelling and not r.location.is_inf and vp.contains(complex(r.location.re, r.location.im))
    ]
    depth = cfg.max_depth
    if rates:
        depth = min(depth, resolution_depth(vp, min(rates)))
    return classify_grid(H, vp, cfg.with_depth(depth), workers), depth


def _raster_meta(r: ClassRaster, depth: int, label: str) -> dict:
    return {**r.metadata(), "depth": depth, "image": None, "label": label}


def fixed_point_density(
    H: Semigroup, vp: Viewport, cfg: OrbitConfig, group: str, max_word_len: int = 1, seeds: int = 64, workers=None
) -> SuiteResult:
    res = SuiteResult("density")
    recs = find_repelling_fixed_points(H, max_word_len, vp, seeds)
    res.fixed_points += recs
    raster, depth = density_raster(H, vp, recs, cfg, workers)
    res.rasters.append(_raster_meta(raster, depth, group))
    res.add(group, check_boundary_density(H, raster, recs))
    res.add(group, check_bungee_meets_julia(raster))
    return res


def _word_len(H: Semigroup, want: int) -> int:
    n = want
    while n > 1 and H.size**n > 64:
        n -= 1
    return n


def run_suite(
    suite: str,
    H: Semigroup,
    cfg: OrbitConfig = OrbitConfig(),
    seed: int = 0,
    samples: int = 300,
    bounds: tuple[float, float, float, float] = (-2.0, -2.0, 2.0, 2.0),
    workers=None,
) -> SuiteResult:
    """Run one named suite against a user semigroup (``paper`` ignores ``H``)."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if suite == "paper":
        return builtin_suite(cfg, seed, samples, workers)
    res = SuiteResult(suite)
    group = " | ".join(H.texts)
    S = sample_region(bounds, samples, seed, find_poles(H))
    res.notes.append(f"samples: {S.region}, n={len(S)}, seed={seed}")
    if H.size > 1 and H.abelian is None:
        rep = commutes(H, seed=seed)
        res.notes.append(f"numerical commutation: {rep.commutes} (max residual {rep.max_residual:.3g})")
    wl = min(3, _word_len(H, 3))
    run_all = suite == "theorems"
    if suite == "partition" or run_all:
        res.add(group, check_partition(H, S, cfg))
    if suite == "union" or run_all:
        res.add(group, check_bungee_union(H, S, cfg, wl))
    if suite == "filled" or run_all:
        res.add(group, check_filled_intersection(H, S, cfg, wl))
    if suite == "escaping" or run_all:
        res.add(group, check_escaping_intersection(H, S, cfg))
    if suite == "invariance" or run_all:
        res.add(group, check_forward_invariance(H, S, cfg))
        res.notes.append(BACKWARD_NOTE)
    if suite == "conjugacy" or run_all:
        for g in H.generators:
            for a, b in ((xc.finite(2.0), xc.ZERO), (xc.ONE, xc.ONE)):
                res.add(to_text(g), check_conjugacy(g, a, b, S, cfg))
    if suite == "density" or run_all:
        x0, y0, x1, y1 = bounds
        vp = Viewport.from_bounds(x0, y0, x1, y1, 512, 512)
        res.extend(fixed_point_density(H, vp, cfg, group, _word_len(H, 2), workers=workers))
    return res


def example_suite(ex, cfg: OrbitConfig = OrbitConfig(), seed: int = 0, samples: int = 300, workers=None) -> SuiteResult:
    """Canonical checks of one built-in example."""
    H = ex.semigroup
    res = SuiteResult(ex.name)
    g = ex.name
    if ex.name == "reciprocal-square":
        poles = find_poles(H)
        off = sample_annulus([(0.1, 0.9), (1.1, 10.0)], samples, seed, poles)
        circ = sample_circle(samples, seed)
        res.add(g, check_partition(H, off, cfg))
        res.add(g, _expect_class(H, off, cfg, OrbitClass.BUNGEE, "off-circle-bungee"))
        res.add(g, _expect_class(H, circ, cfg, OrbitClass.BOUNDED, "unit-circle-bounded"))
        res.add(g, check_forward_invariance(H, sample_region((-2, -2, 2, 2), samples, seed, poles), cfg))
        res.add(g, check_conjugacy(H.generators[0], xc.finite(2.0), xc.ZERO, off, cfg))
        res.extend(fixed_point_density(H, Viewport(0j, 2.0, 2.0, 512, 512), cfg, g, 1, workers=workers))
        return res
    box = sample_region((-3, -3, 3, 3), samples, seed)
    rep = commutes(H, seed=seed)
    res.notes.append(
        f"{g}: generators declared abelian; numerical commutation of h1∘h2 and h2∘h1: {rep.commutes}"
    )
    res.add(g, check_partition(H, box, cfg))
    res.add(g, check_forward_invariance(H, box, cfg))
    res.add(g, check_bungee_union(H, box, cfg, 3))
    if ex.name == "exp-semigroup":
        res.add(g, check_agreement(H, ex.reference, box, cfg, name="filled-set-agreement"))
        res.add(g, check_filled_intersection(H, box, cfg, 3))
        res.add(g, check_escaping_intersection(H, sample_region((3, -3, 6, 3), samples, seed), cfg))
        f = ex.reference.generators[0]
        res.add(g, check_conjugacy(f, xc.ONE, xc.ONE, box, cfg))
        # local window around the repelling fixed point of the reference map
        recs = find_repelling_fixed_points(ex.reference, 1, Viewport.from_bounds(-1, 0, 3, 3, 1, 1), 64)
        res.fixed_points += recs
        for r in recs:
            if r.repelling:
                vp = Viewport(complex(r.location.re, r.location.im), 0.01, 0.01, 512, 512)
                raster, depth = density_raster(ex.reference, vp, recs, cfg, workers)
                res.rasters.append(_raster_meta(raster, depth, f"{g} local"))
                res.add(g, check_boundary_density(ex.reference, raster, recs))
    else:
        res.add(g, check_agreement(H, ex.reference, box, cfg, bungee_only=True, name="bungee-set-agreement"))
    return res


def _expect_class(H: Semigroup, samples: SampleSet, cfg: OrbitConfig, want: OrbitClass, name: str) -> PropertyVerdict:
    t = _Tally(name)
    for z, c in zip(samples.points, classify_points(H, samples.points, cfg)):
        t.total += 1
        if not c.resolved:
            continue
        t.resolved += 1
        if c is not want:
            t.violation(z, cls=c.label, expected=want.label)
    return t.verdict()


def builtin_suite(cfg: OrbitConfig = OrbitConfig(), seed: int = 0, samples: int = 300, workers=None) -> SuiteResult:
    from . import catalog

    res = SuiteResult("paper")
    for ex in catalog.builtins():
        res.extend(example_suite(ex, cfg, seed, samples, workers))
    return res
