"""Acceptance criteria, one test each.

Each test records a [PASS]/[FAIL] line (shown in the terminal summary) with
the measured numbers and the pinned tolerance, then asserts.  Run with
``pytest -s tests/test_acceptance.py`` to see the lines inline as well.
"""
import math
import time

import numpy as np
import pytest

from bungee import catalog
from bungee import extcomplex as xc
from bungee import verify as V
from bungee.funcexpr import differentiate, evaluate, parse, to_text
from bungee.grid import Viewport, classify_grid
from bungee.orbit import OrbitClass, OrbitConfig, Semigroup, classify_exhaustive, classify_iteration, classify_point, classify_points

SEED = 7
CFG = OrbitConfig()  # D=40, B=64, G=10, rho=0.5, M=1e3, R=1e10

RECIP = catalog.reciprocal_square()
EXP_SEMI = catalog.exp_semigroup()
EXP_PAIR = catalog.exp_pair()
EXP = Semigroup.from_texts(["exp(z)"])
EXP_FP = complex(0.318131, 1.337236)


def fraction(num, den):
    return num / den if den else 0.0


# ---------------------------------------------------------------- 1


def test_c1_reciprocal_square_structure(acceptance):
    H = RECIP.semigroup
    t0 = time.perf_counter()
    off = V.sample_annulus([(0.1, 0.9), (1.1, 10.0)], 1000, SEED, V.find_poles(H))
    c_off = classify_points(H, off.points, CFG)
    circ = V.sample_circle(200, SEED)
    c_circ = classify_points(H, circ.points, CFG)
    elapsed = time.perf_counter() - t0

    res_off = [c for c in c_off if c.resolved]
    res_circ = [c for c in c_circ if c.resolved]
    bungee = fraction(sum(c is OrbitClass.BUNGEE for c in res_off), len(res_off))
    resolved = len(res_off) / len(c_off)
    bounded = fraction(sum(c is OrbitClass.BOUNDED for c in res_circ), len(res_circ))
    ok = bungee >= 0.99 and resolved >= 0.95 and bounded >= 0.99 and elapsed < 10.0
    acceptance(
        "1 reciprocal-square structure",
        ok,
        f"off-circle Bungee {bungee:.2%} (>=99%), resolved {resolved:.2%} (>=95%), "
        f"circle Bounded {bounded:.2%} of {len(res_circ)} (>=99%), {elapsed:.2f}s (<10s)",
    )
    assert ok


# ---------------------------------------------------------------- 2


def test_c2_exp_semigroup_filled_set(acceptance):
    t0 = time.perf_counter()
    S = V.sample_region((-3, -3, 3, 3), 500, SEED)
    v = V.check_agreement(EXP_SEMI.semigroup, EXP_SEMI.reference, S, CFG)
    elapsed = time.perf_counter() - t0
    agree = fraction(v.resolved - v.violations, v.resolved)
    ok = agree >= 0.99 and elapsed < 60.0
    acceptance(
        "2 exp-semigroup class under H = class under [f]",
        ok,
        f"{agree:.2%} of {v.resolved}/500 mutually resolved (>=99%), {elapsed:.2f}s (<60s)",
    )
    assert ok


# ---------------------------------------------------------------- 3


def _bungee_agreement(H, ref):
    t0 = time.perf_counter()
    S = V.sample_region((-3, -3, 3, 3), 500, SEED)
    v = V.check_agreement(H, ref, S, CFG, bungee_only=True)
    return fraction(v.resolved - v.violations, v.resolved), v, time.perf_counter() - t0


def test_c3_exp_pair_bungee_set_literal(acceptance):
    # h2 taken literally as exp(2z) + 2*pi*i; with this generator the identity
    # does not hold numerically and this criterion is expected to fail
    H = Semigroup.from_texts(["exp(z)", "exp(2*z) + 2*pi*i"], labels=("h1", "h2"))
    agree, v, elapsed = _bungee_agreement(H, EXP)
    ok = agree >= 0.99 and elapsed < 60.0
    acceptance(
        "3 exp-pair Bungee under H = Bungee under [h1], h2 = exp(2z) + 2*pi*i",
        ok,
        f"{agree:.2%} of {v.resolved}/500 mutually resolved (>=99%), {elapsed:.2f}s (<60s)",
    )
    assert ok


def test_c3_exp_pair_bungee_set_iterate(acceptance):
    # the built-in family: h2 = h1(h1(z)) + 2*pi*i
    agree, v, elapsed = _bungee_agreement(EXP_PAIR.semigroup, EXP_PAIR.reference)
    ok = agree >= 0.99 and elapsed < 60.0
    acceptance(
        "3b exp-pair Bungee identity, h2 = exp(exp(z)) + 2*pi*i",
        ok,
        f"{agree:.2%} of {v.resolved}/500 mutually resolved (>=99%), {elapsed:.2f}s (<60s)",
    )
    assert ok


# ---------------------------------------------------------------- 4


def test_c4_exhaustive_oracle(acceptance):
    H = EXP_SEMI.semigroup
    cfg = CFG.with_depth(8)  # D=8, B=64, G clipped to 8
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    both = disagree = 0
    for re, im in rng.uniform(-3, 3, (200, 2)):
        z = xc.finite(float(re), float(im))
        a = classify_exhaustive(H, z, 8, cfg).cls
        b = classify_point(H, z, cfg).cls
        if a.resolved and b.resolved:
            both += 1
            disagree += a is not b
    elapsed = time.perf_counter() - t0
    ok = disagree == 0 and both / 200 >= 0.60 and elapsed < 120.0
    acceptance(
        "4 exhaustive depth-8 oracle vs beam",
        ok,
        f"{disagree} disagreements (0), mutual resolution {both / 200:.1%} (>=60%), {elapsed:.2f}s (<120s)",
    )
    assert ok


# ---------------------------------------------------------------- 5


def test_c5_union_superset_direction(acceptance):
    S = V.sample_region((-3, -3, 3, 3), 300, SEED)
    v = V.check_bungee_union(EXP_SEMI.semigroup, S, CFG, max_word_len=3)
    acceptance(
        "5 Bungee under a word of length <= 3 implies Bungee under H",
        v.passed,
        f"{v.violations} violations (0), {v.resolved}/300 resolved",
    )
    assert v.passed


# ---------------------------------------------------------------- 6


def test_c6_forward_invariance(acceptance):
    parts, ok = [], True
    for ex in catalog.builtins():
        H = ex.semigroup
        S = V.sample_region(ex.viewport.bounds, 300, SEED, V.find_poles(H))
        v = V.check_forward_invariance(H, S, CFG)
        ok &= v.passed and not v.informational
        parts.append(f"{ex.name} {v.violations} changes / {v.resolved} resolved")
    acceptance("6 forward invariance", ok, "; ".join(parts) + " (0 each)")
    assert ok


# ---------------------------------------------------------------- 7


def test_c7_conjugacy(acceptance):
    cases = [
        ("1/z^2, phi=2z", RECIP.semigroup, xc.finite(2.0), xc.ZERO, (-2, -2, 2, 2)),
        ("exp(z), phi=z+1", EXP, xc.ONE, xc.ONE, (-3, -3, 3, 3)),
    ]
    parts, ok = [], True
    for label, H, a, b, bounds in cases:
        S = V.sample_region(bounds, 300, SEED, V.find_poles(H))
        v = V.check_conjugacy(H.generators[0], a, b, S, CFG)
        ok &= v.passed
        parts.append(f"{label}: {v.violations} disagreements / {v.resolved} resolved")
    acceptance("7 conjugacy", ok, "; ".join(parts) + " (100% agreement)")
    assert ok


# ---------------------------------------------------------------- 8


def test_c8_repelling_points_near_boundary(acceptance):
    recs = V.find_repelling_fixed_points(EXP, 1, Viewport.from_bounds(-1, 0, 3, 3, 1, 1), 64)
    near = [r for r in recs if abs(r.location.to_complex() - EXP_FP) < 1e-6]
    fp = near[0] if near else None
    newton_ok = fp is not None and fp.residual <= 1e-8 and fp.multiplier > 1.37

    vp = Viewport(fp.location.to_complex() if fp else EXP_FP, 0.01, 0.01, 512, 512)
    raster, depth = V.density_raster(EXP, vp, recs, CFG)
    v_exp = V.check_boundary_density(EXP, raster, recs)
    d_exp = max(v_exp.extras.get("distances") or [math.inf])

    rs = V.fixed_point_density(RECIP.semigroup, Viewport(0j, 2.0, 2.0, 512, 512), CFG, "1/z^2")
    v_rs = rs.verdicts[0][1]
    one = [k for k, r in enumerate(rs.fixed_points) if r.repelling and abs(r.location.to_complex() - 1) < 1e-9]
    d_one = v_rs.extras["distances"][one[0]] if one else math.inf

    ok = newton_ok and d_exp <= 2.0 and d_one <= 2.0
    detail = (
        f"exp fixed point {xc.format_point(fp.location) if fp else 'not found'} residual "
        f"{fp.residual if fp else math.nan:.1e} (<=1e-8) |multiplier| {fp.multiplier if fp else math.nan:.6f} (>1.37), "
        f"{d_exp:.2f} diagonals on 512x512 local raster at depth {depth}; "
        f"1/z^2 z=1 {d_one:.2f} diagonals on 512x512 (<=2)"
    )
    acceptance("8 repelling fixed points near the boundary", ok, detail)
    assert ok


# ---------------------------------------------------------------- 9


def test_c9_structural_suite(acceptance, corpus):
    parts, ok = [], True

    # partition exclusivity on every builtin plus the literal exp pair
    groups = [(ex.semigroup, ex.viewport.bounds) for ex in catalog.builtins()]
    groups.append((Semigroup.from_texts(["exp(z)", "exp(2*z) + 2*pi*i"]), (-3, -3, 3, 3)))
    bad = 0
    for H, bounds in groups:
        bad += V.check_partition(H, V.sample_region(bounds, 300, SEED, V.find_poles(H)), CFG).violations
    ok &= bad == 0
    parts.append(f"partition {bad} violations")

    # single-generator degeneration
    rng = np.random.default_rng(SEED)
    pts = [xc.finite(float(a), float(b)) for a, b in rng.uniform(-2, 2, (500, 2))]
    mismatch = 0
    for text in ("1/z^2", "exp(z)"):
        f = parse(text)
        H = Semigroup((f,))
        for z in pts:
            a = classify_point(H, z, CFG)
            b = classify_iteration(lambda w: evaluate(f, w), z, CFG, has_pole=H.has_pole)
            mismatch += a.cls is not b.cls or a.stats != b.stats
    ok &= mismatch == 0
    parts.append(f"degeneration {mismatch} mismatches on 2x500")

    # byte-exact grids across worker counts
    vp = Viewport(0.3 + 1.3j, 0.5, 0.5, 64, 64)
    digests = {w: classify_grid(EXP_SEMI.semigroup, vp, CFG.with_depth(24), workers=w).digest() for w in (1, 2, 4, 8)}
    same = len(set(digests.values())) == 1
    ok &= same
    parts.append(f"grid digests identical across workers 1/2/4/8: {same}")

    # parse/print round trip
    rt_bad = sum(parse(to_text(parse(s))) != parse(s) for s in corpus)
    ok &= rt_bad == 0 and len(corpus) == 200
    parts.append(f"round trip {rt_bad}/{len(corpus)} failures")

    # derivatives vs centered differences
    worst = 0.0
    seen = {}
    for ex in catalog.builtins():
        for g in ex.semigroup.generators:
            seen[to_text(g)] = g
    for f in seen.values():
        df = differentiate(f)
        rng = np.random.default_rng(SEED)
        n = 0
        while n < 100:
            z = complex(*rng.uniform(-1.5, 1.5, 2))
            if abs(z) < 0.2:
                continue
            d = evaluate(df, xc.from_complex(z)).to_complex()
            h = 1e-5 * max(1.0, abs(z))
            fd = (evaluate(f, xc.from_complex(z + h)).to_complex() - evaluate(f, xc.from_complex(z - h)).to_complex()) / (2 * h)
            worst = max(worst, abs(fd - d) / abs(d))
            n += 1
    ok &= worst <= 1e-5
    parts.append(f"derivative worst relative error {worst:.1e} over {len(seen)}x100 (<=1e-5)")

    acceptance("9 structural suite", ok, "; ".join(parts))
    assert ok
