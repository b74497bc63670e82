"""Command-line entry point.

    bungee classify --gen "1/z^2" --point 0.5
    bungee render   --gen "1/z^2" --viewport -2:-2:2:2 --res 256x256 --out bu.ppm
    bungee verify   --suite paper --seed 7
    bungee examples exp-pair --lambda 1 --q 2

Exit codes: 0 success, 1 property violation, 2 configuration or parse
error, 3 I/O error.  Settings come from flags, then ``--config FILE`` (flat
``key = value`` lines named like the long flags), then defaults.  The only
environment knob is BUNGEE_WORKERS.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Optional

from . import __version__, catalog, kernel, report
from . import extcomplex as xc
from . import grid as gridmod
from . import verify as ver
from .funcexpr import ParseError
from .orbit import OrbitConfig, Semigroup, classify_point

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class IOFailure(Exception):
    pass


# settings shared by every subcommand: name -> (type, default)
ORBIT_KEYS = {
    "escape_radius": (float, OrbitConfig.escape_radius),
    "bound_radius": (float, OrbitConfig.bound_radius),
    "max_depth": (int, OrbitConfig.max_depth),
    "beam_width": (int, OrbitConfig.beam_width),
    "growth_streak": (int, OrbitConfig.growth_streak),
    "bounded_fraction": (float, OrbitConfig.bounded_fraction),
}
OTHER_KEYS = {
    "cap": (float, xc.DEFAULT_CAP),
    "seed": (int, 0),
    "viewport": (str, None),
    "res": (str, None),
    "out": (str, None),
    "report": (str, None),
    "suite": (str, "theorems"),
    "samples": (int, 300),
    "depth_rate": (float, 2.0),
    "lambda": (float, 1.0),
    "p": (int, 1),
    "q": (int, 2),
}
LIST_KEYS = ("gen", "point")


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``gen`` and ``point`` may repeat."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise IOFailure(f"cannot read config {path}: {e}") from e
    out: dict = {}
    known = set(ORBIT_KEYS) | set(OTHER_KEYS) | set(LIST_KEYS)
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in known:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        if key in LIST_KEYS:
            out.setdefault(key, []).append(value)
        else:
            out[key] = value
    return out


def _setting(args, conf: dict, key: str):
    typ, default = ORBIT_KEYS.get(key) or OTHER_KEYS[key]
    attr = "lam" if key == "lambda" else key
    v = getattr(args, attr, None)
    if v is not None:
        return v
    if key in conf:
        try:
            return typ(conf[key])
        except ValueError:
            raise ConfigError(f"bad value for {key}: {conf[key]!r}") from None
    return default


class Run:
    """Resolved settings for one invocation."""

    def __init__(self, args):
        conf = read_config(args.config) if getattr(args, "config", None) else {}
        self.gens = list(getattr(args, "gen", None) or conf.get("gen", []))
        self.points = list(getattr(args, "point", None) or conf.get("point", []))
        self.s = {k: _setting(args, conf, k) for k in list(ORBIT_KEYS) + list(OTHER_KEYS)}
        if self.s["seed"] < 0 or self.s["seed"] >= 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        try:
            xc.set_cap(self.s["cap"])
            self.cfg = OrbitConfig(**{k: self.s[k] for k in ORBIT_KEYS})
        except ValueError as e:
            raise ConfigError(str(e)) from None
        self.t0 = time.perf_counter()
        self.timings: dict = {}

    def semigroup(self) -> Semigroup:
        if not self.gens:
            raise ConfigError("at least one --gen is required")
        try:
            return Semigroup.from_texts(self.gens)
        except ParseError as e:
            raise ConfigError(f"cannot parse generator: {e}") from None

    def viewport(self) -> Optional[gridmod.Viewport]:
        text = self.s["viewport"]
        if text is None:
            return None
        try:
            xmin, ymin, xmax, ymax = (float(t) for t in text.split(":"))
            w, h = self.resolution()
            return gridmod.Viewport.from_bounds(xmin, ymin, xmax, ymax, w, h)
        except ValueError as e:
            raise ConfigError(f"bad viewport {text!r}: {e}") from None

    def resolution(self) -> tuple[int, int]:
        text = self.s["res"] or "256x256"
        try:
            w, h = (int(t) for t in text.lower().split("x"))
        except ValueError:
            raise ConfigError(f"bad resolution {text!r}; use WxH") from None
        if w < 1 or h < 1 or w * h > gridmod.MAX_PIXELS:
            raise ConfigError(f"resolution {text} outside 1..4096x4096")
        return w, h

    def config_echo(self) -> dict:
        vp = self.s["viewport"]
        return {
            "generators": self.gens,
            "orbit": self.cfg.as_dict(),
            "cap": xc.get_cap(),
            "seed": self.s["seed"],
            "viewport": None if vp is None else [float(t) for t in vp.split(":")],
            "resolution": list(self.resolution()) if self.s["res"] else None,
            "points": self.points,
            "suite": self.s["suite"],
            "samples": self.s["samples"],
            "out": self.s["out"],
            "report": self.s["report"],
        }

    def finish(self, command: str, payload: dict, config: Optional[dict] = None) -> dict:
        self.timings["total"] = time.perf_counter() - self.t0
        runtime = {"kernel": kernel.BACKEND_NAME, "workers": gridmod.default_workers(), "timings": self.timings}
        rep = report.make_report(command, config or self.config_echo(), payload, runtime)
        if self.s["report"]:
            try:
                report.write(self.s["report"], rep)
            except OSError as e:
                raise IOFailure(f"cannot write report {self.s['report']}: {e}") from e
        return rep


def _render_depth(run: Run, vp: gridmod.Viewport) -> int:
    rate = run.s["depth_rate"]
    if rate and rate > 1.0:
        return min(run.cfg.max_depth, gridmod.resolution_depth(vp, rate))
    return run.cfg.max_depth


def _write_ppm(path: str, raster) -> None:
    try:
        gridmod.write_ppm(path, raster)
    except OSError as e:
        raise IOFailure(f"cannot write image {path}: {e}") from e


# ---------------------------------------------------------------- commands


def cmd_classify(run: Run) -> int:
    H = run.semigroup()
    if not run.points:
        raise ConfigError("at least one --point is required")
    out = []
    for text in run.points:
        try:
            z = xc.parse_point(text)
            d = classify_point(H, z, run.cfg)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        print(f"{text}\t{d.cls.label}\t{d.summary()}")
        out.append({"input": text, **d.as_dict()})
    run.finish("classify", {"points": out})
    return EXIT_OK


def cmd_render(run: Run) -> int:
    H = run.semigroup()
    vp = run.viewport() or gridmod.Viewport.from_bounds(-2, -2, 2, 2, *run.resolution())
    path = run.s["out"] or "out.ppm"
    depth = _render_depth(run, vp)
    t = time.perf_counter()
    raster = gridmod.classify_grid(H, vp, run.cfg.with_depth(depth))
    run.timings["classify"] = time.perf_counter() - t
    _write_ppm(path, raster)
    meta = {**raster.metadata(), "depth": depth, "image": path}
    counts = " ".join(f"{k}={v}" for k, v in meta["counts"].items())
    print(f"wrote {path} ({vp.width_px}x{vp.height_px}, depth {depth}) {counts}")
    print(f"digest {meta['digest']}")
    run.finish("render", {"raster": meta})
    return EXIT_OK


def _report_suite(run: Run, res: ver.SuiteResult) -> None:
    for line in res.lines():
        print(line)
    for note in res.notes:
        print(f"note: {note}")
    print(f"seed {run.s['seed']}: {'PASS' if res.passed else 'FAIL'}")


def cmd_verify(run: Run) -> int:
    suite = run.s["suite"]
    if suite not in ver.SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(ver.SUITES)}")
    H = None if suite == "paper" else run.semigroup()
    vp = run.viewport()
    bounds = vp.bounds if vp else (-2.0, -2.0, 2.0, 2.0)
    t = time.perf_counter()
    res = ver.run_suite(suite, H, run.cfg, run.s["seed"], run.s["samples"], bounds) if H else ver.builtin_suite(
        run.cfg, run.s["seed"], run.s["samples"]
    )
    run.timings["checks"] = time.perf_counter() - t
    _report_suite(run, res)
    run.finish("verify", res.as_dict())
    return EXIT_OK if res.passed else EXIT_VIOLATION


def cmd_examples(run: Run, name: str) -> int:
    try:
        ex = catalog.get(name, run.s["lambda"], run.s["p"], run.s["q"])
    except KeyError as e:
        raise ConfigError(e.args[0]) from None
    except ValueError as e:
        raise ConfigError(str(e)) from None
    run.gens = list(ex.semigroup.texts)
    vp = ex.viewport
    if run.s["res"]:
        w, h = run.resolution()
        vp = gridmod.Viewport(vp.center, vp.half_width, vp.half_height, w, h)
    depth = _render_depth(run, vp)
    t = time.perf_counter()
    raster = gridmod.classify_grid(ex.semigroup, vp, run.cfg.with_depth(depth))
    run.timings["render"] = time.perf_counter() - t
    path = run.s["out"] or f"{ex.name}.ppm"
    _write_ppm(path, raster)
    print(f"{ex.name}: {ex.description}")
    print(f"wrote {path} depth {depth} " + " ".join(f"{k}={v}" for k, v in raster.counts().items()))
    t = time.perf_counter()
    res = ver.example_suite(ex, run.cfg, run.s["seed"], run.s["samples"])
    run.timings["checks"] = time.perf_counter() - t
    _report_suite(run, res)
    payload = {
        "example": ex.name,
        "params": ex.params,
        "generators": list(ex.semigroup.texts),
        "raster": {**raster.metadata(), "depth": depth, "image": path},
        "passed": res.passed,
        "verdicts": res.as_dict()["verdicts"],
        "fixed_points": [r.as_dict() for r in res.fixed_points],
        "notes": res.notes,
    }
    run.finish("examples", payload)
    return EXIT_OK if res.passed else EXIT_VIOLATION


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gen", action="append", help="generator expression in z (repeatable)")
    p.add_argument("--config", help="flat key = value file; flags take precedence")
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--cap", type=float, help="overflow cap C (default 1e100)")
    g = p.add_argument_group("orbit")
    g.add_argument("--escape-radius", dest="escape_radius", type=float)
    g.add_argument("--bound-radius", dest="bound_radius", type=float)
    g.add_argument("--max-depth", dest="max_depth", type=int)
    g.add_argument("--beam-width", dest="beam_width", type=int)
    g.add_argument("--growth-streak", dest="growth_streak", type=int)
    g.add_argument("--bounded-fraction", dest="bounded_fraction", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bungee", description="Escaping / Bounded / Bungee classification for function semigroups")
    ap.add_argument("--version", action="version", version=f"bungee {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify individual points")
    _common(p)
    p.add_argument("--point", action="append", help="re+imi, re,im or inf (repeatable)")

    p = sub.add_parser("render", help="classify a viewport and write a PPM")
    _common(p)
    p.add_argument("--viewport", help="xmin:ymin:xmax:ymax (default -2:-2:2:2)")
    p.add_argument("--res", help="WxH (default 256x256)")
    p.add_argument("--out", help="PPM path (default out.ppm)")
    p.add_argument("--depth-rate", dest="depth_rate", type=float,
                   help="cap depth where a half-cell offset growing at this rate overflows; <= 1 disables (default 2)")

    p = sub.add_parser("verify", help="run a verification suite")
    _common(p)
    p.add_argument("--suite", help=f"one of {', '.join(ver.SUITES)} (default theorems)")
    p.add_argument("--samples", type=int, help="points per check (default 300)")
    p.add_argument("--viewport", help="sampling rectangle xmin:ymin:xmax:ymax (default -2:-2:2:2)")

    p = sub.add_parser("examples", help="run a built-in example")
    _common(p)
    p.add_argument("name", help=f"one of {', '.join(catalog.NAMES)}")
    p.add_argument("--lambda", dest="lam", type=float, help="exp rate (default 1)")
    p.add_argument("--p", type=int, help="iterate count for exp-semigroup (default 1)")
    p.add_argument("--q", type=int, help="iterate count for exp-pair (default 2)")
    p.add_argument("--res", help="WxH of the canonical render")
    p.add_argument("--out", help="PPM path (default <name>.ppm)")
    p.add_argument("--samples", type=int, help="points per check (default 300)")
    p.add_argument("--depth-rate", dest="depth_rate", type=float)
    return ap


def _join_negative_values(argv: list[str]) -> list[str]:
    # "--viewport -2:-2:2:2" would otherwise look like an option to argparse
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--viewport", "--point"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    old_cap = xc.get_cap()
    try:
        run = Run(args)
        if args.command == "classify":
            return cmd_classify(run)
        if args.command == "render":
            return cmd_render(run)
        if args.command == "verify":
            return cmd_verify(run)
        return cmd_examples(run, args.name)
    except ConfigError as e:
        print(f"bungee: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except IOFailure as e:
        print(f"bungee: error: {e}", file=sys.stderr)
        return EXIT_IO
    finally:
        xc.set_cap(old_cap)


if __name__ == "__main__":
    sys.exit(main())
