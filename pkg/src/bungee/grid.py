"""Rasters of orbit classes, class-boundary masks and PPM output."""
from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import extcomplex as xc
from . import kernel
from .orbit import OrbitClass, OrbitConfig, Semigroup

DEFAULT_PALETTE = {
    OrbitClass.ESCAPING: (250, 214, 120),
    OrbitClass.BOUNDED: (0, 0, 0),
    OrbitClass.BUNGEE: (38, 84, 180),
    OrbitClass.UNRESOLVED: (140, 140, 140),
}

MAX_PIXELS = 4096 * 4096


@dataclass(frozen=True)
class Viewport:
    center: complex
    half_width: float
    half_height: float
    width_px: int
    height_px: int

    def __post_init__(self):
        if not (self.half_width > 0 and self.half_height > 0):
            raise ValueError("viewport half extents must be positive")
        if self.width_px < 1 or self.height_px < 1:
            raise ValueError("viewport needs at least one pixel")
        if self.width_px * self.height_px > MAX_PIXELS:
            raise ValueError(f"raster larger than {MAX_PIXELS} pixels")
        object.__setattr__(self, "center", complex(self.center))

    @classmethod
    def from_bounds(cls, xmin, ymin, xmax, ymax, width_px, height_px) -> "Viewport":
        if not (xmax > xmin and ymax > ymin):
            raise ValueError("viewport bounds must satisfy xmin < xmax and ymin < ymax")
        center = complex((xmin + xmax) / 2, (ymin + ymax) / 2)
        return cls(center, (xmax - xmin) / 2, (ymax - ymin) / 2, int(width_px), int(height_px))

    @property
    def dx(self) -> float:
        return 2 * self.half_width / self.width_px

    @property
    def dy(self) -> float:
        return 2 * self.half_height / self.height_px

    @property
    def cell_diagonal(self) -> float:
        return math.hypot(self.dx, self.dy)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        c = self.center
        return (c.real - self.half_width, c.imag - self.half_height, c.real + self.half_width, c.imag + self.half_height)

    def pixel_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """(re, im) arrays of shape (height, width); row 0 is the top edge."""
        # half-integer offsets keep viewports symmetric about the center exactly
        ox = np.arange(self.width_px) + 0.5 - self.width_px / 2
        oy = np.arange(self.height_px) + 0.5 - self.height_px / 2
        re = self.center.real + ox * self.dx
        im = self.center.imag - oy * self.dy
        return np.broadcast_to(re, (self.height_px, self.width_px)), np.broadcast_to(im[:, None], (self.height_px, self.width_px))

    def pixel_of(self, z: complex) -> tuple[float, float]:
        """Fractional (col, row) of a point; cell (c, r) covers [c, c+1) x [r, r+1)."""
        col = (z.real - self.center.real) / self.dx + self.width_px / 2
        row = (self.center.imag - z.imag) / self.dy + self.height_px / 2
        return col, row

    def contains(self, z: complex) -> bool:
        col, row = self.pixel_of(z)
        return 0 <= col < self.width_px and 0 <= row < self.height_px

    def as_dict(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "half_width": self.half_width,
            "half_height": self.half_height,
            "width_px": self.width_px,
            "height_px": self.height_px,
        }


def config_hash(H: Semigroup, cfg: OrbitConfig) -> str:
    payload = {
        "generators": list(H.texts),
        "has_pole": H.has_pole,
        "cfg": cfg.as_dict(),
        "cap": xc.get_cap(),
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True, eq=False)
class ClassRaster:
    viewport: Viewport
    cells: np.ndarray  # int8 OrbitClass codes, shape (height, width)
    config_hash: str

    def __eq__(self, other):
        return (
            isinstance(other, ClassRaster)
            and self.viewport == other.viewport
            and self.config_hash == other.config_hash
            and np.array_equal(self.cells, other.cells)
        )

    def to_bytes(self) -> bytes:
        return np.ascontiguousarray(self.cells, dtype=np.int8).tobytes()

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(self.viewport.as_dict(), sort_keys=True).encode())
        h.update(self.config_hash.encode())
        h.update(self.to_bytes())
        return h.hexdigest()

    def counts(self) -> dict[str, int]:
        return {c.label: int(np.count_nonzero(self.cells == c)) for c in OrbitClass}

    def class_at(self, col: int, row: int) -> OrbitClass:
        return OrbitClass(int(self.cells[row, col]))

    def metadata(self) -> dict:
        return {
            "viewport": self.viewport.as_dict(),
            "config_hash": self.config_hash,
            "digest": self.digest(),
            "counts": self.counts(),
        }


def default_workers() -> int:
    env = os.environ.get("BUNGEE_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def classify_grid(H: Semigroup, vp: Viewport, cfg: OrbitConfig = OrbitConfig(), workers: int | None = None) -> ClassRaster:
    """Classify every pixel center; result is independent of ``workers``."""
    re, im = vp.pixel_centers()
    re = np.ascontiguousarray(re).ravel()
    im = np.ascontiguousarray(im).ravel()
    params = cfg.params()
    prog = H.prepared
    n = re.size
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or n < 256:
        codes = np.asarray(kernel.classify_many(prog, H.has_pole, re, im, params), dtype=np.int8)
    else:
        chunks = np.array_split(np.arange(n), min(n, workers * 4))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda idx: np.asarray(kernel.classify_many(prog, H.has_pole, re[idx], im[idx], params), dtype=np.int8), chunks)
            )
        codes = np.concatenate(parts)
    cells = codes.reshape(vp.height_px, vp.width_px)
    cells.setflags(write=False)
    return ClassRaster(vp, cells, config_hash(H, cfg))


def extract_boundary(r: ClassRaster) -> np.ndarray:
    """Cells whose class differs from a 4-neighbor's.

    Unresolved cells are never marked; an Unresolved neighbor does count as a
    different class for the resolved cell next to it.
    """
    c = r.cells
    mask = np.zeros(c.shape, dtype=bool)
    mask[1:, :] |= c[1:, :] != c[:-1, :]
    mask[:-1, :] |= c[:-1, :] != c[1:, :]
    mask[:, 1:] |= c[:, 1:] != c[:, :-1]
    mask[:, :-1] |= c[:, :-1] != c[:, 1:]
    mask &= c != OrbitClass.UNRESOLVED
    return mask


def bungee_adjacent(r: ClassRaster) -> np.ndarray:
    """Cells that are Bungee or have a Bungee 4-neighbor."""
    b = r.cells == OrbitClass.BUNGEE
    out = b.copy()
    out[1:, :] |= b[:-1, :]
    out[:-1, :] |= b[1:, :]
    out[:, 1:] |= b[:, :-1]
    out[:, :-1] |= b[:, 1:]
    return out


def julia_mask(r: ClassRaster) -> np.ndarray:
    """Boundary cells touching the Bungee class (falls back to the whole
    class boundary when the raster has no Bungee cell)."""
    mask = extract_boundary(r)
    if np.any(r.cells == OrbitClass.BUNGEE):
        mask &= bungee_adjacent(r)
    return mask


def resolution_depth(vp: Viewport, degree: float = 2.0) -> int:
    """Depth at which a half-cell offset from a repelling circle-like boundary,
    growing in log-modulus by ``degree`` per step, overflows the cap.

    Deeper exploration resolves detail finer than a pixel, which makes the
    class boundary vanish from the raster.  Rounded up to even so that
    period-two orbits are sampled at a return point on the last depth.
    """
    cell = min(vp.dx, vp.dy)
    d = max(2, math.ceil(math.log(2 * math.log(xc.get_cap()) / cell) / math.log(degree)))
    return d + (d % 2)


def render_ppm(r: ClassRaster, palette=None) -> bytes:
    """Binary P6 image, one pixel per cell, maxval 255."""
    pal = dict(DEFAULT_PALETTE)
    if palette:
        pal.update({OrbitClass(k): tuple(v) for k, v in palette.items()})
    missing = [c for c in OrbitClass if c not in pal]
    if missing:
        raise ValueError(f"palette lacks colors for {missing}")
    lut = np.zeros((len(OrbitClass), 3), dtype=np.uint8)
    for cls, rgb in pal.items():
        lut[int(cls)] = rgb
    h, w = r.cells.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    return header + lut[r.cells.astype(np.intp)].tobytes()


def write_ppm(path, r: ClassRaster, palette=None) -> bytes:
    data = render_ppm(r, palette)
    with open(path, "wb") as fh:
        fh.write(data)
    return data
