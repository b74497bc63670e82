import hashlib

import numpy as np
import pytest

from bungee.grid import (
    ClassRaster,
    DEFAULT_PALETTE,
    Viewport,
    classify_grid,
    extract_boundary,
    julia_mask,
    render_ppm,
    resolution_depth,
    write_ppm,
)
from bungee.orbit import OrbitClass, OrbitConfig, Semigroup

RECIP = Semigroup.from_texts(["1/z^2"])
GOLDEN_64 = "903a3aff39362891e30311365d4d5c43fabc4eeab8f1eae1c862ed69fe93aa6b"

B, K, U, E = OrbitClass.BUNGEE, OrbitClass.BOUNDED, OrbitClass.UNRESOLVED, OrbitClass.ESCAPING


def raster_of(rows):
    cells = np.array([[int(c) for c in row] for row in rows], dtype=np.int8)
    vp = Viewport(0j, 1.0, 1.0, cells.shape[1], cells.shape[0])
    return ClassRaster(vp, cells, "0" * 64)


# ---------------------------------------------------------------- viewport


def test_viewport_geometry():
    vp = Viewport.from_bounds(-2, -1, 2, 1, 4, 2)
    re, im = vp.pixel_centers()
    assert re[0, 0] == -1.5 and im[0, 0] == 0.5  # top-left
    assert re[1, 3] == 1.5 and im[1, 3] == -0.5
    assert vp.pixel_of(complex(-2, 1)) == (0.0, 0.0)
    assert vp.contains(0j) and not vp.contains(complex(2.0, 0))


@pytest.mark.parametrize(
    "args", [(0j, 0.0, 1.0, 4, 4), (0j, 1.0, 1.0, 0, 4), (0j, 1.0, 1.0, 4097, 4097)]
)
def test_viewport_validation(args):
    with pytest.raises(ValueError):
        Viewport(*args)


def test_resolution_depth_is_even_and_grows_with_resolution():
    d256 = resolution_depth(Viewport(0j, 2, 2, 256, 256))
    d512 = resolution_depth(Viewport(0j, 2, 2, 512, 512))
    d4k = resolution_depth(Viewport(0j, 2, 2, 4096, 4096))
    assert (d256, d512) == (16, 16)
    assert d4k > d512 and d4k % 2 == 0


# ---------------------------------------------------------------- classification


def test_single_cell_bungee():
    r = classify_grid(RECIP, Viewport(0.5 + 0j, 1e-3, 1e-3, 1, 1))
    assert r.class_at(0, 0) is OrbitClass.BUNGEE


def test_off_circle_cells_are_bungee():
    vp = Viewport(0j, 2.0, 2.0, 64, 64)
    r = classify_grid(RECIP, vp)
    re, im = vp.pixel_centers()
    off = np.abs(np.hypot(re, im) - 1.0) > 1e-9
    resolved = r.cells != OrbitClass.UNRESOLVED
    assert np.all(r.cells[off & resolved] == OrbitClass.BUNGEE)


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_workers_do_not_change_bytes(workers):
    H = Semigroup.from_texts(["exp(z)", "exp(z) + 2*pi*i"])
    vp = Viewport(0.3 + 1.3j, 0.5, 0.5, 48, 40)
    cfg = OrbitConfig(max_depth=24)
    a = classify_grid(H, vp, cfg, workers=1)
    b = classify_grid(H, vp, cfg, workers=workers)
    assert a.to_bytes() == b.to_bytes()
    assert a.digest() == b.digest()
    assert a == b


def test_rerun_is_byte_identical():
    vp = Viewport(0j, 2.0, 2.0, 32, 32)
    assert classify_grid(RECIP, vp).digest() == classify_grid(RECIP, vp).digest()


def test_symmetry_of_reciprocal_square():
    vp = Viewport(0j, 2.0, 2.0, 128, 128)
    r = classify_grid(RECIP, vp, OrbitConfig(max_depth=resolution_depth(vp)))
    c = r.cells
    assert np.array_equal(c, c[::-1, :])
    assert np.array_equal(c, c[:, ::-1])


def test_config_hash_tracks_config():
    vp = Viewport(0j, 1.0, 1.0, 2, 2)
    a = classify_grid(RECIP, vp, OrbitConfig(max_depth=20))
    b = classify_grid(RECIP, vp, OrbitConfig(max_depth=21))
    assert a.config_hash != b.config_hash


# ---------------------------------------------------------------- boundary


def test_constant_raster_has_no_boundary():
    assert not extract_boundary(raster_of([[B, B], [B, B]])).any()


def test_two_class_pair_both_flagged():
    m = extract_boundary(raster_of([[B, K]]))
    assert m.tolist() == [[True, True]]


def test_unresolved_never_flagged_but_counts_as_different():
    m = extract_boundary(raster_of([[B, U, B]]))
    assert m.tolist() == [[True, False, True]]


def test_julia_mask_keeps_bungee_adjacent_cells():
    r = raster_of([[E, K, B]])
    assert extract_boundary(r).tolist() == [[True, True, True]]
    assert julia_mask(r).tolist() == [[False, True, True]]
    # no Bungee at all: fall back to the class boundary
    r2 = raster_of([[E, K]])
    assert julia_mask(r2).tolist() == [[True, True]]


def test_boundary_idempotent():
    r = classify_grid(RECIP, Viewport(0j, 2, 2, 64, 64), OrbitConfig(max_depth=12))
    assert np.array_equal(extract_boundary(r), extract_boundary(r))


def test_reciprocal_square_boundary_hugs_unit_circle():
    # every flagged cell is within one cell of a cell the circle passes through
    vp = Viewport.from_bounds(-2, -2, 2, 2, 256, 256)
    r = classify_grid(RECIP, vp, OrbitConfig().with_depth(resolution_depth(vp)))
    m = extract_boundary(r)
    assert m.sum() > 500
    re, im = vp.pixel_centers()
    h = 1.5 * vp.dx
    x0, x1, y0, y1 = re - h, re + h, im - h, im + h
    nearest = np.hypot(np.clip(0.0, x0, x1), np.clip(0.0, y0, y1))
    farthest = np.hypot(np.maximum(abs(x0), abs(x1)), np.maximum(abs(y0), abs(y1)))
    touches = (nearest <= 1.0) & (farthest >= 1.0)
    assert not np.any(m & ~touches)


# ---------------------------------------------------------------- PPM


def test_ppm_single_bounded_cell():
    data = render_ppm(raster_of([[K]]), {OrbitClass.BOUNDED: (0, 0, 0)})
    assert data == b"P6\n1 1\n255\n" + bytes([0, 0, 0])


def test_ppm_payload_size():
    data = render_ppm(raster_of([[B, K], [U, E]]))
    header = b"P6\n2 2\n255\n"
    assert data.startswith(header) and len(data) - len(header) == 12
    assert data[len(header):len(header) + 3] == bytes(DEFAULT_PALETTE[B])


def test_ppm_golden_digest(tmp_path):
    r = classify_grid(RECIP, Viewport(0j, 2.0, 2.0, 64, 64))
    path = tmp_path / "bu.ppm"
    data = write_ppm(path, r)
    assert path.read_bytes() == data
    assert hashlib.sha256(data).hexdigest() == GOLDEN_64


def test_ppm_rejects_bad_palette_entries():
    with pytest.raises((ValueError, TypeError, OverflowError)):
        render_ppm(raster_of([[B]]), {OrbitClass.BUNGEE: (300, 0, 0)})
