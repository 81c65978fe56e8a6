"""Julia set pictures by attracting-basin classification."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .numerics import ArrayMap, chordal, find_attracting_cycles, spherical_derivative
from .rational import RationalMap

PALETTE = np.array([
    (66, 135, 245), (245, 166, 35), (80, 190, 110), (220, 80, 90),
    (150, 100, 210), (60, 200, 200), (230, 210, 70), (200, 120, 170),
], dtype=float)
JULIA_RGB = (15, 15, 20)


@dataclass(frozen=True)
class RenderConfig:
    """View and iteration settings.

    ``scale`` is the half-width of the view.  Pixels whose distance
    estimate to the Julia set is below ``julia_width`` pixels are drawn as
    Julia pixels (0 turns the estimate off).
    """

    center: complex = 0j
    scale: float = 1.5
    width: int = 512
    height: int = 512
    max_iter: int = 500
    attraction_radius: float = 1e-3
    julia_width: float = 0.75

    @property
    def pixel(self) -> float:
        return 2 * self.scale / self.width

    def grid(self, rows: slice | None = None) -> np.ndarray:
        px = self.pixel
        xs = self.center.real + (np.arange(self.width) - (self.width - 1) / 2) * px
        ys = self.center.imag - (np.arange(self.height) - (self.height - 1) / 2) * px
        if rows is not None:
            ys = ys[rows]
        return xs[None, :] + 1j * ys[:, None]


@dataclass
class Rendering:
    labels: np.ndarray      # cycle id per pixel, -1 for Julia
    times: np.ndarray       # iterations until capture
    cycles: list
    config: RenderConfig

    @property
    def julia_fraction(self) -> float:
        return float(np.mean(self.labels < 0))

    def rgb(self) -> np.ndarray:
        shade = 0.55 + 0.45 * (1 - (self.times % 16) / 16.0)
        base = PALETTE[np.maximum(self.labels, 0) % len(PALETTE)]
        img = base * shade[..., None]
        img[self.labels < 0] = JULIA_RGB
        return np.clip(img, 0, 255).astype(np.uint8)

    def save(self, path: str | Path) -> list[Path]:
        """Write a P6 pixmap, plus a PNG when the path asks for one."""
        path = Path(path)
        img = self.rgb()
        out = []
        if path.suffix.lower() == ".png":
            from matplotlib import image as mpimg
            mpimg.imsave(path, img)
            out.append(path)
            path = path.with_suffix(".ppm")
        h, w, _ = img.shape
        path.write_bytes(b"P6\n%d %d\n255\n" % (w, h) + img.tobytes())
        out.append(path)
        return out


def thread_count() -> int:
    env = os.environ.get("TMS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _classify(F: ArrayMap, z0: np.ndarray, targets: np.ndarray, ids: np.ndarray,
              cfg: RenderConfig) -> tuple[np.ndarray, np.ndarray]:
    shape = z0.shape
    z0 = z0.ravel()
    labels = np.full(z0.shape, -1, dtype=np.int32)
    times = np.zeros(z0.shape, dtype=np.int32)
    idx = np.arange(z0.size)
    z = z0.copy()
    logd = np.zeros(z0.size)
    r = cfg.attraction_radius
    limit = cfg.julia_width * cfg.pixel
    for it in range(cfg.max_iter + 1):
        if idx.size == 0:
            break
        hit = np.full(idx.size, -1, dtype=np.int32)
        rho = np.full(idx.size, r)
        for q, k in zip(targets, ids):
            d = chordal(z, q)
            near = (hit < 0) & (d < r)
            hit[near] = k
            rho[near] = d[near]
        got = hit >= 0
        if got.any():
            gi = idx[got]
            labels[gi] = hit[got]
            times[gi] = it
            if limit > 0:
                # G/|grad G| for the basin's Green function G = log(1/rho)/deg^n,
                # pulled back to the Euclidean metric at z0
                zz, rr = z0[gi], np.maximum(rho[got], 1e-300)
                with np.errstate(all="ignore"):
                    est = rr * np.log(2 / rr) * (1 + np.abs(zz) ** 2) / (2 * np.exp(logd[got]))
                labels[gi[est < limit]] = -1
            keep = ~got
            idx, z, logd = idx[keep], z[keep], logd[keep]
        if it == cfg.max_iter or idx.size == 0:
            break
        val, der = F.eval(z, derivative=True)
        with np.errstate(all="ignore"):
            logd = logd + np.log(spherical_derivative(val, der, z))
        z = val
    return labels.reshape(shape), times.reshape(shape)


def render_julia(R: RationalMap, cfg: RenderConfig = RenderConfig(), cycles=None,
                 threads: int | None = None) -> Rendering:
    """Classify every pixel by the attracting cycle its orbit is captured by."""
    if cycles is None:
        cycles = find_attracting_cycles(R)
    F = ArrayMap(R)
    targets, ids = [], []
    for k, c in enumerate(cycles):
        for q in c.points:
            targets.append(q)
            ids.append(k)
    targets = np.array(targets, dtype=complex)
    ids = np.array(ids, dtype=np.int32)
    threads = threads or thread_count()
    step = max(8, cfg.height // (4 * threads))
    chunks = [slice(i, min(i + step, cfg.height)) for i in range(0, cfg.height, step)]

    def work(rows):
        return _classify(F, cfg.grid(rows), targets, ids, cfg)

    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(work, chunks))
    labels = np.concatenate([p[0] for p in parts], axis=0)
    times = np.concatenate([p[1] for p in parts], axis=0)
    return Rendering(labels, times, list(cycles), cfg)
