"""Monte Carlo oracle: exact bounded-Voronoi cell areas and secure degrees.

Each trial draws a fresh Poisson point process on the square [0, L]^2, adds
the conditioned seed at its fixed location, and clips the square by the
perpendicular-bisector half-plane of every other seed, nearest first, with an
early exit once no remaining seed can cut the polygon.  The shoelace area of
the surviving convex polygon is the exact cell area.

Reproducibility: trial t uses its own counter-based Philox substream keyed by
(rng_seed, t), so results are bit-identical no matter how trials are chunked
over workers.  The worker count comes from the VBL_THREADS environment
variable (0 or unset = one worker per CPU).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

__all__ = [
    "SimConfig",
    "SimStats",
    "ConvexPolygon",
    "GridCell",
    "resolve_worker_count",
    "trial_rng",
    "sample_ppp",
    "voronoi_cell_area",
    "voronoi_cell_polygon",
    "all_cell_areas",
    "simulate_cell_area",
    "grid_scan",
    "simulate_secure_degrees",
]


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo experiment: geometry, intensity, trials, seed."""

    side_L: float
    intensity: float
    seed0: tuple[float, float]
    trials: int
    rng_seed: int

    def __post_init__(self) -> None:
        if self.side_L <= 0.0:
            raise ValueError(f"side_L must be > 0, got {self.side_L}")
        if self.intensity < 0.0:
            raise ValueError(f"intensity must be >= 0, got {self.intensity}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        x, y = self.seed0
        if not (0.0 <= x <= self.side_L and 0.0 <= y <= self.side_L):
            raise ValueError(f"seed0 {self.seed0} outside [0, {self.side_L}]^2")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must fit in 64 bits")


@dataclass(frozen=True)
class SimStats:
    """Sample mean/variance of the simulated areas with the mean's standard error."""

    mean: float
    variance: float
    std_err_mean: float
    trials: int

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise ValueError("variance must be >= 0")


@dataclass(frozen=True)
class GridCell:
    x: float
    y: float
    stats: SimStats


class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[tuple[float, float]]):
        if len(vertices) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        self.vertices = tuple((float(x), float(y)) for x, y in vertices)
        if self.area() < 0.0:
            raise ValueError("vertices must be ordered counter-clockwise")

    @classmethod
    def square(cls, side: float) -> "ConvexPolygon":
        return cls([(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)])

    def area(self) -> float:
        a = 0.0
        verts = self.vertices
        for i in range(len(verts)):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % len(verts)]
            a += x0 * y1 - x1 * y0
        return 0.5 * a

    def contains(self, x: float, y: float, tol: float = 1e-12) -> bool:
        verts = self.vertices
        for i in range(len(verts)):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % len(verts)]
            if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) < -tol:
                return False
        return True

    def clip_halfplane(self, nx: float, ny: float, c: float) -> "ConvexPolygon":
        """Intersect with {(x, y): nx*x + ny*y <= c}."""
        verts = _clip(list(self.vertices), nx, ny, c)
        return ConvexPolygon(verts)


def _clip(verts: list, nx: float, ny: float, c: float) -> list:
    """Sutherland-Hodgman step for a single half-plane, list-of-tuples form."""
    s = [nx * x + ny * y - c for x, y in verts]
    if all(v <= 0.0 for v in s):
        return verts
    out = []
    n = len(verts)
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        si, sj = s[i], s[j]
        if si <= 0.0:
            out.append(verts[i])
        if (si <= 0.0) != (sj <= 0.0):
            t = si / (si - sj)
            xi, yi = verts[i]
            xj, yj = verts[j]
            out.append((xi + t * (xj - xi), yi + t * (yj - yi)))
    return out


def trial_rng(rng_seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based substream for one trial: Philox keyed by the run seed,
    with the 256-bit counter block offset by the trial index."""
    return np.random.Generator(
        np.random.Philox(key=rng_seed, counter=trial_index << 128)
    )


def sample_ppp(
    intensity: float, side_L: float, rng: np.random.Generator
) -> np.ndarray:
    """Draw one Poisson point process on [0, side_L]^2; shape (n, 2)."""
    if intensity < 0.0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    if side_L <= 0.0:
        raise ValueError(f"side_L must be > 0, got {side_L}")
    n = rng.poisson(intensity * side_L * side_L)
    return rng.uniform(0.0, side_L, size=(int(n), 2))


def _cell_vertices(
    sx: float, sy: float, pts: np.ndarray, side_L: float
) -> list:
    """Clip the square down to the cell of (sx, sy); returns vertex list.

    Seeds are processed nearest first; once the next seed is at least twice
    the polygon's circumradius around the seed away, its bisector cannot cut
    the polygon and everything farther is skipped too.
    """
    if pts.shape[0] == 0:
        L = side_L
        return [(0.0, 0.0), (L, 0.0), (L, L), (0.0, L)]
    dx = pts[:, 0] - sx
    dy = pts[:, 1] - sy
    d2 = dx * dx + dy * dy
    if np.any(d2 == 0.0):
        raise ValueError("a point of the process coincides with seed0")
    order = np.argsort(d2, kind="stable")
    d2_sorted = d2[order].tolist()
    pts_sorted = pts[order].tolist()

    L = side_L
    verts = [(0.0, 0.0), (L, 0.0), (L, L), (0.0, L)]
    max_r2 = max((x - sx) ** 2 + (y - sy) ** 2 for x, y in verts)
    for dist2, (px, py) in zip(d2_sorted, pts_sorted):
        if dist2 >= 4.0 * max_r2:
            break
        nx = px - sx
        ny = py - sy
        c = 0.5 * (nx * (px + sx) + ny * (py + sy))
        new = _clip(verts, nx, ny, c)
        if new is verts:
            continue
        verts = new
        max_r2 = max((x - sx) ** 2 + (y - sy) ** 2 for x, y in verts)
    return verts


def _shoelace(verts: list) -> float:
    a = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[i + 1] if i + 1 < n else verts[0]
        a += x0 * y1 - x1 * y0
    return 0.5 * abs(a)


def voronoi_cell_area(
    seed0: tuple[float, float], others: np.ndarray, side_L: float
) -> float:
    """Exact area of the Voronoi cell of seed0 inside the square [0, L]^2."""
    _check_seed(seed0, side_L)
    pts = np.asarray(others, dtype=float).reshape(-1, 2)
    return _shoelace(_cell_vertices(seed0[0], seed0[1], pts, side_L))


def voronoi_cell_polygon(
    seed0: tuple[float, float], others: np.ndarray, side_L: float
) -> ConvexPolygon:
    """The clipped cell itself, for containment checks and plotting."""
    _check_seed(seed0, side_L)
    pts = np.asarray(others, dtype=float).reshape(-1, 2)
    return ConvexPolygon(_cell_vertices(seed0[0], seed0[1], pts, side_L))


def all_cell_areas(points: np.ndarray, side_L: float) -> np.ndarray:
    """Areas of every cell of the configuration (partition of the square)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    areas = np.empty(pts.shape[0])
    for i in range(pts.shape[0]):
        others = np.delete(pts, i, axis=0)
        areas[i] = voronoi_cell_area((pts[i, 0], pts[i, 1]), others, side_L)
    return areas


def _check_seed(seed0: tuple[float, float], side_L: float) -> None:
    x, y = seed0
    if not (0.0 <= x <= side_L and 0.0 <= y <= side_L):
        raise ValueError(f"seed0 {seed0} outside [0, {side_L}]^2")


# ----------------------------------------------------------------------
# trial loops (module-level so process pools can pickle them)
# ----------------------------------------------------------------------

def _cell_area_chunk(cfg: SimConfig, start: int, stop: int) -> np.ndarray:
    sx, sy = cfg.seed0
    out = np.empty(stop - start)
    for t in range(start, stop):
        rng = trial_rng(cfg.rng_seed, t)
        pts = sample_ppp(cfg.intensity, cfg.side_L, rng)
        out[t - start] = _shoelace(_cell_vertices(sx, sy, pts, cfg.side_L))
    return out


def _degree_chunk(
    lambda_l: float,
    lambda_e: float,
    seed0: tuple[float, float],
    side_L: float,
    rng_seed: int,
    start: int,
    stop: int,
) -> tuple[np.ndarray, np.ndarray]:
    s0 = np.asarray(seed0)
    n = stop - start
    in_counts = np.empty(n, dtype=np.int64)
    out_counts = np.empty(n, dtype=np.int64)
    for t in range(start, stop):
        rng = trial_rng(rng_seed, t)
        legit = sample_ppp(lambda_l, side_L, rng)
        eaves = sample_ppp(lambda_e, side_L, rng)
        if legit.shape[0] == 0:
            in_counts[t - start] = 0
            out_counts[t - start] = 0
            continue
        d2_s0 = np.sum((legit - s0) ** 2, axis=1)
        if eaves.shape[0] == 0:
            in_counts[t - start] = legit.shape[0]
            out_counts[t - start] = legit.shape[0]
            continue
        nearest_eave = cdist(legit, eaves, "sqeuclidean").min(axis=1)
        in_counts[t - start] = int(np.count_nonzero(d2_s0 < nearest_eave))
        rho2 = float(np.min(np.sum((eaves - s0) ** 2, axis=1)))
        out_counts[t - start] = int(np.count_nonzero(d2_s0 < rho2))
    return in_counts, out_counts


def resolve_worker_count(explicit: Optional[int] = None) -> int:
    """Worker count: explicit argument, else VBL_THREADS (0/unset = all CPUs)."""
    if explicit is not None:
        return max(1, int(explicit))
    raw = os.environ.get("VBL_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return os.cpu_count() or 1
    return n


def _chunk_ranges(trials: int, workers: int) -> list[tuple[int, int]]:
    n_chunks = min(trials, workers * 4)
    size = math.ceil(trials / n_chunks)
    return [(lo, min(lo + size, trials)) for lo in range(0, trials, size)]


def simulate_cell_areas(cfg: SimConfig, workers: Optional[int] = None) -> np.ndarray:
    """Per-trial cell areas in trial order.

    Deterministic for a fixed rng_seed, independent of the worker count:
    per-trial substreams are fixed and chunks are concatenated in order.
    """
    workers = resolve_worker_count(workers)
    if workers == 1 or cfg.trials < 256:
        return _cell_area_chunk(cfg, 0, cfg.trials)
    ranges = _chunk_ranges(cfg.trials, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_cell_area_chunk, *zip(*[(cfg, a, b) for a, b in ranges])))
    return np.concatenate(parts)


def simulate_cell_area(cfg: SimConfig, workers: Optional[int] = None) -> SimStats:
    """Sample statistics of the cell area of the conditioned seed."""
    return _stats_from(simulate_cell_areas(cfg, workers))


def _stats_from(areas: np.ndarray) -> SimStats:
    n = areas.size
    mean = float(np.mean(areas))
    variance = float(np.var(areas, ddof=1)) if n > 1 else 0.0
    return SimStats(
        mean=mean,
        variance=variance,
        std_err_mean=math.sqrt(variance / n),
        trials=n,
    )


def grid_scan(
    delta: float,
    n_per_axis: int,
    trials_per_seed: int,
    *,
    side_L: float = 10.0,
    intensity: float = 1.0,
    rng_seed: int = 0,
    workers: Optional[int] = None,
) -> list[GridCell]:
    """Cell-area statistics over the seed grid (i*delta, j*delta).

    Position (i, j) uses the global trial indices [(i*n+j)*trials,
    (i*n+j+1)*trials), so the (0, 0) entry reproduces a corner
    ``simulate_cell_area`` run with the same seed and trial count.
    """
    if delta <= 0.0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if n_per_axis < 1:
        raise ValueError(f"n_per_axis must be >= 1, got {n_per_axis}")
    if (n_per_axis - 1) * delta > side_L:
        raise ValueError("grid extends beyond the simulation square")
    workers = resolve_worker_count(workers)

    configs = []
    for i in range(n_per_axis):
        for j in range(n_per_axis):
            configs.append(
                SimConfig(
                    side_L=side_L,
                    intensity=intensity,
                    seed0=(i * delta, j * delta),
                    trials=trials_per_seed,
                    rng_seed=rng_seed,
                )
            )
    # One task list over the whole position x trial space, one pool for all
    # of it; position p owns global trial indices [p*T, (p+1)*T).
    tasks = []
    for p, cfg in enumerate(configs):
        base = p * trials_per_seed
        for a, b in _chunk_ranges(trials_per_seed, 1 if workers == 1 else workers):
            tasks.append((cfg, base + a, base + b))
    if workers == 1 or len(tasks) == len(configs):
        parts = [_cell_area_chunk(*t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_cell_area_chunk, *zip(*tasks), chunksize=1))
    cells = []
    cursor = 0
    per_pos = len(tasks) // len(configs)
    for p, cfg in enumerate(configs):
        areas = np.concatenate(parts[cursor : cursor + per_pos])
        cursor += per_pos
        cells.append(
            GridCell(x=cfg.seed0[0], y=cfg.seed0[1], stats=_stats_from(areas))
        )
    return cells


def simulate_secure_degrees(
    lambda_l: float,
    lambda_e: float,
    seed0: tuple[float, float],
    side_L: float,
    trials: int,
    rng_seed: int,
    workers: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Empirical secure in-/out-degree mass functions at the virtual node.

    Per trial both processes are drawn fresh; the in-degree counts legitimate
    users nearer to the node than to every eavesdropper, the out-degree
    counts those nearer to the node than the node's nearest eavesdropper
    (ties count as insecure).  Returns two normalized histograms indexed by
    degree.
    """
    if lambda_l <= 0.0 or lambda_e <= 0.0:
        raise ValueError("intensities must be > 0")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    _check_seed(seed0, side_L)
    if not 0 <= rng_seed < 2**64:
        raise ValueError("rng_seed must fit in 64 bits")
    workers = resolve_worker_count(workers)
    if workers == 1 or trials < 256:
        in_counts, out_counts = _degree_chunk(
            lambda_l, lambda_e, seed0, side_L, rng_seed, 0, trials
        )
    else:
        ranges = _chunk_ranges(trials, workers)
        args = [
            (lambda_l, lambda_e, seed0, side_L, rng_seed, a, b) for a, b in ranges
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_degree_chunk, *zip(*args)))
        in_counts = np.concatenate([p[0] for p in parts])
        out_counts = np.concatenate([p[1] for p in parts])
    in_pmf = np.bincount(in_counts) / trials
    out_pmf = np.bincount(out_counts) / trials
    return in_pmf, out_pmf
