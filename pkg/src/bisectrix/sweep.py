"""Seeded sweeps and the round-trip oracle self-test.

Random draws use numpy's ``Generator(PCG64(seed))``; the PCG64 stream is
fixed by numpy's documented algorithm, so rows reproduce across platforms.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .bisector_system import DegenerateInstanceError, InstanceSquaredSides
from .geometry import (
    ACCEPT_TOL,
    INCENTER,
    INVALID,
    DegenerateTriangleError,
    angle_at,
    embed_reference,
    forward_problem,
)
from .pipeline import fmt, solve

CSV_COLUMNS = (
    "index", "source", "angle_A", "angle_B", "angle_C", "a2", "b2", "c2",
    "degree", "n_real_roots", "n_incenter", "n_excenter", "max_feet_residual",
    "verdict", "status",
)
MAX_SIDE_RATIO = 20.0


class SamplingError(ValueError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def check_angle_range(angle_min: float, angle_max: float):
    if not (0 < angle_min < angle_max < 180):
        raise SamplingError("need 0 < angle-min < angle-max < 180")
    if 3 * angle_min > 180 or 3 * angle_max < 180:
        raise SamplingError("no triangle has all three angles in the requested range")


def triangle_from_angles(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Unit-base triangle with the given angles (degrees) at its three vertices."""
    a_r, g_r = math.radians(alpha), math.radians(gamma)
    b = math.sin(math.radians(beta)) / math.sin(g_r)
    return np.array([[0.0, 0.0], [1.0, 0.0], [b * math.cos(a_r), b * math.sin(a_r)]])


def random_triangle(rng: np.random.Generator, angle_min: float = 15.0, angle_max: float = 150.0):
    """Random placed triangle with every angle in [angle_min, angle_max]; returns (vertices, angles)."""
    check_angle_range(angle_min, angle_max)
    while True:
        alpha, beta = rng.uniform(angle_min, angle_max, 2)
        gamma = 180.0 - alpha - beta
        if not angle_min <= gamma <= angle_max:
            continue
        sines = [math.sin(math.radians(v)) for v in (alpha, beta, gamma)]
        if max(sines) / min(sines) > MAX_SIDE_RATIO:
            continue
        break
    base = triangle_from_angles(alpha, beta, gamma)
    theta = rng.uniform(0.0, 2 * math.pi)
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    if rng.uniform() < 0.5:
        rot = rot @ np.diag([1.0, -1.0])
    scale = rng.uniform(0.5, 5.0)
    offset = rng.normal(size=2)
    pts = base @ rot.T * scale + offset
    return pts, (float(alpha), float(beta), float(gamma))


def _angles_of(tri) -> Tuple[float, float, float]:
    P = [tuple(p) for p in tri]
    return tuple(angle_at(P[i], P[(i + 1) % 3], P[(i + 2) % 3]) for i in range(3))


@dataclass(frozen=True)
class Job:
    index: int
    source: str
    triangle: Optional[Tuple] = None
    squares: Optional[Tuple] = None
    angles: Optional[Tuple[float, float, float]] = None


def _blank_row(job: Job, status: str) -> dict:
    row = {k: "" for k in CSV_COLUMNS}
    row.update(index=job.index, source=job.source, status=status)
    if job.angles:
        row.update(angle_A=fmt(job.angles[0]), angle_B=fmt(job.angles[1]), angle_C=fmt(job.angles[2]))
    return row


def run_job(job: Job) -> dict:
    started = time.perf_counter()
    try:
        if job.triangle is not None:
            inst = forward_problem(job.triangle).instance
        else:
            inst = InstanceSquaredSides.exact_from(*job.squares)
    except (DegenerateTriangleError, DegenerateInstanceError, ValueError):
        row = _blank_row(job, INVALID)
        row["wall_time"] = time.perf_counter() - started
        return row
    rep = solve(inst, system="both")
    sols = [r.solution for r in rep.roots]
    valid = [s.feet_residual for s in sols if s.classification != INVALID]
    row = _blank_row(job, "")
    if job.angles is None:
        row.update(angle_A="", angle_B="", angle_C="")
    row.update(
        a2=fmt(inst.a2) if not inst.exact else str(inst.a2),
        b2=fmt(inst.b2) if not inst.exact else str(inst.b2),
        c2=fmt(inst.c2) if not inst.exact else str(inst.c2),
        degree=0 if rep.used.is_empty else rep.used.degree,
        n_real_roots=len(rep.roots),
        n_incenter=rep.n_incenter,
        n_excenter=rep.n_excenter,
        max_feet_residual=fmt(max(valid)) if valid else "",
        verdict=rep.verdict.status if rep.verdict is not None else "",
        status="discrepancy" if rep.discrepancy else ("ok" if rep.n_incenter else "no-incenter"),
    )
    row["wall_time"] = time.perf_counter() - started
    return row


def forward_jobs(n: int, seed: int, angle_min: float, angle_max: float, degenerate: bool = False) -> List[Job]:
    check_angle_range(angle_min, angle_max)
    rng = make_rng(seed)
    jobs = []
    for i in range(n):
        if degenerate:
            p = rng.normal(size=2)
            d = rng.normal(size=2)
            ts = np.sort(rng.uniform(-1, 1, 3))
            tri = tuple(tuple(p + t * d) for t in ts)
            jobs.append(Job(i, "degenerate", triangle=tri, angles=None))
            continue
        pts, angles = random_triangle(rng, angle_min, angle_max)
        jobs.append(Job(i, "forward", triangle=tuple(map(tuple, pts)), angles=angles))
    return jobs


def grid_jobs(size: int) -> List[Job]:
    """Integer squared sides 1 <= a2 <= b2 <= c2 <= size forming a nondegenerate triangle."""
    if size < 1:
        raise SamplingError("grid size must be positive")
    jobs = []
    for a2 in range(1, size + 1):
        for b2 in range(a2, size + 1):
            for c2 in range(b2, size + 1):
                try:
                    inst = InstanceSquaredSides.exact_from(a2, b2, c2)
                except DegenerateInstanceError:
                    continue
                angles = _angles_of(embed_reference(inst))
                jobs.append(Job(len(jobs), "grid", squares=(a2, b2, c2), angles=angles))
    return jobs


def worker_count() -> int:
    raw = os.environ.get("BISECTRIX_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_jobs(jobs: List[Job], workers: Optional[int] = None) -> List[dict]:
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(jobs) <= 1:
        rows = [run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(run_job, jobs, chunksize=4))
    return sorted(rows, key=lambda r: r["index"])


def rows_to_csv(rows: Iterable[dict], timing: bool = False) -> str:
    cols = list(CSV_COLUMNS) + (["wall_time"] if timing else [])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        r = dict(r)
        if timing:
            r["wall_time"] = f"{r['wall_time']:.6f}"
        w.writerow(r)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# round-trip oracle


@dataclass
class RoundTrip:
    index: int
    angles: Tuple[float, float, float]
    n_incenter: int
    n_congruent: int
    best_error: float
    systems_agree: bool
    perturbation: float = 0.0

    @property
    def passed(self) -> bool:
        return self.systems_agree and self.n_congruent == 1 and self.best_error <= ACCEPT_TOL


def round_trip(tri, index: int = 0, angles=None, perturb: float = 0.0, rng=None) -> RoundTrip:
    """Triangle -> bisector feet -> inverse solve -> compare with the triangle."""
    fr = forward_problem(tri)
    inst = fr.instance
    if perturb:
        u = rng.uniform(-1.0, 1.0, 3) if rng is not None else np.ones(3)
        inst = InstanceSquaredSides.numeric_from(*(v * (1 + perturb * ui) for v, ui in zip(inst.as_floats(), u)))
    rep = solve(inst, system="both")
    target = [np.asarray(tuple(p)) for p in fr.canonical_triangle()]
    diam = max(np.linalg.norm(target[i] - target[j]) for i, j in ((0, 1), (1, 2), (2, 0)))
    errors = []
    for sol in rep.solutions:
        if sol.classification != INCENTER:
            continue
        err = max(np.linalg.norm(np.asarray(tuple(v)) - t) for v, t in zip(sol.vertices, target)) / diam
        errors.append(float(err))
    return RoundTrip(
        index=index,
        angles=tuple(angles) if angles is not None else _angles_of(tri),
        n_incenter=rep.n_incenter,
        n_congruent=sum(1 for e in errors if e <= ACCEPT_TOL),
        best_error=min(errors) if errors else math.inf,
        systems_agree=rep.discrepancy is None,
        perturbation=perturb,
    )


def oracle_check(n: int, seed: int, perturb: float = 0.0, angle_min: float = 15.0, angle_max: float = 150.0) -> List[RoundTrip]:
    rng = make_rng(seed)
    out = []
    for i in range(n):
        pts, angles = random_triangle(rng, angle_min, angle_max)
        out.append(round_trip(pts, i, angles, perturb=perturb, rng=rng))
    return out
