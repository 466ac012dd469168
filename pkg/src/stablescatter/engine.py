"""Vectorized batch simulation of path ensembles.

Paths advance on a common time grid (steps <= dt_max).  Big jumps carry
per-path exponential clocks and are applied at the end of the step containing
their arrival time; the sub-delta component is the variance-matched Gaussian.
Accumulators stream trapezoidal time integrals, jump sums, hit flags or full
trajectories without storing what they do not need.

Work is chunked; chunk i draws from an independent counter-based stream
keyed (seed, chunk index), so results are reproducible for any worker count
and accumulator outputs are indexed by the original path id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .model import StableModel
from .paths import path_rng, sample_big_jumps

__all__ = [
    "PathBatchSpec",
    "FKAccumulator",
    "HitAccumulator",
    "TrajectoryAccumulator",
    "simulate_chunk",
    "run_batches",
]


@dataclass(frozen=True)
class PathBatchSpec:
    horizon: float
    exit_radius: float
    delta: float
    dt_max: float
    snapshot_times: tuple = ()

    def __post_init__(self):
        if self.horizon <= 0.0 or self.delta <= 0.0 or self.dt_max <= 0.0:
            raise DomainError("horizon, delta and dt_max must be positive")
        if self.exit_radius <= 0.0:
            raise DomainError("exit_radius must be positive")

    @property
    def n_steps(self) -> int:
        return max(1, int(math.ceil(self.horizon / self.dt_max)))

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    def snapshot_steps(self) -> np.ndarray:
        dt = self.dt
        return np.array(
            [min(self.n_steps, max(1, int(round(t / dt)))) for t in self.snapshot_times],
            dtype=int,
        )


class FKAccumulator:
    """Streams the additive-functional ingredients along a chunk.

    Outputs per original path id:
      a_mu      trapezoidal integral of ``v_func`` along the path,
      tables[k] trapezoidal integral of each radial table (compensators, F1),
      jsum      sum of ``jf.eval`` over recorded big jumps.
    Optional snapshots copy all running sums at the requested times.
    """

    def __init__(
        self, n_paths, d, v_func=None, tables=(), jf=None,
        mart_table=None, big_jump_rate=None, n_snapshots=0,
    ):
        self.v_func = v_func
        self.tables = list(tables)
        self.jf = jf
        self.mart_table = mart_table  # H_delta; enables exact per-jump compensation
        self.big_jump_rate = big_jump_rate
        self.a_mu = np.zeros(n_paths)
        self.tab = np.zeros((len(self.tables), n_paths))
        self.jsum = np.zeros(n_paths)
        self.logm = np.zeros(n_paths)  # sum of log E_Z[e^{-F(y, y+Z)}] over fired jumps
        self.n_snapshots = n_snapshots
        if n_snapshots:
            self.snap_a_mu = np.zeros((n_snapshots, n_paths))
            self.snap_tab = np.zeros((n_snapshots, len(self.tables), n_paths))
            self.snap_jsum = np.zeros((n_snapshots, n_paths))
            self.snap_logm = np.zeros((n_snapshots, n_paths))

    def start(self, pos, rad, ids):
        self._v_prev = self.v_func(pos) if self.v_func is not None else None
        self._t_prev = [t(rad) for t in self.tables]

    def interval(self, pos, rad, ids, dt):
        if self.v_func is not None:
            v = self.v_func(pos)
            self.a_mu[ids] += (0.5 * dt) * (self._v_prev + v)
            self._v_prev = v
        for k, t in enumerate(self.tables):
            tv = t(rad)
            self.tab[k, ids] += (0.5 * dt) * (self._t_prev[k] + tv)
            self._t_prev[k] = tv

    def jump(self, pre, post, ids_j, local_j):
        if self.jf is not None:
            self.jsum[ids_j] += self.jf.eval(pre, post)
        if self.mart_table is not None:
            pre_rad = np.linalg.norm(pre, axis=1)
            self.logm[ids_j] += np.log1p(-self.mart_table(pre_rad) / self.big_jump_rate)
        post_rad = np.linalg.norm(post, axis=1)
        if self.v_func is not None:
            self._v_prev[local_j] = self.v_func(post)
        for k, t in enumerate(self.tables):
            self._t_prev[k][local_j] = t(post_rad)

    def kill_mask(self, pos, rad, ids):
        return None

    def compact(self, keep):
        if self._v_prev is not None:
            self._v_prev = self._v_prev[keep]
        self._t_prev = [t[keep] for t in self._t_prev]

    def snapshot(self, slot):
        self.snap_a_mu[slot] = self.a_mu
        self.snap_tab[slot] = self.tab
        self.snap_jsum[slot] = self.jsum
        self.snap_logm[slot] = self.logm


class HitAccumulator:
    """Records first entry into a target set; optionally kills paths on hit."""

    def __init__(self, n_paths, d, contains, kill_on_hit=True):
        self.contains = contains
        self.kill_on_hit = kill_on_hit
        self.hit = np.zeros(n_paths, dtype=bool)
        self._last = None

    def start(self, pos, rad, ids):
        self.hit[ids] |= self.contains(pos)

    def interval(self, pos, rad, ids, dt):
        mask = self.contains(pos)
        self.hit[ids] |= mask
        self._last = mask

    def jump(self, pre, post, ids_j, local_j):
        self.hit[ids_j] |= self.contains(post)

    def kill_mask(self, pos, rad, ids):
        if not self.kill_on_hit:
            return None
        return self.hit[ids]

    def compact(self, keep):
        pass

    def snapshot(self, slot):
        pass


class TrajectoryAccumulator:
    """Stores full skeletons (for shifted-start reuse); heavy, small ensembles only."""

    def __init__(self, n_paths, d, n_steps):
        self.positions = np.zeros((n_paths, n_steps + 1, d))
        self.alive_steps = np.full(n_paths, n_steps, dtype=int)
        self.jump_path = []
        self.jump_step = []
        self.jump_pre = []
        self.jump_post = []
        self._step = 0

    def start(self, pos, rad, ids):
        self.positions[ids, 0] = pos

    def set_step(self, k):
        self._step = k

    def interval(self, pos, rad, ids, dt):
        self.positions[ids, self._step] = pos

    def jump(self, pre, post, ids_j, local_j):
        self.jump_path.append(ids_j.copy())
        self.jump_step.append(np.full(len(ids_j), self._step))
        self.jump_pre.append(pre.copy())
        self.jump_post.append(post.copy())
        # trajectory keeps the cadlag (post-jump) point
        self.positions[ids_j, self._step] = post

    def kill_mask(self, pos, rad, ids):
        return None

    def compact(self, keep):
        pass

    def snapshot(self, slot):
        pass

    def jumps_arrays(self):
        if not self.jump_path:
            d = self.positions.shape[2]
            return (
                np.zeros(0, dtype=int),
                np.zeros(0, dtype=int),
                np.zeros((0, d)),
                np.zeros((0, d)),
            )
        return (
            np.concatenate(self.jump_path),
            np.concatenate(self.jump_step),
            np.vstack(self.jump_pre),
            np.vstack(self.jump_post),
        )


def simulate_chunk(model, starts, spec, accumulators, rng):
    """Advance one chunk of paths; accumulators carry the results."""
    n, d = starts.shape
    lam = model.big_jump_rate(spec.delta)
    sigma = model.small_jump_std(spec.delta)
    n_steps = spec.n_steps
    dt = spec.dt
    sq = sigma * math.sqrt(dt)
    snap_steps = spec.snapshot_steps()
    snap_lookup = {}
    for slot, s in enumerate(snap_steps):
        snap_lookup.setdefault(int(s), []).append(slot)

    pos = starts.copy()
    ids = np.arange(n)
    rad = np.linalg.norm(pos, axis=1)
    next_jump = rng.standard_exponential(n) / lam
    for acc in accumulators:
        acc.start(pos, rad, ids)

    frozen_exit = np.zeros(n, dtype=bool)
    exit_time = np.full(n, spec.horizon)

    for k in range(1, n_steps + 1):
        na = pos.shape[0]
        if na == 0:
            break
        t1 = k * dt
        for acc in accumulators:
            if hasattr(acc, "set_step"):
                acc.set_step(k)
        pos += rng.standard_normal((na, d)) * sq
        rad = np.linalg.norm(pos, axis=1)
        for acc in accumulators:
            acc.interval(pos, rad, ids, dt)
        # big jumps due in (t1 - dt, t1], possibly several per path
        due = next_jump <= t1
        while due.any():
            sel = np.flatnonzero(due)
            pre = pos[sel]
            vecs = sample_big_jumps(model, rng, len(sel), spec.delta)
            post = pre + vecs
            for acc in accumulators:
                acc.jump(pre, post, ids[sel], sel)
            pos[sel] = post
            next_jump[sel] += rng.standard_exponential(len(sel)) / lam
            due = next_jump <= t1
        rad = np.linalg.norm(pos, axis=1)

        dead = rad > spec.exit_radius
        for acc in accumulators:
            km = acc.kill_mask(pos, rad, ids)
            if km is not None:
                dead |= km
        if dead.any():
            frozen_exit[ids[dead]] = True
            exit_time[ids[dead]] = t1

        if int(k) in snap_lookup:
            for slot in snap_lookup[int(k)]:
                for acc in accumulators:
                    acc.snapshot(slot)

        if dead.any():
            keep = ~dead
            pos = pos[keep]
            ids = ids[keep]
            rad = rad[keep]
            next_jump = next_jump[keep]
            for acc in accumulators:
                acc.compact(keep)

    return frozen_exit, exit_time


def run_batches(model, starts, spec, acc_factory, seed, chunk=8192):
    """Serial chunked run; ``acc_factory(n_paths, d) -> list`` builds fresh
    accumulators per chunk and ``merge(list_of_(accs, slice))`` is left to the
    caller via the returned per-chunk results."""
    starts = np.asarray(starts, dtype=float)
    n, d = starts.shape
    results = []
    for ci, lo in enumerate(range(0, n, chunk)):
        hi = min(n, lo + chunk)
        rng = path_rng(seed, 1, ci)
        accs = acc_factory(hi - lo, d)
        frozen, et = simulate_chunk(model, starts[lo:hi], spec, accs, rng)
        results.append((slice(lo, hi), accs, frozen, et))
    return results
