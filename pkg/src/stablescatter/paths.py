"""Jump-decomposed simulation of the isotropic stable process.

The Levy measure c_levy |z|^{-d-alpha} dz is split at a truncation radius
delta.  Jumps larger than delta form a compound Poisson process (rate
``model.big_jump_rate(delta)``, uniform directions, Pareto-type radii) and
are recorded one by one in the ledger.  The sub-delta part is replaced by a
Brownian motion whose per-coordinate variance matches the second moment of
the truncated jump measure, stepped at intervals <= dt_max.

An exact sampler by subordination (positive alpha/2-stable subordinator via
Kanter's representation + Gaussian) is provided as the distributional oracle
for the decomposed simulator.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .model import StableModel

__all__ = [
    "JumpEvent",
    "PathLedger",
    "path_rng",
    "simulate_path",
    "sample_positive_stable",
    "sample_exact_increment",
    "simulate_exact_skeleton",
    "ledger_to_bytes",
    "ledger_from_bytes",
]


def path_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator keyed by (experiment seed, stream indices).

    Philox streams derived this way are independent and reproducible
    regardless of evaluation order or worker count.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class JumpEvent:
    """One recorded big jump: left limit ``pre``, landing point ``post``."""

    time: float
    pre: np.ndarray
    post: np.ndarray


@dataclass
class PathLedger:
    """Skeleton of one simulated path.

    ``times`` are strictly increasing with times[0] = 0; ``positions[i]`` is
    the cadlag value at times[i] (the post-jump point when times[i] is a jump
    time; the pre-jump point lives in the matching JumpEvent).  ``horizon``
    is the final simulated time, i.e. min(requested horizon, first exit from
    the ball of ``exit_radius``).
    """

    times: np.ndarray
    positions: np.ndarray
    jumps: tuple = field(default_factory=tuple)
    horizon: float = 0.0
    exit_radius: float = math.inf
    truncation_delta: float = 0.0

    @property
    def d(self) -> int:
        return self.positions.shape[1]

    def exited(self) -> bool:
        return bool(np.linalg.norm(self.positions[-1]) > self.exit_radius)


def _uniform_sphere(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    v = rng.standard_normal((n, d))
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    # resample exact zeros (probability ~0)
    while np.any(norms == 0.0):
        idx = norms[:, 0] == 0.0
        v[idx] = rng.standard_normal((int(idx.sum()), d))
        norms = np.linalg.norm(v, axis=1, keepdims=True)
    return v / norms


def sample_big_jumps(model: StableModel, rng: np.random.Generator, n: int, delta: float) -> np.ndarray:
    """Jump vectors with |z| > delta from the normalized tail of the Levy measure."""
    radii = delta * rng.random(n) ** (-1.0 / model.alpha)
    return _uniform_sphere(rng, n, model.d) * radii[:, None]


def simulate_path(
    model: StableModel,
    seed,
    horizon: float,
    exit_radius: float,
    delta: float,
    dt_max: float,
    start,
) -> PathLedger:
    """Simulate one path; bit-identical output for identical (seed, parameters).

    ``seed`` is an integer or a (seed, path_index) tuple feeding the
    counter-based generator.
    """
    if horizon < 0.0:
        raise DomainError("horizon must be nonnegative")
    if delta <= 0.0 or dt_max <= 0.0 or exit_radius <= 0.0:
        raise DomainError("delta, dt_max and exit_radius must be positive")
    start = np.asarray(start, dtype=float)
    if start.shape != (model.d,):
        raise DomainError(f"start must be a {model.d}-vector")

    if isinstance(seed, tuple):
        rng = path_rng(seed[0], *seed[1:])
    else:
        rng = path_rng(int(seed))

    if horizon == 0.0:
        return PathLedger(
            times=np.zeros(1),
            positions=start[None, :].copy(),
            jumps=(),
            horizon=0.0,
            exit_radius=float(exit_radius),
            truncation_delta=float(delta),
        )

    lam = model.big_jump_rate(delta)
    sigma = model.small_jump_std(delta)

    n_jumps = rng.poisson(lam * horizon)
    jump_times = np.sort(rng.random(n_jumps)) * horizon
    jump_vecs = sample_big_jumps(model, rng, n_jumps, delta)

    times = [0.0]
    positions = [start.copy()]
    jumps = []
    pos = start.copy()
    t = 0.0
    exited = False

    knots = np.concatenate([jump_times, [horizon]])
    j = 0
    for knot in knots:
        seg = knot - t
        if seg > 0.0:
            n_steps = max(1, int(math.ceil(seg / dt_max)))
            dt = seg / n_steps
            t0 = t
            incs = rng.standard_normal((n_steps, model.d)) * (sigma * math.sqrt(dt))
            for k in range(n_steps):
                t = knot if k == n_steps - 1 else t0 + dt * (k + 1)
                pos = pos + incs[k]
                times.append(t)
                positions.append(pos.copy())
                if np.linalg.norm(pos) > exit_radius:
                    exited = True
                    break
        if exited:
            break
        t = knot
        if j < n_jumps and knot < horizon:
            pre = pos.copy()
            pos = pos + jump_vecs[j]
            jumps.append(JumpEvent(time=float(knot), pre=pre, post=pos.copy()))
            # jump time coincides with the last appended knot time
            positions[-1] = pos.copy()
            j += 1
            if np.linalg.norm(pos) > exit_radius:
                exited = True
                break

    return PathLedger(
        times=np.asarray(times),
        positions=np.asarray(positions),
        jumps=tuple(jumps),
        horizon=float(times[-1]),
        exit_radius=float(exit_radius),
        truncation_delta=float(delta),
    )


def sample_positive_stable(rho: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """Positive rho-stable variables with Laplace transform exp(-lambda^rho).

    Kanter's representation: S = (a(U)/W)^{(1-rho)/rho} with U uniform on
    (0, pi), W standard exponential and
    a(u) = sin((1-rho)u) sin(rho u)^{rho/(1-rho)} / sin(u)^{1/(1-rho)}.
    """
    if not 0.0 < rho < 1.0:
        raise DomainError("rho must lie in (0, 1)")
    u = rng.random(n) * math.pi
    w = rng.standard_exponential(n)
    a = (
        np.sin((1.0 - rho) * u)
        * np.sin(rho * u) ** (rho / (1.0 - rho))
        / np.sin(u) ** (1.0 / (1.0 - rho))
    )
    return (a / w) ** ((1.0 - rho) / rho)


def sample_exact_increment(model: StableModel, t: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """Exact samples of X_t - X_0 by subordination.

    X_t = B_{S_t} with B Brownian (E exp(i xi . B_s) = exp(-s|xi|^2)) and S_t
    the alpha/2-subordinator, so X_t =_d sqrt(2 S_t) N(0, I).
    """
    s = t ** (2.0 / model.alpha) * sample_positive_stable(model.alpha / 2.0, rng, n)
    return np.sqrt(2.0 * s)[:, None] * rng.standard_normal((n, model.d))


def simulate_exact_skeleton(
    model: StableModel,
    seed,
    horizon: float,
    dt: float,
    start,
    n_paths: int,
):
    """Paths on a regular grid with exact stable increments (oracle simulator).

    Returns (times (m,), positions (n_paths, m, d)).
    """
    rng = path_rng(seed) if not isinstance(seed, tuple) else path_rng(*seed)
    start = np.asarray(start, dtype=float)
    n_steps = int(round(horizon / dt))
    times = np.arange(n_steps + 1) * dt
    pos = np.empty((n_paths, n_steps + 1, model.d))
    pos[:, 0, :] = start
    for k in range(n_steps):
        pos[:, k + 1, :] = pos[:, k, :] + sample_exact_increment(model, dt, rng, n_paths)
    return times, pos


_LEDGER_MAGIC = b"SSLG"


def ledger_to_bytes(ledger: PathLedger) -> bytes:
    """Serialize to the documented little-endian binary layout.

    Header: magic 'SSLG', then '<iidddQ' = (d, n_jumps, horizon, exit_radius,
    truncation_delta, n_records).  Each record is (2 + d) float64 little-
    endian: [time | d position floats | jump-flag], flag 1.0 when the record's
    time carries a big jump (its position is the post-jump point).  The
    pre-jump points follow as n_jumps extra records [time | d floats | 2.0].
    """
    d = ledger.d
    n = len(ledger.times)
    jump_times = {float(j.time): j for j in ledger.jumps}
    out = bytearray()
    out += _LEDGER_MAGIC
    out += struct.pack(
        "<iidddQ",
        d,
        len(ledger.jumps),
        float(ledger.horizon),
        float(ledger.exit_radius),
        float(ledger.truncation_delta),
        n,
    )
    for i in range(n):
        t = float(ledger.times[i])
        flag = 1.0 if t in jump_times else 0.0
        out += struct.pack("<d", t)
        out += struct.pack(f"<{d}d", *ledger.positions[i])
        out += struct.pack("<d", flag)
    for j in ledger.jumps:
        out += struct.pack("<d", float(j.time))
        out += struct.pack(f"<{d}d", *j.pre)
        out += struct.pack("<d", 2.0)
    return bytes(out)


def ledger_from_bytes(data: bytes) -> PathLedger:
    """Inverse of :func:`ledger_to_bytes`."""
    if data[:4] != _LEDGER_MAGIC:
        raise ValueError("not a ledger record")
    off = 4
    d, n_jumps, horizon, exit_radius, delta, n = struct.unpack_from("<iidddQ", data, off)
    off += struct.calcsize("<iidddQ")
    rec = struct.Struct(f"<d{d}dd")
    times = np.empty(n)
    positions = np.empty((n, d))
    flags = np.empty(n)
    for i in range(n):
        vals = rec.unpack_from(data, off)
        off += rec.size
        times[i] = vals[0]
        positions[i] = vals[1 : 1 + d]
        flags[i] = vals[-1]
    pres = []
    for _ in range(n_jumps):
        vals = rec.unpack_from(data, off)
        off += rec.size
        pres.append((vals[0], np.asarray(vals[1 : 1 + d])))
    jumps = []
    for t, pre in pres:
        idx = int(np.searchsorted(times, t))
        jumps.append(JumpEvent(time=t, pre=pre, post=positions[idx].copy()))
    return PathLedger(
        times=times,
        positions=positions,
        jumps=tuple(jumps),
        horizon=horizon,
        exit_radius=exit_radius,
        truncation_delta=delta,
    )
