"""Additive functionals along paths and the capacitary potential.

The estimator weight for one path is

    exp( - int_0^T s_mu V(X_t) dt  -  s_F * sum_jumps F(X_{t-}, X_t)
         - int_0^T G_delta(X_t) dt ),

where the last term compensates the F-sum over the unsimulated sub-delta
jumps through the Levy-system identity (G_delta is the truncated nonlocal
field at level s_F).  E[weight] estimates E_x[exp(-A_infty)] up to the
truncation biases tracked in ``BiasBudget``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import FKAccumulator, PathBatchSpec, run_batches, simulate_chunk
from .errors import DomainError
from .jumps import (
    JumpFunctional,
    RadialTable,
    build_radial_table,
    radial_l1_norm,
    small_jump_compensator,
)
from .model import StableModel, sphere_area
from .paths import PathLedger, path_rng

__all__ = [
    "PotentialSpec",
    "FKWeight",
    "MCParams",
    "PathStats",
    "accumulate",
    "collect_path_stats",
    "capacitary_potential",
    "capacitary_potential_finite",
    "capacitary_potential_curve",
    "girsanov_check",
]


# ---------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class PotentialSpec:
    """Nonnegative potential with explicit support and integral.

    ``V`` is vectorized over (n, d) stacks.  ``bound`` is a sup bound used by
    rejection sampling; ``kind``/``params`` keep the spec declarative so it
    can cross process boundaries.
    """

    V: object
    support_radius: float
    l1_norm: float
    bound: float
    center: np.ndarray
    kind: str = "callable"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.V(x)

    @staticmethod
    def zero(d: int) -> "PotentialSpec":
        return PotentialSpec(
            V=lambda x: np.zeros(np.atleast_2d(x).shape[0]),
            support_radius=0.0,
            l1_norm=0.0,
            bound=0.0,
            center=np.zeros(d),
            kind="zero",
            params={"d": d},
        )

    @staticmethod
    def ball(d: int, height: float, radius: float, center=None) -> "PotentialSpec":
        if height < 0.0 or radius <= 0.0:
            raise DomainError("ball potential needs height >= 0 and radius > 0")
        c = np.zeros(d) if center is None else np.asarray(center, dtype=float)

        def V(x):
            x = np.atleast_2d(np.asarray(x, dtype=float))
            return height * (np.linalg.norm(x - c, axis=1) < radius)

        vol = math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * radius**d
        return PotentialSpec(
            V=V,
            support_radius=radius,
            l1_norm=height * vol,
            bound=height,
            center=c,
            kind="ball",
            params={"d": d, "height": height, "radius": radius, "center": list(c)},
        )

    @staticmethod
    def radial(d: int, func, support_radius: float, center=None, n_grid: int = 4096) -> "PotentialSpec":
        """V(x) = func(|x - center|), func vanishing beyond support_radius."""
        c = np.zeros(d) if center is None else np.asarray(center, dtype=float)
        rg = np.linspace(0.0, support_radius, n_grid)
        fv = np.asarray(func(rg), dtype=float)
        if np.any(fv < 0.0):
            raise DomainError("potential must be nonnegative")

        def V(x):
            x = np.atleast_2d(np.asarray(x, dtype=float))
            r = np.linalg.norm(x - c, axis=1)
            return np.interp(r, rg, fv, right=0.0)

        l1 = float(sphere_area(d) * np.trapezoid(fv * rg ** (d - 1), rg))
        return PotentialSpec(
            V=V,
            support_radius=float(support_radius),
            l1_norm=l1,
            bound=float(fv.max()),
            center=c,
            kind="radial",
            params={"d": d, "grid": rg.tolist(), "values": fv.tolist(), "center": list(c)},
        )

    @staticmethod
    def cube(d: int, func, side: float, center=None, n_quad: int = 24) -> "PotentialSpec":
        """V = func on the cube of given side, zero outside."""
        c = np.zeros(d) if center is None else np.asarray(center, dtype=float)
        half = 0.5 * side

        def V(x):
            x = np.atleast_2d(np.asarray(x, dtype=float))
            inside = np.all(np.abs(x - c) <= half, axis=1)
            vals = np.where(inside, np.maximum(np.asarray(func(x), dtype=float), 0.0), 0.0)
            return vals

        gl_n, gl_w = np.polynomial.legendre.leggauss(n_quad)
        axes = [c[k] + half * gl_n for k in range(d)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        wts = gl_w
        for _ in range(d - 1):
            wts = np.multiply.outer(wts, gl_w)
        wts = wts.reshape(-1) * half**d
        vals = np.maximum(np.asarray(func(mesh), dtype=float), 0.0)
        l1 = float(np.dot(wts, vals))
        bound = float(vals.max()) if vals.size else 0.0
        return PotentialSpec(
            V=V,
            support_radius=float(np.linalg.norm(c) + half * math.sqrt(d)),
            l1_norm=l1,
            bound=bound * 1.05 + 1e-12,
            center=c,
            kind="cube",
            params={"d": d, "side": side, "center": list(c)},
        )

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw x ~ V(x)/l1_norm dx (rejection inside the support)."""
        if self.l1_norm <= 0.0:
            raise DomainError("cannot sample from a null potential")
        d = len(self.center)
        out = np.empty((n, d))
        have = 0
        while have < n:
            m = max(2 * (n - have), 64)
            if self.kind == "cube":
                half = 0.5 * self.params["side"]
                cand = self.center + (rng.random((m, d)) * 2.0 - 1.0) * half
            else:
                # uniform in the support ball
                dirs = rng.standard_normal((m, d))
                dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
                radii = self.support_radius * rng.random(m) ** (1.0 / d)
                cand = self.center + dirs * radii[:, None]
            acc = rng.random(m) * self.bound < self.V(cand)
            take = cand[acc][: n - have]
            out[have : have + len(take)] = take
            have += len(take)
        return out


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class FKWeight:
    """Components of one path weight; all nonnegative, weight in (0, 1]."""

    a_mu: float
    jump_sum_big: float
    compensator_small: float

    @property
    def weight(self) -> float:
        return math.exp(-self.a_mu - self.jump_sum_big - self.compensator_small)


def accumulate(
    ledger: PathLedger,
    pot: PotentialSpec | None,
    jf: JumpFunctional | None,
    scale_mu: float = 1.0,
    scale_F: float = 1.0,
    comp_table: RadialTable | None = None,
) -> FKWeight:
    """Reference (ledger-based) evaluation of the additive functional.

    Trapezoid over the skeleton with the integrand's left limit at recorded
    jump times, so discontinuities of V at jumps integrate correctly.
    """
    if scale_mu < 0.0 or scale_F < 0.0:
        raise DomainError("scales must be nonnegative")
    times = ledger.times
    pos = ledger.positions
    jumps_by_time = {float(j.time): j for j in ledger.jumps}

    def g_of(points):
        total = np.zeros(points.shape[0])
        if pot is not None and scale_mu > 0.0:
            total += scale_mu * np.asarray(pot(points), dtype=float)
        return total

    comp_of = None
    if jf is not None and scale_F > 0.0:
        if comp_table is None:
            raise DomainError(
                "accumulate needs comp_table when a jump functional is present; "
                "build one with build_radial_table(model, jf, scale_F, kind='exp', "
                "r_cut=ledger.truncation_delta)"
            )
        comp_of = lambda points: comp_table(np.linalg.norm(points, axis=1))

    a_mu = 0.0
    comp = 0.0
    left_g = g_of(pos[:1])[0]
    left_c = comp_of(pos[:1])[0] if comp_of is not None else 0.0
    for i in range(1, len(times)):
        dt = times[i] - times[i - 1]
        t = float(times[i])
        jev = jumps_by_time.get(t)
        right_point = jev.pre[None, :] if jev is not None else pos[i : i + 1]
        right_g = g_of(right_point)[0]
        a_mu += 0.5 * dt * (left_g + right_g)
        if comp_of is not None:
            right_c = comp_of(right_point)[0]
            comp += 0.5 * dt * (left_c + right_c)
            left_c = comp_of(pos[i : i + 1])[0] if jev is not None else right_c
        left_g = g_of(pos[i : i + 1])[0] if jev is not None else right_g

    jsum = 0.0
    if jf is not None and scale_F > 0.0:
        for j in ledger.jumps:
            jsum += scale_F * float(jf.eval(j.pre, j.post))

    return FKWeight(a_mu=float(a_mu), jump_sum_big=float(jsum), compensator_small=float(comp))


# ---------------------------------------------------------------------------
# batch statistics


@dataclass(frozen=True)
class MCParams:
    n_paths: int
    delta: float
    dt_max: float
    seed: int
    horizon: float | None = None
    exit_radius: float | None = None
    chunk: int = 8192

    def __post_init__(self):
        if self.n_paths < 1:
            raise DomainError("n_paths must be at least 1")
        if self.delta <= 0.0 or self.dt_max <= 0.0:
            raise DomainError("delta and dt_max must be positive")


@dataclass
class PathStats:
    """Per-path sufficient statistics for weight assembly at any scale.

    ``comp[k]`` is the compensator integral for comp_scales[k]; ``fone`` the
    integral of F1 along the path (for the pure-PCAF sandwich weights);
    ``occ`` the occupation time of the support ball (bias bookkeeping).
    """

    a_mu: np.ndarray
    jsum: np.ndarray
    comp: np.ndarray
    comp_scales: tuple
    fone: np.ndarray | None
    occ: np.ndarray | None
    exited: np.ndarray
    exit_time: np.ndarray
    extra: np.ndarray | None = None
    logm: np.ndarray | None = None
    snapshots: dict | None = None

    def martingale_weights(self):
        """exp(-sum F - sum log m); population mean exactly 1."""
        if self.logm is None:
            raise DomainError("martingale compensation was not collected")
        return np.exp(-self.jsum - self.logm)

    def weights(self, scale_mu: float, scale_F: float | None = None, comp_index: int | None = None):
        log_w = -scale_mu * self.a_mu
        if scale_F is not None:
            if comp_index is None:
                comp_index = self.comp_scales.index(scale_F)
            log_w = log_w - scale_F * self.jsum - self.comp[comp_index]
        return np.exp(log_w)

    def pcaf_weights(self, scale: float):
        if self.fone is None:
            raise DomainError("fone was not collected")
        return np.exp(-scale * (self.a_mu + self.fone))


def _stats_tables(model, jf, comp_scales, delta, want_fone, want_occ, extra_tables):
    tables = []
    names = []
    for s in comp_scales:
        tables.append(build_radial_table(model, jf, s, kind="exp", r_cut=delta))
        names.append(("comp", s))
    if want_fone:
        tables.append(build_radial_table(model, jf, 1.0, kind="exp"))
        names.append(("fone", 1.0))
    if want_occ:
        rmax = jf.support_radius if jf is not None else 0.0
        grid = np.array([0.0, rmax, rmax * (1 + 1e-9)])
        tables.append(RadialTable(grid=grid, values=np.array([1.0, 1.0, 0.0])))
        names.append(("occ", 0.0))
    for t in extra_tables:
        tables.append(t)
        names.append(("extra", len(names)))
    return tables, names


def collect_path_stats(
    model: StableModel,
    starts: np.ndarray,
    mc: MCParams,
    pot: PotentialSpec | None = None,
    jf: JumpFunctional | None = None,
    comp_scales: tuple = (1.0,),
    want_fone: bool = False,
    want_occ: bool = False,
    want_martingale: bool = False,
    extra_tables: tuple = (),
    snapshot_times: tuple = (),
) -> PathStats:
    """Simulate one ensemble and stream all requested functionals.

    ``occ`` measures time spent within the jump-functional support ball.
    """
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    if starts.shape[0] == 1 and mc.n_paths > 1:
        starts = np.broadcast_to(starts, (mc.n_paths, model.d)).copy()
    if starts.shape[0] != mc.n_paths:
        raise DomainError("starts must match n_paths")
    if mc.horizon is None or mc.exit_radius is None:
        raise DomainError("collect_path_stats needs explicit horizon and exit_radius")

    if jf is not None:
        tables, names = _stats_tables(
            model, jf, tuple(comp_scales), mc.delta, want_fone, want_occ, extra_tables
        )
    else:
        tables, names = list(extra_tables), [("extra", i) for i in range(len(extra_tables))]
        comp_scales = ()

    spec = PathBatchSpec(
        horizon=mc.horizon,
        exit_radius=mc.exit_radius,
        delta=mc.delta,
        dt_max=mc.dt_max,
        snapshot_times=tuple(snapshot_times),
    )
    v_func = pot if (pot is not None and pot.l1_norm > 0.0) else None
    mart_table = None
    if want_martingale:
        if jf is None:
            raise DomainError("martingale compensation needs a jump functional")
        f1_t = build_radial_table(model, jf, 1.0, kind="exp")
        g_t = build_radial_table(model, jf, 1.0, kind="exp", r_cut=mc.delta)
        mart_table = RadialTable(grid=f1_t.grid, values=f1_t.values - g_t(f1_t.grid))

    n = mc.n_paths
    n_snap = len(snapshot_times)
    a_mu = np.zeros(n)
    jsum = np.zeros(n)
    tab = np.zeros((len(tables), n))
    logm = np.zeros(n)
    exited = np.zeros(n, dtype=bool)
    exit_time = np.zeros(n)
    snaps = (
        {"a_mu": np.zeros((n_snap, n)), "tab": np.zeros((n_snap, len(tables), n)), "jsum": np.zeros((n_snap, n))}
        if n_snap
        else None
    )

    workers = int(os.environ.get("STABLESCATTER_WORKERS", "1") or "1")
    chunks = list(range(0, n, mc.chunk))
    lam = model.big_jump_rate(mc.delta)
    if workers > 1 and len(chunks) > 1 and _declarative(pot, jf):
        payloads = [
            _chunk_payload(model, starts, mc, pot, jf, spec, tables, mart_table, ci, lo)
            for ci, lo in enumerate(chunks)
        ]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outs = list(ex.map(_chunk_worker, payloads))
    else:
        outs = []
        for ci, lo in enumerate(chunks):
            hi = min(n, lo + mc.chunk)
            rng = path_rng(mc.seed, 1, ci)
            acc = FKAccumulator(
                hi - lo, model.d, v_func=v_func, tables=tables, jf=jf,
                mart_table=mart_table, big_jump_rate=lam, n_snapshots=n_snap,
            )
            frozen, et = simulate_chunk(model, starts[lo:hi], spec, [acc], rng)
            outs.append(_acc_export(acc, frozen, et, n_snap))

    for (ci, lo), out in zip(enumerate(chunks), outs):
        hi = min(n, lo + mc.chunk)
        sl = slice(lo, hi)
        a_mu[sl] = out["a_mu"]
        jsum[sl] = out["jsum"]
        tab[:, sl] = out["tab"]
        logm[sl] = out["logm"]
        exited[sl] = out["exited"]
        exit_time[sl] = out["exit_time"]
        if snaps is not None:
            snaps["a_mu"][:, sl] = out["snap_a_mu"]
            snaps["tab"][:, :, sl] = out["snap_tab"]
            snaps["jsum"][:, sl] = out["snap_jsum"]

    idx = {}
    for k, (name, key) in enumerate(names):
        idx.setdefault(name, []).append(k)
    comp_rows = idx.get("comp", [])
    fone_row = idx.get("fone", [None])[0]
    occ_row = idx.get("occ", [None])[0]
    extra_rows = idx.get("extra", [])

    return PathStats(
        a_mu=a_mu,
        jsum=jsum,
        comp=tab[comp_rows] if comp_rows else np.zeros((0, n)),
        comp_scales=tuple(comp_scales),
        fone=tab[fone_row] if fone_row is not None else None,
        occ=tab[occ_row] if occ_row is not None else None,
        exited=exited,
        exit_time=exit_time,
        extra=tab[extra_rows] if extra_rows else None,
        logm=logm if want_martingale else None,
        snapshots=snaps,
    )


def _acc_export(acc: FKAccumulator, frozen, et, n_snap):
    out = {
        "a_mu": acc.a_mu,
        "jsum": acc.jsum,
        "tab": acc.tab,
        "logm": acc.logm,
        "exited": frozen,
        "exit_time": et,
    }
    if n_snap:
        out["snap_a_mu"] = acc.snap_a_mu
        out["snap_tab"] = acc.snap_tab
        out["snap_jsum"] = acc.snap_jsum
    return out


def _declarative(pot, jf) -> bool:
    pot_ok = pot is None or pot.kind in ("zero", "ball", "radial")
    jf_ok = jf is None or isinstance(jf, JumpFunctional)
    return pot_ok and jf_ok


def _chunk_payload(model, starts, mc, pot, jf, spec, tables, mart_table, ci, lo):
    hi = min(mc.n_paths, lo + mc.chunk)
    return {
        "d": model.d,
        "alpha": model.alpha,
        "starts": starts[lo:hi],
        "spec": (spec.horizon, spec.exit_radius, spec.delta, spec.dt_max, spec.snapshot_times),
        "tables": [(t.grid, t.values) for t in tables],
        "mart_table": None if mart_table is None else (mart_table.grid, mart_table.values),
        "pot": None if pot is None else (pot.kind, pot.params),
        "jf": None if jf is None else jf.to_dict(),
        "seed": mc.seed,
        "ci": ci,
        "n_snap": len(spec.snapshot_times),
    }


def _chunk_worker(payload):
    from .model import make_model

    model = make_model(payload["d"], payload["alpha"])
    h, er, delta, dtm, snaps = payload["spec"]
    spec = PathBatchSpec(horizon=h, exit_radius=er, delta=delta, dt_max=dtm, snapshot_times=snaps)
    tables = [RadialTable(grid=g, values=v) for g, v in payload["tables"]]
    pot = _pot_from(payload["pot"])
    jf = JumpFunctional.from_dict(payload["jf"]) if payload["jf"] else None
    starts = payload["starts"]
    rng = path_rng(payload["seed"], 1, payload["ci"])
    mt = payload["mart_table"]
    acc = FKAccumulator(
        starts.shape[0],
        model.d,
        v_func=pot if (pot is not None and pot.l1_norm > 0) else None,
        tables=tables,
        jf=jf,
        mart_table=None if mt is None else RadialTable(grid=mt[0], values=mt[1]),
        big_jump_rate=model.big_jump_rate(delta),
        n_snapshots=payload["n_snap"],
    )
    frozen, et = simulate_chunk(model, starts, spec, [acc], rng)
    return _acc_export(acc, frozen, et, payload["n_snap"])


def _pot_from(spec):
    if spec is None:
        return None
    kind, params = spec
    if kind == "zero":
        return PotentialSpec.zero(params["d"])
    if kind == "ball":
        return PotentialSpec.ball(params["d"], params["height"], params["radius"], params.get("center"))
    if kind == "radial":
        rg = np.asarray(params["grid"])
        fv = np.asarray(params["values"])
        return PotentialSpec.radial(
            params["d"], lambda r: np.interp(r, rg, fv, right=0.0), rg[-1], params.get("center")
        )
    raise DomainError(f"non-declarative potential kind {kind!r}")


# ---------------------------------------------------------------------------
# capacitary potentials


def capacitary_potential(
    model: StableModel,
    pot: PotentialSpec | None,
    jf: JumpFunctional | None,
    x,
    n_paths: int,
    horizon: float,
    exit_radius: float,
    delta: float = 0.04,
    dt_max: float = 0.02,
    seed: int = 0,
    scale_mu: float = 1.0,
    scale_F: float = 1.0,
):
    """U(x) = 1 - E_x[weight]; returns (value, stderr)."""
    mc = MCParams(
        n_paths=n_paths, delta=delta, dt_max=dt_max, seed=seed,
        horizon=horizon, exit_radius=exit_radius,
    )
    stats = collect_path_stats(
        model, np.asarray(x, dtype=float)[None, :], mc, pot=pot, jf=jf,
        comp_scales=(scale_F,) if jf is not None else (),
    )
    w = stats.weights(scale_mu, scale_F if jf is not None else None, 0 if jf is not None else None)
    value = 1.0 - float(w.mean())
    stderr = float(w.std(ddof=1) / math.sqrt(len(w))) if len(w) > 1 else 0.0
    return value, stderr


def capacitary_potential_finite(
    model, pot, jf, x, T: float, n_paths: int,
    delta: float = 0.04, dt_max: float = 0.02, seed: int = 0,
    scale_mu: float = 1.0, scale_F: float = 1.0,
):
    """Finite-horizon potential: horizon exactly T, no exit truncation."""
    if T <= 0.0:
        raise DomainError("T must be positive")
    return capacitary_potential(
        model, pot, jf, x, n_paths, horizon=T, exit_radius=1e300,
        delta=delta, dt_max=dt_max, seed=seed, scale_mu=scale_mu, scale_F=scale_F,
    )


def capacitary_potential_curve(
    model, pot, jf, x, t_grid, n_paths: int,
    delta: float = 0.04, dt_max: float = 0.02, seed: int = 0,
    scale_mu: float = 1.0, scale_F: float = 1.0,
):
    """U^T(x) along an increasing t_grid from one ensemble (shared paths)."""
    t_grid = sorted(float(t) for t in t_grid)
    mc = MCParams(
        n_paths=n_paths, delta=delta, dt_max=dt_max, seed=seed,
        horizon=t_grid[-1], exit_radius=1e300,
    )
    stats = collect_path_stats(
        model, np.asarray(x, dtype=float)[None, :], mc, pot=pot, jf=jf,
        comp_scales=(scale_F,) if jf is not None else (),
        snapshot_times=tuple(t_grid),
    )
    out = []
    for k, t in enumerate(t_grid):
        log_w = -scale_mu * stats.snapshots["a_mu"][k]
        if jf is not None:
            log_w = log_w - scale_F * stats.snapshots["jsum"][k] - stats.snapshots["tab"][k, 0]
        w = np.exp(log_w)
        out.append((t, 1.0 - float(w.mean()), float(w.std(ddof=1) / math.sqrt(len(w)))))
    return out


# ---------------------------------------------------------------------------
# Levy-system / martingale consistency


def girsanov_check(
    model: StableModel,
    jf: JumpFunctional,
    x_grid,
    n_paths: int,
    horizon: float,
    exit_radius: float,
    delta: float = 0.04,
    dt_max: float = 0.02,
    seed: int = 0,
):
    """Consistency of explicit jumps with their Levy-system compensators.

    For V = 0 and each start x, computes three quantities:

    * ``est_explicit``  E_x[e^{-sum F}] with explicit big jumps plus the
      small-jump compensator (seed stream A);
    * ``est_reweighted`` the same expectation estimated on independent paths
      (stream B) as e^{-int F1} reweighted by the exact per-jump Girsanov
      martingale prod_j e^{-F(pre_j, post_j)} / E_Z[e^{-F(pre_j, pre_j + Z)}];
    * ``martingale_mean`` the mean of that martingale on stream A, whose
      population value is exactly 1 for the simulated process (the testable
      martingale content of the Levy-system identity).

    Returns a list of row dicts.
    """
    f1_table = build_radial_table(model, jf, 1.0, kind="exp")
    rows = []
    for i, x in enumerate(x_grid):
        x = np.asarray(x, dtype=float)
        mc_a = MCParams(n_paths=n_paths, delta=delta, dt_max=dt_max,
                        seed=seed + 1000 * i, horizon=horizon, exit_radius=exit_radius)
        st_a = collect_path_stats(
            model, x[None, :], mc_a, jf=jf, comp_scales=(1.0,),
            want_martingale=True,
        )
        w_a = st_a.weights(0.0, 1.0, 0)
        mart_a = st_a.martingale_weights()
        mc_b = MCParams(n_paths=n_paths, delta=delta, dt_max=dt_max,
                        seed=seed + 1000 * i + 500, horizon=horizon, exit_radius=exit_radius)
        st_b = collect_path_stats(
            model, x[None, :], mc_b, jf=jf, comp_scales=(),
            want_martingale=True, extra_tables=(f1_table,),
        )
        w_b = np.exp(-st_b.extra[0]) * st_b.martingale_weights()
        rows.append(
            {
                "x": x,
                "est_explicit": float(w_a.mean()),
                "se_explicit": float(w_a.std(ddof=1) / math.sqrt(len(w_a))),
                "est_reweighted": float(w_b.mean()),
                "se_reweighted": float(w_b.std(ddof=1) / math.sqrt(len(w_b))),
                "martingale_mean": float(mart_a.mean()),
                "martingale_se": float(mart_a.std(ddof=1) / math.sqrt(len(mart_a))),
            }
        )
    return rows
