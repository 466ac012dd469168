"""The jump-interaction function F and its induced nonlocal data.

The built-in family is the two-ball construction: with phi a nonnegative
strictly increasing profile, phi(0) = 0, phi(t) = o(t^alpha),

    F(x, y) = phi(|x-y|) * w(x, y),   |x - y| < Rprime,
    w(x, y) = 1/2 * ( 1_{B(0,R)}(x) + 1_{B(0,R)}(y)
                      + 1_{ann}(x) 1_{ann}(y) ),  ann = B(0,R+Rprime) \\ B(0,R),

which is symmetric, vanishes on the diagonal, takes the weights 1 (both
points in the inner ball), 1/2 (mixed and annulus-annulus cases) and 0, and
vanishes as soon as either argument leaves B(0, R+Rprime).

The induced field F^(p)1(x) = c_levy * int (1 - exp(-p F(x,y))) |x-y|^{-d-alpha} dy
reduces, for this family, to a 1-D radial integral whose angular factor is an
exact spherical-cap measure; the radial singularity at 0 is integrable
because phi = o(t^alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import DomainError, QuadratureError
from .model import StableModel, sphere_area

__all__ = [
    "PhiProfile",
    "JumpFunctional",
    "GridJumpFunctional",
    "ScaledShiftedJumpFunctional",
    "eval_F",
    "f_p_one",
    "hat_f_one",
    "RadialTable",
    "build_radial_table",
    "FOneField",
    "build_f_one_field",
    "PsiReport",
    "check_psi_condition",
]


# ---------------------------------------------------------------------------
# profile functions


PHI_KINDS = ("power", "power_ratio", "log", "log_iter")


@dataclass(frozen=True)
class PhiProfile:
    """1-D profile phi(t); kinds: power t^beta, power_ratio t^beta/(1+t)^beta,
    log log(1+t^beta) and its n-fold iterate."""

    kind: str
    beta: float
    n_iter: int = 1

    def __post_init__(self):
        if self.kind not in PHI_KINDS:
            raise DomainError(f"unknown phi kind {self.kind!r}")
        if self.beta <= 0.0:
            raise DomainError("beta must be positive")
        if self.kind == "log_iter" and self.n_iter < 2:
            raise DomainError("log_iter requires n_iter >= 2")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return t**self.beta
        if self.kind == "power_ratio":
            return t**self.beta / (1.0 + t) ** self.beta
        # log and iterates
        v = np.log1p(t**self.beta)
        n = self.n_iter if self.kind == "log_iter" else 1
        for _ in range(n - 1):
            v = np.log1p(v**self.beta)
        return v

    def inverse(self, u: float, hi: float = 1e6) -> float:
        """Inverse by bisection (phi is strictly increasing)."""
        if u <= 0.0:
            return 0.0
        lo, hi_ = 0.0, 1.0
        while float(self(hi_)) < u:
            hi_ *= 2.0
            if hi_ > hi:
                return hi
        for _ in range(200):
            mid = 0.5 * (lo + hi_)
            if float(self(mid)) < u:
                lo = mid
            else:
                hi_ = mid
        return 0.5 * (lo + hi_)


# ---------------------------------------------------------------------------
# the two-ball jump functional


@dataclass(frozen=True)
class JumpFunctional:
    """Symmetric bounded jump interaction of the two-ball family.

    ``bound`` is the conservative sup bound phi(2(R+Rp)) over the support's
    largest separation; the actual sup is phi(Rp).
    """

    phi: PhiProfile
    R: float
    Rp: float
    center: np.ndarray = field(default_factory=lambda: np.zeros(0))
    kind: str = "example21"

    def __post_init__(self):
        if self.R <= 0.0 or self.Rp <= 0.0:
            raise DomainError("R and Rprime must be positive")

    @property
    def bound(self) -> float:
        return float(self.phi(2.0 * (self.R + self.Rp)))

    @property
    def interaction_range(self) -> float:
        return self.Rp

    @property
    def support_radius(self) -> float:
        """F(x, .) vanishes identically once |x - center| >= R + Rp."""
        return self.R + self.Rp

    def _center(self, d: int) -> np.ndarray:
        if self.center.size == 0:
            return np.zeros(d)
        return self.center

    def validate_for(self, model: StableModel) -> None:
        """Check phi(t) = o(t^alpha) numerically on a decreasing grid."""
        ts = 10.0 ** np.arange(-1, -9, -1.0)
        ratios = np.asarray(self.phi(ts)) / ts**model.alpha
        if not (ratios[-1] < 1e-3 * max(ratios[0], 1e-300) or ratios[-1] < 1e-12):
            raise DomainError(
                "phi(t)/t^alpha does not vanish as t -> 0; need phi = o(t^alpha)"
            )

    def region_weights(self, x) -> np.ndarray:
        """The separable weight ingredients: returns (inner flag, annulus flag)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        rho = np.linalg.norm(x - self._center(x.shape[1]), axis=1)
        inner = rho < self.R
        ann = (rho >= self.R) & (rho < self.R + self.Rp)
        return inner, ann

    def eval(self, x, y):
        """Vectorized F(x, y); accepts (d,) vectors or (n, d) stacks."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        scalar = x.ndim == 1
        x2 = np.atleast_2d(x)
        y2 = np.atleast_2d(y)
        r = np.linalg.norm(x2 - y2, axis=1)
        ux, ax = self.region_weights(x2)
        uy, ay = self.region_weights(y2)
        w = 0.5 * (ux.astype(float) + uy.astype(float) + (ax & ay).astype(float))
        vals = np.where((r > 0.0) & (r < self.Rp), w * self.phi(r), 0.0)
        return float(vals[0]) if scalar else vals

    def to_dict(self) -> dict:
        return {
            "kind": "example21",
            "phi_kind": self.phi.kind,
            "beta": self.phi.beta,
            "n_iter": self.phi.n_iter,
            "R": self.R,
            "Rp": self.Rp,
            "center": list(self.center),
        }

    @staticmethod
    def from_dict(spec: dict) -> "JumpFunctional":
        return JumpFunctional(
            phi=PhiProfile(spec["phi_kind"], spec["beta"], spec.get("n_iter", 1)),
            R=spec["R"],
            Rp=spec["Rp"],
            center=np.asarray(spec.get("center", []), dtype=float),
        )


def eval_F(jf, x, y):
    """F(x, y) for any jump-functional object."""
    return jf.eval(x, y)


# ---------------------------------------------------------------------------
# angular cap measures

def _cap_cdf(d: int, u) -> np.ndarray:
    """Measure of {theta in S^{d-1} : theta . e <= u}, absolute (total = omega_{d-1})."""
    u = np.clip(np.asarray(u, dtype=float), -1.0, 1.0)
    if d == 1:
        # S^0 = {-1, +1} with counting measure
        return np.where(u >= 1.0, 2.0, np.where(u >= -1.0, 1.0, 0.0))
    a = 0.5 * (d - 1)
    return sphere_area(d) * special.betainc(a, a, 0.5 * (1.0 + u))


def _sphere_thresholds(rho: float, r: float, radius: float) -> float:
    """Threshold u* with |x + r theta| < radius iff theta-dot-xhat < u*."""
    if rho == 0.0:
        return math.inf if r < radius else -math.inf
    return (radius**2 - rho**2 - r**2) / (2.0 * rho * r)


def _angular_pieces(jf: JumpFunctional, d: int, rho: float, r: np.ndarray):
    """For |x| = rho and separations r, split the sphere of directions into
    the three target regions of |y| and return their absolute measures.

    Returns (m_inner, m_ann, m_out) arrays; their sum is omega_{d-1}.
    """
    omega = sphere_area(d)
    uR = np.array([_sphere_thresholds(rho, float(ri), jf.R) for ri in np.atleast_1d(r)])
    uRRp = np.array(
        [_sphere_thresholds(rho, float(ri), jf.R + jf.Rp) for ri in np.atleast_1d(r)]
    )
    m_inner = _cap_cdf(d, uR)
    m_upto_ann = _cap_cdf(d, uRRp)
    m_ann = np.clip(m_upto_ann - m_inner, 0.0, omega)
    m_out = np.clip(omega - m_upto_ann, 0.0, omega)
    return m_inner, m_ann, m_out


def _radial_integrand_factory(model: StableModel, jf: JumpFunctional, p: float, x, kind: str):
    """g(r) with value = c_levy * int_0^rcut r^{-1-alpha} g(r) dr.

    kind 'exp' uses 1 - e^{-p F}; kind 'linear' uses p F (the hat field).
    """
    d = model.d
    x = np.asarray(x, dtype=float)
    rho = float(np.linalg.norm(x - jf._center(d)))
    ux = rho < jf.R
    ax = (rho >= jf.R) and (rho < jf.R + jf.Rp)

    def g(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        m_inner, m_ann, m_out = _angular_pieces(jf, d, rho, r)
        phi_r = np.asarray(jf.phi(r), dtype=float)
        # weights by destination region
        w_inner = 0.5 * (ux + 1.0)
        w_ann = 0.5 * (ux + (1.0 if (ax) else 0.0))
        w_out = 0.5 * ux
        out = np.zeros_like(r)
        for m, w in ((m_inner, w_inner), (m_ann, w_ann), (m_out, w_out)):
            if w <= 0.0:
                continue
            if kind == "exp":
                out += m * (-np.expm1(-p * w * phi_r))
            else:
                out += m * (p * w * phi_r)
        return out

    return g, rho


def _singular_radial_quad(g, alpha: float, r_lo: float, r_hi: float, breaks, tol: float):
    """int_{r_lo}^{r_hi} r^{-1-alpha} g(r) dr; ``breaks`` carries the p phi(r0)=1
    split point and the kinks of the angular cap measures."""
    points = sorted({b for b in breaks if r_lo < b < r_hi}) or None

    def f(r):
        return float(g(r)[0]) * r ** (-1.0 - alpha)

    val, err = integrate.quad(
        f, r_lo, r_hi, points=points, limit=500, epsabs=0.1 * tol, epsrel=1e-12,
    )
    if err > tol:
        raise QuadratureError(
            f"radial quadrature error {err:.2e} exceeds tolerance {tol:.2e}"
        )
    return val


def _cap_kinks(jf: JumpFunctional, rho: float):
    """Separations where a destination sphere is tangent to a region boundary."""
    ks = []
    for radius in (jf.R, jf.R + jf.Rp):
        ks.extend([abs(radius - rho), radius + rho])
    return ks


def f_p_one(model: StableModel, jf, p: float, x, tol: float = 1e-9) -> float:
    """F^(p)1(x) = c_levy * int (1 - e^{-p F(x,y)}) |x-y|^{-d-alpha} dy.

    Exact angular reduction for the two-ball family; masked polar quadrature
    for generic functionals (see their f_p_one_generic).
    """
    if p < 0.0:
        raise DomainError("p must be nonnegative")
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if p == 0.0:
        return 0.0
    if not isinstance(jf, JumpFunctional):
        return f_p_one_generic(model, jf, p, x, kind="exp", tol=tol)
    g, rho = _radial_integrand_factory(model, jf, p, x, "exp")
    if rho >= jf.R + jf.Rp:
        return 0.0
    r0 = min(jf.phi.inverse(1.0 / p), jf.Rp)
    breaks = [r0] + _cap_kinks(jf, rho)
    val = _singular_radial_quad(g, model.alpha, 0.0, jf.Rp, breaks, tol / model.c_levy)
    return model.c_levy * val


def hat_f_one(model: StableModel, jf, x, tol: float = 1e-9) -> float:
    """F-hat 1(x) = c_levy * int F(x,y) |x-y|^{-d-alpha} dy."""
    if not isinstance(jf, JumpFunctional):
        return f_p_one_generic(model, jf, 1.0, x, kind="linear", tol=tol)
    g, rho = _radial_integrand_factory(model, jf, 1.0, x, "linear")
    if rho >= jf.R + jf.Rp:
        return 0.0
    r0 = min(jf.phi.inverse(1.0), jf.Rp)
    breaks = [r0] + _cap_kinks(jf, rho)
    val = _singular_radial_quad(g, model.alpha, 0.0, jf.Rp, breaks, tol / model.c_levy)
    return model.c_levy * val


def small_jump_compensator(model: StableModel, jf, p: float, x, delta: float, tol: float = 1e-9) -> float:
    """G_delta(x) = c_levy * int_{|z|<=delta} (1 - e^{-p F(x,x+z)}) |z|^{-d-alpha} dz."""
    if p == 0.0:
        return 0.0
    if not isinstance(jf, JumpFunctional):
        return f_p_one_generic(model, jf, p, x, kind="exp", tol=tol, r_cut=delta)
    g, rho = _radial_integrand_factory(model, jf, p, x, "exp")
    if rho >= jf.R + jf.Rp:
        return 0.0
    r_hi = min(delta, jf.Rp)
    r0 = min(jf.phi.inverse(1.0 / p), r_hi)
    breaks = [r0] + _cap_kinks(jf, rho)
    val = _singular_radial_quad(g, model.alpha, 0.0, r_hi, breaks, tol / model.c_levy)
    return model.c_levy * val


# ---------------------------------------------------------------------------
# generic (masked) functionals: user grids and rescaled/shifted wrappers


def _angular_grid(d: int, n: int, seed: int = 171) -> np.ndarray:
    """Deterministic direction set: exact for d=1, uniform angles for d=2,
    Fibonacci sphere for d=3, seeded quasi-random otherwise."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        a = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    if d == 3:
        k = np.arange(n) + 0.5
        phi = math.pi * (1.0 + math.sqrt(5.0)) * k
        z = 1.0 - 2.0 * k / n
        s = np.sqrt(1.0 - z * z)
        return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    v = rng.standard_normal((n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def f_p_one_generic(
    model: StableModel,
    jf,
    p: float,
    x,
    kind: str = "exp",
    tol: float = 1e-6,
    r_cut: float | None = None,
    n_angles: int = 512,
    n_radial: int = 160,
) -> float:
    """Masked polar quadrature of the nonlocal field for arbitrary jump
    functionals (deterministic angular grid, graded radial grid).

    Accuracy is limited by the angular resolution; intended for scan-style
    consumers, not for tight oracle comparisons.
    """
    x = np.asarray(x, dtype=float)
    d = model.d
    rng_max = jf.interaction_range if r_cut is None else min(jf.interaction_range, r_cut)
    if rng_max <= 0.0:
        return 0.0
    thetas = _angular_grid(d, n_angles)
    n_th = thetas.shape[0]
    # graded radial grid toward 0 (integrand ~ p phi(r) r^{-1-alpha})
    u = (np.arange(n_radial) + 0.5) / n_radial
    radii = rng_max * u**3
    weights = rng_max * 3.0 * u**2 / n_radial
    total = 0.0
    for r, w in zip(radii, weights):
        y = x[None, :] + r * thetas
        fv = jf.eval(np.broadcast_to(x, y.shape), y)
        if kind == "exp":
            vals = -np.expm1(-p * fv)
        else:
            vals = p * fv
        ang_mean = float(vals.mean())
        total += w * r ** (-1.0 - model.alpha) * ang_mean * sphere_area(d)
    return model.c_levy * total


class GridJumpFunctional:
    """User-tabulated F on a tensor grid over a box, multilinearly
    interpolated and symmetrized by averaging F(x,y) and F(y,x)."""

    kind = "user-grid"

    def __init__(self, axes, values, interaction_range):
        from scipy.interpolate import RegularGridInterpolator

        values = np.asarray(values, dtype=float)
        if np.any(values < 0.0):
            raise DomainError("user grid values must be nonnegative")
        self.axes = [np.asarray(a, dtype=float) for a in axes]
        self.d = len(self.axes) // 2
        if len(self.axes) != 2 * self.d:
            raise DomainError("need one axis per coordinate of (x, y)")
        self._interp = RegularGridInterpolator(
            tuple(self.axes), values, bounds_error=False, fill_value=0.0
        )
        self.interaction_range = float(interaction_range)
        self.bound = float(values.max())
        lo = np.array([a[0] for a in self.axes[: self.d]])
        hi = np.array([a[-1] for a in self.axes[: self.d]])
        self.support_radius = float(np.linalg.norm(np.maximum(np.abs(lo), np.abs(hi))))

    def eval(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        scalar = x.ndim == 1
        x2 = np.atleast_2d(x)
        y2 = np.atleast_2d(y)
        xy = np.concatenate([x2, y2], axis=1)
        yx = np.concatenate([y2, x2], axis=1)
        vals = 0.5 * (self._interp(xy) + self._interp(yx))
        vals = np.maximum(vals, 0.0)
        r = np.linalg.norm(x2 - y2, axis=1)
        vals = np.where(r == 0.0, 0.0, vals)
        return float(vals[0]) if scalar else vals


class ScaledShiftedJumpFunctional:
    """F_{r,xi}(x, y) = F(r x + xi, r y + xi), masked to the unit cube pairs."""

    kind = "scaled-shifted"

    def __init__(self, base, r: float, xi, mask_unit_cube: bool = True):
        if r <= 0.0:
            raise DomainError("scale r must be positive")
        self.base = base
        self.r = float(r)
        self.xi = np.asarray(xi, dtype=float)
        self.mask_unit_cube = mask_unit_cube
        self.interaction_range = min(
            base.interaction_range / r, math.sqrt(len(self.xi))
        )
        self.bound = base.bound

    def is_null(self) -> bool:
        """True when the rescaled cube cannot meet the base support."""
        half_diag = 0.5 * self.r * math.sqrt(len(self.xi))
        return float(np.linalg.norm(self.xi)) - half_diag >= self.base.support_radius

    def eval(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        scalar = x.ndim == 1
        x2 = np.atleast_2d(x)
        y2 = np.atleast_2d(y)
        vals = np.asarray(
            self.base.eval(self.r * x2 + self.xi, self.r * y2 + self.xi), dtype=float
        )
        if self.mask_unit_cube:
            inx = np.all(np.abs(x2) <= 0.5, axis=1)
            iny = np.all(np.abs(y2) <= 0.5, axis=1)
            vals = np.where(inx & iny, vals, 0.0)
        return float(vals[0]) if scalar else vals


# ---------------------------------------------------------------------------
# cached radial tables and fields


@dataclass(frozen=True)
class RadialTable:
    """Dense linear-interpolation table of a radial function, zero beyond grid."""

    grid: np.ndarray
    values: np.ndarray

    def __call__(self, r):
        return np.interp(np.asarray(r, dtype=float), self.grid, self.values, left=self.values[0], right=0.0)


def _radial_panel_nodes(r_hi: float, n_panels: int = 48, order: int = 12):
    """Geometric composite Gauss nodes on (0, r_hi] resolving the r^{-1-alpha}
    endpoint; returns (nodes, weights)."""
    edges = r_hi * np.concatenate([[0.0], np.geomspace(1e-9, 1.0, n_panels)])
    gl_n, gl_w = np.polynomial.legendre.leggauss(order)
    a = edges[:-1]
    b = edges[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = (mid[:, None] + half[:, None] * gl_n).ravel()
    weights = (half[:, None] * gl_w).ravel()
    return nodes, weights


def _field_values_vectorized(
    model: StableModel,
    jf: JumpFunctional,
    p: float,
    rhos: np.ndarray,
    kind: str,
    r_cut: float | None,
) -> np.ndarray:
    """Field values at |x| = rhos, all nodes at once (fixed-panel radial rule,
    exact angular caps).  Cross-validated against f_p_one in the tests."""
    d = model.d
    r_hi = jf.Rp if r_cut is None else min(jf.Rp, r_cut)
    if r_hi <= 0.0:
        return np.zeros_like(rhos)
    r, w = _radial_panel_nodes(r_hi)
    phi_r = np.asarray(jf.phi(r), dtype=float)
    omega = sphere_area(d)

    rhos = np.asarray(rhos, dtype=float)
    out = np.zeros_like(rhos)
    # thresholds: u* = (radius^2 - rho^2 - r^2) / (2 rho r), broadcast (nrho, nr)
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = 2.0 * rhos[:, None] * r[None, :]
        uR = np.where(denom > 0.0, (jf.R**2 - rhos[:, None] ** 2 - r[None, :] ** 2) / denom, 0.0)
        uO = np.where(
            denom > 0.0,
            ((jf.R + jf.Rp) ** 2 - rhos[:, None] ** 2 - r[None, :] ** 2) / denom,
            0.0,
        )
    # rho == 0 rows: destination radius is r exactly
    zero = rhos == 0.0
    m_inner = _cap_cdf(d, uR)
    m_upto = _cap_cdf(d, uO)
    if zero.any():
        m_inner[zero] = np.where(r[None, :] < jf.R, omega, 0.0)
        m_upto[zero] = np.where(r[None, :] < jf.R + jf.Rp, omega, 0.0)
    m_ann = np.clip(m_upto - m_inner, 0.0, omega)
    m_out = np.clip(omega - m_upto, 0.0, omega)

    ux = (rhos < jf.R).astype(float)
    ax = ((rhos >= jf.R) & (rhos < jf.R + jf.Rp)).astype(float)
    kernel = w * r ** (-1.0 - model.alpha)
    for m_dest, w_dest in (
        (m_inner, 0.5 * (ux + 1.0)),
        (m_ann, 0.5 * (ux + ax)),
        (m_out, 0.5 * ux),
    ):
        wd = w_dest[:, None]
        if kind == "exp":
            vals = -np.expm1(-p * wd * phi_r[None, :])
        else:
            vals = p * wd * phi_r[None, :]
        out += (m_dest * vals) @ kernel
    out[rhos >= jf.R + jf.Rp] = 0.0
    return model.c_levy * out


def build_radial_table(
    model: StableModel,
    jf: JumpFunctional,
    p: float,
    kind: str = "exp",
    r_cut: float | None = None,
    n_nodes: int = 1200,
) -> RadialTable:
    """Tabulate rho -> field(|x| = rho) on a dense grid with knots at the
    region boundaries; exact zero beyond the support radius."""
    R, Rp = jf.R, jf.Rp
    rmax = R + Rp
    knots = np.array([0.0, max(R - Rp, 0.0), R, rmax])
    grid = np.unique(
        np.concatenate(
            [
                np.linspace(0.0, rmax, n_nodes),
                rmax - np.geomspace(1e-6, min(Rp, 0.5 * rmax), 80),
                knots,
                np.clip(knots - 1e-9, 0.0, rmax),
                np.clip(knots + 1e-9, 0.0, rmax),
            ]
        )
    )
    grid = grid[(grid >= 0.0) & (grid <= rmax)]
    vals = _field_values_vectorized(model, jf, p, grid, kind, r_cut)
    return RadialTable(grid=grid, values=vals)


def radial_l1_norm(model: StableModel, table: RadialTable) -> float:
    """Integral over R^d of a radial field given by a table."""
    r = np.linspace(0.0, table.grid[-1], 20001)
    return float(
        sphere_area(model.d) * np.trapezoid(table(r) * r ** (model.d - 1), r)
    )


@dataclass(frozen=True)
class FOneField:
    """The field x -> F^(p)1(x) with its cached radial table and L1 norm."""

    p: float
    table: RadialTable
    l1_norm: float
    center: np.ndarray

    def values(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        rho = np.linalg.norm(x - self.center, axis=1)
        return self.table(rho)


def build_f_one_field(model: StableModel, jf: JumpFunctional, p: float, n_nodes: int = 600) -> FOneField:
    table = build_radial_table(model, jf, p, kind="exp", n_nodes=n_nodes)
    return FOneField(
        p=float(p),
        table=table,
        l1_norm=radial_l1_norm(model, table),
        center=jf._center(model.d),
    )


# ---------------------------------------------------------------------------
# the growth condition F^(p)1 >= C psi(p) F1


@dataclass
class PsiReport:
    """Grid certificate for the psi-growth condition of the nonlocal field."""

    psi_exponent: float
    rows: list  # (p, min ratio over x grid, argmin |x|)
    vacuous: bool

    @property
    def c_empirical(self) -> float:
        """Constant certified at the largest p of the grid."""
        if self.vacuous:
            return math.inf
        return self.rows[-1][1]

    @property
    def c_overall(self) -> float:
        if self.vacuous:
            return math.inf
        return min(r[1] for r in self.rows)


def check_psi_condition(model: StableModel, jf: JumpFunctional, p_grid, x_grid, tol: float = 1e-9) -> PsiReport:
    """min over the grid of F^(p)1(x) / (psi(p) F1(x)), psi(p) = p^{alpha/beta};
    points with F1(x) = 0 are excluded."""
    if not isinstance(jf, JumpFunctional):
        raise DomainError("psi condition check requires the two-ball family")
    expo = model.alpha / jf.phi.beta
    p_grid = sorted(float(p) for p in p_grid)
    xs = [np.asarray(x, dtype=float) for x in x_grid]
    f1 = np.array([f_p_one(model, jf, 1.0, x, tol=tol) for x in xs])
    valid = f1 > 0.0
    if not valid.any():
        return PsiReport(psi_exponent=expo, rows=[], vacuous=True)
    rows = []
    for p in p_grid:
        psi = p**expo
        ratios = []
        for x, f1x, ok in zip(xs, f1, valid):
            if not ok:
                continue
            fp = f_p_one(model, jf, p, x, tol=tol)
            ratios.append((fp / (psi * f1x), float(np.linalg.norm(x))))
        rmin, argmin = min(ratios, key=lambda z: z[0])
        rows.append((p, rmin, argmin))
    return PsiReport(psi_exponent=expo, rows=rows, vacuous=False)
