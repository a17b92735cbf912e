"""Truncated local pairing integrals and torus zeta transforms.

The heavy numerics live here: the torus zeta transform of a scenario's
test vectors (`rankin_selberg`), the one-variable transforms of the
complex-slot components (`tate_zeta`), the truncated integral of the
paired test vectors over the mirabolic chart (`ichino_truncated`), and
the report comparing the truncation sequence with its predicted limit
(`regularization_report`).

Measure conventions match `quadrature`: unit-group measures are the
ones of `integrate_multiplicative`, rotation subgroups carry
probability measure, and the additive character has frequency one on
the reals and twice the real trace on the complex slot, optionally
rescaled per scenario.

The truncated integrals are evaluated on tensor grids after the
unipotent coordinate is integrated in closed form; it only enters
through a sinc factor whose frequency is the truncation radius. Two
structural facts keep the grids small:

* split shape: sin(w (z1 + z2)) splits into per-axis sine and cosine
  vectors against the frequency-independent kernel 1/(z1 + z2), so the
  torus loop costs matrix products only. The pairing axes resolve the
  oscillation with Gauss panels about one period wide; the torus axis
  is smooth (the slot kernels have no interior kinks, so the
  oscillatory parts cancel in the pairing sums) and only needs
  refinement into its square-root endpoints.

* complex shape: the rotation average of a harmonic against the sinc
  window is (1/b) int_0^b J_m for even harmonics and zero for odd
  ones, which removes the angular axis entirely. The leftover Bessel
  tail still oscillates weakly in the radius, so the torus axis keeps
  a phase budget here.

Every grid is evaluated at two resolutions and the difference is
reported as the error estimate.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import jv

from .quadrature import (
    IntegralResult,
    QuadratureConfig,
    integrate_circle,
    integrate_multiplicative,
)
from .reps import ComplexPS, RealCharacter, TripleScenario, dual_rep
from .specfun import arch_zeta, bessel_j0_primitive, gamma_complex
from .whittaker import (
    Section,
    kirillov_complex_component,
    section_dual,
    section_flip,
    section_minimal,
    section_raise,
)
from .pairings import (
    IDENTITY,
    IwasawaPoint,
    complex_contraction_vector,
    real_vector,
    torus_evaluator,
)

__all__ = [
    "TruncationParam",
    "RankinSelbergSpec",
    "truncation_support",
    "rankin_selberg",
    "tate_zeta",
    "tate_zeta_closed",
    "ichino_truncated",
    "regularization_report",
]


# ---------------------------------------------------------------------------
# Truncation data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncationParam:
    """Height cutoff of the truncation window; n = 1 is the empty window."""

    n: float

    def __post_init__(self):
        if not self.n >= 1.0:
            raise ValueError("the truncation parameter must be >= 1")


@dataclass(frozen=True)
class RankinSelbergSpec:
    """Input of the torus zeta transform.

    which: 'primal' pairs the scenario's test vectors against the
    section's inducing character; 'dual' uses the contragredient
    vectors and the normalized intertwining image of the section. mu
    overrides the torus character (defaults to the model character of
    the chosen side).
    """

    scenario: TripleScenario
    which: str = "primal"
    mu: RealCharacter | None = None

    def __post_init__(self):
        if self.which not in ("primal", "dual"):
            raise ValueError("which must be 'primal' or 'dual'")


def _n_value(n) -> float:
    if isinstance(n, TruncationParam):
        return n.n
    n = float(n)
    if not n >= 1.0:
        raise ValueError("the truncation parameter must be >= 1")
    return n


def truncation_support(g, n, method: str = "svd") -> int:
    """Indicator of the truncation window at the 2x2 real matrix g.

    1 iff the singular value ratio of g (a class function of the
    center) is at most n. For upper triangular g the same test is the
    elementary inequality x^2/|y| + |y| + 1/|y| <= n + 1/n in the
    normalized coordinates g = (y x; 0 1) * scalar, available as
    method 'inequality'.
    """
    n = _n_value(n)
    mat = np.asarray(g, dtype=float)
    if mat.shape != (2, 2):
        raise ValueError("need a 2x2 matrix")
    if method == "svd":
        s = np.linalg.svd(mat, compute_uv=False)
        if s[1] == 0.0:
            raise ValueError("the matrix must be invertible")
        return int(s[0] / s[1] <= n)
    if method == "inequality":
        if mat[1, 0] != 0.0:
            raise ValueError("the inequality form needs an upper triangular matrix")
        d = mat[1, 1]
        if d == 0.0 or mat[0, 0] == 0.0:
            raise ValueError("the matrix must be invertible")
        y, x = mat[0, 0] / d, mat[0, 1] / d
        return int(x * x / abs(y) + abs(y) + 1.0 / abs(y) <= n + 1.0 / n)
    raise ValueError(f"unknown method {method!r}")


def _r_n(y, n: float):
    """Half-length of the unipotent window over the torus point y."""
    ay = np.abs(np.asarray(y, dtype=float))
    gap = (n + 1.0 / n) - ay - 1.0 / ay
    return np.sqrt(np.maximum(ay * gap, 0.0))


def _r_max(n: float) -> float:
    ustar = 0.5 * (n + 1.0 / n)
    return math.sqrt(max(ustar * ustar - 1.0, 0.0))


# ---------------------------------------------------------------------------
# Scenario test vectors
# ---------------------------------------------------------------------------


@dataclass
class _Bundle:
    """One side (primal or dual) of a scenario's test tuple."""

    pair_field: str  # 'R' for the split pairing, 'C' for the complex one
    reps: tuple
    vectors: tuple
    evaluators: tuple
    section: Section
    w_pair: int
    mu: RealCharacter
    delta: tuple  # per-slot torus multipliers marking the open orbit


def _build_bundle(sc: TripleScenario, which: str, scale: float) -> _Bundle:
    raising = sc.raising
    if sc.shape == "RRR":
        slots = sc.components[:2]
        reps = tuple(slots) if which == "primal" else tuple(dual_rep(r) for r in slots)
        vecs = tuple(
            real_vector(rep, raised=raising.powers[i], flip=raising.flips[i], scale=scale)
            for i, rep in enumerate(reps)
        )
        delta = (-1.0, 1.0) if which == "primal" else (1.0, -1.0)
    else:
        pip = sc.components[0]
        rep = pip if which == "primal" else dual_rep(pip)
        if raising.vop[0]:
            vec = complex_contraction_vector(rep, vop=True, scale=scale)
        else:
            vec = complex_contraction_vector(rep, m_index=sc.m_index, scale=scale)
        vecs = (vec,)
        reps = (rep,)
        delta = (1j,) if which == "primal" else (-1j,)

    sec = section_minimal(sc.section)
    if which == "dual":
        sec = section_dual(sec, scale)
    ell = raising.powers[-1]
    if ell:
        sec = section_raise(sec, ell)
    if raising.flips[-1]:
        sec = section_flip(sec)

    mu = sec.characters()[0]
    w_pair = sum(v.weight for v in vecs)
    evs = tuple(torus_evaluator(v, IDENTITY) for v in vecs)
    return _Bundle(
        pair_field=sc.pair_field,
        reps=reps,
        vectors=vecs,
        evaluators=evs,
        section=sec,
        w_pair=w_pair,
        mu=mu,
        delta=delta,
    )


def _weight_match(bundle: _Bundle) -> bool:
    return bundle.section.weight + bundle.w_pair == 0


# ---------------------------------------------------------------------------
# Torus zeta transform
# ---------------------------------------------------------------------------


def _gate_value(sc: TripleScenario, mu: RealCharacter) -> float:
    base = sc.lambda_gate - abs(complex(sc.section.mu.exponent).real)
    return base + abs(complex(mu.exponent).real)


def rankin_selberg(
    spec: RankinSelbergSpec,
    cfg: QuadratureConfig | None = None,
    method: str = "collapsed",
    delta_scale: float = 1.0,
) -> IntegralResult:
    """Zeta transform of the scenario's test tuple against its section.

    Computes the rotation average of the section times the torus
    integral of the test vectors over the open orbit of the diagonal.
    With pure weight vectors the rotation average is a weight selection
    rule ('collapsed'); 'circle' performs it numerically.
    """
    cfg = cfg or QuadratureConfig()
    sc = spec.scenario
    bundle = _build_bundle(sc, spec.which, sc.psi_scale)
    mu = spec.mu if spec.mu is not None else bundle.mu
    if _gate_value(sc, mu) >= 0.5 - 1e-12:
        raise ValueError("decay deficit too large: the transform does not converge")
    if delta_scale == 0.0:
        raise ValueError("delta_scale must be a unit")

    deltas = tuple(d * delta_scale for d in bundle.delta)

    def torus_part(y, evs):
        out = mu(y) * np.abs(y) ** -0.5
        for d, ev in zip(deltas, evs):
            out = out * ev(d * y)
        return out

    if method == "collapsed":
        if not _weight_match(bundle):
            return IntegralResult(0.0j, 0.0, 0, True)
        inner = integrate_multiplicative(lambda y: torus_part(y, bundle.evaluators), "R", cfg)
        c = bundle.section.coeff
        return IntegralResult(c * inner.value, abs(c) * inner.err_est, inner.evals, inner.converged)

    if method == "circle":
        sec = bundle.section
        evals = 0

        def at_angle(theta: float) -> complex:
            nonlocal evals
            g = IwasawaPoint(theta=theta)
            evs = tuple(torus_evaluator(v, g) for v in bundle.vectors)
            r = integrate_multiplicative(lambda y: torus_part(y, evs), "R", cfg)
            evals += r.evals
            fk = sec.coeff * np.exp(1j * sec.weight * theta)
            return fk * r.value

        outer = integrate_circle(lambda th: np.array([at_angle(t) for t in np.atleast_1d(th)]), cfg)
        return IntegralResult(outer.value, outer.err_est, evals, outer.converged)

    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# One-variable transforms of the complex-slot components
# ---------------------------------------------------------------------------


def tate_zeta(
    rep: ComplexPS,
    j: int,
    mu: RealCharacter,
    cfg: QuadratureConfig | None = None,
    scale: float = 1.0,
) -> IntegralResult:
    """Transform of the j-th component along the rotated real torus,
    against mu times the inverse square root of the modulus."""
    cfg = cfg or QuadratureConfig()
    comp = kirillov_complex_component(rep, j, scale)

    def f(y):
        return comp(1j * np.asarray(y, dtype=complex)) * mu(y) * np.abs(y) ** -0.5

    return integrate_multiplicative(f, "R", cfg)


def tate_zeta_closed(rep: ComplexPS, j: int, mu: RealCharacter, scale: float = 1.0) -> complex:
    """Exact value of `tate_zeta`.

    Vanishes unless the parities match; otherwise a product of Gamma
    factors. The alternating sign in j comes from the quarter rotation
    acting on the component ladder.
    """
    kp, sp = rep.kprime, rep.sprime
    if not 0 <= j <= kp:
        raise ValueError("component index out of range")
    if (rep.nu.kappa + mu.parity - j) % 2:
        return 0.0j
    smu = complex(mu.exponent)
    val = (
        (-1.0) ** j
        * 2.0
        * rep.mu(1j)
        * 1j**kp
        * (2.0 * math.pi) ** -(smu + kp / 2.0 + 0.5)
        * gamma_complex(sp + smu / 2.0 + kp / 2.0 - j / 2.0 + 0.25)
        * gamma_complex(-sp + smu / 2.0 + j / 2.0 + 0.25)
    )
    if scale != 1.0:
        if not scale > 0:
            raise ValueError("scale must be positive")
        val = val * scale**0.5 / mu(scale)
    return complex(val)


# ---------------------------------------------------------------------------
# Grid construction for the truncated integrals
# ---------------------------------------------------------------------------

_BASE_FLAVOR = dict(log_width=1.0, log_nodes=7, lin_nodes=8, lin_periods=1.0, edge_levels=10, budget=2.2)
_FINE_FLAVOR = dict(log_width=0.7, log_nodes=10, lin_nodes=11, lin_periods=0.7, edge_levels=13, budget=1.5)

_PROBE_REL = 1e-8
_PROBE_PAD = 0.4
_LOG_FLOOR = -20.0


@lru_cache(maxsize=32)
def _leggauss(m: int):
    return np.polynomial.legendre.leggauss(m)


def _support_window(ev, lo: float = -34.0, hi: float = 8.5, num: int = 1400):
    """Log-modulus window outside which the evaluator is negligible."""
    xs = np.linspace(lo, hi, num)
    mags = np.zeros(num)
    for sgn in (1.0, -1.0):
        vals = np.asarray(ev(sgn * np.exp(xs)))
        mags = np.maximum(mags, np.abs(vals))
    peak = mags.max()
    if not np.isfinite(peak) or peak == 0.0:
        raise ValueError("test vector vanishes identically on the torus")
    keep = np.flatnonzero(mags >= _PROBE_REL * peak)
    return xs[keep[0]] - _PROBE_PAD, xs[keep[-1]] + _PROBE_PAD


def _panel_nodes(edges, m: int):
    """Gauss-Legendre nodes and weights on consecutive [edges] panels."""
    x0, w0 = _leggauss(m)
    e = np.asarray(edges, dtype=float)
    mid = 0.5 * (e[1:] + e[:-1])
    half = 0.5 * (e[1:] - e[:-1])
    xs = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    ws = (half[:, None] * w0[None, :]).ravel()
    return xs, ws


def _log_edges(lo: float, hi: float, width: float):
    if hi <= lo:
        return None
    m = max(1, int(math.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, m + 1)


def _oscillation_axis(window, period: float, flavor):
    """Signed multiplicative-measure nodes for an axis carrying the sinc.

    Linear panels about one period wide above half a period,
    logarithmic panels below it; weights include the 1/|v| density.
    """
    lo, hi = window
    vmax = math.exp(hi)
    h0 = min(0.5 * period, vmax)
    vals, wts = [], []
    edges = _log_edges(max(lo, _LOG_FLOOR), math.log(h0), 2.0 * flavor["log_width"])
    if edges is not None:
        xs, ws = _panel_nodes(edges, flavor["log_nodes"])
        vals.append(np.exp(xs))
        wts.append(ws)
    if vmax > h0:
        width = flavor["lin_periods"] * period
        m = max(1, int(math.ceil((vmax - h0) / width)))
        xs, ws = _panel_nodes(np.linspace(h0, vmax, m + 1), flavor["lin_nodes"])
        vals.append(xs)
        wts.append(ws / xs)
    v = np.concatenate(vals)
    w = np.concatenate(wts)
    return np.concatenate([v, -v]), np.concatenate([w, w])


def _smooth_log_panels(L: float, flavor):
    """Signed torus panels on [exp(-L), exp(L)], geometrically refined
    into both endpoints to absorb the square-root cusp of the radius."""
    width = flavor["log_width"]
    m = max(1, int(math.ceil(2.0 * L / width)))
    edges = list(np.linspace(-L, L, m + 1))
    w0 = 2.0 * L / m
    for i in range(1, flavor["edge_levels"] + 1):
        off = w0 * 0.5**i
        edges.append(L - off)
        edges.append(-L + off)
    edges = np.unique(np.asarray(edges))
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        xs, ws = _panel_nodes(np.array([a, b]), flavor["log_nodes"])
        v = np.exp(xs)
        for sgn in (1.0, -1.0):
            out.append((sgn * v, ws))
    return out


def _phase_refined_edges(n: float, kreach: float, dphase: float, budget: float, log_width: float):
    """Positive-side panel edges on the truncation support [1/n, n].

    A panel is split while the sinc phase can swing across it by more
    than the budget; the swing is the radius variation times the
    reachable extent of the oscillating coordinate times dphase.
    """
    lo, hi = 1.0 / n, n
    base = _log_edges(math.log(lo), math.log(hi), log_width)
    panels = [(math.exp(a), math.exp(b)) for a, b in zip(base[:-1], base[1:])]
    out = []
    while panels:
        a, b = panels.pop()
        rv = _r_n(np.array([a, 0.5 * (a + b), b]), n)
        swing = dphase * (rv.max() - rv.min()) * kreach
        if swing <= budget or (b - a) <= 1e-9 * b or len(out) > 20000:
            out.append((a, b))
        else:
            mid = 0.5 * (a + b)
            panels.append((a, mid))
            panels.append((mid, b))
    out.sort()
    return out


def _truncation_axis_panels(n: float, kreach: float, dphase: float, flavor):
    """Signed node/weight panels over the truncation support."""
    panels = _phase_refined_edges(n, kreach, dphase, flavor["budget"], flavor["log_width"])
    out = []
    for a, b in panels:
        xs, ws = _panel_nodes(np.log(np.array([a, b])), flavor["log_nodes"])
        v = np.exp(xs)
        for sgn in (1.0, -1.0):
            out.append((sgn * v, ws))
    return out


def _subset(vals, wts, lo: float, hi: float):
    mask = (np.abs(vals) >= lo) & (np.abs(vals) <= hi)
    return vals[mask], wts[mask]


# ---------------------------------------------------------------------------
# Truncated integral: split pairing
# ---------------------------------------------------------------------------


def _ichino_split_grid(bP: _Bundle, bD: _Bundle, n: float, scale: float, flavor):
    """Tensor-grid value of the truncated integral, split pairing.

    Coordinates: one pairing variable per slot and the torus variable
    of the mirabolic chart. The unipotent window contributes
    2 r sinc(2 pi scale r (z1 + z2)); the sine splits over the two
    axes against the kernel 1/(z1 + z2), so each torus node costs
    matrix products with a torus-independent matrix and no
    transcendentals.
    """
    mu = bP.mu
    ev1, ev2 = bP.evaluators
    dv1, dv2 = bD.evaluators

    win1, win2 = _support_window(ev1), _support_window(ev2)
    winb1, winb2 = _support_window(dv1), _support_window(dv2)

    rmax = _r_max(n)
    period = 1.0 / max(rmax * scale, 1e-9)
    z1, w1 = _oscillation_axis(winb1, period, flavor)
    z2, w2 = _oscillation_axis(winb2, period, flavor)
    b1 = np.asarray(dv1(-z1), dtype=complex) * w1
    b2 = np.asarray(dv2(-z2), dtype=complex) * w2
    evals = z1.size + z2.size

    k1_lo, k1_hi = math.exp(win1[0]), math.exp(win1[1])
    k2_lo, k2_hi = math.exp(win2[0]), math.exp(win2[1])
    pad = math.exp(_PROBE_PAD)
    ueps = 1e-12 * max(1.0, float(np.abs(z1).max()), float(np.abs(z2).max()))

    total = 0.0j
    for yv, yw in _smooth_log_panels(math.log(n), flavor):
        ay = np.abs(yv)
        ymin, ymax = float(ay.min()), float(ay.max())
        rv = _r_n(yv, n)
        z1s, b1s = _subset(z1, b1, k1_lo / (ymax * pad), pad * k1_hi / ymin)
        z2s, b2s = _subset(z2, b2, k2_lo / (ymax * pad), pad * k2_hi / ymin)
        if z1s.size == 0 or z2s.size == 0:
            continue
        om = (2.0 * math.pi * scale) * rv
        L = np.asarray(ev1(np.multiply.outer(z1s, yv)), dtype=complex) * b1s[:, None]
        R = np.asarray(ev2(np.multiply.outer(z2s, yv)), dtype=complex) * b2s[:, None]
        evals += L.size + R.size
        ny = yv.size
        X = L * np.sin(np.multiply.outer(z1s, om))
        XC = L * np.cos(np.multiply.outer(z1s, om))
        Y = R * np.cos(np.multiply.outer(z2s, om))
        YS = R * np.sin(np.multiply.outer(z2s, om))
        yblk = np.concatenate([Y.real, Y.imag, YS.real, YS.imag], axis=1)
        acc = np.zeros(ny, dtype=complex)
        s0 = np.zeros(ny, dtype=complex)
        chunk = max(64, int(4.0e6 // max(z2s.size, 1)))
        for c0 in range(0, z1s.size, chunk):
            c1 = min(c0 + chunk, z1s.size)
            u = z1s[c0:c1, None] + z2s[None, :]
            small = np.abs(u) < ueps
            if small.any():
                mker = 1.0 / np.where(small, 1.0, u)
                mker[small] = 0.0
                zi, zj = np.nonzero(small)
                s0 += np.sum(L[c0 + zi, :] * R[zj, :], axis=0)
            else:
                mker = 1.0 / u
            t = mker @ yblk
            my = t[:, :ny] + 1j * t[:, ny : 2 * ny]
            mys = t[:, 2 * ny : 3 * ny] + 1j * t[:, 3 * ny :]
            acc += np.sum(X[c0:c1] * my + XC[c0:c1] * mys, axis=0)
        base = yw * mu(yv) * ay**-0.5 * 2.0 * rv
        total += np.sum(base * (acc / om + s0))
    return total, evals


# ---------------------------------------------------------------------------
# Truncated integral: complex pairing
# ---------------------------------------------------------------------------


def _harmonic_parts(vec, rep):
    """Radial/angular split of a scalar complex-slot vector.

    Parts are (radial callable on positive reals, integer harmonic,
    cosine flag); the vector's value at R e^(i phi) is the sum of
    radial(R) e^(i m phi), times cos(phi) on the flagged part. Matches
    the contraction convention of `torus_evaluator`.
    """
    kappa = rep.mu.kappa
    if vec.kernel is not None:
        return [(vec.kernel, kappa, True)]
    kp = rep.kprime
    coeffs = ((-1) ** kp) * vec.contraction.coeffs
    parts = []
    for j, (c, comp) in enumerate(zip(coeffs, vec.components)):
        if c == 0:
            continue
        parts.append(
            ((lambda r, c=c, f=comp: c * np.asarray(f(r), dtype=complex)), kappa - (kp - j), False)
        )
    return parts


def _expand_harmonics(parts, offset: float):
    """Pure-harmonic terms (part index, harmonic, coefficient) of the
    parts evaluated at angle theta + offset."""
    out = []
    for idx, (_rad, m, cosflag) in enumerate(parts):
        if cosflag:
            out.append((idx, m + 1, 0.5 * np.exp(1j * (m + 1) * offset)))
            out.append((idx, m - 1, 0.5 * np.exp(1j * (m - 1) * offset)))
        else:
            out.append((idx, m, np.exp(1j * m * offset)))
    return out


def _angular_sinc_mean(mabs: int, beta):
    """(1/b) int_0^b J_m for even m >= 0, elementwise over beta > 0.

    This is the rotation mean of e^(i m theta) sinc(beta cos theta) up
    to the factor i^m; odd harmonics average to zero.
    """
    ii = bessel_j0_primitive(beta)
    for i in range(1, mabs // 2 + 1):
        ii = ii - 2.0 * jv(2 * i - 1, beta)
    safe = beta > 1e-9
    lim = 1.0 if mabs == 0 else 0.0
    return np.where(safe, ii / np.where(safe, beta, 1.0), lim)


def _ichino_field_grid(bP: _Bundle, bD: _Bundle, n: float, scale: float, flavor):
    """Tensor-grid value of the truncated integral, complex pairing.

    Coordinates: the radius of the pairing variable and the torus
    variable; the rotation average is exact per harmonic, so radial
    kernel tables are the only special-function work.
    """
    mu = bP.mu
    partsP = _harmonic_parts(bP.vectors[0], bP.reps[0])
    partsD = _harmonic_parts(bD.vectors[0], bD.reps[0])
    winW = _support_window(bP.evaluators[0])  # window of |z y|
    winT = _support_window(bD.evaluators[0])  # window of |z|

    rmax = _r_max(n)
    period = 1.0 / max(2.0 * rmax * scale, 1e-9)

    lo, hi = winT
    vmax = math.exp(hi)
    h0 = min(0.5 * period, vmax)
    rho_panels = []
    edges = _log_edges(max(lo, _LOG_FLOOR), math.log(h0), 2.0 * flavor["log_width"])
    if edges is not None:
        for a, b in zip(edges[:-1], edges[1:]):
            xs, ws = _panel_nodes(np.array([a, b]), flavor["log_nodes"])
            rho_panels.append((np.exp(xs), ws))
    if vmax > h0:
        m = max(1, int(math.ceil((vmax - h0) / (flavor["lin_periods"] * period))))
        lin = np.linspace(h0, vmax, m + 1)
        group = 24  # panels per block
        for i in range(0, m, group):
            sub = lin[i : min(i + group, m) + 1]
            xs, ws = _panel_nodes(sub, flavor["lin_nodes"])
            rho_panels.append((xs, ws / xs))

    ypanels = _truncation_axis_panels(n, vmax, 4.0 * math.pi * scale, flavor)
    yv = np.concatenate([p[0] for p in ypanels])
    yw = np.concatenate([p[1] for p in ypanels])
    rv = _r_n(yv, n)
    keep = rv > 0
    yv, yw, rv = yv[keep], yw[keep], rv[keep]
    ay = np.abs(yv)
    base = yw * mu(yv) * ay**-0.5 * 2.0 * rv
    neg = yv < 0

    kw_lo, kw_hi = math.exp(winW[0]), math.exp(winW[1])
    pad = math.exp(_PROBE_PAD)
    expD = _expand_harmonics(partsD, math.pi)
    exp_by_sign = {False: _expand_harmonics(partsP, 0.0), True: _expand_harmonics(partsP, math.pi)}

    total = 0.0j
    evals = 0
    for rho, wr in rho_panels:
        rlo, rhi = float(rho.min()), float(rho.max())
        sel = (ay >= kw_lo / (rhi * pad)) & (ay <= pad * kw_hi / rlo)
        if not np.any(sel):
            continue
        ys, rs, bs, ngs = ay[sel], rv[sel], base[sel], neg[sel]
        radarg = np.multiply.outer(rho, ys).astype(complex)
        colsP = [p[0](radarg) for p in partsP]  # (Nr, Ny) tables
        colsD = [p[0](rho.astype(complex)) for p in partsD]
        evals += radarg.size * len(colsP) + rho.size * len(colsD)
        beta = (4.0 * math.pi * scale) * np.multiply.outer(rho, rs)
        acache = {}
        for is_neg in (False, True):
            side = ngs if is_neg else ~ngs
            if not np.any(side):
                continue
            fs = np.zeros((rho.size, int(side.sum())), dtype=complex)
            for ip, mp, cp in exp_by_sign[is_neg]:
                for idd, md, cd in expD:
                    mm = mp + md
                    if mm % 2:
                        continue
                    key = abs(mm)
                    if key not in acache:
                        acache[key] = _angular_sinc_mean(key, beta)
                    sgn = -1.0 if (mm // 2) % 2 else 1.0
                    fs += (cp * cd * sgn) * colsD[idd][:, None] * colsP[ip][:, side] * acache[key][:, side]
            total += np.einsum("r,ry,y->", wr, fs, bs[side])
    return 4.0 * total, evals


# ---------------------------------------------------------------------------
# Literal (nested adaptive) paths, used as slow cross-checks
# ---------------------------------------------------------------------------


def _ichino_split_literal(bP: _Bundle, bD: _Bundle, n: float, scale: float, cfg: QuadratureConfig) -> IntegralResult:
    mu = bP.mu
    ev1, ev2 = bP.evaluators
    dv1, dv2 = bD.evaluators
    evals = 0

    def at_y(y: float) -> complex:
        nonlocal evals
        r = float(_r_n(y, n))
        if r == 0.0:
            return 0.0j
        om = 2.0 * scale * r  # np.sinc carries the pi

        def inner2(z2arr):
            flat = np.atleast_1d(np.asarray(z2arr, dtype=float))
            out = np.zeros(flat.shape, dtype=complex)
            for i, z2 in enumerate(flat):
                f2 = complex(ev2(np.array([z2 * y]))[0]) * complex(dv2(np.array([-z2]))[0])
                if f2 == 0.0:
                    continue
                res = integrate_multiplicative(
                    lambda z1: ev1(z1 * y) * dv1(-z1) * np.sinc(om * (z1 + z2)), "R", cfg
                )
                out[i] = f2 * res.value
            return out.reshape(np.shape(z2arr))

        res2 = integrate_multiplicative(inner2, "R", cfg)
        evals += res2.evals
        return complex(mu(y) * abs(y) ** -0.5 * 2.0 * r * res2.value)

    outer = integrate_multiplicative(
        lambda ys: np.array([at_y(float(t)) for t in np.atleast_1d(ys)]), "R", cfg
    )
    return IntegralResult(outer.value, outer.err_est, evals, outer.converged)


def _ichino_field_literal(bP: _Bundle, bD: _Bundle, n: float, scale: float, cfg: QuadratureConfig) -> IntegralResult:
    mu = bP.mu
    ev = bP.evaluators[0]
    dv = bD.evaluators[0]
    evals = 0

    def at_y(y: float) -> complex:
        nonlocal evals
        r = float(_r_n(y, n))
        if r == 0.0:
            return 0.0j

        def fz(z):
            return ev(z * y) * dv(-z) * 2.0 * r * np.sinc((4.0 * scale * r) * np.real(z))

        res = integrate_multiplicative(fz, "C", cfg)
        evals += res.evals
        return complex(mu(y) * abs(y) ** -0.5 * res.value)

    outer = integrate_multiplicative(
        lambda ys: np.array([at_y(float(t)) for t in np.atleast_1d(ys)]), "R", cfg
    )
    return IntegralResult(outer.value, outer.err_est, evals, outer.converged)


# ---------------------------------------------------------------------------
# Truncated integral, public entry
# ---------------------------------------------------------------------------


def ichino_truncated(
    scenario: TripleScenario,
    n,
    cfg: QuadratureConfig | None = None,
    method: str = "grid",
) -> IntegralResult:
    """Integral of the paired test vectors against both sections over
    the truncation window at height n.

    The rotation averages collapse to a weight selection rule (all
    scenario vectors are pure weight vectors); when the weights do not
    cancel the integral is exactly zero. n = 1 gives the empty window.
    """
    cfg = cfg or QuadratureConfig()
    n = _n_value(n)
    if n <= 1.0:
        return IntegralResult(0.0j, 0.0, 0, True)
    scale = scenario.psi_scale
    bP = _build_bundle(scenario, "primal", scale)
    bD = _build_bundle(scenario, "dual", scale)
    pref = bP.section.coeff * bD.section.coeff
    if not (_weight_match(bP) and _weight_match(bD)):
        return IntegralResult(0.0j, 0.0, 0, True)

    if method == "literal":
        lit = _ichino_split_literal if scenario.pair_field == "R" else _ichino_field_literal
        res = lit(bP, bD, n, scale, cfg)
        return IntegralResult(pref * res.value, abs(pref) * res.err_est, res.evals, res.converged)
    if method != "grid":
        raise ValueError(f"unknown method {method!r}")

    grid = _ichino_split_grid if scenario.pair_field == "R" else _ichino_field_grid
    coarse, n1 = grid(bP, bD, n, scale, _BASE_FLAVOR)
    fine, n2 = grid(bP, bD, n, scale, _FINE_FLAVOR)
    value = pref * fine
    err = abs(pref) * abs(fine - coarse)
    converged = err <= max(cfg.abs_tol, cfg.rel_tol * abs(value))
    return IntegralResult(value, err, n1 + n2, converged)


# ---------------------------------------------------------------------------
# Regularization report
# ---------------------------------------------------------------------------


def _c2(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def regularization_report(
    scenario: TripleScenario,
    n_schedule=None,
    cfg: QuadratureConfig | None = None,
) -> dict:
    """Truncation sequence against its predicted limit.

    The limit is the product of the two torus zeta transforms times the
    unit-density ratio of the pairing algebra (1 for the split form,
    1/pi for the complex one). Entries are JSON-ready; timings keep the
    transform and truncation costs separate.
    """
    cfg = cfg or QuadratureConfig(abs_tol=1e-11, rel_tol=1e-7)
    sc = scenario
    if sc.lambda_gate >= 0.5 - 1e-12:
        raise ValueError("decay deficit too large: the regularized limit does not exist")
    schedule = [float(_n_value(n)) for n in (n_schedule if n_schedule is not None else sc.n_schedule)]

    t0 = time.perf_counter()
    rs_p = rankin_selberg(RankinSelbergSpec(sc, "primal"), cfg)
    rs_d = rankin_selberg(RankinSelbergSpec(sc, "dual"), cfg)
    t_rs = time.perf_counter() - t0

    density = 1.0 if sc.pair_field == "R" else arch_zeta("C", 1.0) / arch_zeta("R", 1.0)
    predicted = density * rs_p.value * rs_d.value

    rows = []
    prev_err = None
    monotone = True
    for n in schedule:
        t1 = time.perf_counter()
        res = ichino_truncated(sc, n, cfg)
        dt = time.perf_counter() - t1
        ratio = res.value / predicted if predicted != 0 else complex("nan")
        ratio_err = abs(ratio - 1.0)
        if prev_err is not None and ratio_err > prev_err + 1e-12:
            monotone = False
        prev_err = ratio_err
        rows.append(
            {
                "n": n,
                "value": _c2(res.value),
                "err_est": float(res.err_est),
                "converged": bool(res.converged),
                "ratio": _c2(ratio),
                "ratio_abs_err": float(ratio_err),
                "seconds": dt,
            }
        )

    return {
        "label": sc.label,
        "shape": sc.shape,
        "case": sc.case,
        "pair_field": sc.pair_field,
        "psi_scale": sc.psi_scale,
        "decay_gate": float(sc.lambda_gate),
        "n_values": schedule,
        "rankin_selberg": {
            "primal": _c2(rs_p.value),
            "primal_err": float(rs_p.err_est),
            "dual": _c2(rs_d.value),
            "dual_err": float(rs_d.err_est),
            "seconds": t_rs,
        },
        "density_ratio": float(density),
        "predicted_limit": _c2(predicted),
        "rows": rows,
        "final_ratio_abs_err": rows[-1]["ratio_abs_err"] if rows else None,
        "monotone": monotone,
    }
