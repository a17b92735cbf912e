"""Invariant pairings on Whittaker models and matrix coefficients.

Two pairings are implemented. The bilinear one integrates
W1(a(y) g1) W2(a(-y) g2) over the units of the field; the hermitian one
conjugates the second factor and keeps a(y) in both slots. Group
arguments are given in Iwasawa form and absorbed into the torus
variable through the equivariance of the model, so every pairing is a
single adaptive integral over R^x or C^x.

A vector here is either a scalar function on the torus (real case, or
a fixed contraction of the vector-valued complex object), or the full
symmetric-power-valued complex object. Pairings of the latter contract
the two polynomial values with the invariant bilinear or hermitian form
in each fiber.

Closed norm values follow the Gamma-product formulas for the
distinguished vectors. Matrix coefficients are pairings of translated
vectors normalized by the corresponding norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, cos, pi, sin

import numpy as np

from .quadrature import IntegralResult, QuadratureConfig, integrate_multiplicative
from .reps import (
    ComplexPS,
    RealDS,
    RealPS,
    SymPoly,
    dual_rep,
    sym_act,
    v_basis,
)
from .specfun import gamma_complex
from .whittaker import (
    complex_scalar_vector,
    intertwining_constant,
    kirillov_complex_component,
    kirillov_real,
    psi_additive,
)

__all__ = [
    "IwasawaPoint",
    "IDENTITY",
    "FLIP",
    "WhittakerVector",
    "real_vector",
    "complex_vector",
    "complex_contraction_vector",
    "whittaker_pairing",
    "norm_closed",
    "hermitian_norm_closed",
    "matrix_coefficient",
]


@dataclass(frozen=True)
class IwasawaPoint:
    """The element J^flip n(x) diag(y1, y2) k(theta).

    k(theta) is the rotation [[cos, sin], [-sin, cos]]; J = diag(-1, 1)
    multiplies on the left, where it merely negates the torus variable
    of any a(y)-translate. Entries may be complex for the complex field.
    """

    x: complex = 0.0
    y1: complex = 1.0
    y2: complex = 1.0
    theta: float = 0.0
    flip: bool = False

    def __post_init__(self):
        if self.y1 == 0 or self.y2 == 0:
            raise ValueError("Iwasawa point needs invertible diagonal part")


IDENTITY = IwasawaPoint()
FLIP = IwasawaPoint(flip=True)


@dataclass(frozen=True)
class WhittakerVector:
    """A vector in a Whittaker model, reduced to torus data.

    Exactly one of the following shapes:
      kernel set        -- scalar vector; `weight` is its rotation weight
      components only   -- the symmetric-power-valued complex vector
      components + contraction -- the scalar pairing of that vector
                           against a fixed polynomial
    `central` is the central character; `scale` the additive-character
    dilation the vector is pinned to.
    """

    field: str
    central: object
    kernel: object = None
    weight: int = 0
    components: tuple = ()
    contraction: SymPoly | None = None
    scale: float = 1.0

    @property
    def vector_valued(self) -> bool:
        return self.kernel is None and self.contraction is None


def real_vector(rep, raised: int = 0, flip: bool = False, scale: float = 1.0) -> WhittakerVector:
    """Distinguished vector of a real representation, optionally raised
    and then flipped. Dual vectors: pass reps.dual_rep(rep)."""
    w = rep.k + 2 * raised
    if flip:
        w = -w
    return WhittakerVector(
        field="R",
        central=rep.central,
        kernel=kirillov_real(rep, raised, flip, scale),
        weight=w,
        scale=scale,
    )


def complex_vector(rep: ComplexPS, scale: float = 1.0) -> WhittakerVector:
    """The symmetric-power-valued distinguished vector of a complex
    principal series."""
    comps = tuple(kirillov_complex_component(rep, j, scale) for j in range(rep.kprime + 1))
    return WhittakerVector(field="C", central=rep.central, components=comps, scale=scale)


def complex_contraction_vector(
    rep: ComplexPS,
    m_index: int | None = None,
    poly: SymPoly | None = None,
    vop: bool = False,
    scale: float = 1.0,
) -> WhittakerVector:
    """Scalar vector on the complex slot.

    poly (or the circle eigenvector v_{m_index}) is paired against the
    vector-valued object; with vop=True the rotation-invariant raised
    vector on the spherical series is returned instead.
    """
    if vop:
        kern, wt = complex_scalar_vector(rep, vop=True, scale=scale)
        return WhittakerVector(field="C", central=rep.central, kernel=kern, weight=wt, scale=scale)
    kp = rep.kprime
    weight = 0
    if poly is None:
        if m_index is None:
            raise ValueError("need m_index or poly")
        poly = v_basis(kp, m_index)
        weight = 2 * m_index - kp
    elif poly.degree != kp:
        raise ValueError("polynomial degree must match the minimal type")
    comps = tuple(kirillov_complex_component(rep, j, scale) for j in range(kp + 1))
    return WhittakerVector(
        field="C",
        central=rep.central,
        components=comps,
        contraction=poly,
        weight=weight,
        scale=scale,
    )


# ---------------------------------------------------------------------------
# Evaluation at a(y) g
# ---------------------------------------------------------------------------


def _rot_mat(theta: float) -> np.ndarray:
    c, s = cos(theta), sin(theta)
    return np.array([[c, s], [-s, c]])


def _act_matrix(k: int, g: np.ndarray) -> np.ndarray:
    # columns are the images of the monomials X^j Y^(k-j)
    out = np.empty((k + 1, k + 1), dtype=complex)
    for j in range(k + 1):
        e = np.zeros(k + 1, dtype=complex)
        e[j] = 1.0
        out[:, j] = sym_act(SymPoly(e), g).coeffs
    return out


def torus_evaluator(w: WhittakerVector, g: IwasawaPoint):
    """Callable y -> W(a(y) g), vectorized over y.

    For the vector-valued shape the result rows are the polynomial
    coefficients, rows[l] multiplying X^l Y^(k-l).
    """
    sign = -1.0 if g.flip else 1.0
    ratio = g.y1 / g.y2
    cen = w.central(g.y2)

    if w.kernel is not None:
        const = cen * np.exp(1j * w.weight * g.theta)

        def ev(y):
            yy = sign * np.asarray(y)
            out = const * np.asarray(w.kernel(yy * ratio), dtype=complex)
            if g.x != 0:
                out = out * psi_additive(w.field, yy * g.x, w.scale)
            return out

        return ev

    k = len(w.components) - 1

    if w.contraction is not None:
        P = w.contraction if g.theta == 0 else sym_act(w.contraction, _rot_mat(g.theta))
        coeffs = ((-1) ** k) * P.coeffs

        def ev(y):
            yy = sign * np.asarray(y, dtype=complex)
            u = yy * ratio
            out = None
            for l in range(k + 1):
                if coeffs[l] != 0:
                    term = coeffs[l] * np.asarray(w.components[l](u), dtype=complex)
                    out = term if out is None else out + term
            if out is None:
                out = np.zeros(np.shape(u), dtype=complex)
            out = cen * out
            if g.x != 0:
                out = out * psi_additive("C", yy * g.x, w.scale)
            return out

        return ev

    # vector-valued; coefficient of X^l Y^(k-l) is (-1)^l C(k,l) W_{k-l}
    A = None if g.theta == 0 else _act_matrix(k, _rot_mat(-g.theta))
    binoms = np.array([(-1) ** l * comb(k, l) for l in range(k + 1)], dtype=complex)

    def ev(y):
        yy = sign * np.asarray(y, dtype=complex)
        u = yy * ratio
        vals = np.stack([np.asarray(w.components[k - l](u), dtype=complex) for l in range(k + 1)])
        rows = binoms.reshape((k + 1,) + (1,) * (vals.ndim - 1)) * vals
        if A is not None:
            rows = np.tensordot(A, rows, axes=(1, 0))
        fac = cen
        if g.x != 0:
            fac = fac * psi_additive("C", yy * g.x, w.scale)
        return fac * rows

    return ev


# ---------------------------------------------------------------------------
# Pairings
# ---------------------------------------------------------------------------


def whittaker_pairing(
    kind: str,
    w1: WhittakerVector,
    w2: WhittakerVector,
    g1: IwasawaPoint = IDENTITY,
    g2: IwasawaPoint = IDENTITY,
    cfg: QuadratureConfig | None = None,
) -> IntegralResult:
    """Invariant pairing of two translated vectors.

    bilinear:  int W1(a(y) g1) W2(a(-y) g2) d*y
    hermitian: int W1(a(y) g1) conj(W2(a(y) g2)) d*y
    Vector-valued complex arguments are contracted fiberwise with the
    invariant bilinear (resp. hermitian) form on the symmetric power.
    """
    if kind not in ("bilinear", "hermitian"):
        raise ValueError(f"unknown pairing kind {kind!r}")
    if w1.field != w2.field:
        raise ValueError("vectors live over different fields")
    if w1.vector_valued != w2.vector_valued:
        raise ValueError("cannot pair scalar with vector-valued")
    cfg = cfg or QuadratureConfig()
    ev1 = torus_evaluator(w1, g1)
    ev2 = torus_evaluator(w2, g2)

    if not w1.vector_valued:
        if kind == "bilinear":
            def f(y):
                return ev1(y) * ev2(-np.asarray(y))
        else:
            def f(y):
                return ev1(y) * np.conj(ev2(y))
        return integrate_multiplicative(f, w1.field, cfg)

    k = len(w1.components) - 1
    if len(w2.components) - 1 != k:
        raise ValueError("symmetric-power degrees differ")
    if kind == "bilinear":
        gram = np.array([(-1) ** l / comb(k, l) for l in range(k + 1)], dtype=complex)

        def f(y):
            a = ev1(y)
            b = ev2(-np.asarray(y))
            out = None
            for l in range(k + 1):
                term = gram[l] * a[l] * b[k - l]
                out = term if out is None else out + term
            return out
    else:
        gram = np.array([1.0 / comb(k, l) for l in range(k + 1)], dtype=complex)

        def f(y):
            a = ev1(y)
            b = ev2(y)
            out = None
            for l in range(k + 1):
                term = gram[l] * a[l] * np.conj(b[l])
                out = term if out is None else out + term
            return out

    return integrate_multiplicative(f, "C", cfg)


# ---------------------------------------------------------------------------
# Closed norms
# ---------------------------------------------------------------------------


def norm_closed(target: str, rep) -> complex:
    """Exact norm of the distinguished vector.

    whittaker_norm: the bilinear norm pairing the flipped vector against
    the inverse-central twist (real case), or its vector-valued complex
    analogue. section_norm: the bilinear norm of the induced-model
    vector against its normalized intertwining dual.
    """
    if target == "section_norm":
        if not isinstance(rep, RealPS):
            raise ValueError("section norms are defined for real principal series")
        return rep.mu(-1.0) * intertwining_constant(rep)
    if target != "whittaker_norm":
        raise ValueError(f"unknown norm target {target!r}")
    if isinstance(rep, RealDS):
        k = rep.k
        return complex(2.0 ** (-2 * k) * pi ** (-k) * gamma_complex(k))
    if isinstance(rep, RealPS):
        k, s = rep.k, rep.s
        return complex(
            0.25 * pi ** (-k) * gamma_complex((k + 1) / 2 + s) * gamma_complex((k + 1) / 2 - s)
        )
    if isinstance(rep, ComplexPS):
        # meromorphic in the spectral parameter, unlike the hermitian norm
        k, s = rep.kprime, rep.sprime
        g = (
            2.0 ** (-k + 1)
            * pi ** (-k - 2)
            * gamma_complex(k / 2 + 2 * s + 1)
            * gamma_complex(k / 2 - 2 * s + 1)
        )
        return complex((1j ** k) * rep.nu.at_minus_one() * g)
    raise TypeError("expected a representation dataclass")


def hermitian_norm_closed(rep) -> complex:
    """Exact hermitian norm of the distinguished vector; coincides with
    the bilinear norm in the real case.

    Valid on the unitary axis only (conjugation is not holomorphic, so
    this value does not continue off it); non-unitary parameters are
    rejected."""
    if isinstance(rep, RealDS):
        if abs(complex(rep.w)) > 1e-12:
            raise ValueError("hermitian norm needs an untwisted discrete series")
        return norm_closed("whittaker_norm", rep)
    if isinstance(rep, RealPS):
        if abs(complex(rep.s).real) > 1e-12:
            raise ValueError("hermitian norm needs a unitary principal series")
        return norm_closed("whittaker_norm", rep)
    if isinstance(rep, ComplexPS):
        k, s = rep.kprime, rep.sprime
        if abs(complex(s).real) > 1e-12:
            raise ValueError("hermitian norm needs a unitary principal series")
        return complex(
            2.0 ** (-k + 1)
            * pi ** (-k - 2)
            * gamma_complex(k / 2 + 2 * s + 1)
            * gamma_complex(k / 2 - 2 * s + 1)
        )
    raise TypeError("expected a representation dataclass")


# ---------------------------------------------------------------------------
# Matrix coefficients
# ---------------------------------------------------------------------------


def _parse_t(t):
    if t is None:
        return 0, False
    if isinstance(t, (tuple, list)) and len(t) == 2:
        return int(t[0]), bool(t[1])
    raise ValueError("t must be None or a (raised, flip) pair")


def matrix_coefficient(
    rep,
    h: IwasawaPoint,
    t=None,
    kind: str = "bilinear",
    cfg: QuadratureConfig | None = None,
    component: int | None = None,
) -> complex:
    """Normalized matrix coefficient of the translated distinguished
    vector at h.

    t is a (raised, flip) pair applied to both slots before the outer
    translation. The normalizing denominator is the norm of the
    untranslated vector: the bilinear one pairs the flipped vector
    against the untwisted dual (the plain unflipped pairing vanishes
    identically for nonzero rotation weights, so it cannot normalize).
    For the complex field, `component` selects the scalar piece paired
    against the circle eigenvector v_component, normalized by the full
    vector-valued norm, and t must be trivial.
    """
    cfg = cfg or QuadratureConfig()
    raised, flip = _parse_t(t)

    if rep.field == "R":
        wt = real_vector(rep, raised, flip)
        if kind == "bilinear":
            dual = real_vector(dual_rep(rep), raised, flip)
            num = whittaker_pairing("bilinear", wt, dual, h, IDENTITY, cfg)
            den = whittaker_pairing(
                "bilinear",
                real_vector(rep, flip=True),
                real_vector(dual_rep(rep)),
                IDENTITY,
                IDENTITY,
                cfg,
            )
        else:
            num = whittaker_pairing("hermitian", wt, wt, h, IDENTITY, cfg)
            den = whittaker_pairing(
                "hermitian", real_vector(rep), real_vector(rep), IDENTITY, IDENTITY, cfg
            )
        if abs(den.value) < 1e-300:
            raise ZeroDivisionError("normalizing pairing vanishes")
        return num.value / den.value

    if raised or flip:
        raise ValueError("translation data on the complex slot is not supported here")
    if component is None:
        raise ValueError("the complex matrix coefficient needs a component index")
    poly = v_basis(rep.kprime, component)
    w = complex_contraction_vector(rep, poly=poly)
    if kind == "bilinear":
        wd = complex_contraction_vector(dual_rep(rep), poly=poly)
        num = whittaker_pairing("bilinear", w, wd, h, IDENTITY, cfg)
        den = norm_closed("whittaker_norm", rep)
    else:
        num = whittaker_pairing("hermitian", w, w, h, IDENTITY, cfg)
        den = hermitian_norm_closed(rep)
    if den == 0:
        raise ZeroDivisionError("normalizing norm vanishes")
    return num.value / den
