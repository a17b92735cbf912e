"""Distinguished Whittaker vectors and induced-model sections.

All vectors are pinned to the additive character x -> e^(2 pi i x) on R
and z -> e^(2 pi i (z + conj z)) on C; a positive `scale` knob replaces
the character by its scale-twist, which turns torus restrictions into
dilates and multiplies intertwining constants by a predictable
character value.

Conventions. Rotations are k(b) = [[cos b, sin b], [-sin b, cos b]] and
a weight-n vector satisfies v(h k(b)) = e^(i n b) v(h). The flip J =
diag(-1, 1) conjugates k(b) to k(-b), so right translation by J negates
weights; on torus restrictions it is y -> -y. Dual vectors are built by
feeding the contragredient parameters (reps.dual_rep) through the same
formulas. Restrictions are expressed through the modified Bessel
function of the second kind.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb, pi

import numpy as np

from .reps import ComplexPS, RealDS, RealPS, v_basis
from .specfun import bessel_k, gamma_R

__all__ = [
    "psi_additive",
    "kirillov_real",
    "kirillov_complex_component",
    "complex_scalar_vector",
    "kirillov_basis_real",
    "kirillov_basis_complex",
    "Section",
    "section_minimal",
    "section_raise",
    "section_flip",
    "section_dual",
    "section_eval",
    "raising_constant",
    "intertwining_constant",
]


def psi_additive(field: str, x, scale: float = 1.0):
    """Standard additive character, optionally scale-twisted."""
    x = np.asarray(x)
    if field == "R":
        return np.exp(2j * pi * scale * x)
    return np.exp(4j * pi * scale * np.real(x))


def _wrap_real(core):
    # core maps a 1-d float array to a complex array; presents a
    # scalar-in scalar-out, array-in array-out callable
    def f(y):
        arr = np.atleast_1d(np.asarray(y, dtype=float))
        out = core(arr)
        return complex(out[0]) if np.ndim(y) == 0 else out

    return f


def _wrap_complex(core):
    def f(z):
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = core(arr)
        return complex(out[0]) if np.ndim(z) == 0 else out

    return f


# ---------------------------------------------------------------------------
# Whittaker restrictions to the diagonal torus
# ---------------------------------------------------------------------------


def _real_ps_minimal(rep: RealPS):
    mu, s, k = rep.mu, rep.s, rep.k

    def core(y):
        ay = np.abs(y)
        out = np.zeros(y.shape, dtype=complex)
        mask = ay > 0
        ym, aym = y[mask], ay[mask]
        acc = np.zeros(ym.shape, dtype=complex)
        for ell in range(k + 1):
            acc += (
                comb(k, ell)
                * mu(ym)
                * ym ** (k - ell)
                * aym ** ((1 - k) / 2.0 - s + ell)
                * bessel_k(s + k / 2.0 - ell, 2.0 * pi * aym)
            )
        out[mask] = acc
        return out

    return _wrap_real(core)


def _real_ps_raised_once(rep: RealPS):
    # one ladder step applied to the rotation-invariant vector (k = 0);
    # the step operator carries the -(1/8 pi) normalization
    if rep.k != 0:
        raise ValueError("single-step raised form implemented for k = 0 only")
    mu, s = rep.mu, rep.s

    def core(y):
        ay = np.abs(y)
        out = np.zeros(y.shape, dtype=complex)
        mask = ay > 0
        ym, aym = y[mask], ay[mask]
        sgn = np.sign(ym)
        t = 2.0 * pi * aym
        val = (
            -2.0 * pi * aym ** (1.5 - s) * bessel_k(s + 1.0, t)
            - 4.0 * pi * aym ** (1.5 - s) * sgn * bessel_k(s, t)
            + aym ** (0.5 - s) * bessel_k(s, t)
            - 2.0 * pi * aym ** (1.5 - s) * bessel_k(s - 1.0, t)
        )
        out[mask] = mu(ym) * val * (-1.0 / (8.0 * pi))
        return out

    return _wrap_real(core)


def _real_ds_minimal(rep: RealDS):
    mu = rep.mu

    def core(y):
        out = np.zeros(y.shape, dtype=complex)
        mask = y > 0
        ym = y[mask]
        out[mask] = mu(ym) * np.sqrt(ym) * np.exp(-2.0 * pi * ym)
        return out

    return _wrap_real(core)


def kirillov_real(rep, raised: int = 0, flip: bool = False, scale: float = 1.0):
    """Torus restriction y -> W(a(y)) of a distinguished real vector.

    raised: number of ladder steps (only 0, or 1 on a type-0 principal
    series). flip applies the outer element J on the right, which on
    the restriction is y -> -y. scale dilates per the character twist.
    Dual vectors: pass reps.dual_rep(rep).
    """
    if isinstance(rep, RealDS):
        if raised:
            raise ValueError("raising the discrete-series vector is not needed")
        base = _real_ds_minimal(rep)
    elif isinstance(rep, RealPS):
        if raised == 0:
            base = _real_ps_minimal(rep)
        elif raised == 1:
            base = _real_ps_raised_once(rep)
        else:
            raise ValueError("only a single ladder step is supported here")
    else:
        raise TypeError("expected a real representation")

    sign = -1.0 if flip else 1.0
    factor = sign * scale
    if factor == 1.0:
        return base

    def W(y):
        return base(factor * np.asarray(y, dtype=float))

    return W


def kirillov_complex_component(rep: ComplexPS, j: int, scale: float = 1.0):
    """Component function z -> W_j(a(z)) of the vector-valued complex
    vector, the pairing against X^j Y^(k'-j)."""
    kp, sp, mu = rep.kprime, rep.sprime, rep.mu
    if not 0 <= j <= kp:
        raise ValueError("component index out of range")
    const = 4.0 * rep.central.at_minus_one() * (1j**j)

    def core(z):
        z = scale * z
        mod = (z * np.conj(z)).real
        out = np.zeros(z.shape, dtype=complex)
        mask = mod > 0
        zm, mm = z[mask], mod[mask]
        out[mask] = (
            const
            * mu(zm)
            * np.conj(zm) ** (kp - j)
            * mm ** -(kp / 4.0 + sp - j / 2.0 - 0.5)
            * bessel_k(kp / 2.0 + 2.0 * sp - j, 4.0 * pi * np.sqrt(mm))
        )
        return out

    return _wrap_complex(core)


def _complex_vop_vector(rep: ComplexPS, scale: float = 1.0):
    # rotation-invariant first-order raise of the spherical vector;
    # the operator acts on the torus as multiplication by 2 Im(z), so the
    # restriction is 8 w(-1) mu(z) Im(z) |z|_C^(1/2 - s') K_{2s'}(4 pi |z|_C^(1/2))
    if rep.kprime != 0:
        raise ValueError("this vector exists only on the spherical series")
    sp, mu = rep.sprime, rep.mu
    const = 8.0 * rep.central.at_minus_one()

    def core(z):
        z = scale * z
        mod = (z * np.conj(z)).real
        out = np.zeros(z.shape, dtype=complex)
        mask = mod > 0
        zm, mm = z[mask], mod[mask]
        out[mask] = (
            const
            * mu(zm)
            * np.imag(zm)
            * mm ** (0.5 - sp)
            * bessel_k(2.0 * sp, 4.0 * pi * np.sqrt(mm))
        )
        return out

    return _wrap_complex(core)


def complex_scalar_vector(rep: ComplexPS, m_index=None, vop: bool = False, scale: float = 1.0):
    """Scalar vector used on the complex slot.

    Either the pairing of the vector-valued vector against the circle
    eigenvector v_m (rotation weight 2 m - k'), or with vop=True the
    rotation-invariant raised vector on the spherical series. Returns
    (torus restriction, rotation weight).
    """
    if vop:
        return _complex_vop_vector(rep, scale), 0
    kp = rep.kprime
    if m_index is None:
        if kp != 0:
            raise ValueError("m_index required when the minimal type is positive")
        m_index = 0
    vm = v_basis(kp, m_index)
    comps = [kirillov_complex_component(rep, j, scale) for j in range(kp + 1)]
    coeffs = [(-1) ** kp * vm.coeffs[j] for j in range(kp + 1)]

    def W(z):
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.zeros(arr.shape, dtype=complex)
        for c, wj in zip(coeffs, comps):
            if c != 0:
                out += c * wj(arr)
        return complex(out[0]) if np.ndim(z) == 0 else out

    return W, 2 * m_index - kp


# ---------------------------------------------------------------------------
# Kirillov-space bases (used by the decay property tests)
# ---------------------------------------------------------------------------


def kirillov_basis_real(mu_exp, mu_parity, nu_exp, nu_parity, a: int, b: int):
    """Basis function of the torus-restriction space attached to the
    characters |y|^mu_exp sgn^mu_parity and |y|^nu_exp sgn^nu_parity."""
    if a < 0 or b < 0:
        raise ValueError("need a, b >= 0")
    if (a - b) % 2 != (mu_parity - nu_parity) % 2:
        raise ValueError("index parity must match the character parity")
    s1, s2 = complex(mu_exp), complex(nu_exp)
    m1 = mu_parity % 2

    def core(y):
        ay = np.abs(y)
        out = np.zeros(y.shape, dtype=complex)
        mask = ay > 0
        ym, aym = y[mask], ay[mask]
        out[mask] = (
            np.sign(ym) ** m1
            * ym**a
            * aym ** (0.5 + (s1 + s2) / 2.0 - (a - b) / 2.0)
            * bessel_k((s1 - s2) / 2.0 + (a - b) / 2.0, 2.0 * pi * aym)
        )
        return out

    return _wrap_real(core)


def kirillov_basis_complex(mu_exp, mu_kappa, nu_exp, nu_kappa, a: int, b: int, c: int, d: int):
    """Complex analogue with four nonnegative indices.

    The circle-weight constraint couples a - c and b - d to the weights
    of the two characters; indices violating it give the zero function
    and are rejected.
    """
    if min(a, b, c, d) < 0:
        raise ValueError("need nonnegative indices")
    kappa = mu_kappa - nu_kappa
    m, n = (kappa, 0) if kappa >= 0 else (0, -kappa)
    if a - c + m != b - d + n:
        raise ValueError("circle weights must match")
    m1, n1 = (mu_kappa, 0) if mu_kappa >= 0 else (0, -mu_kappa)
    s1, s2 = complex(mu_exp), complex(nu_exp)
    expo = 0.5 + (s1 + s2) / 2.0 - (a - c) / 4.0 - (b - d) / 4.0 - (m1 + n1) / 2.0

    def core(z):
        mod = (z * np.conj(z)).real
        out = np.zeros(z.shape, dtype=complex)
        mask = mod > 0
        zm, mm = z[mask], mod[mask]
        out[mask] = (
            zm ** (a + m1)
            * np.conj(zm) ** (b + n1)
            * mm**expo
            * bessel_k(s1 - s2 + (a - c) / 2.0 + (b - d) / 2.0, 4.0 * pi * np.sqrt(mm))
        )
        return out

    return _wrap_complex(core)


# ---------------------------------------------------------------------------
# Induced-model sections on GL(2, R)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Section:
    """Scalar multiple of the normalized weight-n induced-model vector.

    The underlying pair of characters is (mu, nu) of `rep` when dual is
    False and their inverses when dual is True; `coeff` carries the
    constants accumulated from ladder steps, flips and the normalized
    intertwining map. Values on rotations: coeff * e^(i n theta).
    """

    rep: RealPS
    weight: int
    coeff: complex = 1.0 + 0.0j
    dual: bool = False

    @property
    def model_s(self) -> complex:
        return -self.rep.s if self.dual else self.rep.s

    def characters(self):
        mu, nu = self.rep.mu, self.rep.nu
        if self.dual:
            return mu.inverse(), nu.inverse()
        return mu, nu


def section_minimal(rep: RealPS) -> Section:
    return Section(rep=rep, weight=rep.k)


def raising_constant(s, n: int, ell: int) -> complex:
    """Scalar picked up by ell ladder steps on the weight-n vector in a
    model with parameter s."""
    if ell < 0:
        raise ValueError("need ell >= 0")
    acc = complex((-1.0) ** ell * 2.0 ** (-2 * ell) * pi ** (-ell))
    for i in range(ell):
        acc *= s + (n + 1) / 2.0 + i
    return acc


def section_raise(sec: Section, ell: int) -> Section:
    c = raising_constant(sec.model_s, sec.weight, ell)
    return replace(sec, weight=sec.weight + 2 * ell, coeff=sec.coeff * c)


def section_flip(sec: Section) -> Section:
    mu1, _ = sec.characters()
    return replace(sec, weight=-sec.weight, coeff=sec.coeff * mu1(-1.0))


def intertwining_constant(rep: RealPS, scale: float = 1.0) -> complex:
    """Value at the identity of the normalized intertwining image of the
    minimal vector, including the inverse-central determinant twist."""
    s, k = rep.s, rep.k
    c = gamma_R(1 + k - 2 * s) / gamma_R(1 + k + 2 * s)
    if scale != 1.0:
        # the normalized map under a scale-twisted additive character
        # picks up the ratio character at the scale
        c = c * (rep.mu * rep.nu.inverse())(scale)
    return c


def section_dual(sec: Section, scale: float = 1.0) -> Section:
    """Normalized intertwining map followed by the inverse-central twist,
    landing in the inverse-character model. Applies to the minimal
    vector only; raise or flip afterwards."""
    if sec.dual:
        raise ValueError("already in the dual model")
    if sec.weight != sec.rep.k:
        raise ValueError("dualize the minimal vector first, then raise or flip")
    c = intertwining_constant(sec.rep, scale)
    return Section(rep=sec.rep, weight=sec.weight, coeff=sec.coeff * c, dual=True)


def section_eval(sec: Section, y1, y2, theta):
    """Value on diag(y1, y2) k(theta); left unipotent factors drop out."""
    mu1, nu1 = sec.characters()
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    return (
        sec.coeff
        * mu1(y1)
        * nu1(y2)
        * np.sqrt(np.abs(y1 / y2))
        * np.exp(1j * sec.weight * np.asarray(theta))
    )
