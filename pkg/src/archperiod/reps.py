"""Parameter objects for the representations entering a triple.

A triple scenario is two or three local components: three GL(2,R)
representations ("RRR" shape), or one GL(2,C) representation plus one
GL(2,R) principal series ("CR" shape). The last real slot always
carries the induced-model vector ("section slot") and must be a
principal series with minimal rotation type k in {0, 1}.

``triple_normalize`` puts raw components into canonical slot order,
validates the parity/central constraints, and selects the case row that
fixes which raising operators and outer flips produce a rotation-
balanced pair of test vectors. It is idempotent and invariant under
permutations of the input components.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RealCharacter",
    "ComplexCharacter",
    "RealPS",
    "RealDS",
    "ComplexPS",
    "char_eval",
    "SymPoly",
    "sym_act",
    "sym_bilinear",
    "sym_hermitian",
    "v_basis",
    "RaisingSpec",
    "TripleScenario",
    "triple_normalize",
    "real_ps_unitary",
    "real_ds",
    "complex_ps",
    "dual_rep",
    "scenario_from_dict",
    "scenario_to_dict",
    "load_scenario",
]


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealCharacter:
    """chi(y) = |y|^exponent * sgn(y)^parity on the units of R."""

    exponent: complex
    parity: int

    def __post_init__(self):
        object.__setattr__(self, "parity", int(self.parity) % 2)
        object.__setattr__(self, "exponent", complex(self.exponent))

    def __call__(self, y):
        y = np.asarray(y)
        out = np.abs(y) ** self.exponent if self.exponent != 0 else np.ones(y.shape, dtype=complex)
        out = np.asarray(out, dtype=complex)
        if self.parity:
            out = out * np.sign(np.real(y))
        if out.ndim == 0:
            return complex(out)
        return out

    def at_minus_one(self) -> int:
        return -1 if self.parity else 1

    def __mul__(self, other: "RealCharacter") -> "RealCharacter":
        return RealCharacter(self.exponent + other.exponent, self.parity ^ other.parity)

    def inverse(self) -> "RealCharacter":
        return RealCharacter(-self.exponent, self.parity)


@dataclass(frozen=True)
class ComplexCharacter:
    """chi(z) = |z|_C^(exponent - (m+n)/2) z^m zbar^n with m*n = 0.

    |z|_C is the square of the euclidean modulus, so on z = r e^(i t)
    the value is r^(2*exponent) e^(i(m-n)t). The circle weight is
    kappa = m - n and chi(-1) = (-1)^kappa.
    """

    exponent: complex
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or (self.m and self.n):
            raise ValueError("need m, n >= 0 with m*n = 0")
        object.__setattr__(self, "exponent", complex(self.exponent))

    @property
    def kappa(self) -> int:
        return self.m - self.n

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        mod_c = (z * np.conj(z)).real
        out = mod_c ** (self.exponent - (self.m + self.n) / 2.0)
        out = np.asarray(out, dtype=complex)
        if self.m:
            out = out * z**self.m
        if self.n:
            out = out * np.conj(z) ** self.n
        if out.ndim == 0:
            return complex(out)
        return out

    def at_minus_one(self) -> int:
        return -1 if self.kappa % 2 else 1

    def restrict_to_real(self) -> RealCharacter:
        # on real x: |x|_C = x^2 and x^m xbar^n = x^(m+n)
        return RealCharacter(2.0 * self.exponent, (self.m + self.n) % 2)

    def __mul__(self, other: "ComplexCharacter") -> "ComplexCharacter":
        kappa = self.kappa + other.kappa
        m, n = (kappa, 0) if kappa >= 0 else (0, -kappa)
        return ComplexCharacter(self.exponent + other.exponent, m, n)

    def inverse(self) -> "ComplexCharacter":
        return ComplexCharacter(-self.exponent, self.n, self.m)


def char_eval(chi, y):
    """Evaluate a RealCharacter or ComplexCharacter at y (vectorized)."""
    return chi(y)


# ---------------------------------------------------------------------------
# Representation parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealPS:
    """Induced representation of GL(2,R) from the pair (mu, nu).

    Normalized so that Re(s) >= 0 where mu nu^(-1) = |.|^(2s) sgn^k.
    """

    mu: RealCharacter
    nu: RealCharacter

    def __post_init__(self):
        s = (self.mu.exponent - self.nu.exponent) / 2.0
        if s.real < 0:
            mu, nu = self.nu, self.mu
            object.__setattr__(self, "mu", mu)
            object.__setattr__(self, "nu", nu)

    @property
    def field(self) -> str:
        return "R"

    @property
    def kind(self) -> str:
        return "real_ps"

    @property
    def s(self) -> complex:
        return (self.mu.exponent - self.nu.exponent) / 2.0

    @property
    def k(self) -> int:
        return (self.mu.parity - self.nu.parity) % 2

    @property
    def central(self) -> RealCharacter:
        return self.mu * self.nu

    @property
    def decay(self) -> float:
        # contribution to the truncation-convergence gate
        return abs(self.s.real)


@dataclass(frozen=True)
class RealDS:
    """Weight-k discrete series of GL(2,R), k >= 2.

    Parameters mu = |.|^(w+(k-1)/2) sgn^parity and
    nu = |.|^(w-(k-1)/2) sgn^(parity+k).
    """

    k: int
    parity: int = 0
    w: complex = 0.0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("discrete series needs k >= 2")
        object.__setattr__(self, "parity", int(self.parity) % 2)
        object.__setattr__(self, "w", complex(self.w))

    @property
    def field(self) -> str:
        return "R"

    @property
    def kind(self) -> str:
        return "real_ds"

    @property
    def mu(self) -> RealCharacter:
        return RealCharacter(self.w + (self.k - 1) / 2.0, self.parity)

    @property
    def nu(self) -> RealCharacter:
        return RealCharacter(self.w - (self.k - 1) / 2.0, (self.parity + self.k) % 2)

    @property
    def central(self) -> RealCharacter:
        return self.mu * self.nu

    @property
    def decay(self) -> float:
        return 0.0


@dataclass(frozen=True)
class ComplexPS:
    """Induced representation of GL(2,C) from (mu, nu).

    Normalized so the rotation weight kprime = kappa(mu) - kappa(nu)
    is >= 0, and Re(sprime) >= 0 when kprime = 0, where
    mu nu^(-1)(r e^(i t)) = r^(4 sprime) e^(i kprime t) ... in module
    terms |z|_C^(2 sprime) e^(i kprime t).
    """

    mu: ComplexCharacter
    nu: ComplexCharacter

    def __post_init__(self):
        kp = self.mu.kappa - self.nu.kappa
        sp = (self.mu.exponent - self.nu.exponent) / 2.0
        if kp < 0 or (kp == 0 and sp.real < 0):
            mu, nu = self.nu, self.mu
            object.__setattr__(self, "mu", mu)
            object.__setattr__(self, "nu", nu)

    @property
    def field(self) -> str:
        return "C"

    @property
    def kind(self) -> str:
        return "complex_ps"

    @property
    def sprime(self) -> complex:
        return (self.mu.exponent - self.nu.exponent) / 2.0

    @property
    def kprime(self) -> int:
        return self.mu.kappa - self.nu.kappa

    @property
    def central(self) -> ComplexCharacter:
        return self.mu * self.nu

    @property
    def decay(self) -> float:
        return abs(self.sprime.real)


def real_ps_unitary(t: float, parities=(0, 0)) -> RealPS:
    """Tempered principal series with mu = |.|^(it) sgn^p1, nu = |.|^(-it) sgn^p2."""
    return RealPS(RealCharacter(1j * t, parities[0]), RealCharacter(-1j * t, parities[1]))


def real_ds(k: int, parity: int = 0, w: complex = 0.0) -> RealDS:
    return RealDS(k, parity, w)


def complex_ps(sprime: complex, kappa_mu: int, kappa_nu: int) -> ComplexPS:
    """Principal series of GL(2,C) with |.|_C-exponents +-sprime and
    the given circle weights on mu and nu."""

    def mk(kappa, expo):
        m, n = (kappa, 0) if kappa >= 0 else (0, -kappa)
        return ComplexCharacter(expo, m, n)

    return ComplexPS(mk(kappa_mu, sprime), mk(kappa_nu, -sprime))


def dual_rep(rep):
    """Contragredient parameters.

    The canonical Whittaker vector of the dual equals the original one
    multiplied by the inverse central character of the determinant, so
    dual vectors can be built by feeding the dual parameters through the
    same restriction formulas.
    """
    if isinstance(rep, RealDS):
        return RealDS(rep.k, (rep.parity + rep.k) % 2, -rep.w)
    if isinstance(rep, RealPS):
        return RealPS(rep.mu.inverse(), rep.nu.inverse())
    if isinstance(rep, ComplexPS):
        return ComplexPS(rep.mu.inverse(), rep.nu.inverse())
    raise TypeError("expected a representation dataclass")


# ---------------------------------------------------------------------------
# Symmetric power polynomials
# ---------------------------------------------------------------------------


class SymPoly:
    """Homogeneous polynomial in X, Y; coeffs[j] multiplies X^j Y^(n-j)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or len(self.coeffs) == 0:
            raise ValueError("coeffs must be a nonempty 1-d array")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "SymPoly") -> "SymPoly":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return SymPoly(self.coeffs + other.coeffs)

    def __rmul__(self, c) -> "SymPoly":
        return SymPoly(complex(c) * self.coeffs)

    def conjugate(self) -> "SymPoly":
        return SymPoly(np.conj(self.coeffs))

    def __repr__(self):  # pragma: no cover
        return f"SymPoly({self.coeffs!r})"


def sym_act(P: SymPoly, g) -> SymPoly:
    """Right substitution action: (g . P)(X, Y) = P((X, Y) g)."""
    g = np.asarray(g, dtype=complex)
    a, b = g[0, 0], g[0, 1]
    c, d = g[1, 0], g[1, 1]
    n = P.degree
    # represent X^j Y^(n-j) by t^j; X -> a t-part ...
    out = np.zeros(n + 1, dtype=complex)
    # (X, Y) g = (a X + c Y, b X + d Y)
    first = np.array([c, a], dtype=complex)  # (aX + cY) as [Y-coeff, X-coeff]
    second = np.array([d, b], dtype=complex)
    pow1 = [np.array([1.0 + 0j])]
    pow2 = [np.array([1.0 + 0j])]
    for _ in range(n):
        pow1.append(np.convolve(pow1[-1], first))
        pow2.append(np.convolve(pow2[-1], second))
    for j in range(n + 1):
        if P.coeffs[j] == 0:
            continue
        term = np.convolve(pow1[j], pow2[n - j])
        out += P.coeffs[j] * term
    return SymPoly(out)


def sym_bilinear(P: SymPoly, Q: SymPoly) -> complex:
    """Invariant bilinear pairing with <X^j Y^(n-j), X^l Y^(n-l)> =
    (-1)^j / C(n, j) when j + l = n and 0 otherwise."""
    n = P.degree
    if Q.degree != n:
        raise ValueError("degree mismatch")
    total = 0.0 + 0.0j
    for j in range(n + 1):
        total += P.coeffs[j] * Q.coeffs[n - j] * ((-1) ** j) / math.comb(n, j)
    return complex(total)


_W_FLIP = np.array([[0.0, 1.0], [-1.0, 0.0]])


def sym_hermitian(P: SymPoly, Q: SymPoly) -> complex:
    """(P, Q) = <P, w . conj(Q)> with w the rotation by a quarter turn."""
    return sym_bilinear(P, sym_act(Q.conjugate(), _W_FLIP))


def v_basis(n: int, j: int) -> SymPoly:
    """v_j = (X + iY)^j (X - iY)^(n-j); rotation weight 2j - n."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    first = np.array([1j, 1.0], dtype=complex)  # X + iY as [Y, X]
    second = np.array([-1j, 1.0], dtype=complex)
    out = np.array([1.0 + 0j])
    for _ in range(j):
        out = np.convolve(out, first)
    for _ in range(n - j):
        out = np.convolve(out, second)
    return SymPoly(out)


# ---------------------------------------------------------------------------
# Triple scenarios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RaisingSpec:
    """Per-slot raising data for the test vectors.

    powers[i]  -- number of ladder steps applied to slot i
    flips[i]   -- whether the outer rotation-flip element acts on slot i
    vop[i]     -- the special first-order operator used by the cr-4 row
    """

    powers: tuple
    flips: tuple
    vop: tuple

    def weight_shift(self, i: int) -> int:
        return 2 * self.powers[i]


@dataclass(frozen=True)
class TripleScenario:
    shape: str  # 'RRR' or 'CR'
    components: tuple
    case: str
    raising: RaisingSpec
    m_index: int | None = None
    psi_scale: float = 1.0
    n_schedule: tuple = (2, 4, 8, 16, 32, 64)
    label: str = ""

    @property
    def section(self):
        """The real principal series carrying the induced-model vector."""
        return self.components[-1]

    @property
    def pair_field(self) -> str:
        return "C" if self.shape == "CR" else "R"

    @property
    def epsilon(self) -> int | None:
        """CR parity invariant: nu'(-1) mu(-1) = (-1)^epsilon."""
        if self.shape != "CR":
            return None
        pip, pi = self.components
        return (pip.nu.kappa + pi.mu.parity) % 2

    @property
    def lambda_gate(self) -> float:
        """Decay deficit; truncated integrals converge when < 1/2."""
        if self.shape == "RRR":
            lam = self.components[0].decay + self.components[1].decay
        else:
            lam = 2.0 * self.components[0].decay
        return lam + abs(self.section.mu.exponent.real)

    def omega_u0(self) -> int:
        """Product of central characters at -1 over the flipped slots."""
        out = 1
        for comp, fl in zip(self.components, self.raising.flips):
            if fl:
                out *= comp.central.at_minus_one()
        return out

    def vector_weights(self) -> tuple:
        """Rotation weights of the test vectors, one per slot."""
        ws = []
        for i, comp in enumerate(self.components):
            if self.shape == "CR" and i == 0:
                kp = comp.kprime
                if self.raising.vop[0]:
                    w = 0  # the cr-4 combination is rotation invariant
                else:
                    w = 2 * self.m_index - kp
            else:
                base = comp.k
                w = base + 2 * self.raising.powers[i]
            if self.raising.flips[i]:
                w = -w
            ws.append(w)
        return tuple(ws)


def _sort_key(rep):
    # canonical slot order: stable across permutations of the input
    kindrank = {"real_ds": 0, "real_ps": 1}[rep.kind]
    return (
        -rep.k if rep.kind == "real_ds" else 0,
        kindrank,
        -(rep.k if rep.kind == "real_ps" else 0),
        -rep.mu.exponent.real,
        -rep.mu.exponent.imag,
        rep.mu.parity,
        rep.nu.parity,
    )


def _normalize_rrr(reps, psi_scale, n_schedule, label) -> TripleScenario:
    if any(r.kind == "complex_ps" for r in reps):
        raise ValueError("RRR shape requires three real components")
    n_ds = sum(1 for r in reps if r.kind == "real_ds")
    if n_ds == 3:
        raise ValueError("the section slot must be a principal series")
    ordered = sorted(reps, key=_sort_key)
    ks = [r.k for r in ordered]
    # parity balance of the rotation types
    if sum(ks) % 2:
        raise ValueError("rotation types must have even sum")
    central = ordered[0].central * ordered[1].central * ordered[2].central
    if abs(central.exponent) > 1e-12 or central.parity:
        raise ValueError("product of central characters must be trivial")

    if n_ds == 0:
        if sorted(ks) == [0, 1, 1]:
            # slots (1, 0, 1): the section slot takes one type-1 component
            ones = [r for r in ordered if r.k == 1]
            zero = [r for r in ordered if r.k == 0][0]
            ordered = [ones[0], zero, ones[1]]
            case = "rrr-1c"
            raising = RaisingSpec((0, 0, 0), (False, False, True), (False,) * 3)
        elif ks == [0, 0, 0]:
            sign = np.prod([r.mu.at_minus_one() for r in ordered])
            if sign > 0:
                case = "rrr-1a"
                raising = RaisingSpec((0, 0, 0), (False, False, False), (False,) * 3)
            else:
                case = "rrr-1b"
                raising = RaisingSpec((0, 1, 1), (False, False, True), (False,) * 3)
        else:
            raise ValueError(f"no principal-series case row for types {ks}")
    elif n_ds == 1:
        k1, k2, k3 = ks
        ell = (k1 - k2 - k3) // 2
        if ell < 0:
            raise ValueError("dominant rotation type too small")
        case = "rrr-2"
        raising = RaisingSpec((0, 0, ell), (False, True, True), (False,) * 3)
    else:
        k1, k2, k3 = ks
        ell = (k1 - k2 - k3) // 2
        if ell < 0:
            raise ValueError("dominant rotation type too small")
        case = "rrr-3"
        raising = RaisingSpec((0, 0, ell), (False, True, True), (False,) * 3)

    if ordered[2].kind != "real_ps":
        raise ValueError("the section slot must be a principal series")
    return TripleScenario(
        shape="RRR",
        components=tuple(ordered),
        case=case,
        raising=raising,
        m_index=None,
        psi_scale=psi_scale,
        n_schedule=tuple(n_schedule),
        label=label,
    )


def _normalize_cr(reps, psi_scale, n_schedule, label) -> TripleScenario:
    comps = {r.kind: r for r in reps}
    if set(comps) != {"complex_ps", "real_ps"}:
        raise ValueError("CR shape needs one complex and one real principal series")
    pip, pi = comps["complex_ps"], comps["real_ps"]
    kp, k = pip.kprime, pi.k
    if (kp + k) % 2:
        raise ValueError("rotation types must have equal parity")
    central = pip.central.restrict_to_real() * pi.central
    if abs(central.exponent) > 1e-12 or central.parity:
        raise ValueError("product of central characters must be trivial on the reals")
    eps = (pip.nu.kappa + pi.mu.parity) % 2
    if kp % 2:
        # both parities collapse to a single case once the inducing
        # characters are relabeled, so one row covers odd kp
        case = "cr-3"
        m = (kp + k) // 2
        raising = RaisingSpec((0, 0), (False, True), (False, False))
    elif eps == 0:
        case = "cr-1"
        m = kp // 2
        raising = RaisingSpec((0, 0), (False, False), (False, False))
    elif kp == 0:
        case = "cr-4"
        m = None
        raising = RaisingSpec((0, 0), (False, False), (True, False))
    else:
        case = "cr-2"
        m = kp // 2 + 1
        raising = RaisingSpec((0, 1), (False, True), (False, False))
    if m is not None and not 0 <= m <= max(kp, 0):
        raise ValueError("pairing index out of range")
    return TripleScenario(
        shape="CR",
        components=(pip, pi),
        case=case,
        raising=raising,
        m_index=m,
        psi_scale=psi_scale,
        n_schedule=tuple(n_schedule),
        label=label,
    )


def triple_normalize(reps, psi_scale: float = 1.0, n_schedule=(2, 4, 8, 16, 32, 64), label: str = "") -> TripleScenario:
    """Canonicalize raw components into a TripleScenario.

    Accepts the components in any order. Raises ValueError when the
    combination satisfies no case row (odd type sum, nontrivial central
    product, no principal series for the section slot).
    """
    reps = list(reps)
    if len(reps) == 3:
        return _normalize_rrr(reps, psi_scale, n_schedule, label)
    if len(reps) == 2:
        return _normalize_cr(reps, psi_scale, n_schedule, label)
    raise ValueError("a triple scenario needs two or three components")


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------


def _cplx_to_json(z: complex):
    return [z.real, z.imag]


def _cplx_from_json(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def _component_to_dict(rep) -> dict:
    if rep.kind == "real_ps":
        return {
            "kind": "real_ps",
            "mu": {"exponent": _cplx_to_json(rep.mu.exponent), "parity": rep.mu.parity},
            "nu": {"exponent": _cplx_to_json(rep.nu.exponent), "parity": rep.nu.parity},
        }
    if rep.kind == "real_ds":
        return {"kind": "real_ds", "k": rep.k, "parity": rep.parity, "w": _cplx_to_json(rep.w)}
    return {
        "kind": "complex_ps",
        "mu": {"exponent": _cplx_to_json(rep.mu.exponent), "m": rep.mu.m, "n": rep.mu.n},
        "nu": {"exponent": _cplx_to_json(rep.nu.exponent), "m": rep.nu.m, "n": rep.nu.n},
    }


def _component_from_dict(d: dict):
    kind = d["kind"]
    if kind == "real_ps":
        if "t" in d:
            return real_ps_unitary(d["t"], tuple(d.get("parity", (0, 0))))
        return RealPS(
            RealCharacter(_cplx_from_json(d["mu"]["exponent"]), d["mu"].get("parity", 0)),
            RealCharacter(_cplx_from_json(d["nu"]["exponent"]), d["nu"].get("parity", 0)),
        )
    if kind == "real_ds":
        return RealDS(d["k"], d.get("parity", 0), _cplx_from_json(d.get("w", 0.0)))
    if kind == "complex_ps":
        if "t" in d:
            kappa = d.get("kappa", [d.get("kprime", 0), 0])
            return complex_ps(1j * d["t"], kappa[0], kappa[1])
        return ComplexPS(
            ComplexCharacter(_cplx_from_json(d["mu"]["exponent"]), d["mu"].get("m", 0), d["mu"].get("n", 0)),
            ComplexCharacter(_cplx_from_json(d["nu"]["exponent"]), d["nu"].get("m", 0), d["nu"].get("n", 0)),
        )
    raise ValueError(f"unknown component kind {kind!r}")


def scenario_to_dict(sc: TripleScenario) -> dict:
    return {
        "shape": sc.shape,
        "label": sc.label,
        "psi_scale": sc.psi_scale,
        "delta_choice": "standard",
        "n_schedule": list(sc.n_schedule),
        "components": [_component_to_dict(c) for c in sc.components],
    }


def scenario_from_dict(d: dict) -> TripleScenario:
    if d.get("delta_choice", "standard") != "standard":
        raise ValueError("only the standard trace-zero element is supported")
    comps = [_component_from_dict(c) for c in d["components"]]
    return triple_normalize(
        comps,
        psi_scale=float(d.get("psi_scale", 1.0)),
        n_schedule=tuple(d.get("n_schedule", (2, 4, 8, 16, 32, 64))),
        label=d.get("label", ""),
    )


def load_scenario(path) -> TripleScenario:
    with open(path) as fh:
        return scenario_from_dict(json.load(fh))
