"""Radial functions as quasi-polynomials and their weighted inner product.

A quasi-polynomial is ``f(rho) = rho**sigma * exp(-xi*rho) * sum_j c_j rho**j``.
The class is closed under rho**p multiplication, differentiation and hence
under every DiffOp, so operators act exactly in coefficient space.  The
inner product ``(f, g) = int_0^inf f g rho**-1 drho`` is a finite Gamma sum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import mpmath
import numpy as np

from .errors import DivergenceError, ExponentUnderflowError, ZeroFunctionError
from .special_functions import kummer_coeffs
from .spectrum import QuantumNumbers, SpectralParams, energy_of
from .symbolic_ops import DiffOp

# relative size below which a sum of float contributions counts as cancelled
CANCEL_TOL = 64 * np.finfo(float).eps
_EXTRA_DPS = 40


@dataclass(frozen=True)
class Binding:
    """Numeric values for the operator indeterminates."""

    s: float
    xi: float
    gamma: float = 0.0

    @classmethod
    def coerce(cls, value: "Binding | Mapping[str, float]") -> "Binding":
        if isinstance(value, Binding):
            return value
        return cls(s=value["s"], xi=value["xi"], gamma=value.get("gamma", 0.0))


@dataclass(frozen=True)
class QuasiPolynomial:
    base_exponent: float
    decay: float
    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = [float(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0.0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))
        if self.decay <= 0:
            raise ValueError(f"decay must be positive, got {self.decay}")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        poly = np.polynomial.polynomial.polyval(rho, self.coeffs) if self.coeffs else 0.0 * rho
        return rho**self.base_exponent * np.exp(-self.decay * rho) * poly

    def scale(self, factor: float) -> "QuasiPolynomial":
        return QuasiPolynomial(self.base_exponent, self.decay, tuple(factor * c for c in self.coeffs))

    def __neg__(self) -> "QuasiPolynomial":
        return self.scale(-1.0)

    def __mul__(self, factor: float) -> "QuasiPolynomial":
        return self.scale(factor)

    __rmul__ = __mul__

    def __add__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        base, a, b = _aligned(self, other)
        n = max(len(a), len(b))
        a = a + [0.0] * (n - len(a))
        b = b + [0.0] * (n - len(b))
        return QuasiPolynomial(base, self.decay, tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        return self + (-other)

    def times_rho(self, power: int) -> "QuasiPolynomial":
        if self.base_exponent + power <= 0:
            raise ExponentUnderflowError(f"rho^{power} would give base exponent {self.base_exponent + power}")
        return QuasiPolynomial(self.base_exponent + power, self.decay, self.coeffs)

    def lowest_coefficient(self) -> float:
        for c in self.coeffs:
            if c != 0.0:
                return c
        return 0.0


def _aligned(f: QuasiPolynomial, g: QuasiPolynomial) -> tuple[float, list[float], list[float]]:
    """Express f and g on a common base exponent; they must share decay."""
    if f.decay != g.decay:
        raise ValueError("quasi-polynomials with different decay cannot be combined")
    shift = g.base_exponent - f.base_exponent
    offset = round(shift)
    if abs(shift - offset) > 1e-12 * max(1.0, abs(f.base_exponent)):
        raise ValueError("base exponents differ by a non-integer")
    a, b = list(f.coeffs), list(g.coeffs)
    if offset >= 0:
        return f.base_exponent, a, [0.0] * offset + b
    return g.base_exponent, [0.0] * (-offset) + a, b


def coefficient_error(f: QuasiPolynomial, g: QuasiPolynomial) -> float:
    """max |f_j - g_j| / max |g_j| in coefficient space (g is the reference)."""
    _, a, b = _aligned(f, g)
    n = max(len(a), len(b))
    a = a + [0.0] * (n - len(a))
    b = b + [0.0] * (n - len(b))
    ref = max((abs(x) for x in b), default=0.0)
    diff = max((abs(x - y) for x, y in zip(a, b)), default=0.0)
    return diff / ref if ref else diff


# -- construction -----------------------------------------------------------


def basis_state(m: int, s: float, xi: float) -> QuasiPolynomial:
    """rho**s exp(-xi rho) 1F1(-m, 2s; 2 xi rho), a member of the fixed-xi family."""
    if s <= 0 or xi <= 0:
        raise ValueError("basis_state needs s > 0 and xi > 0")
    kc = kummer_coeffs(m, 2.0 * s)
    return QuasiPolynomial(s, xi, tuple(c * (2.0 * xi) ** j for j, c in enumerate(kc)))


class Component(enum.Enum):
    Upper = "upper"
    Lower = "lower"


def physical_component(q: QuantumNumbers, which: Component | str) -> QuasiPolynomial | None:
    """Unnormalized radial component of the bound state ``q``.

    Lower is psi_s^n and Upper is psi_{s+1}^{n-1}, both at the state's own
    decay xi = gamma/(n+s).  The upper component of an n = 0 state is null
    and returned as None.
    """
    which = Component(which)
    params = energy_of(q)
    if which is Component.Lower:
        return basis_state(q.n, params.s, params.xi)
    if q.n == 0:
        return None
    return basis_state(q.n - 1, params.s + 1.0, params.xi)


@dataclass(frozen=True)
class SpinorState:
    upper: QuasiPolynomial | None
    lower: QuasiPolynomial
    q: QuantumNumbers
    params: SpectralParams


def spinor_state(q: QuantumNumbers, normalized: bool = True) -> SpinorState:
    upper = physical_component(q, Component.Upper)
    lower = physical_component(q, Component.Lower)
    if normalized:
        lower = normalize(lower)
        upper = normalize(upper) if upper is not None else None
    return SpinorState(upper=upper, lower=lower, q=q, params=energy_of(q))


# -- operator application ---------------------------------------------------


def _derivative(vals: dict[int, float], mags: dict[int, float], sigma: float, decay: float):
    """d/drho of sum_j v_j rho^(sigma+j) e^(-decay rho), tracking |contributions|."""
    out_v: dict[int, float] = {}
    out_m: dict[int, float] = {}
    for j, v in vals.items():
        power = sigma + j
        for off, c, mag in ((j - 1, power * v, abs(power) * mags[j]), (j, -decay * v, decay * mags[j])):
            out_v[off] = out_v.get(off, 0.0) + c
            out_m[off] = out_m.get(off, 0.0) + mag
    return out_v, out_m


def apply_diffop(op: DiffOp, f: QuasiPolynomial, binding: Binding | Mapping[str, float]) -> QuasiPolynomial:
    """Apply ``op`` to ``f`` exactly in coefficient space.

    Coefficients at rho powers below the input's that cancel to rounding
    level are dropped; a surviving power rho**a with a <= 0 raises
    ExponentUnderflowError.
    """
    b = Binding.coerce(binding)
    sigma, decay = f.base_exponent, f.decay
    vals = {j: c for j, c in enumerate(f.coeffs)}
    mags = {j: abs(c) for j, c in enumerate(f.coeffs)}
    result_v: dict[int, float] = {}
    result_m: dict[int, float] = {}
    order = op.order
    for d in range(order + 1):
        if d in op.coeffs:
            for p, coef in op.coeffs[d].rho_profile(b.xi, b.s, b.gamma).items():
                for j, v in vals.items():
                    result_v[j + p] = result_v.get(j + p, 0.0) + coef * v
                    result_m[j + p] = result_m.get(j + p, 0.0) + abs(coef) * mags[j]
        if d < order:
            vals, mags = _derivative(vals, mags, sigma, decay)
    if not result_v:
        return QuasiPolynomial(sigma, decay, ())
    live = {
        j: v
        for j, v in result_v.items()
        if abs(v) > CANCEL_TOL * result_m[j]
    }
    if not live:
        return QuasiPolynomial(sigma, decay, ())
    low = min(live)
    if sigma + low <= 0:
        raise ExponentUnderflowError(
            f"operator produced rho^{sigma + low:.6g} (offset {low}) from base exponent {sigma:.6g}"
        )
    high = max(live)
    coeffs = tuple(result_v.get(j, 0.0) for j in range(low, high + 1))
    return QuasiPolynomial(sigma + low, decay, coeffs)


_FD_STENCILS = {
    0: ((0,), (1.0,), 1.0),
    1: ((-2, -1, 1, 2), (1.0, -8.0, 8.0, -1.0), 12.0),
    2: ((-2, -1, 0, 1, 2), (-1.0, 16.0, -30.0, 16.0, -1.0), 12.0),
    3: ((-3, -2, -1, 1, 2, 3), (1.0, -8.0, 13.0, -13.0, 8.0, -1.0), 8.0),
    4: ((-3, -2, -1, 0, 1, 2, 3), (-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0), 6.0),
}
_FD_STEP = {0: 1.0, 1: 1e-3, 2: 2e-3, 3: 5e-3, 4: 1e-2}


def fd_derivative(f, rho: np.ndarray, order: int) -> np.ndarray:
    """Fourth-order central difference of the callable ``f`` at ``rho``."""
    offsets, weights, denom = _FD_STENCILS[order]
    rho = np.asarray(rho, dtype=float)
    h = np.minimum(_FD_STEP[order], rho / 8.0)
    total = sum(w * f(rho + o * h) for o, w in zip(offsets, weights))
    return total / (denom * h**order)


def apply_fd(
    op: DiffOp,
    f: QuasiPolynomial,
    binding: Binding | Mapping[str, float],
    grid: tuple[float, float, int],
) -> tuple[np.ndarray, np.ndarray]:
    """Sample op.f on a uniform grid using finite differences of f's point values."""
    rho_min, rho_max, count = grid
    if rho_min <= 0 or count < 5:
        raise ValueError("grid needs rho_min > 0 and at least 5 points")
    b = Binding.coerce(binding)
    rho = np.linspace(rho_min, rho_max, int(count))
    out = np.zeros_like(rho)
    for d, poly in op.coeffs.items():
        coef = np.array([poly.evaluate(r, b.xi, b.s, b.gamma) for r in rho])
        out += coef * fd_derivative(f, rho, d)
    return rho, out


# -- inner products ----------------------------------------------------------


def inner_product(f: QuasiPolynomial, g: QuasiPolynomial) -> float:
    """int_0^inf f g rho^-1 drho as an exact Gamma sum.

    The sum cancels heavily for high-degree states (term magnitudes exceed
    the result by ~1e8 at degree 10), so it is accumulated in extended
    precision from the float inputs.
    """
    sigma = f.base_exponent + g.base_exponent
    if sigma <= 0:
        raise DivergenceError(f"inner product diverges at rho=0 (combined exponent {sigma})")
    if f.is_zero() or g.is_zero():
        return 0.0
    with mpmath.workdps(_EXTRA_DPS):
        sig = mpmath.mpf(f.base_exponent) + mpmath.mpf(g.base_exponent)
        lam = mpmath.mpf(f.decay) + mpmath.mpf(g.decay)
        n = len(f.coeffs) + len(g.coeffs) - 1
        # moments[t] = Gamma(sigma + t) / lam**(sigma + t)
        moments = [mpmath.gamma(sig) / lam**sig]
        for t in range(n - 1):
            moments.append(moments[-1] * (sig + t) / lam)
        total = mpmath.fsum(
            mpmath.mpf(c) * mpmath.mpf(d) * moments[i + j]
            for i, c in enumerate(f.coeffs)
            for j, d in enumerate(g.coeffs)
        )
        return float(total)


def norm(f: QuasiPolynomial) -> float:
    return math.sqrt(max(inner_product(f, f), 0.0))


def normalize(f: QuasiPolynomial) -> QuasiPolynomial:
    """Unit-norm copy of f with a positive lowest-power coefficient."""
    if f.is_zero():
        raise ZeroFunctionError("cannot normalize the zero function")
    nrm = norm(f)
    if not nrm > 0:
        raise ZeroFunctionError("function has zero norm")
    sign = 1.0 if f.lowest_coefficient() > 0 else -1.0
    return f.scale(sign / nrm)


def normalized_basis(s: float, xi: float, m_max: int) -> list[QuasiPolynomial]:
    return [normalize(basis_state(m, s, xi)) for m in range(m_max + 1)]


def gram_matrix(s: float, xi: float, m_max: int) -> np.ndarray:
    if m_max > 30:
        raise ValueError("gram_matrix supports m_max <= 30")
    basis = normalized_basis(s, xi, m_max)
    size = m_max + 1
    gram = np.empty((size, size))
    for i in range(size):
        for j in range(i, size):
            gram[i, j] = gram[j, i] = inner_product(basis[i], basis[j])
    return gram


def basis_expansion(f: QuasiPolynomial, basis: Sequence[QuasiPolynomial]) -> list[float]:
    """Components (chi_m, f) of f along an orthonormal basis."""
    return [inner_product(b, f) for b in basis]


def quadrature_inner_product(f: QuasiPolynomial, g: QuasiPolynomial, count: int = 60) -> float:
    """Gauss-Laguerre evaluation of (f, g); oracle for inner_product."""
    from .special_functions import gauss_laguerre

    sigma = f.base_exponent + g.base_exponent
    lam = f.decay + g.decay
    rule = gauss_laguerre(count, sigma - 1.0)
    pf = np.polynomial.polynomial
    # substitute x = lam * rho: integrand becomes x^(sigma-1) e^-x P(x/lam) Q(x/lam) / lam^sigma
    return rule.integrate(
        lambda x: pf.polyval(x / lam, f.coeffs) * pf.polyval(x / lam, g.coeffs)
    ) / lam**sigma
