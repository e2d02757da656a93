"""Exact algebra of radial differential operators.

Operators are finite sums ``sum_d p_d(rho, xi, s, gamma) * (d/drho)**d``
whose coefficients ``p_d`` are Laurent polynomials in ``rho`` and ``xi``
and ordinary polynomials in ``s`` and ``gamma`` with rational
coefficients.  Every generator of the two su(1,1) realizations, and every
product of two of them, lives in this ring, so operator identities can be
decided by comparing canonical term maps.

  ScalarPoly  = {(e_rho, e_xi, e_s, e_gamma): Fraction}
  DiffOp      = {order: ScalarPoly}

Zero coefficients are never stored, so the zero polynomial is ``{}`` and
the zero operator is ``{}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Mapping, Union

from .report import VerificationReport

Exponent = tuple[int, int, int, int]
Number = Union[int, Fraction]

VARIABLES = ("rho", "xi", "s", "gamma")
_ZERO_EXP: Exponent = (0, 0, 0, 0)


def _canonical(terms: Mapping[Exponent, Fraction]) -> dict[Exponent, Fraction]:
    return {e: Fraction(c) for e, c in terms.items() if c != 0}


@dataclass(frozen=True)
class ScalarPoly:
    """Sparse exact polynomial in rho^{+-1}, xi^{+-1}, s, gamma."""

    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = _canonical(self.terms)
        for e_rho, e_xi, e_s, e_gamma in clean:
            if e_s < 0 or e_gamma < 0:
                raise ValueError("s and gamma must carry nonnegative exponents")
        object.__setattr__(self, "terms", MappingProxyType(clean))

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, value: Number) -> "ScalarPoly":
        return cls({_ZERO_EXP: Fraction(value)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "ScalarPoly":
        exp = [0, 0, 0, 0]
        exp[VARIABLES.index(name)] = power
        return cls({tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, coeff: Number, rho: int = 0, xi: int = 0, s: int = 0, gamma: int = 0) -> "ScalarPoly":
        return cls({(rho, xi, s, gamma): Fraction(coeff)})

    @staticmethod
    def _coerce(other: object) -> "ScalarPoly":
        if isinstance(other, ScalarPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ScalarPoly.const(other)
        raise TypeError(f"cannot combine ScalarPoly with {type(other).__name__}")

    # -- ring operations ----------------------------------------------
    def __add__(self, other: object) -> "ScalarPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return ScalarPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "ScalarPoly":
        return ScalarPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: object) -> "ScalarPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "ScalarPoly":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "ScalarPoly":
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ScalarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ScalarPoly":
        if n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = ScalarPoly.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ScalarPoly.const(other)
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- calculus and substitution --------------------------------------
    def d_rho(self) -> "ScalarPoly":
        """Partial derivative with respect to rho."""
        out: dict[Exponent, Fraction] = {}
        for (er, ex, es, eg), c in self.terms.items():
            if er:
                key = (er - 1, ex, es, eg)
                out[key] = out.get(key, Fraction(0)) + er * c
        return ScalarPoly(out)

    def shift_s(self, delta: Number = 1) -> "ScalarPoly":
        """Substitute s -> s + delta (binomial expansion, exact)."""
        delta = Fraction(delta)
        out: dict[Exponent, Fraction] = {}
        for (er, ex, es, eg), c in self.terms.items():
            for i in range(es + 1):
                key = (er, ex, i, eg)
                out[key] = out.get(key, Fraction(0)) + c * comb(es, i) * delta ** (es - i)
        return ScalarPoly(out)

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def evaluate(self, rho: float, xi: float, s: float, gamma: float) -> float:
        return sum(
            float(c) * rho**er * xi**ex * s**es * gamma**eg
            for (er, ex, es, eg), c in self.terms.items()
        )

    def rho_profile(self, xi: float, s: float, gamma: float) -> dict[int, float]:
        """Bind xi, s, gamma numerically; return {rho exponent: coefficient}."""
        out: dict[int, float] = {}
        for (er, ex, es, eg), c in self.terms.items():
            out[er] = out.get(er, 0.0) + float(c) * xi**ex * s**es * gamma**eg
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            factors = [
                name if p == 1 else f"{name}^{p}"
                for name, p in zip(VARIABLES, exp)
                if p
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


RHO = ScalarPoly.var("rho")
XI = ScalarPoly.var("xi")
S = ScalarPoly.var("s")
GAMMA = ScalarPoly.var("gamma")
ONE = ScalarPoly.const(1)


@dataclass(frozen=True)
class DiffOp:
    """Linear differential operator in rho with ScalarPoly coefficients."""

    coeffs: Mapping[int, ScalarPoly] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for order, poly in self.coeffs.items():
            if order < 0:
                raise ValueError("derivative order must be nonnegative")
            poly = ScalarPoly._coerce(poly)
            if poly:
                clean[order] = poly
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls({0: ONE})

    @classmethod
    def derivative(cls, order: int = 1) -> "DiffOp":
        return cls({order: ONE})

    @classmethod
    def multiplication(cls, poly: ScalarPoly | Number) -> "DiffOp":
        return cls({0: ScalarPoly._coerce(poly)})

    @property
    def order(self) -> int:
        return max(self.coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.coeffs)
        for d, p in other.coeffs.items():
            out[d] = out.get(d, ScalarPoly()) + p
        return DiffOp(out)

    def __neg__(self) -> "DiffOp":
        return DiffOp({d: -p for d, p in self.coeffs.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, factor: ScalarPoly | Number) -> "DiffOp":
        """Left multiplication by a scalar function."""
        factor = ScalarPoly._coerce(factor)
        return DiffOp({d: factor * p for d, p in self.coeffs.items()})

    def __mul__(self, factor: ScalarPoly | Number) -> "DiffOp":
        return self.scale(factor)

    __rmul__ = __mul__

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        return diffop_compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def shift_s(self, delta: Number = 1) -> "DiffOp":
        return DiffOp({d: p.shift_s(delta) for d, p in self.coeffs.items()})

    def max_abs_coeff(self) -> Fraction:
        return max((p.max_abs_coeff() for p in self.coeffs.values()), default=Fraction(0))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            tag = "" if d == 0 else ("D" if d == 1 else f"D^{d}")
            poly = str(self.coeffs[d])
            parts.append(f"({poly}){'*' + tag if tag else ''}")
        return " + ".join(parts)


def diffop_compose(lhs: DiffOp, rhs: DiffOp) -> DiffOp:
    """Return lhs o rhs (apply rhs first), expanded with the Leibniz rule."""
    out: dict[int, ScalarPoly] = {}
    for a, p in lhs.coeffs.items():
        for b, q in rhs.coeffs.items():
            deriv = q
            for i in range(a + 1):
                if i:
                    deriv = deriv.d_rho()
                if not deriv:
                    break
                order = a - i + b
                term = p * deriv * comb(a, i)
                out[order] = out.get(order, ScalarPoly()) + term
    return DiffOp(out)


def diffop_commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return diffop_compose(a, b) - diffop_compose(b, a)


class Generator(enum.Enum):
    Sigma3 = "Sigma3"
    SigmaPlus = "SigmaPlus"
    SigmaMinus = "SigmaMinus"
    Xi3 = "Xi3"
    XiPlus = "XiPlus"
    XiMinus = "XiMinus"
    BPlus = "BPlus"
    BMinus = "BMinus"
    RadialH = "RadialH"
    Casimir = "Casimir"


def _sigma3(perturb: bool = False) -> DiffOp:
    centrifugal = S * S if perturb else S * (S - 1)
    half_inv_xi = ScalarPoly.monomial(Fraction(1, 2), xi=-1)
    return DiffOp(
        {
            2: -RHO * half_inv_xi,
            0: (XI * XI * RHO + centrifugal * ScalarPoly.var("rho", -1)) * half_inv_xi,
        }
    )


def _euler(sign: int) -> DiffOp:
    # sign * rho * d/drho
    return DiffOp({1: RHO * sign})


def _sigma_pm(sign: int, sigma3: DiffOp) -> DiffOp:
    # Sigma_{+-} = -+ rho d/drho + xi rho - Sigma3
    return _euler(-sign) + DiffOp.multiplication(XI * RHO) - sigma3


def _b_pm(sign: int) -> DiffOp:
    gamma_over_xi = ScalarPoly.monomial(1, xi=-1, gamma=1)
    return _euler(-sign) + DiffOp.multiplication(XI * RHO - gamma_over_xi)


def casimir(plus: DiffOp, minus: DiffOp, third: DiffOp) -> DiffOp:
    """-K+ K- + K3^2 - K3 for any su(1,1) triple."""
    return -(plus @ minus) + third @ third - third


def build_generator(which: Generator | str, perturb: bool = False) -> DiffOp:
    """Return the named operator with s, xi, gamma left as indeterminates.

    ``perturb`` replaces s(s-1) by s**2 in Sigma3 (and everything derived from
    it); it exists only as a negative control for the verification harness.
    """
    which = Generator(which)
    sigma3 = _sigma3(perturb)
    if which is Generator.Sigma3:
        return sigma3
    if which is Generator.SigmaPlus:
        return _sigma_pm(+1, sigma3)
    if which is Generator.SigmaMinus:
        return _sigma_pm(-1, sigma3)
    if which is Generator.Xi3:
        return sigma3.shift_s(1)
    if which is Generator.XiPlus:
        return _sigma_pm(+1, sigma3).shift_s(1)
    if which is Generator.XiMinus:
        return _sigma_pm(-1, sigma3).shift_s(1)
    if which is Generator.BPlus:
        return _b_pm(+1)
    if which is Generator.BMinus:
        return _b_pm(-1)
    if which is Generator.RadialH:
        return DiffOp({2: -RHO * RHO, 0: XI * XI * RHO * RHO - 2 * GAMMA * RHO})
    if which is Generator.Casimir:
        return casimir(_sigma_pm(+1, sigma3), _sigma_pm(-1, sigma3), sigma3)
    raise AssertionError(which)


def _casimir_value(sector: str) -> ScalarPoly:
    # s(s-1) for the Sigma sector, (s+1)s for the Xi sector
    value = S * (S - 1)
    return value if sector == "sigma" else value.shift_s(1)


def _residual_entry(report: VerificationReport, name: str, residual: DiffOp, **params) -> None:
    report.add(name, params, float(residual.max_abs_coeff()), 0.0)


def verify_algebra(perturb: bool = False) -> VerificationReport:
    """Check the su(1,1) relations, Casimir values and factorization identities.

    Each entry's ``measured_error`` is the largest absolute rational
    coefficient of the residual operator, so it is 0.0 exactly on success.
    """
    report = VerificationReport()
    g = {w: build_generator(w, perturb) for w in Generator}
    for label, plus, minus, third in (
        ("sigma", g[Generator.SigmaPlus], g[Generator.SigmaMinus], g[Generator.Sigma3]),
        ("xi", g[Generator.XiPlus], g[Generator.XiMinus], g[Generator.Xi3]),
    ):
        _residual_entry(
            report, f"{label}_commutator_plus_3",
            diffop_commutator(plus, third) + plus, relation="[K+,K3] = -K+",
        )
        _residual_entry(
            report, f"{label}_commutator_minus_3",
            diffop_commutator(minus, third) - minus, relation="[K-,K3] = +K-",
        )
        _residual_entry(
            report, f"{label}_commutator_plus_minus",
            diffop_commutator(plus, minus) + third * 2, relation="[K+,K-] = -2 K3",
        )
        _residual_entry(
            report, f"{label}_casimir",
            casimir(plus, minus, third) - DiffOp.multiplication(_casimir_value(label)),
            relation="-K+K- + K3^2 - K3 = mu(mu+1)",
        )
    # (B-+ -+ 1) B+- = RadialH + (gamma^2/xi^2 +- gamma/xi)
    c = ScalarPoly.monomial(1, xi=-1, gamma=1)
    b_plus, b_minus, radial = g[Generator.BPlus], g[Generator.BMinus], g[Generator.RadialH]
    lhs_plus = (b_minus - DiffOp.identity()) @ b_plus
    lhs_minus = (b_plus + DiffOp.identity()) @ b_minus
    _residual_entry(
        report, "factorization_plus",
        lhs_plus - radial - DiffOp.multiplication(c * c + c), relation="(B- - 1) B+",
    )
    _residual_entry(
        report, "factorization_minus",
        lhs_minus - radial - DiffOp.multiplication(c * c - c), relation="(B+ + 1) B-",
    )
    # s-free constant: (c +- 1/2)^2 - (s - 1/2)^2 = c^2 +- c - s(s-1)
    half = Fraction(1, 2)
    for sign in (+1, -1):
        lhs = (c + sign * half) ** 2 - (S - half) ** 2
        rhs = c * c + c * sign - S * (S - 1)
        report.add(
            f"factorization_constant_{'plus' if sign > 0 else 'minus'}",
            {"relation": "(c+-1/2)^2-(s-1/2)^2 = c^2+-c-s(s-1)"},
            float((lhs - rhs).max_abs_coeff()),
            0.0,
        )
    return report


def random_diffop(rng, max_order: int = 2, max_terms: int = 3) -> DiffOp:
    """Small random operator for property tests; ``rng`` is a random.Random."""
    coeffs = {}
    for order in range(max_order + 1):
        terms = {}
        for _ in range(rng.randint(0, max_terms)):
            exp = (rng.randint(-2, 2), rng.randint(-1, 1), rng.randint(0, 2), rng.randint(0, 1))
            terms[exp] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        coeffs[order] = ScalarPoly(terms)
    return DiffOp(coeffs)
