"""Numeric verification of the ladder structure on concrete radial states.

Every check returns a VerificationReport; failures are entries, not
exceptions.  Two state families are used:

* the fixed-xi basis chi_s^m (all m share one decay), on which the su(1,1)
  generators act as ladder operators literally;
* the physical components psi_s^n, each with its own xi_n = gamma/(n+s).
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, SingularTransformError
from .report import VerificationReport
from .spectrum import QuantumNumbers, energy_of, s_of
from .states import (
    Binding,
    QuasiPolynomial,
    apply_diffop,
    basis_expansion,
    basis_state,
    coefficient_error,
    inner_product,
    norm,
    normalize,
    normalized_basis,
    spinor_state,
)
from .symbolic_ops import ONE, RHO, S, DiffOp, Generator, ScalarPoly, build_generator, casimir, verify_algebra

__all__ = [
    "LADDER_SIGNS",
    "LadderCoefficient",
    "Sign",
    "check_b_equivalence",
    "check_dirac_system",
    "check_eigen",
    "check_ground_state",
    "check_hermiticity",
    "check_ladder",
    "q_coeff",
    "run_suite",
]


class Sign(enum.Enum):
    Plus = +1
    Minus = -1


# Phase of Sigma+- chi^m relative to chi^(m+-1) when every basis state has a
# positive lowest-power coefficient; measured, identical in both sectors.
LADDER_SIGNS = {Sign.Plus: -1, Sign.Minus: -1}


@dataclass(frozen=True)
class LadderCoefficient:
    m: int
    s: float
    sign: Sign
    value: float


def q_coeff(m: int, s: float, sign: Sign | str | int) -> LadderCoefficient:
    """Magnitude of K+- |mu nu> with mu = s - 1 and nu = m + s.

    Q+ = sqrt((m + 1)(m + 2s)),  Q- = sqrt(m (m + 2s - 1)).
    For the Xi sector pass s + 1.
    """
    sign = Sign[sign] if isinstance(sign, str) else Sign(sign)
    if s <= 0:
        raise DomainError("ladder coefficients need s > 0")
    mu, nu = s - 1.0, m + s
    if sign is Sign.Plus:
        radicand = (nu - mu) * (nu + mu + 1.0)
    else:
        radicand = (nu + mu) * (nu - mu - 1.0)
    if radicand < 0:
        raise DomainError(f"ladder coefficient is complex for m={m}, s={s} (radicand {radicand:.6g})")
    if m < 0:
        raise DomainError("radial label m must be nonnegative")
    return LadderCoefficient(m=m, s=s, sign=sign, value=math.sqrt(radicand))


@lru_cache(maxsize=None)
def _ops(perturb: bool = False) -> dict[Generator, DiffOp]:
    return {w: build_generator(w, perturb) for w in Generator}


_SECTORS = {
    # name: (raise, lower, third, s offset)
    "sigma": (Generator.SigmaPlus, Generator.SigmaMinus, Generator.Sigma3, 0.0),
    "xi": (Generator.XiPlus, Generator.XiMinus, Generator.Xi3, 1.0),
}


class _Guard:
    """Turn an arithmetic failure inside a check into a failing report entry."""

    def __init__(self, report: VerificationReport, check_name: str, params: dict, tolerance: float):
        self.report, self.check_name, self.params, self.tolerance = report, check_name, params, tolerance

    def __enter__(self) -> "_Guard":
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc_type is not None and issubclass(exc_type, ArithmeticError):
            self.report.add(self.check_name, {**self.params, "error": str(exc)}, math.inf, self.tolerance)
            return True
        return False


def _basis_residual_norm(r: QuasiPolynomial, basis: list[QuasiPolynomial], target: int, expected: float) -> float:
    """|| r - expected * basis[target] || for r inside span(basis)."""
    if r.is_zero():
        return abs(expected)
    top = basis[-1]
    if abs(r.base_exponent - top.base_exponent) > 1e-12 or r.degree > top.degree:
        return math.inf
    comps = basis_expansion(r, basis)
    comps[target] -= expected
    return math.sqrt(sum(c * c for c in comps))


def check_ladder(s: float, xi: float, m_max: int, perturb: bool = False) -> VerificationReport:
    """Sigma+- and Xi+- act on the normalized fixed-xi basis as signed Q+- shifts."""
    if m_max > 20:
        raise DomainError("check_ladder supports m_max <= 20")
    ops = _ops(perturb)
    report = VerificationReport()
    binding = Binding(s=s, xi=xi)
    for sector, (g_plus, g_minus, _, shift) in _SECTORS.items():
        s_sec = s + shift
        basis = normalized_basis(s_sec, xi, m_max + 1)
        for sign, gen in ((Sign.Plus, g_plus), (Sign.Minus, g_minus)):
            for m in range(m_max + 1):
                params = {"sector": sector, "sign": sign.name, "m": m, "s": s, "xi": xi}
                with _Guard(report, "ladder_apply", params, 0.0):
                    r = apply_diffop(ops[gen], basis[m], binding)
                    if sign is Sign.Minus and m == 0:
                        report.add("ladder_annihilation", params, norm(r), 1e-12)
                        continue
                    q = q_coeff(m, s_sec, sign).value
                    target = m + sign.value
                    overlap = inner_product(basis[target], r)
                    measured_sign = 1 if overlap > 0 else -1
                    report.add("ladder_magnitude", params, abs(abs(overlap) - q), 1e-10)
                    report.add(
                        "ladder_colinearity", params,
                        _basis_residual_norm(r, basis, target, measured_sign * q) / max(q, 1.0), 1e-10,
                    )
                    report.add("ladder_sign", params, float(measured_sign != LADDER_SIGNS[sign]), 0.0)
    return report


def _rayleigh(f: QuasiPolynomial, af: QuasiPolynomial) -> float:
    """Least-squares eigenvalue of af ~ lambda f in coefficient space."""
    a = np.array(f.coeffs)
    b = np.zeros_like(a)
    offset = round(af.base_exponent - f.base_exponent)
    for j, c in enumerate(af.coeffs):
        if 0 <= j + offset < len(b):
            b[j + offset] = c
    return float(np.dot(a, b) / np.dot(a, a))


def check_eigen(s: float, gamma: float, m_max: int, xi: float | None = None, perturb: bool = False) -> VerificationReport:
    """K3 and Casimir eigen-equations on chi^m; physical Sigma3 eigenvalue gamma/xi."""
    if m_max > 20:
        raise DomainError("check_eigen supports m_max <= 20")
    ops = _ops(perturb)
    xi = gamma / s if xi is None else xi
    report = VerificationReport()
    casimirs = {"sigma": casimir_op(Generator.SigmaPlus, Generator.SigmaMinus, Generator.Sigma3, perturb),
                "xi": casimir_op(Generator.XiPlus, Generator.XiMinus, Generator.Xi3, perturb)}
    binding = Binding(s=s, xi=xi, gamma=gamma)
    for sector, (_, _, g3, shift) in _SECTORS.items():
        s_sec = s + shift
        mu = s_sec - 1.0
        for m in range(m_max + 1):
            params = {"sector": sector, "m": m, "s": s, "xi": xi}
            with _Guard(report, "eigen_apply", params, 0.0):
                chi = basis_state(m, s_sec, xi)
                third = apply_diffop(ops[g3], chi, binding)
                report.add("eigen_k3", params, coefficient_error(third, chi.scale(m + s_sec)), 1e-10)
                cas = apply_diffop(casimirs[sector], chi, binding)
                report.add("eigen_casimir", params, coefficient_error(cas, chi.scale(mu * (mu + 1.0))), 1e-10)
                nu_measured = _rayleigh(chi, third)
                lam = _rayleigh(chi, cas)
                mu_measured = (-1.0 + math.sqrt(max(1.0 + 4.0 * lam, 0.0))) / 2.0
                report.add("label_nu", params, abs(nu_measured - (m + s_sec)), 1e-10 * (m + s_sec))
                # mu(mu+1) has two roots; the irrep label is the one above -1/2 when s > 1/2
                if s_sec > 0.5:
                    report.add("label_mu", params, abs(mu_measured - mu), 1e-10 * max(1.0, abs(mu)))
                # physical binding: the state's own decay makes gamma/xi the K3 eigenvalue
                xi_m = gamma / (m + s_sec)
                psi = basis_state(m, s_sec, xi_m)
                third_phys = apply_diffop(ops[g3], psi, Binding(s=s, xi=xi_m, gamma=gamma))
                report.add(
                    "eigen_k3_physical", {**params, "xi": xi_m},
                    coefficient_error(third_phys, psi.scale(gamma / xi_m)), 1e-10,
                )
    return report


def casimir_op(plus: Generator, minus: Generator, third: Generator, perturb: bool = False) -> DiffOp:
    ops = _ops(perturb)
    return casimir(ops[plus], ops[minus], ops[third])


def _random_state(rng: random.Random, s: float, xi: float, degree: int) -> QuasiPolynomial:
    return QuasiPolynomial(s, xi, tuple(rng.gauss(0.0, 1.0) * xi**j for j in range(degree + 1)))


def check_hermiticity(s: float, xi: float, trials: int = 5, seed: int = 0, perturb: bool = False) -> VerificationReport:
    """(f, K+- g) = (K-+ f, g) and (f, K3 g) = (K3 f, g) under the rho^-1 weight."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    ops = _ops(perturb)
    rng = random.Random(seed)
    binding = Binding(s=s, xi=xi)
    report = VerificationReport()
    pairs = (
        ("sigma_plus", Generator.SigmaPlus, Generator.SigmaMinus),
        ("sigma_minus", Generator.SigmaMinus, Generator.SigmaPlus),
        ("sigma_3", Generator.Sigma3, Generator.Sigma3),
    )
    for trial in range(trials):
        f = _random_state(rng, s, xi, rng.randint(0, 6))
        g = _random_state(rng, s, xi, rng.randint(0, 6))
        for name, op, adjoint in pairs:
            params = {"operator": name, "trial": trial, "s": s, "xi": xi}
            with _Guard(report, "hermiticity", params, 1e-10):
                lhs = inner_product(f, apply_diffop(ops[op], g, binding))
                rhs = inner_product(apply_diffop(ops[adjoint], f, binding), g)
                report.add("hermiticity", params, abs(lhs - rhs) / (1.0 + abs(lhs)), 1e-10)
    return report


def _relative_norm(f: QuasiPolynomial, ref: QuasiPolynomial) -> float:
    return norm(f) / norm(ref) if not f.is_zero() else 0.0


def check_b_equivalence(q: QuantumNumbers, perturb: bool = False) -> VerificationReport:
    """B+- agree with Sigma+- (lower) and Xi+- (upper) on the physical components."""
    ops = _ops(perturb)
    report = VerificationReport()
    state = spinor_state(q)
    binding = Binding(s=state.params.s, xi=state.params.xi, gamma=q.gamma)
    base = {"k": q.k, "n": q.n, "gamma": q.gamma}
    c = ScalarPoly.monomial(1, xi=-1, gamma=1)
    for sign, b_gen, sig_gen, xi_gen in (
        ("plus", Generator.BPlus, Generator.SigmaPlus, Generator.XiPlus),
        ("minus", Generator.BMinus, Generator.SigmaMinus, Generator.XiMinus),
    ):
        identity = ops[b_gen] - ops[sig_gen] - ops[Generator.Sigma3] + DiffOp.multiplication(c)
        report.add(f"b_sigma_identity_{sign}", {**base, "symbolic": True}, float(identity.max_abs_coeff()), 0.0)
        diff = ops[b_gen] - ops[sig_gen]
        with _Guard(report, f"b_equivalence_lower_{sign}", base, 1e-10):
            report.add(
                f"b_equivalence_lower_{sign}", base,
                _relative_norm(apply_diffop(diff, state.lower, binding), state.lower), 1e-10,
            )
        if state.upper is not None:
            diff_xi = ops[b_gen] - ops[xi_gen]
            with _Guard(report, f"b_equivalence_upper_{sign}", base, 1e-10):
                report.add(
                    f"b_equivalence_upper_{sign}", base,
                    _relative_norm(apply_diffop(diff_xi, state.upper, binding), state.upper), 1e-10,
                )
    return report


def check_ground_state(k: int, gamma: float, perturb: bool = False) -> VerificationReport:
    """n = 0: null upper component, Sigma- and B- annihilate the lower one."""
    ops = _ops(perturb)
    q = QuantumNumbers(k=-abs(k), n=0, gamma=gamma)
    state = spinor_state(q)
    binding = Binding(s=state.params.s, xi=state.params.xi, gamma=gamma)
    params = {"k": q.k, "gamma": gamma}
    report = VerificationReport()
    report.add("ground_upper_null", params, 0.0 if state.upper is None else norm(state.upper), 0.0)
    for name, gen in (("ground_sigma_minus", Generator.SigmaMinus), ("ground_b_minus", Generator.BMinus)):
        with _Guard(report, name, params, 1e-12):
            report.add(name, params, norm(apply_diffop(ops[gen], state.lower, binding)), 1e-12)
    closed_form = QuasiPolynomial(state.params.s, gamma / state.params.s, (1.0,))
    report.add("ground_closed_form", params, coefficient_error(state.lower, normalize(closed_form)), 1e-12)
    return report


# -- coupled first-order system -------------------------------------------------


def _first_order(direction: int, f: QuasiPolynomial, s: float, gamma: float) -> QuasiPolynomial:
    """(direction * d/drho + s/rho - gamma/s) f."""
    op = DiffOp({1: ONE * direction, 0: S * ScalarPoly.var("rho", -1)})
    return apply_diffop(op, f, Binding(s=s, xi=f.decay, gamma=gamma)) - f.scale(gamma / s)


def _sup_residual(residual: QuasiPolynomial, scales: list[QuasiPolynomial | None], rho: np.ndarray) -> float:
    ref = max(float(np.max(np.abs(g(rho)))) for g in scales if g is not None and not g.is_zero())
    if residual.is_zero():
        return 0.0
    return float(np.max(np.abs(residual(rho)))) / ref


def check_dirac_system(q: QuantumNumbers, tol: float = 1e-8, samples: int = 400) -> VerificationReport:
    """Physical components solve the coupled radial system and, via D^-1, the original one."""
    report = VerificationReport()
    params = energy_of(q)
    s, gamma, k = params.s, q.gamma, q.k
    m_over_e = 1.0 / params.energy_over_m
    base = {"k": k, "n": q.n, "gamma": gamma}
    state = spinor_state(q)
    f2 = state.lower
    rho = np.linspace(0.1, 30.0, samples) / params.energy_over_m

    # fit the single free ratio F1 = ratio * upper on the first equation
    lhs2 = f2.scale(k / s + m_over_e)
    if state.upper is None:
        f1 = None
        ratio = 0.0
    else:
        rhs_shape = _first_order(+1, state.upper, s, gamma)
        a, b = lhs2(rho), rhs_shape(rho)
        ratio = float(np.dot(a, b) / np.dot(b, b))
        f1 = state.upper.scale(ratio)
    report.add("dirac_ratio_fit", {**base, "ratio": ratio}, 0.0, 0.0)

    rhs2 = _first_order(+1, f1, s, gamma) if f1 is not None else None
    res2 = lhs2 - rhs2 if rhs2 is not None else lhs2
    report.add("dirac_eq_upper", base, _sup_residual(res2, [lhs2, rhs2, f2], rho), tol)

    rhs3 = _first_order(-1, f2, s, gamma)
    lhs3 = f1.scale(k / s - m_over_e) if f1 is not None else None
    res3 = rhs3 - lhs3 if lhs3 is not None else rhs3
    report.add("dirac_eq_lower", base, _sup_residual(res3, [lhs3, rhs3, f2], rho), tol)

    # undo F = D G and test the original first-order system in rho
    det = d_determinant(k, gamma)
    kps = k + s
    g1_parts = [f2.scale(gamma / det)] + ([f1.scale(kps / det)] if f1 is not None else [])
    g2_parts = [f2.scale(kps / det)] + ([f1.scale(gamma / det)] if f1 is not None else [])
    g1 = _sum(g1_parts)
    g2 = _sum(g2_parts)
    a1 = 1.0 + m_over_e          # (m + E)/E
    a2 = params.alpha2 / params.energy  # (m - E)/E
    # multiplied through by rho so every power stays positive
    euler = DiffOp({1: RHO})
    bind = Binding(s=s, xi=params.xi, gamma=gamma)
    r1 = apply_diffop(euler, g1, bind) + g1.scale(k) - g2.scale(gamma) - g2.times_rho(1).scale(a1)
    r2 = apply_diffop(euler, g2, bind) + g1.scale(gamma) - g2.scale(k) - g1.times_rho(1).scale(a2)
    rg1, rg2 = g1.times_rho(1), g2.times_rho(1)
    report.add("dirac_original_1", base, _sup_residual(r1, [g1, g2, rg1, rg2], rho), tol)
    report.add("dirac_original_2", base, _sup_residual(r2, [g1, g2, rg1, rg2], rho), tol)
    # round trip D (D^-1 F) = F
    back1 = g1.scale(kps) - g2.scale(gamma)
    back2 = g2.scale(kps) - g1.scale(gamma)
    err = _sup_residual(back2 - f2, [f2], rho)
    if f1 is not None:
        err = max(err, _sup_residual(back1 - f1, [f1], rho))
    else:
        err = max(err, _sup_residual(back1, [f2], rho))
    report.add("dirac_round_trip", base, err, tol)
    return report


def _sum(parts: list[QuasiPolynomial]) -> QuasiPolynomial:
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def d_determinant(k: int, gamma: float) -> float:
    """det D = (k+s)^2 - gamma^2 = 2 s (s + k), evaluated without cancellation."""
    s = s_of(k, gamma)
    s_plus_k = s + k if k > 0 else -gamma * gamma / (s + abs(k))
    det = 2.0 * s * s_plus_k
    if abs(det) < 1e-12:
        raise SingularTransformError(f"det D = {det} is numerically singular")
    return det


# -- aggregate ----------------------------------------------------------------


def run_suite(gamma: float = 0.5, k: int = -1, n_max: int = 5, perturb: bool = False) -> VerificationReport:
    """Every symbolic and numeric check over one (gamma, k, n <= n_max) grid."""
    s = s_of(k, gamma)
    xi = gamma / s
    n_min = 1 if k > 0 else 0
    m_max = min(n_max, 20)
    reports = [
        verify_algebra(perturb),
        check_ladder(s, xi, m_max, perturb),
        check_eigen(s, gamma, m_max, perturb=perturb),
        check_hermiticity(s, xi, trials=5, perturb=perturb),
        check_ground_state(k, gamma, perturb),
    ]
    for n in range(n_min, n_max + 1):
        q = QuantumNumbers(k=k, n=n, gamma=gamma)
        reports.append(check_b_equivalence(q, perturb))
        reports.append(check_dirac_system(q))
    return VerificationReport.merge(reports)
