"""Special functions for the radial numerics.

Only the terminating Kummer series 1F1(-n, b; z) is supported: every radial
state in this package is a polynomial times rho**sigma * exp(-xi*rho), so a
general-purpose 1F1 would be dead weight.  Gauss-Laguerre rules are used as
an independent oracle for the closed-form Gamma-sum inner products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class KummerParams:
    a: float
    b: float
    z: float


def _terminating_degree(a: float) -> int:
    n = -a
    if n < 0 or n != int(n):
        raise DomainError(f"only terminating series a = -n are supported, got a={a}")
    return int(n)


def _check_b(b: float) -> None:
    if b <= 0 and b == int(b):
        raise DomainError(f"1F1 undefined for nonpositive integer b={b}")


def kummer_coeffs(n: int, b):
    """Monomial coefficients of z -> 1F1(-n, b; z).

    ``c[j] = (-n)_j / ((b)_j j!)``.  The arithmetic follows the type of
    ``b``: pass a Fraction to get exact rationals back.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    _check_b(b)
    one = Fraction(1) if isinstance(b, (int, Fraction)) else 1.0
    coeffs = [one]
    for j in range(n):
        coeffs.append(coeffs[-1] * (j - n) / ((b + j) * (j + 1)))
    return coeffs


def kummer_m(p: KummerParams | float, b: float | None = None, z: float | None = None) -> float:
    """1F1(a, b; z) for a nonpositive integer ``a``.

    Accepts either a KummerParams or the three numbers positionally.
    """
    if not isinstance(p, KummerParams):
        p = KummerParams(p, b, z)
    n = _terminating_degree(p.a)
    _check_b(p.b)
    # the alternating terms cancel heavily for large z, so the finite sum is
    # taken exactly in rationals built from the float inputs and rounded once
    z = Fraction(p.z)
    total = Fraction(0)
    for c in reversed(kummer_coeffs(n, Fraction(p.b))):
        total = total * z + c
    return float(total)


def pochhammer(x: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= x + i
    return out


def laguerre_l(n: int, alpha: float, x: float) -> float:
    """Generalized Laguerre polynomial by the three-term recurrence.

    Used only as an oracle for kummer_m.  The recurrence runs in exact
    rationals from the float inputs: in floats it loses up to ~5e-12
    relative accuracy near a root (n=19, alpha=2, x=4).
    """
    a, z = Fraction(alpha), Fraction(x)
    if n == 0:
        return 1.0
    prev, cur = Fraction(1), 1 + a - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - z) * cur - (k + a) * prev) / (k + 1)
    return float(cur)


def gamma_fn(x: float) -> float:
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight x**alpha * exp(-x) on (0, inf)."""

    nodes: np.ndarray
    weights: np.ndarray
    alpha: float

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        """Approximate int_0^inf f(x) x**alpha exp(-x) dx."""
        return float(np.dot(self.weights, f(self.nodes)))


_RESCALE = 1e100


def _orthonormal_sweep(x: np.ndarray, count: int, alpha: float):
    """Run the orthonormal Laguerre recurrence up to degree ``count``.

    Returns (p_n, dp_n, log_scale, sum_{k<n} p_k**2) where p_n, dp_n and the
    square sum are all divided by exp(log_scale) (the sum by its square).
    """
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    dprev = np.zeros_like(x)
    dcur = np.zeros_like(x)
    sq = np.zeros_like(x)
    log_scale = np.zeros_like(x)
    b_k = 0.0
    for k in range(count):
        sq = sq + cur * cur
        a_k = 2 * k + alpha + 1
        b_next = math.sqrt((k + 1) * (k + 1 + alpha))
        nxt = ((x - a_k) * cur - b_k * prev) / b_next
        dnxt = (cur + (x - a_k) * dcur - b_k * dprev) / b_next
        prev, cur, dprev, dcur, b_k = cur, nxt, dcur, dnxt, b_next
        big = np.abs(cur) > _RESCALE
        if big.any():
            f = np.where(big, 1.0 / _RESCALE, 1.0)
            prev, cur, dprev, dcur = prev * f, cur * f, dprev * f, dcur * f
            sq = sq * f * f
            log_scale = log_scale + np.where(big, math.log(_RESCALE), 0.0)
    return cur, dcur, log_scale, sq


def gauss_laguerre(count: int, alpha: float = 0.0, max_newton: int = 20) -> QuadratureRule:
    """Generalized Gauss-Laguerre nodes and weights.

    Nodes start from the Golub-Welsch eigenvalues and are polished by Newton
    steps on the orthonormal recurrence.  Weights come from the Christoffel
    sum 1/sum_k p_k(x)**2, which keeps relative accuracy even for the
    vanishingly small weights at large nodes (they underflow to 0.0 beyond
    roughly count=180).
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if alpha <= -1:
        raise DomainError("alpha must exceed -1")
    k = np.arange(count, dtype=float)
    diag = 2 * k + alpha + 1
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    x = np.sort(eigh_tridiagonal(diag, off, eigvals_only=True))
    last = math.inf
    for _ in range(max_newton):
        p, dp, _, _ = _orthonormal_sweep(x, count, alpha)
        step = p / dp
        rel = float(np.max(np.abs(step) / x))
        # stop at machine precision or once the recurrence noise floor is hit
        if rel >= last and last < 1e-10:
            break
        x = x - step
        if rel <= 64 * np.finfo(float).eps:
            break
        last = rel
    else:
        raise ConvergenceError(f"Newton polishing did not converge for count={count}")
    _, _, log_scale, sq = _orthonormal_sweep(x, count, alpha)
    log_mu0 = math.lgamma(alpha + 1)
    weights = np.exp(log_mu0 - np.log(sq) - 2 * log_scale)
    if np.any(np.diff(x) <= 0) or x[0] <= 0:
        raise ConvergenceError("quadrature nodes are not strictly increasing and positive")
    return QuadratureRule(nodes=x, weights=weights, alpha=float(alpha))


def moment(rule: QuadratureRule, j: int) -> float:
    return rule.integrate(lambda t: t**j)


def poly_eval(coeffs: Sequence[float], z: float) -> float:
    out = 0.0
    for c in reversed(coeffs):
        out = out * z + c
    return out
