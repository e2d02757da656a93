"""Quantum numbers and closed-form bound-state energies.

Units are hbar = c = 1; the radial variable is rho = E r, so every radial
quantity depends on the mass only through E/m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

REL_TOL = 1e-12


def s_of(k: int, gamma: float) -> float:
    """Effective exponent s = sqrt(k**2 - gamma**2), for 0 < gamma < |k|."""
    if k == 0 or int(k) != k:
        raise DomainError(f"k must be a nonzero integer, got {k}")
    if not 0 < gamma < abs(k):
        raise DomainError(f"coupling must satisfy 0 < gamma < |k| = {abs(k)}, got {gamma}")
    # (|k| - g)(|k| + g) avoids cancellation when gamma is close to |k|
    return math.sqrt((abs(k) - gamma) * (abs(k) + gamma))


@dataclass(frozen=True)
class QuantumNumbers:
    """Dirac quantum number k, radial quantum number n, coupling, mass.

    Positive k has no n = 0 state (the k = +|k| column of the level diagram
    starts one shell higher), so that combination is rejected.
    """

    k: int
    n: int
    gamma: float
    mass: float = 1.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"radial quantum number must be a nonnegative integer, got {self.n}")
        if self.mass <= 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        s_of(self.k, self.gamma)
        if self.k > 0 and self.n == 0:
            raise DomainError(f"k = {self.k} > 0 has no n = 0 bound state")

    @property
    def j(self) -> float:
        return abs(self.k) - 0.5

    @property
    def principal(self) -> int:
        return self.n + abs(self.k)

    @property
    def s(self) -> float:
        return s_of(self.k, self.gamma)


@dataclass(frozen=True)
class SpectralParams:
    s: float
    xi: float
    energy: float
    nu: float
    mu: float
    alpha1: float
    alpha2: float
    mass: float = 1.0

    @property
    def energy_over_m(self) -> float:
        return self.energy / self.mass

    def invariant_errors(self, q: QuantumNumbers) -> dict[str, float]:
        """Relative residuals of the defining relations of s, xi, nu."""
        k2 = float(q.k * q.k)
        # m^2/E^2 - 1 = (m - E)(m + E)/E^2, free of cancellation at weak coupling
        xi2 = self.alpha2 * self.alpha1 / self.energy**2
        return {
            "s2_plus_gamma2": abs(self.s**2 + q.gamma**2 - k2) / k2,
            "xi2": abs(self.xi**2 - xi2) / self.xi**2,
            "nu_xi": abs(self.nu * self.xi - q.gamma) / q.gamma,
        }


def component_energy(n_component: int, s_component: float, gamma: float, mass: float = 1.0) -> float:
    """E = m [1 + gamma^2/(n + s)^2]^(-1/2) for one spinor component."""
    return mass / math.sqrt(1.0 + (gamma / (n_component + s_component)) ** 2)


def binding_energy(q: QuantumNumbers) -> float:
    """m - E, computed without cancellation."""
    x = (q.gamma / (q.n + q.s)) ** 2
    return -q.mass * math.expm1(-0.5 * math.log1p(x))


def energy_of(q: QuantumNumbers) -> SpectralParams:
    s = q.s
    nu = q.n + s
    energy = component_energy(q.n, s, q.gamma, q.mass)
    return SpectralParams(
        s=s,
        xi=q.gamma / nu,
        energy=energy,
        nu=nu,
        mu=s - 1.0,
        alpha1=q.mass + energy,
        alpha2=binding_energy(q),
        mass=q.mass,
    )


def component_match_check(q: QuantumNumbers, n_upper: int | None = None) -> bool:
    """Do the lower (n, s) and upper (n_upper, s+1) components share one energy?

    ``n_upper`` defaults to n - 1; pass another value as a negative control.
    """
    if q.n < 1:
        raise DomainError("component matching needs n >= 1 (the n = 0 upper component is null)")
    if n_upper is None:
        n_upper = q.n - 1
    s = q.s
    e_lower = component_energy(q.n, s, q.gamma, q.mass)
    e_upper = component_energy(n_upper, s + 1.0, q.gamma, q.mass)
    return abs(e_lower - e_upper) <= REL_TOL * abs(e_lower)


def nonrel_limit_check(N: int, k: int, gamma_small: float, mass: float = 1.0) -> float:
    """Relative deviation of m - E from the Balmer value m gamma^2/(2 N^2)."""
    if not 0 < gamma_small <= 1e-2:
        raise DomainError("gamma_small must lie in (0, 1e-2]")
    q = QuantumNumbers(k=k, n=N - abs(k), gamma=gamma_small, mass=mass)
    balmer = mass * gamma_small**2 / (2.0 * N * N)
    return abs(binding_energy(q) - balmer) / balmer


# -- level diagram --------------------------------------------------------


@dataclass(frozen=True)
class Level:
    k: int
    n: int
    N: int
    energy_over_m: float
    dashed: bool


@dataclass(frozen=True)
class Arrow:
    label: str
    orientation: str  # "vertical" or "horizontal"
    source: tuple[int, int]  # (k, N)
    target: tuple[int, int]


@dataclass(frozen=True)
class DiagramData:
    gamma: float
    k_max: int
    N_max: int
    levels: list[Level] = field(default_factory=list)
    arrows: list[Arrow] = field(default_factory=list)

    def level(self, k: int, N: int) -> Level | None:
        for lv in self.levels:
            if lv.k == k and lv.N == N:
                return lv
        return None

    def column(self, k: int) -> list[Level]:
        return sorted((lv for lv in self.levels if lv.k == k), key=lambda lv: lv.N)


def diagram_columns(k_max: int) -> list[int]:
    """Column order -1, 1, -2, 2, ... as in the usual level diagram."""
    return [sign * a for a in range(1, k_max + 1) for sign in (-1, 1)]


def level_diagram(gamma: float, k_max: int, N_max: int) -> DiagramData:
    """Energy levels E/m for |k| <= k_max and N <= N_max, plus operator arrows.

    n = 0 levels (k < 0 only) are flagged dashed: their upper component is null.
    Arrows mark one representative rung per column pair: Sigma+- inside the
    k = -|k| column, Xi+- inside the k = +|k| column and A+- between the two.
    """
    if not 0 < gamma < 1:
        raise DomainError("diagram coupling must satisfy 0 < gamma < 1")
    if not (1 <= k_max <= 20 and 1 <= N_max <= 20):
        raise DomainError("k_max and N_max must lie in [1, 20]")
    levels: list[Level] = []
    arrows: list[Arrow] = []
    for k in diagram_columns(k_max):
        a = abs(k)
        for N in range(a, N_max + 1):
            n = N - a
            if k > 0 and n == 0:
                continue
            params = energy_of(QuantumNumbers(k=k, n=n, gamma=gamma))
            levels.append(Level(k=k, n=n, N=N, energy_over_m=params.energy_over_m, dashed=(n == 0)))
    for a in range(1, k_max + 1):
        lower = a + 1  # lowest shell shared by both columns
        if lower + 1 > N_max:
            continue
        for label, k in (("Sigma", -a), ("Xi", a)):
            arrows.append(Arrow(f"{label}+", "vertical", (k, lower), (k, lower + 1)))
            arrows.append(Arrow(f"{label}-", "vertical", (k, lower + 1), (k, lower)))
        arrows.append(Arrow("A-", "horizontal", (-a, lower), (a, lower)))
        arrows.append(Arrow("A+", "horizontal", (a, lower), (-a, lower)))
    return DiagramData(gamma=gamma, k_max=k_max, N_max=N_max, levels=levels, arrows=arrows)
