import pytest
from hypothesis import given
from hypothesis import strategies as st

from diracsu11.errors import DomainError
from diracsu11.spectrum import (
    QuantumNumbers,
    binding_energy,
    component_match_check,
    diagram_columns,
    energy_of,
    level_diagram,
    nonrel_limit_check,
    s_of,
)

# frozen from mpmath at 50 digits
S_M1 = 0.8660254037844386  # s(k=-1, gamma=0.5)
S_2 = 1.9364916731037085  # s(k=2, gamma=0.5)
E0 = 0.8660254037844386  # E/m, n=0, k=-1, gamma=0.5
E1 = 0.9659258262890683  # E/m, n=1, k=-1, gamma=0.5
E_NEAR_CRITICAL = 0.0447101778122163  # n=0, k=-1, gamma=0.999


def test_s_of_examples():
    assert s_of(-1, 1e-9) == pytest.approx(1.0, abs=1e-15)
    assert s_of(1, 1e-9) == pytest.approx(1.0, abs=1e-15)
    assert s_of(-1, 0.5) == pytest.approx(S_M1, rel=1e-15)
    assert s_of(2, 0.5) == pytest.approx(S_2, rel=1e-15)


@pytest.mark.parametrize("k,gamma", [(-1, 1.0), (1, 1.5), (2, 0.0), (-1, -0.1), (0, 0.5)])
def test_s_of_domain(k, gamma):
    with pytest.raises(DomainError):
        s_of(k, gamma)


def test_quantum_numbers_validation():
    q = QuantumNumbers(k=-2, n=3, gamma=0.5)
    assert q.j == 1.5 and q.principal == 5
    with pytest.raises(DomainError):
        QuantumNumbers(k=-1, n=-1, gamma=0.5)
    with pytest.raises(DomainError):
        QuantumNumbers(k=-1, n=0, gamma=0.5, mass=0.0)
    with pytest.raises(DomainError):
        QuantumNumbers(k=1, n=0, gamma=0.5)


def test_energy_spot_values():
    assert energy_of(QuantumNumbers(-1, 0, 0.5)).energy_over_m == pytest.approx(E0, rel=1e-15)
    assert energy_of(QuantumNumbers(-1, 1, 0.5)).energy_over_m == pytest.approx(E1, rel=1e-15)
    assert energy_of(QuantumNumbers(-1, 0, 0.999)).energy_over_m == pytest.approx(E_NEAR_CRITICAL, rel=1e-14)


def test_free_limit():
    for n in range(4):
        assert energy_of(QuantumNumbers(-2, n, 1e-8)).energy_over_m == pytest.approx(1.0, abs=1e-15)


def test_mass_is_a_scale():
    a = energy_of(QuantumNumbers(-1, 2, 0.5, mass=1.0))
    b = energy_of(QuantumNumbers(-1, 2, 0.5, mass=511.0))
    assert b.energy == pytest.approx(511.0 * a.energy, rel=1e-15)
    assert b.xi == a.xi


@given(
    st.integers(min_value=1, max_value=6),
    st.integers(min_value=0, max_value=30),
    st.floats(min_value=1e-4, max_value=0.999),
)
def test_spectral_invariants(a, n, frac):
    gamma = frac * a
    q = QuantumNumbers(k=-a, n=n, gamma=gamma)
    p = energy_of(q)
    assert all(err <= 1e-12 for err in p.invariant_errors(q).values())
    assert 0 < p.energy_over_m < 1
    assert p.mu == p.s - 1 and p.nu == pytest.approx(n + p.s)
    assert p.alpha1 == pytest.approx(1 + p.energy)
    assert p.alpha2 == pytest.approx(1 - p.energy, abs=1e-15)
    if n == 0:
        assert p.energy_over_m == pytest.approx(p.s / a, rel=1e-12)
    if n >= 1:
        assert energy_of(QuantumNumbers(k=a, n=n, gamma=gamma)).energy == p.energy
        assert energy_of(QuantumNumbers(k=-a, n=n - 1, gamma=gamma)).energy < p.energy


def test_binding_energy_small_coupling():
    q = QuantumNumbers(-1, 0, 1e-6)
    assert binding_energy(q) == pytest.approx(0.5e-12, rel=1e-6)
    assert binding_energy(q) > 0


@pytest.mark.parametrize("n,k,gamma", [(1, -1, 0.5), (3, 2, 0.9), (5, -3, 2.5), (1, 1, 0.3)])
def test_component_match(n, k, gamma):
    q = QuantumNumbers(k=k, n=n, gamma=gamma)
    assert component_match_check(q)
    assert not component_match_check(q, n_upper=n)


def test_component_match_needs_n_ge_1():
    with pytest.raises(DomainError):
        component_match_check(QuantumNumbers(-1, 0, 0.5))


@pytest.mark.parametrize("N,k", [(1, -1), (2, 1), (2, -2), (4, 3)])
def test_nonrel_limit(N, k):
    assert nonrel_limit_check(N, k, 1e-3) < 1e-2


def test_nonrel_deviation_scales_as_gamma_squared():
    d1 = nonrel_limit_check(1, -1, 1e-3)
    d2 = nonrel_limit_check(1, -1, 1e-4)
    assert d1 == pytest.approx(2.5e-7, rel=1e-3)
    assert d2 / d1 == pytest.approx(1e-2, rel=1e-3)


def test_nonrel_domain():
    with pytest.raises(DomainError):
        nonrel_limit_check(1, -1, 0.1)


def test_diagram_single_level():
    data = level_diagram(0.5, 1, 1)
    assert [(lv.k, lv.n, lv.N, lv.dashed) for lv in data.levels] == [(-1, 0, 1, True)]
    assert data.level(1, 1) is None
    assert data.arrows == []


def test_diagram_k_max_2():
    data = level_diagram(0.5, 2, 3)
    assert data.level(-1, 1) is not None and data.level(1, 1) is None
    assert data.level(1, 2) is not None and data.level(-2, 2).dashed
    assert data.level(2, 2) is None
    assert diagram_columns(2) == [-1, 1, -2, 2]


def test_diagram_ordering_and_dashes():
    data = level_diagram(0.7, 4, 8)
    for k in diagram_columns(4):
        col = data.column(k)
        energies = [lv.energy_over_m for lv in col]
        assert energies == sorted(energies) and len(set(energies)) == len(energies)
    for N in range(2, 9):
        e = [data.level(-a, N).energy_over_m for a in range(1, min(N, 4) + 1)]
        assert all(x < y for x, y in zip(e, e[1:]))
    for lv in data.levels:
        assert lv.dashed == (lv.n == 0)
        assert lv.k < 0 or lv.n > 0


def test_diagram_arrows():
    data = level_diagram(0.5, 2, 4)
    labels = {(a.label, a.orientation) for a in data.arrows}
    assert {("Sigma+", "vertical"), ("Xi-", "vertical"), ("A+", "horizontal")} <= labels
    for arrow in data.arrows:
        assert data.level(*arrow.source) is not None and data.level(*arrow.target) is not None
        if arrow.orientation == "horizontal":
            assert arrow.source[1] == arrow.target[1]
            assert data.level(*arrow.source).energy_over_m == data.level(*arrow.target).energy_over_m


def test_diagram_domain():
    with pytest.raises(DomainError):
        level_diagram(1.0, 2, 3)
    with pytest.raises(DomainError):
        level_diagram(0.5, 0, 3)
    with pytest.raises(DomainError):
        level_diagram(0.5, 2, 21)
