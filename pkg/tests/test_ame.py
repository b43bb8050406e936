"""Tests for pair-cut reshapes and the deviation-from-maximal-mixing floor."""

import math

import numpy as np
import pytest

from quartet import ame, catalog
from quartet.core import (
    DomainError,
    ShapeError,
    apply_local_unitary,
    basis_state,
    partial_trace,
    random_state,
    random_unitary,
)

DIMS = (2, 2, 2, 2)

# Row pair of each cut label, as party axes into the state tensor.
ROW_PAIRS = {"AB_CD": (0, 1), "AC_BD": (0, 2), "AD_BC": (0, 3)}


def test_cut_labels():
    assert ame.CUTS == ("AB_CD", "AC_BD", "AD_BC")


def test_reshape_preserves_norm():
    rng = np.random.default_rng(11)
    for _ in range(5):
        s = random_state(DIMS, rng)
        for cut in ame.CUTS:
            m = ame.reshape(s, cut)
            assert m.cut == cut
            assert m.matrix.shape == (4, 4)
            assert np.linalg.norm(m.matrix) == pytest.approx(1.0, abs=1e-12)


def test_reshape_index_convention():
    # M[(i,k), (j,l)] for the AC|BD cut, row-major within each pair.
    rng = np.random.default_rng(12)
    s = random_state(DIMS, rng)
    t = s.tensor()
    m = ame.reshape(s, "AC_BD").matrix
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    assert m[2 * i + k, 2 * j + l] == t[i, j, k, l]


def test_reshape_rows_give_pair_reduction():
    rng = np.random.default_rng(13)
    for _ in range(5):
        s = random_state(DIMS, rng)
        for cut, keep in ROW_PAIRS.items():
            m = ame.reshape(s, cut).matrix
            rho = partial_trace(s, keep).entries
            assert np.allclose(m @ m.conj().T, rho, atol=1e-12)


def test_reshape_rejects_bad_input():
    with pytest.raises(DomainError):
        ame.reshape(random_state(DIMS, np.random.default_rng(0)), "AB_DC")
    with pytest.raises(DomainError):
        ame.reshape(random_state((2, 2, 2), np.random.default_rng(0)), "AB_CD")
    with pytest.raises(DomainError):
        ame.reshape(random_state((2, 2, 2, 3), np.random.default_rng(0)), "AB_CD")


def test_ame44_reshapes_are_unitary_up_to_scale():
    s = catalog.make("AME44")
    for cut in ame.CUTS:
        m = ame.reshape(s, cut).matrix
        assert np.allclose(16 * m @ m.conj().T, np.eye(16), atol=1e-12)


def test_deviation_zero_state():
    dev = ame.ame_deviation(basis_state(DIMS, (0, 0, 0, 0)))
    # delta = 4|00><00| - I per cut: 3^2 + 3 * 1 = 12.
    for cut in ame.CUTS:
        assert dev.per_cut[cut] == pytest.approx(12.0, abs=1e-12)
    assert dev.total == pytest.approx(36.0, abs=1e-12)


def test_deviation_named_states():
    psi = ame.ame_deviation(catalog.make("PSI_EXAMPLE"))
    assert psi.per_cut["AB_CD"] == pytest.approx(0.0, abs=1e-12)
    assert psi.per_cut["AC_BD"] == pytest.approx(0.0, abs=1e-12)
    assert psi.per_cut["AD_BC"] == pytest.approx(4.0, abs=1e-12)

    m4 = ame.ame_deviation(catalog.make("M4"))
    for cut in ame.CUTS:
        assert m4.per_cut[cut] == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert m4.total == pytest.approx(4.0, abs=1e-12)

    assert ame.ame_deviation(catalog.make("AME44")).total == pytest.approx(0.0, abs=1e-12)


def test_deviation_matches_direct_reduction_route():
    rng = np.random.default_rng(14)
    for _ in range(10):
        s = random_state(DIMS, rng)
        dev = ame.ame_deviation(s)
        for cut, keep in ROW_PAIRS.items():
            rho = partial_trace(s, keep).entries
            direct = float(np.sum(np.abs(4 * rho - np.eye(4)) ** 2))
            assert dev.per_cut[cut] == pytest.approx(direct, abs=1e-10)
        assert dev.total == pytest.approx(math.fsum(dev.per_cut.values()), abs=1e-12)


def test_deviation_locally_unitary_invariant():
    rng = np.random.default_rng(15)
    for _ in range(5):
        s = random_state(DIMS, rng)
        before = ame.ame_deviation(s).total
        rotated = s
        for p in range(4):
            rotated = apply_local_unitary(rotated, p, random_unitary(2, rng))
        assert ame.ame_deviation(rotated).total == pytest.approx(before, abs=1e-10)


def test_deviation_rejects_unequal_dims():
    with pytest.raises(DomainError):
        ame.ame_deviation(random_state((2, 2, 2, 3), np.random.default_rng(0)))


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(16)
    h = 1e-6
    for dims in (DIMS, (2, 2)):
        n = math.prod(dims)
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        amps = z / np.linalg.norm(z)
        _, g = ame.deviation_value_and_gradient_raw(amps, dims)
        for i in range(n):
            for direction in (1.0, 1.0j):
                e = np.zeros(n, dtype=complex)
                e[i] = direction
                fd = (
                    ame.deviation_value_raw(amps + h * e, dims)
                    - ame.deviation_value_raw(amps - h * e, dims)
                ) / (2 * h)
                expected = float(np.real(np.conj(direction) * g[i]))
                assert fd == pytest.approx(expected, abs=1e-5)


def test_minimize_two_qubits_reaches_zero():
    rep = ame.minimize_deviation((2, 2), restarts=2, seed=0, max_iters=5000)
    assert rep.floor < 1e-12
    assert rep.converged
    assert set(rep.per_cut) == {"A_B"}
    assert rep.per_cut["A_B"] == pytest.approx(rep.floor, abs=1e-12)
    assert len(rep.restarts) == 2
    # Bell-like minimizer: single-party reduction maximally mixed.
    rho = partial_trace(rep.state, (0,)).entries
    assert np.allclose(rho, np.eye(2) / 2, atol=1e-8)


def test_minimize_four_qubits_stays_above_alarm():
    rep = ame.minimize_deviation(DIMS, restarts=3, seed=0, max_iters=3000)
    assert rep.floor > 2.0
    assert rep.floor == pytest.approx(4.0, abs=1e-6)
    for record in rep.restarts:
        assert record.value >= rep.floor - 1e-12


def test_minimize_explicit_start():
    start = catalog.make("M4")
    rep = ame.minimize_deviation(DIMS, restarts=0, seed=0, max_iters=2000, start=start)
    assert len(rep.restarts) == 1
    assert rep.floor <= 4.0 + 1e-9


def test_minimize_validation():
    with pytest.raises(DomainError):
        ame.minimize_deviation((2, 3))
    with pytest.raises(DomainError):
        ame.minimize_deviation((2, 2, 2))
    with pytest.raises(DomainError):
        ame.minimize_deviation((2, 2), restarts=0)
    with pytest.raises(ShapeError):
        ame.minimize_deviation(DIMS, restarts=1, start=catalog.make("C3"))
