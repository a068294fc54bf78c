import json

import numpy as np
import pytest

from tc_entangle import oracle
from tc_entangle.errors import DomainError, TruncationError
from tc_entangle.measures import concurrence
from tc_entangle.oracle import (FockTruncation, appendix_a_unitary_apply, cross_check_report,
                                dense_symmetric_evolve, dense_two_qubit_evolve,
                                dense_unitary_apply, distinguishable_pair_density)
from tc_entangle.two_qubit import TwoQubitInitialState, reduced_density_general

BELL_TIME = np.pi / (2 * np.sqrt(2))


def supported_state(rng, trunc):
    psi = rng.normal(size=(4, trunc.levels)) + 1j * rng.normal(size=(4, trunc.levels))
    exc = np.array([2, 1, 1, 0])[:, None] + np.arange(trunc.levels)[None, :]
    psi[exc > trunc.n_max] = 0
    return psi / np.linalg.norm(psi)


def test_appendix_a_identity_at_zero(rng):
    trunc = FockTruncation(5)
    psi = supported_state(rng, trunc)
    np.testing.assert_allclose(appendix_a_unitary_apply(psi, 0.0, trunc), psi, atol=1e-15)


def test_appendix_a_bell_generation():
    trunc = FockTruncation(3)
    psi = np.zeros((4, 4), dtype=complex)
    psi[3, 1] = 1
    out = appendix_a_unitary_apply(psi, BELL_TIME, trunc)
    rho = out @ out.conj().T
    expect = np.zeros((4, 4))
    expect[1:3, 1:3] = 0.5
    np.testing.assert_allclose(rho, expect, atol=1e-12)


def test_appendix_a_matches_dense(rng):
    for _ in range(50):
        trunc = FockTruncation(int(rng.integers(2, 8)))
        psi = supported_state(rng, trunc)
        gt = rng.uniform(0, 10)
        out = appendix_a_unitary_apply(psi, gt, trunc)
        assert np.max(np.abs(out - dense_unitary_apply(psi, gt, trunc))) <= 1e-9
        assert abs(np.linalg.norm(out) - 1) <= 1e-10


def test_appendix_a_inverse(rng):
    trunc = FockTruncation(6)
    psi = supported_state(rng, trunc)
    back = appendix_a_unitary_apply(appendix_a_unitary_apply(psi, 3.3, trunc), -3.3, trunc)
    np.testing.assert_allclose(back, psi, atol=1e-10)


def test_appendix_a_detects_leak():
    trunc = FockTruncation(3)
    psi = np.zeros((4, 4), dtype=complex)
    psi[0, 2] = 1  # |ee>|2> needs |gg>|4>
    with pytest.raises(TruncationError):
        appendix_a_unitary_apply(psi, 1.0, trunc)


def test_truncation_type():
    with pytest.raises(TruncationError):
        FockTruncation(-1)
    with pytest.raises(TruncationError):
        dense_two_qubit_evolve(TwoQubitInitialState.from_amplitudes(1, 0, 1, 0), 1.0,
                               FockTruncation(2))


def test_dense_two_qubit_bell():
    gg = TwoQubitInitialState.from_amplitudes(0, 1, 0, 1)
    rho = dense_two_qubit_evolve(gg, BELL_TIME)
    expect = np.zeros((4, 4))
    expect[1:3, 1:3] = 0.5
    np.testing.assert_allclose(rho, expect, atol=1e-10)


def test_dense_two_qubit_ee_never_entangles():
    ee = TwoQubitInitialState.from_amplitudes(1, 0, 1, 0)
    rho = dense_two_qubit_evolve(ee, np.linspace(0, 30, 301))
    assert np.max(concurrence(rho)) <= 1e-9


def test_dense_two_qubit_truncation_exact(rng):
    init = TwoQubitInitialState.from_amplitudes(0.6, 0.8, 0.8j, 0.6)
    a = dense_two_qubit_evolve(init, 7.7, FockTruncation(3))
    b = dense_two_qubit_evolve(init, 7.7, FockTruncation(5))
    assert np.max(np.abs(a - b)) <= 1e-13
    np.testing.assert_allclose(a, reduced_density_general(init, 7.7), atol=1e-9)


def test_symmetric_unitarity_and_conservation():
    t = np.linspace(0, 20, 101)
    norm, exc = oracle.symmetric_trajectory_diagnostics(12, 2.1, t)
    assert norm <= 1e-12 and exc <= 1e-10


def test_symmetric_dimension_limit():
    with pytest.raises(DomainError):
        dense_symmetric_evolve(61, 1.0, 0.0)
    with pytest.raises(TruncationError):
        dense_symmetric_evolve(10, 1.0, 0.0, FockTruncation(10))


def test_distinguishable_all_ground_at_zero():
    rho = distinguishable_pair_density(4, np.pi, 0.0)
    expect = np.zeros((4, 4))
    expect[3, 3] = 1
    np.testing.assert_allclose(rho, expect, atol=1e-14)


def test_distinguishable_limit():
    with pytest.raises(DomainError):
        distinguishable_pair_density(7, 1.0, 0.0)


def test_distinguishable_pair_is_symmetric():
    rho = distinguishable_pair_density(5, 2.0, 3.1)
    assert abs(rho[1, 1] - rho[2, 2]) <= 1e-12
    assert abs(rho[0, 1] - rho[0, 2]) <= 1e-12


def test_phase_cancellation():
    t = np.linspace(0, 10, 21)
    m0, r0 = dense_symmetric_evolve(6, 1.3, t)
    m1, r1 = dense_symmetric_evolve(6, 1.3, t, omega=0.9)
    np.testing.assert_allclose(m0.jz_over_n, m1.jz_over_n, atol=1e-12)
    np.testing.assert_allclose(np.abs(m0.jp_over_n), np.abs(m1.jp_over_n), atol=1e-12)
    # the complex moments pick up the local phase exp(i omega t)
    np.testing.assert_allclose(m1.jp_over_n, m0.jp_over_n * np.exp(1j * 0.9 * t), atol=1e-12)
    np.testing.assert_allclose(concurrence(r0), concurrence(r1), atol=1e-8)


@pytest.fixture(scope="module")
def report():
    return cross_check_report()


def test_report_all_pass(report):
    assert [r.name for r in report if r.status != "PASS"] == []


def test_report_schema_and_order(report):
    again = cross_check_report()
    assert [r.name for r in report] == [r.name for r in again]
    payload = json.loads(oracle.report_json(report))
    for row in payload["checks"]:
        assert {"name", "max_abs_deviation", "tolerance", "status"} <= set(row)
    assert payload["passed"] is True


def test_report_flags_unsquared_q44():
    rows = {r.name: r for r in cross_check_report(q44_variant="unsquared")}
    trace = rows["excited_partner_trace[q44=unsquared]"]
    assert trace.status == "FAIL" and trace.max_abs_deviation > 1e-3
    assert not oracle.report_passed(rows.values())


def test_format_report(report):
    text = oracle.format_report(report, verbose=True)
    assert text.splitlines()[0].startswith("check")
    assert f"{len(report)}/{len(report)} checks passed" in text
