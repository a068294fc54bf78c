"""Brute-force reference evolutions and the cross-check battery.

Everything here works on an explicitly truncated Fock space and evolves with a
Hermitian eigendecomposition of the full interaction Hamiltonian (``g = 1``).
The total excitation ``a^dag a + (number of excited qubits)`` is conserved, so a
truncation ``n_max`` at least as large as the highest initial excitation is
exact rather than approximate.

Two-qubit states are arrays ``psi[q, n]`` with ``q`` running over
``ee, eg, ge, gg`` and ``n`` over photon numbers ``0..n_max``.
"""

from dataclasses import asdict, dataclass
import json

import numpy as np

from . import collective, two_qubit
from .collective import CollectiveMoments, dicke_coefficients, pairwise_density
from .errors import DomainError, TruncationError
from .measures import concurrence

SYMMETRIC_MAX_QUBITS = 60
DISTINGUISHABLE_MAX_QUBITS = 6
LEAK_TOL = 1e-14

# excited-qubit count of each two-qubit basis state ee, eg, ge, gg
_EXCITED = np.array([2, 1, 1, 0])


@dataclass(frozen=True)
class FockTruncation:
    """Highest retained photon number."""

    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise TruncationError(f"n_max must be a nonnegative integer, got {self.n_max}")

    @property
    def levels(self):
        return self.n_max + 1


def _check_support(psi, trunc):
    """Amplitude whose excitation exceeds ``n_max`` would leak out of the space."""
    n = np.arange(psi.shape[1])
    excitation = _EXCITED[:, None] + n[None, :]
    leak = np.abs(psi[excitation > trunc.n_max])
    if leak.size and leak.max() > LEAK_TOL:
        raise TruncationError(
            f"state has amplitude {leak.max():.3e} in sectors above n_max={trunc.n_max}")


def two_qubit_hamiltonian(trunc):
    """``sum_i a^dag s-_i + s+_i a`` on ``(ee, eg, ge, gg) x Fock``, flattened row-major."""
    levels = trunc.levels
    a = np.diag(np.sqrt(np.arange(1, levels)), 1)
    sm = np.array([[0.0, 0.0], [1.0, 0.0]])  # |g><e| with |e> = (1, 0)
    eye2 = np.eye(2)
    h = np.zeros((4 * levels, 4 * levels))
    for s in (np.kron(sm, eye2), np.kron(eye2, sm)):
        term = np.kron(s, a.T)
        h += term + term.T
    return h


class _Propagator:
    """``exp(-i H t)`` through a single Hermitian eigendecomposition."""

    def __init__(self, h):
        self.values, self.vectors = np.linalg.eigh(h)

    def apply(self, psi, t):
        coeffs = self.vectors.T @ psi
        times = np.atleast_1d(np.asarray(t, dtype=float))
        phases = np.exp(-1j * np.multiply.outer(self.values, times))
        out = self.vectors @ (phases * coeffs[:, None])
        return out[:, 0] if np.ndim(t) == 0 else out


def dense_unitary_apply(state, gt, trunc):
    """Reference for ``appendix_a_unitary_apply`` by dense exponentiation."""
    psi = np.asarray(state, dtype=complex).reshape(4, trunc.levels)
    _check_support(psi, trunc)
    prop = _Propagator(two_qubit_hamiltonian(trunc))
    return prop.apply(psi.ravel(), gt).reshape(4, trunc.levels)


def appendix_a_unitary_apply(state, gt, trunc):
    """Apply the operator-valued 4x4 block form of ``U(gt)``.

    With ``A(n) = cos(gt sqrt(C(n)))``, ``B(n) = sin(gt sqrt(C(n)))`` and
    ``C(n) = 2(2n + 1)``, operator functions written to the left of ``a`` or
    ``a^dag`` are evaluated on the photon number after the shift.
    """
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (4, trunc.levels):
        raise DomainError(f"state must have shape (4, {trunc.levels}), got {psi.shape}")
    _check_support(psi, trunc)
    top = trunc.n_max
    n = np.arange(top + 3, dtype=float)  # two guard levels for n+1, n+2 lookups
    c = 2.0 * (2.0 * n + 1.0)
    a_fn = np.cos(gt * np.sqrt(c))
    b_fn = np.sin(gt * np.sqrt(c)) / np.sqrt(c)  # B(n)/sqrt(C(n))
    k_fn = 2.0 * (a_fn - 1.0) / c                # 2(A(n) - 1)/C(n)
    ee, eg, ge, gg = psi
    out = np.zeros_like(psi)
    idx = np.arange(top + 1)
    sym = eg + ge

    # row ee
    out[0] = (1.0 + k_fn[idx + 1] * (idx + 1)) * ee
    out[0, :-1] += -1j * b_fn[idx[1:]] * np.sqrt(idx[1:]) * sym[1:]
    out[0, :-2] += k_fn[idx[2:] - 1] * np.sqrt(idx[2:] * (idx[2:] - 1.0)) * gg[2:]

    # rows eg, ge share every block except the diagonal pair
    lift = np.zeros(top + 1, dtype=complex)
    lift[1:] = -1j * b_fn[idx[:-1] + 1] * np.sqrt(idx[:-1] + 1.0) * ee[:-1]
    drop = np.zeros(top + 1, dtype=complex)
    drop[:-1] = -1j * b_fn[idx[1:] - 1] * np.sqrt(idx[1:]) * gg[1:]
    half_sum = 0.5 * (a_fn[idx] + 1.0)
    half_diff = 0.5 * (a_fn[idx] - 1.0)
    out[1] = half_sum * eg + half_diff * ge + lift + drop
    out[2] = half_diff * eg + half_sum * ge + lift + drop

    # row gg; the n * k(n-1) diagonal term vanishes at n = 0
    diag = np.ones(top + 1)
    diag[1:] += k_fn[idx[1:] - 1] * idx[1:]
    out[3] = diag * gg
    out[3, 1:] += -1j * b_fn[idx[:-1]] * np.sqrt(idx[:-1] + 1.0) * sym[:-1]
    out[3, 2:] += k_fn[idx[:-2] + 1] * np.sqrt((idx[:-2] + 1.0) * (idx[:-2] + 2.0)) * ee[:-2]
    return out


def _initial_two_qubit(init, trunc):
    psi = np.zeros((4, trunc.levels), dtype=complex)
    psi[:, 1] = init.vector
    return psi


def _reduce_two_qubit(psi):
    """Partial trace over the field of ``psi[q, n]`` (optionally ``psi[q, n, t]``)."""
    if psi.ndim == 2:
        return psi @ psi.conj().T
    return np.einsum("ant,bnt->tab", psi, psi.conj())


def dense_two_qubit_evolve(init, gt, trunc=None):
    """Reduced qubit state after exact evolution of ``init x |1>``.

    Returns a 4x4 matrix for scalar ``gt`` or a ``(T, 4, 4)`` stack.
    """
    if isinstance(init, two_qubit.CaseLabel):
        init = init.initial_state()
    trunc = trunc or FockTruncation(3)
    if trunc.n_max < 3:
        raise TruncationError(f"two-qubit evolution from |1> needs n_max >= 3, got {trunc.n_max}")
    psi0 = _initial_two_qubit(init, trunc)
    prop = _Propagator(two_qubit_hamiltonian(trunc))
    psi = prop.apply(psi0.ravel(), gt)
    if np.ndim(gt) == 0:
        return _reduce_two_qubit(psi.reshape(4, trunc.levels))
    return _reduce_two_qubit(psi.reshape(4, trunc.levels, -1))


# --------------------------------------------------------------------------
# symmetric N-qubit space: Dicke index k = m + J (excited count) x Fock


def _symmetric_operators(n_qubits, levels):
    k = np.arange(n_qubits + 1, dtype=float)
    jz = np.diag(k - n_qubits / 2.0)
    jp = np.diag(np.sqrt((n_qubits - k[:-1]) * (k[:-1] + 1.0)), -1)  # k -> k+1
    a = np.diag(np.sqrt(np.arange(1, levels)), 1)
    return jz, jp, a


def dense_symmetric_evolve(n_qubits, theta_tilde, t, trunc=None, omega=0.0):
    """Exact evolution of a spin coherent state with one photon.

    The state lives on the full ``(N+1) x (n_max+1)`` Dicke-Fock space with no
    use of sector structure. ``omega`` adds the resonant free term
    ``omega (a^dag a + Jz)``; at ``omega = 0`` this is the interaction picture.

    Returns
    -------
    moments : CollectiveMoments
        Computed directly as expectation values of the full operators.
    rho : ndarray
        Pairwise reduced state assembled from the moments.
    """
    if not 1 <= n_qubits <= SYMMETRIC_MAX_QUBITS:
        raise DomainError(
            f"dense symmetric evolution supports 1 <= N <= {SYMMETRIC_MAX_QUBITS}, got {n_qubits}")
    trunc = trunc or FockTruncation(n_qubits + 2)
    if trunc.n_max < n_qubits + 1:
        raise TruncationError(f"n_max must be at least N+1={n_qubits + 1}, got {trunc.n_max}")
    levels = trunc.levels
    jz, jp, a = _symmetric_operators(n_qubits, levels)
    eye_f, eye_s = np.eye(levels), np.eye(n_qubits + 1)
    coupling = np.kron(jp, a)
    h = coupling + coupling.T + omega * (np.kron(eye_s, a.T @ a) + np.kron(jz, eye_f))
    psi0 = np.zeros((n_qubits + 1, levels), dtype=complex)
    psi0[:, 1] = dicke_coefficients(n_qubits, theta_tilde).coefficients
    psi = _Propagator(h).apply(psi0.ravel(), t)
    psi = psi.reshape(n_qubits + 1, levels, -1)
    moments = _symmetric_moments(psi, jz, jp, n_qubits, t)
    return moments, pairwise_density(moments, n_qubits) if n_qubits >= 2 else None


def _expect(psi, op):
    # psi[k, n, t]; op acts on the spin index
    return np.einsum("knt,kl,lnt->t", psi.conj(), op, psi)


def _symmetric_moments(psi, jz, jp, n_qubits, t):
    n = float(n_qubits)
    anti = jp @ jz + jz @ jp
    vals = dict(
        jz_over_n=_expect(psi, jz).real / n,
        jz2_over_n2=_expect(psi, jz @ jz).real / n**2,
        jp_over_n=_expect(psi, jp) / n,
        jpjz_anticomm=_expect(psi, anti) / n**2,
        jp2_over_n2=_expect(psi, jp @ jp) / n**2,
    )
    if np.ndim(t) == 0:
        vals = {key: v[0].item() for key, v in vals.items()}
        return CollectiveMoments(**vals, t=float(t))
    return CollectiveMoments(**vals, t=np.asarray(t, dtype=float))


def symmetric_trajectory_diagnostics(n_qubits, theta_tilde, t, trunc=None):
    """Norm drift and excitation drift of the dense symmetric evolution."""
    trunc = trunc or FockTruncation(n_qubits + 2)
    levels = trunc.levels
    jz, jp, a = _symmetric_operators(n_qubits, levels)
    coupling = np.kron(jp, a)
    psi0 = np.zeros((n_qubits + 1, levels), dtype=complex)
    psi0[:, 1] = dicke_coefficients(n_qubits, theta_tilde).coefficients
    psi = _Propagator(coupling + coupling.T).apply(psi0.ravel(), t).reshape(n_qubits + 1, levels, -1)
    norm = np.einsum("knt,knt->t", psi.conj(), psi).real
    k = np.arange(n_qubits + 1)[:, None, None]
    nph = np.arange(levels)[None, :, None]
    excitation = np.sum((k + nph) * np.abs(psi) ** 2, axis=(0, 1))
    return float(np.max(np.abs(norm - 1.0))), float(np.max(np.abs(excitation - excitation[0])))


def distinguishable_pair_density(n_qubits, theta_tilde, t, trunc=None):
    """Reduced state of qubits 1 and 2 from the full ``2^N x Fock`` evolution.

    Every qubit starts in ``cos(theta~/2)|e> + sin(theta~/2)|g>`` and the field
    in ``|1>``.
    """
    if not 2 <= n_qubits <= DISTINGUISHABLE_MAX_QUBITS:
        raise DomainError(
            f"distinguishable evolution supports 2 <= N <= {DISTINGUISHABLE_MAX_QUBITS}, "
            f"got {n_qubits}")
    trunc = trunc or FockTruncation(n_qubits + 2)
    if trunc.n_max < n_qubits + 1:
        raise TruncationError(f"n_max must be at least N+1={n_qubits + 1}, got {trunc.n_max}")
    levels = trunc.levels
    a = np.diag(np.sqrt(np.arange(1, levels)), 1)
    sm = np.array([[0.0, 0.0], [1.0, 0.0]])
    dim_q = 2 ** n_qubits
    h = np.zeros((dim_q * levels, dim_q * levels))
    for i in range(n_qubits):
        s = np.kron(np.kron(np.eye(2 ** i), sm), np.eye(2 ** (n_qubits - i - 1)))
        term = np.kron(s, a.T)
        h += term + term.T
    single = np.array([np.cos(theta_tilde / 2.0), np.sin(theta_tilde / 2.0)])
    qubits = single
    for _ in range(n_qubits - 1):
        qubits = np.kron(qubits, single)
    psi0 = np.zeros((dim_q, levels), dtype=complex)
    psi0[:, 1] = qubits
    psi = _Propagator(h).apply(psi0.ravel(), t)
    psi = psi.reshape(4, dim_q // 4 * levels, -1)
    rho = np.einsum("art,brt->tab", psi, psi.conj())
    return rho[0] if np.ndim(t) == 0 else rho


# --------------------------------------------------------------------------
# cross-check battery


@dataclass(frozen=True)
class CheckResult:
    """One report row.

    ``expect`` is ``"below"`` for agreement checks (pass when the deviation is
    at most the tolerance) and ``"above"`` for demonstrations that a known bad
    transcription really is bad (pass when the deviation exceeds it).
    """

    name: str
    max_abs_deviation: float
    tolerance: float
    status: str
    expect: str = "below"


def _row(name, deviation, tolerance, expect="below"):
    deviation = float(deviation)
    if expect == "below":
        ok = deviation <= tolerance
    else:
        ok = deviation > tolerance
    return CheckResult(name, deviation, tolerance, "PASS" if ok else "FAIL", expect)


def _random_amplitudes(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return two_qubit.QubitAmplitudes(v[0], v[1])


def _random_init(rng):
    return two_qubit.TwoQubitInitialState(_random_amplitudes(rng), _random_amplitudes(rng))


def _random_supported_state(rng, trunc):
    psi = rng.normal(size=(4, trunc.levels)) + 1j * rng.normal(size=(4, trunc.levels))
    psi[_EXCITED[:, None] + np.arange(trunc.levels)[None, :] > trunc.n_max] = 0.0
    return psi / np.linalg.norm(psi)


def _trace_deviation(rho):
    return np.max(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1.0))


def _moment_deviation(a, b):
    return max(float(np.max(np.abs(np.asarray(getattr(a, f)) - np.asarray(getattr(b, f)))))
               for f in collective._MOMENT_FIELDS)


def _check_appendix_a(rng):
    dev = 0.0
    for _ in range(50):
        trunc = FockTruncation(int(rng.integers(2, 7)))
        psi = _random_supported_state(rng, trunc)
        gt = rng.uniform(0.0, 10.0)
        dev = max(dev, np.max(np.abs(appendix_a_unitary_apply(psi, gt, trunc)
                                     - dense_unitary_apply(psi, gt, trunc))))
    return dev


def _check_appendix_a_inverse(rng):
    dev = 0.0
    for _ in range(20):
        trunc = FockTruncation(int(rng.integers(2, 7)))
        psi = _random_supported_state(rng, trunc)
        gt = rng.uniform(0.0, 10.0)
        back = appendix_a_unitary_apply(appendix_a_unitary_apply(psi, gt, trunc), -gt, trunc)
        dev = max(dev, np.max(np.abs(back - psi)))
    return dev


def _check_closed_form(rng):
    dev = 0.0
    for _ in range(100):
        init = _random_init(rng)
        gt = rng.uniform(0.0, 20.0)
        dev = max(dev, np.max(np.abs(two_qubit.reduced_density_general(init, gt)
                                     - dense_two_qubit_evolve(init, gt))))
    return dev


def _check_case(rng, case, q44_variant="squared"):
    dev = 0.0
    for _ in range(50):
        label = two_qubit.CaseLabel(case, rng.uniform(0.0, 2.0 * np.pi))
        gt = rng.uniform(0.0, 50.0)
        general = two_qubit.reduced_density_general(label.initial_state(), gt)
        specialised = two_qubit.reduced_density_case(label, gt, validate=False,
                                                     q44_variant=q44_variant)
        dev = max(dev, np.max(np.abs(specialised - general)))
    return dev


def _generic_excited_trace(q44_variant):
    label = two_qubit.CaseLabel(two_qubit.Case.EXCITED_PARTNER, 0.9)
    gt = np.linspace(0.3, 20.0, 200)
    rho = two_qubit.reduced_density_case(label, gt, validate=False, q44_variant=q44_variant)
    return _trace_deviation(rho)


def _check_missing_gg3(rng):
    # the general q44 without the 3/2 |a1 a2|^2 (1 - f1)^2 term
    dev = 0.0
    for _ in range(20):
        init = _random_init(rng)
        gt = rng.uniform(0.5, 20.0)
        rho = two_qubit.reduced_density_general(init, gt, validate=False)
        a1 = abs(init.qubit1.alpha) ** 2
        a2 = abs(init.qubit2.alpha) ** 2
        gg3 = two_qubit._gg3_population(two_qubit.time_kernels(gt))
        dev = max(dev, abs(np.trace(rho).real - gg3 * a1 * a2 - 1.0))
    return dev


def _check_mirrored_sign():
    # swapping the q12/q13 signs of the mirrored family against the general formula
    theta, gt = 0.7, np.linspace(0.5, 20.0, 100)
    label = two_qubit.CaseLabel(two_qubit.Case.MIRRORED_PAIR, theta)
    rho = two_qubit.reduced_density_case(label, gt)
    flipped = rho.copy()
    flipped[:, 0, 1], flipped[:, 0, 2] = rho[:, 0, 2], rho[:, 0, 1]
    general = two_qubit.reduced_density_general(label.initial_state(), gt)
    return np.max(np.abs(flipped - general))


def _check_sector_vs_dense():
    t = two_qubit.time_grid(20.0, 0.1)
    dev = 0.0
    for theta in (np.pi, 2.0):
        dense, _ = dense_symmetric_evolve(10, theta, t)
        sector = collective.collective_moments(dicke_coefficients(10, theta), t, weight_cutoff=0.0)
        dev = max(dev, _moment_deviation(dense, sector))
    return dev


def _check_pairwise_vs_distinguishable(rng):
    dev = 0.0
    for n in range(2, DISTINGUISHABLE_MAX_QUBITS + 1):
        for _ in range(3):
            theta, t = rng.uniform(0.0, 2.0 * np.pi), rng.uniform(0.0, 20.0)
            mom = collective.collective_moments(dicke_coefficients(n, theta), t, weight_cutoff=0.0)
            dev = max(dev, np.max(np.abs(pairwise_density(mom, n)
                                         - distinguishable_pair_density(n, theta, t))))
    return dev


def _check_identical_pair_model(rng):
    dev = 0.0
    for _ in range(10):
        theta, t = rng.uniform(0.0, 2.0 * np.pi), rng.uniform(0.0, 20.0)
        label = two_qubit.CaseLabel(two_qubit.Case.IDENTICAL_PAIR, theta)
        dev = max(dev, np.max(np.abs(distinguishable_pair_density(2, 2.0 * theta, t)
                                     - two_qubit.reduced_density_case(label, t))))
    return dev


def _check_phase_cancellation():
    """Free evolution changes neither Jz moments, |<J+>| nor the concurrence.

    Returns the moment deviation and the concurrence deviation separately: the
    latter goes through square roots of near-zero eigenvalues and is only
    accurate to about the square root of machine precision.
    """
    t = two_qubit.time_grid(20.0, 0.1)
    moments, conc = 0.0, 0.0
    for theta in (1.1, 2.0):
        plain, rho0 = dense_symmetric_evolve(8, theta, t)
        free, rho1 = dense_symmetric_evolve(8, theta, t, omega=1.3)
        moments = max(moments,
                      np.max(np.abs(plain.jz_over_n - free.jz_over_n)),
                      np.max(np.abs(plain.jz2_over_n2 - free.jz2_over_n2)),
                      np.max(np.abs(np.abs(plain.jp_over_n) - np.abs(free.jp_over_n))),
                      np.max(np.abs(np.abs(plain.jp2_over_n2) - np.abs(free.jp2_over_n2))))
        conc = max(conc, np.max(np.abs(concurrence(rho0, check=False)
                                       - concurrence(rho1, check=False))))
    return moments, conc


def _check_conservation():
    t = two_qubit.time_grid(20.0, 0.1)
    norm, exc = 0.0, 0.0
    for n, theta in ((4, 2.0), (10, 1.3), (10, np.pi)):
        a, b = symmetric_trajectory_diagnostics(n, theta, t)
        norm, exc = max(norm, a), max(exc, b)
    return norm, exc


def _check_truncation(rng):
    dev = 0.0
    for _ in range(5):
        init, gt = _random_init(rng), rng.uniform(0.0, 20.0)
        dev = max(dev, np.max(np.abs(dense_two_qubit_evolve(init, gt, FockTruncation(3))
                                     - dense_two_qubit_evolve(init, gt, FockTruncation(4)))))
    for n, theta in ((5, 1.7), (8, 2.6)):
        t = np.linspace(0.0, 10.0, 11)
        a, _ = dense_symmetric_evolve(n, theta, t, FockTruncation(n + 1))
        b, _ = dense_symmetric_evolve(n, theta, t, FockTruncation(n + 2))
        dev = max(dev, _moment_deviation(a, b))
    return dev


def _check_selection_rules():
    t = np.linspace(0.0, 5.0, 6)
    dev = 0.0
    for power in (1, 2):
        for (big_m, big_e), val in collective.sector_pair_overlaps(6, range(1, 8), t, power).items():
            if big_m != big_e + power:
                dev = max(dev, np.max(np.abs(val)))
    return dev


def cross_check_report(q44_variant="squared", seed=20240601):
    """Run the full verification battery in a fixed order.

    ``q44_variant`` selects the excited-partner ``q44`` transcription under
    test; ``"unsquared"`` injects the known-bad literal form and must make the
    trace row fail.
    """
    rng = np.random.default_rng(seed)
    Case = two_qubit.Case
    rows = [
        _row("appendix_a_vs_dense_exponential", _check_appendix_a(rng), 1e-9),
        _row("appendix_a_inverse_identity", _check_appendix_a_inverse(rng), 1e-10),
        _row("closed_form_vs_dense", _check_closed_form(rng), 1e-9),
        _row("ground_partner_vs_general", _check_case(rng, Case.GROUND_PARTNER), 1e-12),
        _row("excited_partner_vs_general",
             _check_case(rng, Case.EXCITED_PARTNER, q44_variant), 1e-12),
        _row("identical_pair_vs_general", _check_case(rng, Case.IDENTICAL_PAIR), 1e-12),
        _row("mirrored_pair_vs_general", _check_case(rng, Case.MIRRORED_PAIR), 1e-12),
        _row(f"excited_partner_trace[q44={q44_variant}]", _generic_excited_trace(q44_variant), 1e-10),
        _row("demo_unsquared_q44_breaks_trace", _generic_excited_trace("unsquared"), 1e-3, "above"),
        _row("demo_q44_without_gg3_term_breaks_trace", _check_missing_gg3(rng), 1e-3, "above"),
        _row("demo_mirrored_q12_sign_swap_deviates", _check_mirrored_sign(), 1e-3, "above"),
        _row("identical_pair_vs_distinguishable_n2", _check_identical_pair_model(rng), 1e-10),
        _row("sector_moments_vs_dense_symmetric", _check_sector_vs_dense(), 1e-8),
        _row("pairwise_vs_distinguishable_n2_to_6", _check_pairwise_vs_distinguishable(rng), 1e-8),
        _row("selection_rules", _check_selection_rules(), 1e-12),
    ]
    phase_moments, phase_conc = _check_phase_cancellation()
    norm, exc = _check_conservation()
    rows += [
        _row("free_phase_cancellation_moments", phase_moments, 1e-10),
        _row("free_phase_cancellation_concurrence", phase_conc, 1e-8),
        _row("unitarity_norm_drift", norm, 1e-12),
        _row("excitation_conservation", exc, 1e-10),
        _row("truncation_exactness", _check_truncation(rng), 1e-13),
    ]
    return rows


def report_passed(rows):
    return all(r.status == "PASS" for r in rows)


def format_report(rows, verbose=False):
    width = max(len(r.name) for r in rows)
    lines = [f"{'check':<{width}}  {'max_abs_deviation':>18}  {'tolerance':>10}  status"]
    for r in rows:
        cmp = "<=" if r.expect == "below" else "> "
        lines.append(f"{r.name:<{width}}  {r.max_abs_deviation:>18.3e}  {cmp}{r.tolerance:>8.0e}  {r.status}")
    passed = sum(r.status == "PASS" for r in rows)
    lines.append(f"{passed}/{len(rows)} checks passed")
    if verbose:
        lines.append("demo_* rows pass when the known-bad transcription deviates by more than the tolerance")
    return "\n".join(lines)


def report_json(rows):
    return json.dumps({"passed": report_passed(rows), "checks": [asdict(r) for r in rows]},
                      indent=2, sort_keys=False) + "\n"
