"""Closed-form dynamics of two qubits sharing a single cavity photon.

Resonant Tavis-Cummings model in the interaction picture with coupling ``g = 1``;
every quantity depends on time only through the product ``gt``. The field starts
in the Fock state ``|1>`` and the qubits in an arbitrary product state
``(a1|e> + b1|g>) (a2|e> + b2|g>)``.

Two transcriptions are kept apart on purpose: :func:`reduced_density_general`
takes complex amplitudes, while :func:`reduced_density_case` evaluates the
specialised expressions of the four one-parameter families directly. The test
suite and the verification battery cross-check them against each other and
against brute-force evolution.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, InvariantViolation, NumericalFailure
from .measures import check_density_matrix, concurrence

SQRT2 = np.sqrt(2.0)
SQRT6 = np.sqrt(6.0)
SQRT10 = np.sqrt(10.0)

# assembled closed-form matrices must be physical to this band
ASSEMBLY_TOL = 1e-8


@dataclass(frozen=True)
class TimeKernels:
    """Elementary time functions of the single-photon two-qubit problem.

    ``f1 = (3 + 2cos(gt√10))/5``, ``f2 = (cos(gt√6) + 1)/2``,
    ``f3 = (cos(gt√6) - 1)/2`` and ``gx = sin(gt√x)/√x`` for ``x`` in 2, 6, 10.
    ``c2 = cos(gt√2)`` is carried along because it appears in several entries.
    Fields are floats for scalar ``gt`` and arrays otherwise.
    """

    gt: object
    f1: object
    f2: object
    f3: object
    g2: object
    g6: object
    g10: object
    c2: object


def time_kernels(gt):
    gt = np.asarray(gt, dtype=float)
    c10 = np.cos(gt * SQRT10)
    c6 = np.cos(gt * SQRT6)
    vals = dict(
        gt=gt,
        f1=(3.0 + 2.0 * c10) / 5.0,
        f2=(c6 + 1.0) / 2.0,
        f3=(c6 - 1.0) / 2.0,
        g2=np.sin(gt * SQRT2) / SQRT2,
        g6=np.sin(gt * SQRT6) / SQRT6,
        g10=np.sin(gt * SQRT10) / SQRT10,
        c2=np.cos(gt * SQRT2),
    )
    if gt.ndim == 0:
        vals = {k: float(v) for k, v in vals.items()}
    return TimeKernels(**vals)


@dataclass(frozen=True)
class QubitAmplitudes:
    """Single-qubit pure state ``alpha|e> + beta|g>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise InvariantViolation("normalization", f"|alpha|^2 + |beta|^2 = {norm!r}")

    @classmethod
    def from_angle(cls, theta, sign=1.0):
        """``cos(theta)|e> + sign*sin(theta)|g>``."""
        return cls(complex(np.cos(theta)), complex(sign * np.sin(theta)))

    @property
    def vector(self):
        return np.array([self.alpha, self.beta], dtype=complex)


@dataclass(frozen=True)
class TwoQubitInitialState:
    """Product qubit state; the field part is always the one-photon Fock state."""

    qubit1: QubitAmplitudes
    qubit2: QubitAmplitudes

    @classmethod
    def from_amplitudes(cls, a1, b1, a2, b2):
        return cls(QubitAmplitudes(complex(a1), complex(b1)),
                   QubitAmplitudes(complex(a2), complex(b2)))

    @property
    def vector(self):
        """Qubit state in the ``ee, eg, ge, gg`` basis."""
        return np.kron(self.qubit1.vector, self.qubit2.vector)


class Case(str, Enum):
    GROUND_PARTNER = "ground_partner"    # |theta> (x) |g>
    EXCITED_PARTNER = "excited_partner"  # |theta> (x) |e>
    IDENTICAL_PAIR = "identical_pair"    # |theta> (x) |theta>
    MIRRORED_PAIR = "mirrored_pair"      # |theta> (x) |-theta>


@dataclass(frozen=True)
class CaseLabel:
    case: Case
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))

    def initial_state(self):
        """Amplitude mapping of the family into the general product state."""
        q1 = QubitAmplitudes.from_angle(self.theta)
        if self.case is Case.GROUND_PARTNER:
            q2 = QubitAmplitudes(0.0, 1.0)
        elif self.case is Case.EXCITED_PARTNER:
            q2 = QubitAmplitudes(1.0, 0.0)
        elif self.case is Case.IDENTICAL_PAIR:
            q2 = QubitAmplitudes.from_angle(self.theta)
        else:
            q2 = QubitAmplitudes.from_angle(self.theta, sign=-1.0)
        return TwoQubitInitialState(q1, q2)


def _assemble(upper, shape):
    """Fill a Hermitian ``(..., 4, 4)`` stack from its upper-triangle entries."""
    rho = np.zeros(shape + (4, 4), dtype=complex)
    for (i, j), val in upper.items():
        rho[..., i, j] = val
        if i != j:
            rho[..., j, i] = np.conj(val)
    return rho


def _validated(rho, what):
    try:
        check_density_matrix(rho, herm_tol=ASSEMBLY_TOL, trace_tol=ASSEMBLY_TOL,
                             psd_tol=ASSEMBLY_TOL)
    except InvariantViolation as exc:
        raise NumericalFailure(f"{what} produced an unphysical matrix ({exc})") from exc
    return rho


def _gg3_population(k):
    # population of |gg>|3> reached from |ee>|1>; the three-excitation sector
    # {|ee,1>, |eg+ge,2>, |gg,3>} pushes (3/2)(1 - f1)^2 of weight there
    return 1.5 * (1.0 - k.f1) ** 2


def reduced_density_general(init, gt, validate=True):
    """Two-qubit reduced density matrix at time ``gt``.

    Parameters
    ----------
    init : TwoQubitInitialState
    gt : float or array_like
        Dimensionless time; an array gives a stack of shape ``(len(gt), 4, 4)``.

    Raises
    ------
    NumericalFailure
        If the assembled matrix breaks trace, Hermiticity or positivity by more
        than ``1e-8``; the message names the failed check and location.
    """
    scalar = np.ndim(gt) == 0
    k = time_kernels(np.atleast_1d(np.asarray(gt, dtype=float)))
    a1, b1 = init.qubit1.alpha, init.qubit1.beta
    a2, b2 = init.qubit2.alpha, init.qubit2.beta
    A1, B1, A2, B2 = abs(a1) ** 2, abs(b1) ** 2, abs(a2) ** 2, abs(b2) ** 2
    x = b1 * a2 * np.conj(a1) * np.conj(b2)
    r1 = a1 * np.conj(b1)
    r2 = a2 * np.conj(b2)
    f1, f2, f3, g2, g6, g10, c2 = k.f1, k.f2, k.f3, k.g2, k.g6, k.g10, k.c2

    mixed = A1 * B2 + 2.0 * x.real + B1 * A2
    upper = {
        (0, 0): A1 * A2 * f1**2 + mixed * g6**2,
        (0, 1): A1 * r2 * f1 * f2 + r1 * A2 * f1 * f3 + (r1 * B2 + r2 * B1) * g6 * g2,
        (0, 2): A1 * r2 * f1 * f3 + r1 * A2 * f1 * f2 + (r1 * B2 + r2 * B1) * g6 * g2,
        (0, 3): a1 * a2 * np.conj(b1) * np.conj(b2) * f1 * c2,
        (1, 1): (2.0 * A1 * A2 * g10**2 + A1 * B2 * f2**2 + 2.0 * x.real * f2 * f3
                 + B1 * A2 * f3**2 + B1 * B2 * g2**2),
        (1, 2): (2.0 * A1 * A2 * g10**2 + x * f3**2 + np.conj(x) * f2**2
                 + B1 * B2 * g2**2 + (A1 * B2 + B1 * A2) * f2 * f3),
        (1, 3): 2.0 * (A1 * r2 + r1 * A2) * g6 * g10 + (r1 * B2 * f2 + r2 * B1 * f3) * c2,
        (2, 2): (2.0 * A1 * A2 * g10**2 + A1 * B2 * f3**2 + 2.0 * x.real * f2 * f3
                 + B1 * A2 * f2**2 + B1 * B2 * g2**2),
        (2, 3): 2.0 * (A1 * r2 + r1 * A2) * g6 * g10 + (r1 * B2 * f3 + r2 * B1 * f2) * c2,
        (3, 3): 2.0 * mixed * g6**2 + B1 * B2 * c2**2 + A1 * A2 * _gg3_population(k),
    }
    rho = _assemble(upper, k.f1.shape)
    if validate:
        _validated(rho, "general closed form")
    return rho[0] if scalar else rho


def _ground_partner(c, s, k):
    return {
        (0, 0): k.g6**2 * c**2,
        (0, 1): s * c * k.g6 * k.g2,
        (0, 2): s * c * k.g6 * k.g2,
        (0, 3): 0.0 * k.gt,
        (1, 1): c**2 * k.f2**2 + s**2 * k.g2**2,
        (1, 2): s**2 * k.g2**2 + c**2 * k.f2 * k.f3,
        (1, 3): s * c * k.f2 * k.c2,
        (2, 2): c**2 * k.f3**2 + s**2 * k.g2**2,
        (2, 3): s * c * k.f3 * k.c2,
        (3, 3): 2.0 * c**2 * k.g6**2 + s**2 * k.c2**2,
    }


def _excited_partner(c, s, k, q44_variant):
    if q44_variant == "squared":
        q44 = 2.0 * s**2 * k.g6**2 + c**2 * _gg3_population(k)
    elif q44_variant == "unsquared":
        # known-bad form, kept only so the verification battery can show it
        # breaks the unit trace
        q44 = 2.0 * s**2 * k.g6
    else:
        raise DomainError(f"unknown q44 variant {q44_variant!r}")
    return {
        (0, 0): c**2 * k.f1**2 + s**2 * k.g6**2,
        (0, 1): s * c * k.f1 * k.f3,
        (0, 2): s * c * k.f1 * k.f2,
        (0, 3): 0.0 * k.gt,
        (1, 1): 2.0 * c**2 * k.g10**2 + s**2 * k.f3**2,
        (1, 2): 2.0 * c**2 * k.g10**2 + s**2 * k.f2 * k.f3,
        (1, 3): 2.0 * s * c * k.g6 * k.g10,
        (2, 2): 2.0 * c**2 * k.g10**2 + s**2 * k.f2**2,
        (2, 3): 2.0 * s * c * k.g6 * k.g10,
        (3, 3): q44,
    }


def _identical_pair(c, s, k):
    s2t = 2.0 * s * c  # sin(2 theta)
    fsum = k.f2 + k.f3
    q12 = c**3 * s * k.f1 * fsum + s2t * s**2 * k.g2 * k.g6
    q22 = 2.0 * c**4 * k.g10**2 + s**2 * c**2 * fsum**2 + s**4 * k.g2**2
    q24 = 2.0 * c**2 * s2t * k.g6 * k.g10 + c * s**3 * fsum * k.c2
    return {
        (0, 0): c**4 * k.f1**2 + s2t**2 * k.g6**2,
        (0, 1): q12,
        (0, 2): q12,
        (0, 3): s**2 * c**2 * k.f1 * k.c2,
        (1, 1): q22,
        (1, 2): q22,
        (1, 3): q24,
        (2, 2): q22,
        (2, 3): q24,
        (3, 3): 2.0 * s2t**2 * k.g6**2 + s**4 * k.c2**2 + c**4 * _gg3_population(k),
    }


def _mirrored_pair(c, s, k):
    fdiff = k.f2 - k.f3
    # q12 carries the minus sign: the |e>|-theta> branch enters with -sin(theta)
    q12 = -(c**3) * s * k.f1 * fdiff
    q24 = c * s**3 * fdiff * k.c2
    q22 = 2.0 * c**4 * k.g10**2 + s**2 * c**2 * fdiff**2 + s**4 * k.g2**2
    return {
        (0, 0): c**4 * k.f1**2,
        (0, 1): q12,
        (0, 2): -q12,
        (0, 3): -(s**2) * c**2 * k.f1 * k.c2,
        (1, 1): q22,
        (1, 2): 2.0 * c**4 * k.g10**2 - s**2 * c**2 * fdiff**2 + s**4 * k.g2**2,
        (1, 3): q24,
        (2, 2): q22,
        (2, 3): -q24,
        (3, 3): s**4 * k.c2**2 + c**4 * _gg3_population(k),
    }


def reduced_density_case(label, gt, validate=True, q44_variant="squared"):
    """Reduced density matrix of one of the four one-parameter families.

    ``q44_variant`` only matters for the excited-partner family; ``"unsquared"``
    selects a deliberately wrong |gg><gg| entry used by the verification
    battery, and disables validation so the defect can be measured.
    """
    label = label if isinstance(label, CaseLabel) else CaseLabel(*label)
    scalar = np.ndim(gt) == 0
    k = time_kernels(np.atleast_1d(np.asarray(gt, dtype=float)))
    c, s = np.cos(label.theta), np.sin(label.theta)
    if label.case is Case.GROUND_PARTNER:
        upper = _ground_partner(c, s, k)
    elif label.case is Case.EXCITED_PARTNER:
        upper = _excited_partner(c, s, k, q44_variant)
        if q44_variant != "squared":
            validate = False
    elif label.case is Case.IDENTICAL_PAIR:
        upper = _identical_pair(c, s, k)
    else:
        upper = _mirrored_pair(c, s, k)
    rho = _assemble(upper, k.f1.shape)
    if validate:
        _validated(rho, f"{label.case.value} closed form")
    return rho[0] if scalar else rho


@dataclass(frozen=True)
class ConcurrenceSeries:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values differ in length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def time_grid(t_max, t_step):
    """``0, step, 2 step, ...`` up to and including ``t_max`` (within 1e-9 steps)."""
    if not t_max > 0:
        raise DomainError(f"time window must be positive, got {t_max}")
    if not 0 < t_step <= t_max:
        raise DomainError(f"time step must satisfy 0 < step <= window, got {t_step}")
    n = int(np.floor(t_max / t_step + 1e-9)) + 1
    return np.arange(n) * t_step


def _init_from(init):
    if isinstance(init, TwoQubitInitialState):
        return init
    if isinstance(init, CaseLabel):
        return init.initial_state()
    return CaseLabel(*init).initial_state()


def concurrence_series(init, gt_max, gt_step):
    """Concurrence on the grid ``0, gt_step, ..., gt_max``.

    ``init`` may be a :class:`TwoQubitInitialState` or a :class:`CaseLabel`; a
    case label is evaluated through the general formula with mapped amplitudes.
    """
    times = time_grid(gt_max, gt_step)
    rho = reduced_density_general(_init_from(init), times)
    return ConcurrenceSeries(times, np.atleast_1d(concurrence(rho, check=False)))


def max_concurrence(init, gt_max, gt_step):
    """``(gt_star, c_max)`` over the grid; ties go to the earliest time."""
    series = concurrence_series(init, gt_max, gt_step)
    i = int(np.argmax(series.values))
    return float(series.times[i]), float(series.values[i])


def scan_case_max(case, thetas, gt_max, gt_step):
    """Maximal concurrence of a family for each ``theta``.

    Returns arrays ``(gt_star, c_max)`` aligned with ``thetas``.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    gt_star = np.empty(len(thetas))
    c_max = np.empty(len(thetas))
    for i, th in enumerate(thetas):
        gt_star[i], c_max[i] = max_concurrence(CaseLabel(case, th), gt_max, gt_step)
    return gt_star, c_max
