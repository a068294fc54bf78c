"""N identical qubits and one photon: excitation-sector dynamics.

The resonant multi-qubit Tavis-Cummings interaction ``a^dag J- + J+ a`` (``g = 1``)
conserves ``M = n + (m + J)``, the photon number plus the number of excited
qubits. Inside a sector the Dicke-Fock states ``|n, J, m>`` are labelled by the
number of excited qubits ``k = m + J``, ``k = 0 .. min(M, 2J)``; the sector
Hamiltonian is a zero-diagonal tridiagonal matrix whose eigendecomposition
replaces an explicit Bethe-ansatz solution.

A spin coherent initial state with one photon, ``sum_k d_k |J, k-J>|1>``, puts
exactly one basis vector into each sector ``M = k + 1``. Collective moments are
then sums over sectors of sector-local functions of time weighted by products
of the ``d_k``; ``J_z`` moments are diagonal in the sector index, ``J_+`` links
sector ``M`` to ``M + 1`` and ``J_+^2`` links ``M`` to ``M + 2``.

Free evolution ``omega (a^dag a + J_z)`` is constant inside a sector and is left
out: only the interaction part is evolved.
"""

from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property
import threading

import numpy as np
from scipy.linalg import LinAlgError, svd
from scipy.special import gammaln

from .errors import DomainError, InvariantViolation, NumericalFailure
from .measures import check_density_matrix, concurrence
from .two_qubit import time_grid

DEFAULT_CUTOFF = 1e-10
DEFAULT_MEMORY_BUDGET = 1 << 30  # bytes
PAIRWISE_TOL = 1e-8

# |cos| or |sin| below this is exactly zero; keeps the poles theta~ = k*pi clean
_TRIG_ZERO = 1e-15


@dataclass(frozen=True)
class SpinCoherentExpansion:
    """Dicke-basis coefficients of ``(cos(t/2)|e> + sin(t/2)|g>)^N``.

    ``coefficients[k]`` multiplies ``|J, m = k - J>``, i.e. the Dicke state with
    ``k`` excited qubits.
    """

    n_qubits: int
    theta_tilde: float
    coefficients: np.ndarray

    @property
    def j(self):
        return self.n_qubits / 2.0

    @property
    def m_values(self):
        return np.arange(self.n_qubits + 1) - self.j

    def coefficient(self, m):
        """``d_m`` by Dicke index ``m`` in ``-J .. J``."""
        k = int(round(m + self.j))
        if not 0 <= k <= self.n_qubits or abs(k - (m + self.j)) > 1e-9:
            return 0.0
        return float(self.coefficients[k])


def _snap(x):
    return 0.0 if abs(x) < _TRIG_ZERO else x


def dicke_coefficients(n_qubits, theta_tilde):
    """Expand a spin coherent state on the symmetric Dicke ladder.

    ``d_k = sqrt(C(N, k)) cos(t/2)^k sin(t/2)^(N-k)``, evaluated in log space so
    that ``N`` in the thousands neither overflows nor underflows prematurely.
    """
    n = int(n_qubits)
    if n < 1 or n != n_qubits:
        raise DomainError(f"number of qubits must be a positive integer, got {n_qubits}")
    c = _snap(np.cos(theta_tilde / 2.0))
    s = _snap(np.sin(theta_tilde / 2.0))
    k = np.arange(n + 1)
    with np.errstate(divide="ignore"):
        log_mag = (0.5 * (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))
                   + _xlog(k, abs(c)) + _xlog(n - k, abs(s)))
    d = np.exp(log_mag)
    d *= np.where(k % 2 == 1, np.sign(c), 1.0) * np.where((n - k) % 2 == 1, np.sign(s), 1.0)
    return SpinCoherentExpansion(n, float(theta_tilde), d)


def _xlog(power, base):
    # power * log(base) with 0 * log(0) = 0
    if base == 0.0:
        return np.where(power == 0, 0.0, -np.inf)
    return power * np.log(base)


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis ``(n, m)`` of the excitation sector ``M``.

    Position ``i`` holds ``i`` excited qubits (``m = i - J``) and
    ``n = M - i`` photons, so the order is by ascending ``m``.
    """

    n_qubits: int
    excitation: int

    @property
    def j(self):
        return self.n_qubits / 2.0

    @property
    def size(self):
        return min(self.n_qubits, self.excitation) + 1

    @property
    def excited(self):
        return np.arange(self.size)

    @property
    def photons(self):
        return self.excitation - self.excited

    @property
    def m(self):
        return self.excited - self.j

    @property
    def states(self):
        return [(int(n), float(m)) for n, m in zip(self.photons, self.m)]

    def index_of(self, photons):
        """Position of the basis state with the given photon number."""
        k = self.excitation - photons
        if not 0 <= k < self.size:
            raise DomainError(f"sector M={self.excitation} has no state with n={photons}")
        return int(k)


def sector_basis(n_qubits, excitation):
    if excitation < 0:
        raise DomainError(f"excitation number must be nonnegative, got {excitation}")
    if n_qubits < 1:
        raise DomainError(f"number of qubits must be positive, got {n_qubits}")
    return SectorBasis(int(n_qubits), int(excitation))


def sector_couplings(basis):
    """Off-diagonal elements linking positions ``i`` and ``i + 1``.

    ``<n-1, m+1| a^dag J- + J+ a |n, m> = sqrt(n) sqrt((J - m)(J + m + 1))``.
    """
    k = basis.excited[:-1].astype(float)
    n = basis.photons[:-1].astype(float)
    two_j = float(basis.n_qubits)
    return np.sqrt(n) * np.sqrt((two_j - k) * (k + 1.0))


@dataclass(frozen=True, eq=False)
class SectorEigensystem:
    """Eigendecomposition of one sector Hamiltonian.

    The zero-diagonal chain is bipartite: with ``B`` the couplings from even to
    odd positions, ``H = [[0, B], [B^T, 0]]`` and an SVD ``B = U S W^T`` yields
    the spectrum ``+-S`` (plus one zero mode for odd size). Propagation uses the
    SVD factors directly; the dense ``eigenvalues``/``eigenvectors`` views are
    assembled on demand.
    """

    basis: SectorBasis
    couplings: np.ndarray
    u: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    singular_values: np.ndarray = field(repr=False)

    @property
    def size(self):
        return self.basis.size

    @property
    def nbytes(self):
        return self.u.nbytes + self.w.nbytes + self.singular_values.nbytes + self.couplings.nbytes

    @cached_property
    def hamiltonian(self):
        return np.diag(self.couplings, 1) + np.diag(self.couplings, -1)

    @cached_property
    def _dense(self):
        size = self.size
        even = np.arange(0, size, 2)
        odd = np.arange(1, size, 2)
        q = len(odd)
        vals = np.concatenate([self.singular_values, -self.singular_values,
                               np.zeros(len(even) - q)])
        vecs = np.zeros((size, len(vals)))
        r = 1.0 / np.sqrt(2.0)
        vecs[even, :q] = r * self.u[:, :q]
        vecs[odd, :q] = r * self.w
        vecs[even, q:2 * q] = r * self.u[:, :q]
        vecs[odd, q:2 * q] = -r * self.w
        if len(even) > q:
            vecs[even, 2 * q:] = self.u[:, q:]
        order = np.argsort(vals, kind="stable")
        return vals[order], vecs[:, order]

    @property
    def eigenvalues(self):
        return self._dense[0]

    @property
    def eigenvectors(self):
        return self._dense[1]


def sector_eigensystem(basis):
    couplings = sector_couplings(basis)
    size = basis.size
    p, q = (size + 1) // 2, size // 2
    if q == 0:
        return SectorEigensystem(basis, couplings, np.ones((1, 1)), np.zeros((0, 0)), np.zeros(0))
    # B[a, a] couples 2a -> 2a+1, B[a, a-1] couples 2a -> 2a-1
    b = np.zeros((p, q))
    b[np.arange(q), np.arange(q)] = couplings[0::2][:q]
    if size > 2:
        b[np.arange(1, p), np.arange(p - 1)[:q]] = couplings[1::2][:p - 1]
    try:
        u, s, wt = svd(b, full_matrices=True, lapack_driver="gesdd")
    except LinAlgError:
        try:
            u, s, wt = svd(b, full_matrices=True, lapack_driver="gesvd")
        except LinAlgError as exc:
            raise NumericalFailure(f"sector M={basis.excitation}: SVD failed ({exc})") from exc
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(s))):
        raise NumericalFailure(f"sector M={basis.excitation}: non-finite eigensystem")
    return SectorEigensystem(basis, couplings, u, wt.T.copy(), s)


def evolve_component(eig, initial_index, t):
    """Propagate basis vector ``initial_index`` of a sector.

    Returns a complex vector of length ``K`` for scalar ``t`` and a ``(K, T)``
    array for a time array.
    """
    size = eig.size
    if not 0 <= initial_index < size:
        raise DomainError(f"initial index {initial_index} outside sector of size {size}")
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((size, len(t)), dtype=complex)
    q = len(eig.singular_values)
    if q == 0:
        out[initial_index] = 1.0
        return out[:, 0] if scalar else out
    phase = np.multiply.outer(eig.singular_values, t)
    cos, sin = np.cos(phase), np.sin(phase)
    if initial_index % 2 == 0:
        a = initial_index // 2
        proj = eig.u[a]  # U^T e_a
        same = eig.u[:, :q] @ (cos * proj[:q, None])
        if eig.u.shape[1] > q:  # zero mode keeps its amplitude
            same = same + np.outer(eig.u[:, q:] @ proj[q:], np.ones(len(t)))
        other = eig.w @ (sin * proj[:q, None])
        out[0::2] = same
        out[1::2] = -1j * other
    else:
        b = initial_index // 2
        proj = eig.w[b]
        out[1::2] = eig.w @ (cos * proj[:, None])
        out[0::2] = -1j * (eig.u[:, :q] @ (sin * proj[:, None]))
    return out[:, 0] if scalar else out


class SectorCache:
    """Byte-bounded LRU store of sector eigensystems for one qubit number.

    Entries larger than the remaining budget evict older ones; an entry larger
    than the whole budget is simply not kept, which degrades to streaming.
    """

    def __init__(self, n_qubits, memory_budget=DEFAULT_MEMORY_BUDGET):
        self.n_qubits = int(n_qubits)
        self.memory_budget = int(memory_budget)
        self._store = OrderedDict()
        self._bytes = 0
        self._lock = threading.Lock()

    def get(self, excitation):
        with self._lock:
            eig = self._store.get(excitation)
            if eig is not None:
                self._store.move_to_end(excitation)
                return eig
        eig = sector_eigensystem(sector_basis(self.n_qubits, excitation))
        if eig.nbytes <= self.memory_budget:
            with self._lock:
                if excitation not in self._store:
                    self._store[excitation] = eig
                    self._bytes += eig.nbytes
                while self._bytes > self.memory_budget:
                    _, old = self._store.popitem(last=False)
                    self._bytes -= old.nbytes
        return eig

    @property
    def nbytes(self):
        return self._bytes

    def __len__(self):
        return len(self._store)


@dataclass(frozen=True)
class CollectiveMoments:
    """Normalised collective expectation values at times ``t``.

    ``jz_over_n = <Jz>/N``, ``jz2_over_n2 = <Jz^2>/N^2``, ``jp_over_n = <J+>/N``,
    ``jpjz_anticomm = <J+ Jz + Jz J+>/N^2`` and ``jp2_over_n2 = <J+^2>/N^2``.
    Fields are scalars for scalar ``t`` and arrays of ``t``'s shape otherwise.
    """

    jz_over_n: object
    jz2_over_n2: object
    jp_over_n: object
    jpjz_anticomm: object
    jp2_over_n2: object
    t: object

    def check(self, tol=1e-12):
        if np.any(np.abs(self.jz_over_n) > 0.5 + tol):
            raise InvariantViolation("moments", "|<Jz>/N| exceeds 1/2")
        z2 = np.asarray(self.jz2_over_n2)
        if np.any(z2 < -tol) or np.any(z2 > 0.25 + tol):
            raise InvariantViolation("moments", "<Jz^2>/N^2 outside [0, 1/4]")
        if np.any(np.abs(self.jp_over_n) > 0.5 + tol):
            raise InvariantViolation("moments", "|<J+>/N| exceeds 1/2")
        return self

    def at(self, i):
        """Moments at the ``i``-th time of an array-valued instance."""
        return CollectiveMoments(*(np.asarray(getattr(self, f))[i] for f in _MOMENT_FIELDS),
                                 t=np.asarray(self.t)[i])


_MOMENT_FIELDS = ("jz_over_n", "jz2_over_n2", "jp_over_n", "jpjz_anticomm", "jp2_over_n2")


def retained_mask(coefficients, weight_cutoff):
    """Smallest index set whose total weight ``sum d_k^2`` reaches ``1 - cutoff``."""
    if not 0.0 <= weight_cutoff < 1.0:
        raise DomainError(f"weight cutoff must lie in [0, 1), got {weight_cutoff}")
    w = np.abs(np.asarray(coefficients)) ** 2
    order = np.argsort(-w, kind="stable")
    cum = np.cumsum(w[order])
    count = int(np.searchsorted(cum, (1.0 - weight_cutoff) * cum[-1], side="left")) + 1
    mask = np.zeros(len(w), dtype=bool)
    mask[order[:min(count, len(w))]] = True
    if not mask.any():
        raise DomainError("weight cutoff discards every Dicke component")
    return mask


def _time_chunks(n_times, max_size, memory_budget):
    # three sector trajectories of shape (K, T) complex live at once
    per_time = 3 * max(max_size, 1) * 16
    chunk = max(1, min(n_times, (memory_budget // 2) // per_time))
    return [slice(i, min(i + chunk, n_times)) for i in range(0, n_times, chunk)]


def _sector_moment_sums(n_qubits, coeffs, times, cache, memory_budget):
    """Accumulate the five unnormalised moments for a batch of coefficient rows.

    ``coeffs`` has shape ``(B, N+1)`` (already truncated: discarded entries are
    zero). Returns five arrays of shape ``(B, T)``. Sectors are visited in
    ascending order so the reduction order is fixed.
    """
    n = n_qubits
    two_j = float(n)
    batch, n_times = coeffs.shape[0], len(times)
    sums = {f: np.zeros((batch, n_times), dtype=float if f.startswith("jz") else complex)
            for f in _MOMENT_FIELDS}
    active = np.flatnonzero(np.any(coeffs != 0.0, axis=0))
    sectors = [int(k) + 1 for k in active]  # d_k populates sector M = k + 1
    if not sectors:
        return sums
    kk = np.arange(n + 1, dtype=float)
    jp_coef = np.sqrt((two_j - kk) * (kk + 1.0))           # J+ : k -> k+1
    anti_coef = jp_coef * (2.0 * (kk - two_j / 2.0) + 1.0)  # J+(2Jz + 1)
    jp2_coef = jp_coef[:-1] * jp_coef[1:]                  # J+^2 : k -> k+2
    max_size = min(n, sectors[-1]) + 1
    for chunk in _time_chunks(n_times, max_size, memory_budget):
        t = times[chunk]
        window = {}
        for big_m in sectors:
            eig = cache.get(big_m)
            phi = evolve_component(eig, big_m - 1, t)  # start: one photon, k = M-1
            k0 = big_m - 1
            pop = phi.real ** 2 + phi.imag ** 2
            m_vals = kk[:eig.size] - two_j / 2.0
            wz = coeffs[:, k0] ** 2
            sums["jz_over_n"][:, chunk] += np.outer(wz, m_vals @ pop)
            sums["jz2_over_n2"][:, chunk] += np.outer(wz, (m_vals ** 2) @ pop)
            lower = window.get(big_m - 1)
            if lower is not None:
                # <phi_M| J+ |phi_{M-1}>: position k of M-1 maps to k+1 of M
                top = min(lower.shape[0], eig.size - 1)
                ket = lower[:top]
                bra = np.conj(phi[1:top + 1])
                wp = coeffs[:, k0] * coeffs[:, k0 - 1]
                sums["jp_over_n"][:, chunk] += np.outer(wp, np.einsum(
                    "kt,k,kt->t", bra, jp_coef[:top], ket))
                sums["jpjz_anticomm"][:, chunk] += np.outer(wp, np.einsum(
                    "kt,k,kt->t", bra, anti_coef[:top], ket))
            lower2 = window.get(big_m - 2)
            if lower2 is not None:
                top = min(lower2.shape[0], eig.size - 2)
                if top > 0:
                    wp2 = coeffs[:, k0] * coeffs[:, k0 - 2]
                    sums["jp2_over_n2"][:, chunk] += np.outer(wp2, np.einsum(
                        "kt,k,kt->t", np.conj(phi[2:top + 2]), jp2_coef[:top], lower2[:top]))
            window[big_m] = phi
            window.pop(big_m - 2, None)
    return sums


def _truncate(expansion, weight_cutoff):
    mask = retained_mask(expansion.coefficients, weight_cutoff)
    return np.where(mask, expansion.coefficients, 0.0)


def _moments_from_sums(sums, row, n_qubits, t, scalar):
    n = float(n_qubits)
    vals = dict(
        jz_over_n=sums["jz_over_n"][row] / n,
        jz2_over_n2=sums["jz2_over_n2"][row] / n**2,
        jp_over_n=sums["jp_over_n"][row] / n,
        jpjz_anticomm=sums["jpjz_anticomm"][row] / n**2,
        jp2_over_n2=sums["jp2_over_n2"][row] / n**2,
    )
    if scalar:
        vals = {k: (float(v[0]) if k.startswith("jz") else complex(v[0])) for k, v in vals.items()}
        return CollectiveMoments(**vals, t=float(t[0]))
    return CollectiveMoments(**vals, t=t)


def collective_moments(expansion, t, weight_cutoff=DEFAULT_CUTOFF, cache=None,
                       memory_budget=DEFAULT_MEMORY_BUDGET):
    """Five normalised collective moments of the evolved spin coherent state.

    Dicke components are kept in order of decreasing weight until the retained
    weight reaches ``1 - weight_cutoff``; the rest are dropped before evolution.
    """
    return batch_collective_moments([expansion], t, weight_cutoff, cache, memory_budget)[0]


def batch_collective_moments(expansions, t, weight_cutoff=DEFAULT_CUTOFF, cache=None,
                             memory_budget=DEFAULT_MEMORY_BUDGET):
    """Moments for several initial states of the same ``N`` in one sector sweep.

    Each sector is diagonalised and propagated once for the whole batch. The
    result for a state does not depend on what else is in the batch.
    """
    expansions = list(expansions)
    n = expansions[0].n_qubits
    if any(e.n_qubits != n for e in expansions):
        raise DomainError("all expansions in a batch must share the qubit number")
    scalar = np.ndim(t) == 0
    times = np.atleast_1d(np.asarray(t, dtype=float))
    coeffs = np.array([_truncate(e, weight_cutoff) for e in expansions])
    if cache is None:
        cache = SectorCache(n, memory_budget)
    sums = _sector_moment_sums(n, coeffs, times, cache, memory_budget)
    return [_moments_from_sums(sums, i, n, times, scalar) for i in range(len(expansions))]


@dataclass(frozen=True)
class PairwiseElements:
    """Entries of the exchange-symmetric two-qubit reduced state."""

    v_plus: object
    v_minus: object
    w: object
    p: object
    h_plus: object
    h_minus: object
    mu: object


def pairwise_elements(moments, n_qubits):
    n = float(n_qubits)
    if n < 2:
        raise DomainError("a pair needs at least two qubits")
    z = np.asarray(moments.jz_over_n, dtype=float)
    z2 = np.asarray(moments.jz2_over_n2, dtype=float)
    corr = (4.0 * z2 - 1.0 / n) / (4.0 * (1.0 - 1.0 / n))
    anti = np.asarray(moments.jpjz_anticomm) / (2.0 * (1.0 - 1.0 / n))
    jp = np.asarray(moments.jp_over_n)
    w = 0.25 - corr
    return PairwiseElements(
        v_plus=0.25 + z + corr,
        v_minus=0.25 - z + corr,
        w=w,
        p=w,
        h_plus=0.5 * jp + anti,
        h_minus=0.5 * jp - anti,
        mu=np.asarray(moments.jp2_over_n2) / (1.0 - 1.0 / n),
    )


def pairwise_density(moments, n_qubits, validate=True):
    """Reduced state of any two of the ``N`` qubits, shape ``(..., 4, 4)``.

    Layout in the ``ee, eg, ge, gg`` basis::

        [[v+,  h+*, h+*, mu*],
         [h+,  w,   p,   h-*],
         [h+,  p,   w,   h-*],
         [mu,  h-,  h-,  v- ]]
    """
    el = pairwise_elements(moments, n_qubits)
    shape = np.shape(el.v_plus)
    rho = np.zeros(shape + (4, 4), dtype=complex)
    hp, hm, mu = el.h_plus, el.h_minus, el.mu
    rho[..., 0, 0] = el.v_plus
    rho[..., 3, 3] = el.v_minus
    rho[..., 1, 1] = el.w
    rho[..., 2, 2] = el.w
    rho[..., 1, 2] = el.p
    rho[..., 2, 1] = el.p
    for r in (1, 2):
        rho[..., r, 0] = hp
        rho[..., 0, r] = np.conj(hp)
        rho[..., 3, r] = hm
        rho[..., r, 3] = np.conj(hm)
    rho[..., 3, 0] = mu
    rho[..., 0, 3] = np.conj(mu)
    if validate:
        try:
            check_density_matrix(rho, herm_tol=PAIRWISE_TOL, trace_tol=PAIRWISE_TOL,
                                 psd_tol=PAIRWISE_TOL)
        except InvariantViolation as exc:
            raise NumericalFailure(f"pairwise matrix is unphysical ({exc})") from exc
    return rho


def scan_pairwise_max_concurrence(n_qubits, theta_tildes, t_max=50.0, t_step=0.05,
                                  weight_cutoff=DEFAULT_CUTOFF,
                                  memory_budget=DEFAULT_MEMORY_BUDGET, cache=None):
    """Maximal pairwise concurrence over the time grid for each ``theta~``.

    Returns ``(t_star, c_max)`` arrays aligned with ``theta_tildes``; ties in
    time resolve to the earliest grid point.
    """
    thetas = np.atleast_1d(np.asarray(theta_tildes, dtype=float))
    times = time_grid(t_max, t_step)
    expansions = [dicke_coefficients(n_qubits, th) for th in thetas]
    moments = batch_collective_moments(expansions, times, weight_cutoff, cache, memory_budget)
    t_star = np.empty(len(thetas))
    c_max = np.empty(len(thetas))
    for i, mom in enumerate(moments):
        c = np.atleast_1d(concurrence(pairwise_density(mom, n_qubits), check=False))
        j = int(np.argmax(c))
        t_star[i], c_max[i] = times[j], c[j]
    return t_star, c_max


def pairwise_max_concurrence(n_qubits, theta_tilde, t_max=50.0, t_step=0.05,
                             weight_cutoff=DEFAULT_CUTOFF,
                             memory_budget=DEFAULT_MEMORY_BUDGET, cache=None):
    t_star, c_max = scan_pairwise_max_concurrence(
        n_qubits, [theta_tilde], t_max, t_step, weight_cutoff, memory_budget, cache)
    return float(t_star[0]), float(c_max[0])


def sector_pair_overlaps(n_qubits, sectors, t, power=1):
    """``<phi_M(t)| J+^power |phi_E(t)>`` for every ordered pair of sectors.

    Used to exhibit the selection rule: the overlap vanishes unless
    ``M = E + power``. Returns ``{(M, E): array over t}``.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    j = n_qubits / 2.0
    n_max = max(sectors) + 1
    states = {}
    for big_m in sectors:
        eig = sector_eigensystem(sector_basis(n_qubits, big_m))
        phi = evolve_component(eig, big_m - 1, times)
        # embed into the full Dicke-Fock product basis, index (k, n)
        full = np.zeros((n_qubits + 1, n_max + 1, len(times)), dtype=complex)
        ks = eig.basis.excited
        full[ks, eig.basis.photons] = phi
        states[big_m] = full
    coef = np.ones(n_qubits + 1)
    shifted = np.arange(n_qubits + 1)
    for _ in range(power):
        coef = coef * np.sqrt(np.clip((2 * j - shifted) * (shifted + 1.0), 0.0, None))
        shifted = shifted + 1
    out = {}
    for big_m, bra in states.items():
        for big_e, ket in states.items():
            raised = np.zeros_like(ket)
            valid = shifted <= n_qubits
            raised[shifted[valid]] = coef[valid][:, None, None] * ket[valid]
            out[(big_m, big_e)] = np.einsum("knt,knt->t", np.conj(bra), raised)
    return out
