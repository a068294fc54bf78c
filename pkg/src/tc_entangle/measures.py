"""Coherence and two-qubit entanglement measures.

Density matrices are plain ``numpy`` arrays of shape ``(d, d)``; the two-qubit
routines also accept stacks of shape ``(..., 4, 4)`` and return arrays of the
leading shape. The two-qubit basis order is ``|ee>, |eg>, |ge>, |gg>`` with
``|e> = (1, 0)`` and ``|g> = (0, 1)``.
"""

import numpy as np

from .errors import DimensionError, DomainError, InvariantViolation, NumericalFailure

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

# clip band for eigenvalues of rho * rho_tilde; beyond the failure band the
# input cannot have been a physical state
EIG_CLIP = 1e-9
EIG_FAIL = 1e-6

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)


def check_density_matrix(rho, herm_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL,
                         psd_tol=PSD_TOL, psd=True):
    """Validate one density matrix or a stack of them.

    Raises
    ------
    InvariantViolation
        With ``check`` set to ``"shape"``, ``"hermitian"``, ``"trace"`` or
        ``"psd"``; the message locates the worst offending entry.
    """
    rho = np.asarray(rho)
    if rho.ndim < 2 or rho.shape[-1] != rho.shape[-2]:
        raise InvariantViolation("shape", f"expected square matrices, got {rho.shape}")
    herm = np.abs(rho - np.conj(np.swapaxes(rho, -1, -2)))
    if herm.size and herm.max() > herm_tol:
        idx = np.unravel_index(np.argmax(herm), herm.shape)
        raise InvariantViolation(
            "hermitian", f"|rho[i,j] - conj(rho[j,i])| = {herm.max():.3e} at index {idx}")
    tr = np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1.0)
    if tr.size and np.max(tr) > trace_tol:
        idx = np.unravel_index(np.argmax(tr), tr.shape) if tr.ndim else ()
        raise InvariantViolation("trace", f"|trace - 1| = {np.max(tr):.3e} at stack index {idx}")
    if psd:
        hermitian_part = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
        low = np.linalg.eigvalsh(hermitian_part)[..., 0]
        if np.min(low) < -psd_tol:
            idx = np.unravel_index(np.argmin(low), low.shape) if low.ndim else ()
            raise InvariantViolation(
                "psd", f"minimum eigenvalue {np.min(low):.3e} at stack index {idx}")
    return rho


def _require_two_qubit(rho):
    rho = np.asarray(rho)
    if rho.ndim < 2 or rho.shape[-2:] != (4, 4):
        raise DimensionError(f"two-qubit operation needs 4x4 matrices, got shape {rho.shape}")
    return rho


def l1_coherence(rho):
    """Sum of absolute values of the off-diagonal entries of ``rho``."""
    rho = check_density_matrix(rho, psd=False)
    absval = np.abs(rho)
    total = absval.sum(axis=(-2, -1)) - np.abs(np.diagonal(rho, axis1=-2, axis2=-1)).sum(axis=-1)
    return np.maximum(total, 0.0) if np.ndim(total) else max(float(total), 0.0)


def qubit_state_coherence(theta):
    """l1 coherence of ``cos(theta)|e> + sin(theta)|g>``, i.e. ``|sin(2 theta)|``."""
    theta = np.asarray(theta, dtype=float)
    out = 2.0 * np.abs(np.sin(theta) * np.cos(theta))
    return float(out) if out.ndim == 0 else out


def spin_flip(rho):
    """Wootters spin-flipped matrix ``(sy x sy) rho* (sy x sy)``."""
    rho = _require_two_qubit(rho)
    return SIGMA_YY @ np.conj(rho) @ SIGMA_YY


def concurrence(rho, check=True):
    """Wootters concurrence of a two-qubit state (or stack of states).

    For inputs that are not positive semidefinite the spectrum of
    ``rho @ spin_flip(rho)`` is obtained with a general complex eigensolver;
    imaginary parts and negative real parts up to ``EIG_CLIP`` are treated as
    rounding and clipped, and anything beyond ``EIG_FAIL`` means the input was
    not a density matrix.

    Raises
    ------
    DimensionError
        If the matrices are not 4x4.
    NumericalFailure
        If an eigenvalue has imaginary part or negative real part beyond
        ``EIG_FAIL``.
    """
    rho = _require_two_qubit(rho)
    if check:
        check_density_matrix(rho, psd=False)
    # For (near) rank-deficient states rho*rho_tilde has Jordan blocks and its
    # computed spectrum carries sqrt(eps) noise. The same lambdas are the
    # singular values of A^T (sy x sy) A for any factor rho = A A^dag, which
    # are accurate to eps, so positive semidefinite inputs take that route.
    # Their rho*rho_tilde spectrum is real and nonnegative by theory, so only
    # the remaining inputs need the general eigensolver and its failure band.
    w, v = np.linalg.eigh(0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2))))
    psd = w[..., 0] >= -PSD_TOL
    a = v * np.sqrt(np.clip(w, 0.0, None))[..., None, :]
    tau = np.swapaxes(a, -1, -2) @ SIGMA_YY @ a
    lam = np.linalg.svd(tau, compute_uv=False)
    if not np.all(psd):
        other = rho[~psd] if rho.ndim > 2 else rho[None]
        ev = np.linalg.eigvals(other @ spin_flip(other))
        bad = np.maximum(np.abs(ev.imag), -ev.real)
        if bad.max() > EIG_FAIL:
            raise NumericalFailure(
                f"rho*rho_tilde eigenvalue {ev.flat[np.argmax(bad)]:.3e} is not real nonnegative")
        # between the clip and failure bands the real part is still trustworthy
        lit = -np.sort(-np.sqrt(np.clip(ev.real, 0.0, None)), axis=-1)
        if rho.ndim > 2:
            lam[~psd] = lit
        else:
            lam = lit[0]
    c = np.maximum(lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3], 0.0)
    c = np.minimum(c, 1.0)
    return float(c) if c.ndim == 0 else c


def binary_entropy(x):
    """``h(x) = -x log2 x - (1-x) log2 (1-x)`` with ``h(0) = h(1) = 0``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(x > 0.0, -x * np.log2(np.where(x > 0.0, x, 1.0)), 0.0)
        y = 1.0 - x
        b = np.where(y > 0.0, -y * np.log2(np.where(y > 0.0, y, 1.0)), 0.0)
    out = a + b
    return float(out) if out.ndim == 0 else out


def entanglement_of_formation(c):
    """Entanglement of formation from the concurrence ``c`` in ``[0, 1]``."""
    c = np.asarray(c, dtype=float)
    if np.any(c < 0.0) or np.any(c > 1.0) or np.any(~np.isfinite(c)):
        raise DomainError(f"concurrence must lie in [0, 1], got {c}")
    return binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - c * c)))
