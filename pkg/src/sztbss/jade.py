"""Real-valued JADE: whitening, fourth-order cumulants, joint diagonalization.

The separation pipeline is the classic one for real instantaneous mixtures:

1. center and whiten the K x T data matrix (eigendecomposition of the
   sample covariance by cyclic Jacobi rotations; K here is tiny, 2-4);
2. estimate the K^2 parallel fourth-order cumulant matrices of the
   whitened data, Q^{ij}_{kl} = E[x_i x_j x_k x_l] - d_ij d_kl
   - d_ik d_jl - d_il d_jk (all zero for Gaussian data);
3. find one orthogonal rotation V jointly diagonalizing the whole set by
   Givens sweeps, each pair (p, q) rotated by the closed-form angle that
   maximally reduces the summed off-diagonal energy;
4. unmix with B = V^T W.

Sign and order of the separated rows are inherently arbitrary; downstream
correlation matching absorbs both. Moment estimators are biased (1/T).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DegenerateMixtureError",
    "WhiteningResult",
    "JointDiagResult",
    "JadeModel",
    "jacobi_eigh",
    "center_whiten",
    "cumulant_matrices",
    "joint_diagonalize",
    "jade_separate",
]


class DegenerateMixtureError(ValueError):
    """Covariance is singular or near-singular: the mixture is degenerate."""


def _validate_data_matrix(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"data matrix must be 2-D (K channels x T samples), got {x.shape}")
    k, t = x.shape
    if t <= k:
        raise ValueError(f"need more samples than channels, got K={k}, T={t}")
    if not np.isfinite(x).all():
        raise ValueError("data matrix must be finite")
    return x


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 64):
    """Symmetric eigendecomposition by cyclic Jacobi rotations.

    Sweeps rotate every off-diagonal pair until the off-diagonal Frobenius
    norm drops below tol * ||A||_F. Returns (eigenvalues, eigenvectors) with
    eigenvectors in columns, so A = V @ diag(w) @ V.T up to the tolerance.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    k = a.shape[0]
    work = a.copy()
    v = np.eye(k)
    norm = float(np.linalg.norm(work))
    if norm == 0.0 or k == 1:
        return np.diag(work).copy(), v

    def offnorm(m):
        return math.sqrt(max(0.0, float(np.sum(m * m)) - float(np.sum(np.diag(m) ** 2))))

    for _ in range(max_sweeps):
        if offnorm(work) <= tol * norm:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = work[p, q]
                if abs(apq) <= 1e-18 * norm:
                    continue
                tau = (work[p, p] - work[q, q]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, -s], [s, c]])
                work[[p, q], :] = rot.T @ work[[p, q], :]
                work[:, [p, q]] = work[:, [p, q]] @ rot
                v[:, [p, q]] = v[:, [p, q]] @ rot
    else:
        if offnorm(work) > tol * norm:
            raise RuntimeError(
                f"Jacobi eigensolver failed to reach tolerance {tol} "
                f"in {max_sweeps} sweeps (off-diagonal {offnorm(work):.3e})"
            )
    return np.diag(work).copy(), v


@dataclass(frozen=True)
class WhiteningResult:
    """Whitening transform W, channel means, and the whitened data W(X - mean)."""

    whitener: np.ndarray
    mean: np.ndarray
    whitened: np.ndarray


def center_whiten(x) -> WhiteningResult:
    """Remove channel means and whiten to unit sample covariance.

    W = diag(1/sqrt(eig)) @ E.T from the Jacobi eigendecomposition of the
    biased sample covariance. Raises DegenerateMixtureError when the
    smallest eigenvalue falls below 1e-12 times the largest.
    """
    x = _validate_data_matrix(x)
    k, t = x.shape
    mean = x.mean(axis=1)
    xc = x - mean[:, None]
    cov = (xc @ xc.T) / t
    w, e = jacobi_eigh(cov)
    wmax = float(w.max())
    if wmax <= 0.0 or float(w.min()) < 1e-12 * wmax:
        raise DegenerateMixtureError(
            f"covariance is singular or near-singular "
            f"(eigenvalues {np.sort(w)[::-1]}); channels are degenerate"
        )
    whitener = e.T / np.sqrt(w)[:, None]
    return WhiteningResult(whitener=whitener, mean=mean, whitened=whitener @ xc)


def cumulant_matrices(xw) -> list[np.ndarray]:
    """The K^2 parallel fourth-order cumulant matrices of whitened data.

    Q^{ij}[k, l] = mean(x_i x_j x_k x_l) - d_ij d_kl - d_ik d_jl - d_il d_jk,
    estimated with 1/T moments and symmetrized exactly. For K=1 this is the
    excess kurtosis as a 1x1 matrix.
    """
    xw = _validate_data_matrix(xw)
    k, t = xw.shape
    eye = np.eye(k)
    out = []
    for i in range(k):
        for j in range(k):
            q = ((xw * (xw[i] * xw[j])) @ xw.T) / t
            if i == j:
                q = q - eye
            q[i, j] -= 1.0
            q[j, i] -= 1.0
            out.append((q + q.T) / 2.0)
    return out


@dataclass(frozen=True)
class JointDiagResult:
    """Orthogonal rotation plus convergence diagnostics.

    criterion_history holds the off-diagonal criterion before any rotation
    and after every applied rotation; it is non-increasing by construction.
    """

    v: np.ndarray
    sweeps: int
    converged: bool
    criterion: float
    criterion_history: tuple[float, ...] = field(repr=False, default=())


def _off_criterion(mats: np.ndarray) -> float:
    diag = np.einsum("kii->ki", mats)
    return float(np.sum(mats * mats) - np.sum(diag * diag))


def joint_diagonalize(
    ms, threshold: float = 1e-6, max_sweeps: int = 100
) -> JointDiagResult:
    """Jointly diagonalize symmetric matrices by Givens rotation sweeps.

    For each pair (p, q) the optimal angle comes from the 2x2 accumulation
    G = sum_k h_k h_k^T with h_k = [M_k(p,p) - M_k(q,q), 2 M_k(p,q)]:
    theta = atan2(toff, ton + sqrt(ton^2 + toff^2)) / 2, where
    ton = G[0,0] - G[1,1] and toff = 2 G[0,1]. Rotations with
    |theta| <= threshold are skipped; a sweep applying none terminates.
    """
    mats = np.array([np.asarray(m, dtype=np.float64) for m in ms])
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError(f"need a set of square matrices, got shape {mats.shape}")
    k = mats.shape[1]
    if k < 2:
        raise ValueError(f"joint diagonalization needs K >= 2, got K={k}")
    scale = float(np.abs(mats).max())
    asym = float(np.abs(mats - mats.transpose(0, 2, 1)).max())
    if asym > 1e-10 * max(scale, 1.0):
        raise ValueError(f"matrices must be symmetric (max asymmetry {asym:.3e})")

    v = np.eye(k)
    history = [_off_criterion(mats)]
    sweeps_done = 0
    converged = False
    for _ in range(max_sweeps):
        sweeps_done += 1
        rotated = False
        for p in range(k - 1):
            for q in range(p + 1, k):
                h1 = mats[:, p, p] - mats[:, q, q]
                h2 = mats[:, p, q] + mats[:, q, p]
                ton = float(h1 @ h1 - h2 @ h2)
                toff = float(2.0 * (h1 @ h2))
                theta = 0.5 * math.atan2(toff, ton + math.hypot(ton, toff))
                if abs(theta) <= threshold:
                    continue
                rotated = True
                c, s = math.cos(theta), math.sin(theta)
                rot = np.array([[c, -s], [s, c]])
                mats[:, [p, q], :] = np.einsum("ab,kbn->kan", rot.T, mats[:, [p, q], :])
                mats[:, :, [p, q]] = np.einsum("knb,ba->kna", mats[:, :, [p, q]], rot)
                v[:, [p, q]] = v[:, [p, q]] @ rot
                history.append(_off_criterion(mats))
        if not rotated:
            converged = True
            break
    return JointDiagResult(
        v=v,
        sweeps=sweeps_done,
        converged=converged,
        criterion=history[-1],
        criterion_history=tuple(history),
    )


@dataclass(frozen=True)
class JadeModel:
    """Fitted separation: rotation V, unmixing B = V^T W, and Y = B(X - mean)."""

    rotation: np.ndarray
    unmixing: np.ndarray
    mean: np.ndarray
    separated: np.ndarray
    sweeps: int
    converged: bool
    criterion: float


def jade_separate(x, threshold: float = 1e-6, max_sweeps: int = 100) -> JadeModel:
    """Blind separation of a K x T instantaneous mixture (K >= 2).

    Runs center_whiten -> cumulant_matrices -> joint_diagonalize. A
    non-converged diagonalization is reported with its final criterion via
    a warning; the model is still returned.
    """
    x = _validate_data_matrix(x)
    if x.shape[0] < 2:
        raise ValueError(f"separation needs at least 2 channels, got {x.shape[0]}")
    wr = center_whiten(x)
    jd = joint_diagonalize(
        cumulant_matrices(wr.whitened), threshold=threshold, max_sweeps=max_sweeps
    )
    if not jd.converged:
        warnings.warn(
            f"joint diagonalization did not converge within {jd.sweeps} sweeps; "
            f"final off-diagonal criterion {jd.criterion:.3e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return JadeModel(
        rotation=jd.v,
        unmixing=jd.v.T @ wr.whitener,
        mean=wr.mean,
        separated=jd.v.T @ wr.whitened,
        sweeps=jd.sweeps,
        converged=jd.converged,
        criterion=jd.criterion,
    )
