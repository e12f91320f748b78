"""Symmetric eigensolver and SPD linear solver used by every other module.

Dense problems go through LAPACK (``eigh`` / Cholesky); larger sparse
problems use shift-invert Lanczos (ARPACK) and block conjugate gradients.
Eigenvectors carry a deterministic sign so repeated runs are reproducible.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg.lapack import dpotrf, dpotrs

from .exceptions import ConvergenceError, DimensionError, NumericalError

DENSE_EIG_CUTOFF = 2048
DENSE_SOLVE_CUTOFF = 2048


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues in ascending order, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_dense_sym(m):
    a = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=np.float64)
    return 0.5 * (a + a.T)


def _inf_norm(m):
    if sp.issparse(m):
        return float(abs(m).sum(axis=1).max()) if m.shape[0] else 0.0
    return float(np.abs(m).sum(axis=1).max()) if m.shape[0] else 0.0


def _fix_signs(vectors):
    """Flip each column so its largest-magnitude entry is nonnegative.

    np.argmax returns the first maximal position, which implements the
    lowest-index tie rule.
    """
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        lead = np.argmax(np.abs(col))
        if col[lead] < 0:
            vectors[:, j] = -col
    return vectors


def sym_eigs_smallest(m, k, tol=1e-9, dense_cutoff=DENSE_EIG_CUTOFF):
    """The k algebraically smallest eigenpairs of a symmetric matrix.

    Residuals are verified against ``tol * max(1, ||m||_inf)`` per pair;
    ARPACK non-convergence or a failed residual check raises
    ConvergenceError carrying the worst achieved residual.
    """
    n = m.shape[0]
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix must be square, got {m.shape}")
    if not 1 <= k <= n:
        raise DimensionError(f"requested {k} eigenpairs from an {n}x{n} matrix")
    if tol <= 0:
        raise ValueError("tol must be positive")

    if n <= dense_cutoff or k >= n - 1 or not sp.issparse(m):
        dense = _as_dense_sym(m)
        vals, vecs = np.linalg.eigh(dense)
        vals, vecs = vals[:k], vecs[:, :k]
    else:
        # Shift-invert about a Gershgorin lower bound keeps M - sigma*I
        # positive definite, so the factorization cannot break down and the
        # smallest eigenvalues become the dominant ones.
        msc = m.tocsr()
        diag = msc.diagonal()
        radius = np.asarray(abs(msc).sum(axis=1)).ravel() - np.abs(diag)
        sigma = float((diag - radius).min()) - 1.0
        v0 = np.random.default_rng(0).standard_normal(n)
        try:
            vals, vecs = spla.eigsh(msc, k=k, sigma=sigma, which="LM", v0=v0,
                                    tol=tol)
        except spla.ArpackNoConvergence as exc:
            achieved = np.nan
            if exc.eigenvalues is not None and len(exc.eigenvalues):
                achieved = float(np.abs(exc.eigenvalues).max())
            raise ConvergenceError(
                f"eigensolver did not converge for {k} pairs on an {n}x{n} matrix",
                residual=achieved,
            ) from exc
        order = np.argsort(vals, kind="stable")
        vals, vecs = vals[order], vecs[:, order]

    vecs = _fix_signs(np.array(vecs))
    scale = max(1.0, _inf_norm(m))
    resid = m @ vecs - vecs * vals[None, :]
    worst = float(np.linalg.norm(resid, axis=0).max()) if k else 0.0
    if worst > tol * scale:
        raise ConvergenceError(
            f"eigenpair residual {worst:.3e} exceeds {tol * scale:.3e}",
            residual=worst,
        )
    return EigenResult(np.asarray(vals, dtype=np.float64), vecs)


def _cholesky_solve(k_dense, b, tol, matvec, target=None):
    c, info = dpotrf(k_dense, lower=1, overwrite_a=0)
    if info > 0:
        raise NumericalError(
            f"matrix is not positive definite (pivot {info - 1} failed)",
            index=info - 1,
        )
    if info < 0:
        raise NumericalError(f"illegal argument {-info} to dpotrf")
    z, info = dpotrs(c, b, lower=1)
    if info != 0:
        raise NumericalError(f"triangular solve failed (info={info})")
    bound = tol * max(1.0, float(np.linalg.norm(b)))
    if target is not None:
        bound = min(bound, float(target))
    # iterative refinement: at high stiffness the first solve is limited by
    # kappa * eps_machine; corrections push the residual down until it
    # either meets the bound or stops improving
    prev = np.inf
    for _ in range(6):
        resid = b - matvec(z)
        rn = float(np.linalg.norm(resid))
        if rn <= bound or rn >= 0.5 * prev:
            break
        delta, info = dpotrs(c, resid, lower=1)
        if info != 0:
            break
        z = z + delta
        prev = rn
    return z


def _block_cg(k, b, tol, matvec, max_iter=None, target=None, x0=None):
    """Jacobi-preconditioned CG run on all right-hand sides at once."""
    n, ncols = b.shape
    if max_iter is None:
        max_iter = 20 * n + 200
    diag = k.diagonal() if sp.issparse(k) else np.diag(k)
    if np.any(diag <= 0):
        idx = int(np.argmin(diag))
        raise NumericalError(
            f"nonpositive diagonal entry at index {idx}", index=idx)
    inv_diag = 1.0 / diag
    if x0 is None:
        x = np.zeros_like(b)
        r = b.copy()
    else:
        x = np.array(x0, dtype=np.float64)
        r = b - matvec(x)
    z = inv_diag[:, None] * r
    p = z.copy()
    rz = np.einsum("ij,ij->j", r, z)
    contract_bound = tol * max(1.0, float(np.linalg.norm(b)))
    bound = contract_bound if target is None else min(contract_bound, float(target))
    # columns whose residual already vanished ride along with zero steps
    for _ in range(max_iter):
        if float(np.linalg.norm(r)) <= bound:
            return x
        kp = matvec(p)
        curv = np.einsum("ij,ij->j", p, kp)
        bad = (curv <= 0) & (rz > 0)
        if np.any(bad):
            idx = int(np.nonzero(bad)[0][0])
            raise NumericalError(
                f"nonpositive curvature on column {idx}: matrix not SPD",
                index=idx,
            )
        safe = np.where(curv > 0, curv, 1.0)
        alpha = np.where(curv > 0, rz / safe, 0.0)
        x += alpha[None, :] * p
        r -= alpha[None, :] * kp
        z = inv_diag[:, None] * r
        rz_new = np.einsum("ij,ij->j", r, z)
        beta = np.where(rz > 0, rz_new / np.where(rz > 0, rz, 1.0), 0.0)
        p = z + beta[None, :] * p
        rz = rz_new
    achieved = float(np.linalg.norm(b - matvec(x)))
    if achieved <= contract_bound:  # the tighter target is best-effort
        return x
    raise ConvergenceError(
        f"CG residual {achieved:.3e} above {contract_bound:.3e} "
        f"after {max_iter} iterations",
        residual=achieved,
    )


def spd_solve(k, b, tol=1e-10, matvec=None, target=None, x0=None,
              dense_cutoff=DENSE_SOLVE_CUTOFF):
    """Solve K Z = B for symmetric positive definite K.

    Guarantees ||K Z - B||_F <= tol * max(1, ||B||_F) on success. ``matvec``
    optionally overrides how K @ Z is evaluated for residuals and CG steps
    (callers with graph structure use this to dodge cancellation).
    ``target`` is an optional absolute residual to refine toward, used when
    ||B|| is a poor yardstick for the caller's accuracy needs; it is
    best-effort and never loosens the relative guarantee. ``x0`` warm-starts
    the iterative path (ignored by the direct path).
    """
    n = k.shape[0]
    if k.shape[0] != k.shape[1]:
        raise DimensionError(f"matrix must be square, got {k.shape}")
    b = np.asarray(b, dtype=np.float64)
    squeeze = b.ndim == 1
    if squeeze:
        b = b[:, None]
    if b.shape[0] != n:
        raise DimensionError(
            f"rhs has {b.shape[0]} rows, matrix has {n}")
    if matvec is None:
        matvec = (lambda z: k @ z)
    if n <= dense_cutoff or not sp.issparse(k):
        z = _cholesky_solve(_as_dense_sym(k), b, tol, matvec, target=target)
    else:
        if x0 is not None and x0.ndim == 1:
            x0 = x0[:, None]
        z = _block_cg(k, b, tol, matvec, target=target, x0=x0)
    return z[:, 0] if squeeze else z
