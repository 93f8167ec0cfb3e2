"""Elastic-net regularization paths by cyclic coordinate descent.

Fits single-response (gaussian) and multi-response grouped (mgaussian)
models along a decreasing lambda grid with warm starts. The objective for
an N x p design ``x``, N x K responses ``y``, coefficients ``b`` and
intercepts ``b0`` is::

    (1 / (2N)) * ||y - 1 b0' - x b||_F^2
        + lambda * sum_j [ (1 - alpha)/2 * ||b_j||_2^2 + alpha * ||b_j||_2 ]

where ``b_j`` is predictor j's coefficient row across the K responses; for
K = 1 the row norm is an absolute value and the penalty is the classic
elastic net. The loss carries the 1/(2N) scaling so lambda values are
comparable across sample sizes.

The solver assumes the columns of ``x`` arrive standardized (dataprep owns
scaling) and never rescales; with ``fit_intercept`` the intercept is
profiled out exactly by centering working copies, and recovered as
``mean(y) - mean(x) @ b``. Coordinate updates follow the cyclic rule

    b_j <- S((1/N) x_j' r + c_j b_j, lambda * alpha) / (c_j + lambda * (1 - alpha))

with c_j = (1/N) x_j' x_j, full residual r, and S the (group) soft
threshold. Convergence requires both the sweep metric
max_j c_j * (delta b_j)^2 <= tol and a stationarity certificate at 1e-6
(see :func:`kkt_check`); after one full sweep the solver iterates on the
nonzero set until converged, then re-sweeps everything to admit violators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConvergenceError",
    "EnetConfig",
    "EnetPath",
    "KktReport",
    "soft_threshold",
    "group_soft_threshold",
    "objective",
    "compute_lambda_max",
    "make_lambda_path",
    "default_lambda_grid",
    "fit_gaussian_path",
    "fit_mgaussian_path",
    "kkt_check",
    "deviance_explained",
]

# Stationarity certificate every path solution must pass before the solver
# accepts convergence.
KKT_TOL = 1e-6


class ConvergenceError(RuntimeError):
    """Coordinate descent hit the sweep budget at some lambda."""

    def __init__(self, lambda_index: int, max_iter: int):
        super().__init__(
            f"coordinate descent did not converge within {max_iter} sweeps "
            f"at lambda index {lambda_index}"
        )
        self.lambda_index = lambda_index


@dataclass(frozen=True)
class EnetConfig:
    """Solver settings; ``lambda_min_ratio=None`` resolves from the data
    (1e-4 when N > p, else 1e-2)."""

    alpha: float = 0.5
    nlambda: int = 100
    lambda_min_ratio: float | None = None
    tol: float = 1e-7
    max_iter: int = 100_000
    fit_intercept: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if self.nlambda < 2:
            raise ValueError(f"nlambda must be >= 2, got {self.nlambda!r}")
        if self.lambda_min_ratio is not None and not 0.0 < self.lambda_min_ratio < 1.0:
            raise ValueError(
                f"lambda_min_ratio must lie in (0, 1), got {self.lambda_min_ratio!r}"
            )
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter!r}")


@dataclass
class EnetPath:
    """Per-lambda solutions of one elastic-net fit.

    ``coefs`` has shape (L, p, K) and ``intercepts`` (L, K); ``nonzero``
    counts predictors whose whole coefficient row is nonzero. ``rss`` keeps
    the residual sum of squares each solution achieved so deviance ratios
    can be recomputed without the design matrix.
    """

    lambdas: np.ndarray
    coefs: np.ndarray
    intercepts: np.ndarray
    dev_ratio: np.ndarray
    nonzero: np.ndarray
    rss: np.ndarray = field(repr=False, default=None)

    @property
    def n_lambdas(self) -> int:
        return len(self.lambdas)


@dataclass(frozen=True)
class KktReport:
    """Stationarity diagnostic: worst violation and offending predictors."""

    max_violation: float
    violations: list[int]


def soft_threshold(z: float, gamma: float) -> float:
    """Scalar soft threshold sign(z) * max(|z| - gamma, 0)."""
    if gamma < 0:
        raise ValueError(f"threshold must be nonnegative, got {gamma!r}")
    m = abs(z) - gamma
    if m <= 0.0:
        return 0.0
    return math.copysign(m, z)


def group_soft_threshold(u, gamma: float) -> np.ndarray:
    """Vector soft threshold (1 - gamma / ||u||)_+ * u."""
    if gamma < 0:
        raise ValueError(f"threshold must be nonnegative, got {gamma!r}")
    u = np.asarray(u, dtype=float)
    nrm = math.sqrt(float(u @ u))
    if nrm <= gamma:
        return np.zeros_like(u)
    return u * (1.0 - gamma / nrm)


def _as_2d(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 1-D or 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _penalty(b: np.ndarray, alpha: float) -> float:
    row_norms = np.sqrt((b * b).sum(axis=1))
    return float(
        (1.0 - alpha) / 2.0 * float((row_norms * row_norms).sum())
        + alpha * float(row_norms.sum())
    )


def objective(x, y, b, b0, lam: float, alpha: float) -> float:
    """Penalized least-squares objective at a candidate solution."""
    x = _as_2d(x, "x")
    y = _as_2d(y, "y")
    b = _as_2d(b, "b")
    b0 = np.atleast_1d(np.asarray(b0, dtype=float))
    n, p = x.shape
    k = y.shape[1]
    if y.shape[0] != n or b.shape != (p, k) or b0.shape != (k,):
        raise ValueError(
            f"shapes do not conform: x {x.shape}, y {y.shape}, b {b.shape}, b0 {b0.shape}"
        )
    resid = y - b0 - x @ b
    return float((resid * resid).sum()) / (2.0 * n) + lam * _penalty(b, alpha)


def compute_lambda_max(x, y, alpha: float) -> float:
    """Smallest lambda at which the all-zero solution is stationary.

    Expects ``x`` standardized and ``y`` centered (as the fitters prepare
    them); equals max_j ||(1/N) x_j' y||_2 / alpha. Pure ridge has no
    finite path start, so alpha must be positive.
    """
    if alpha <= 0:
        raise ValueError(
            "alpha = 0 has no finite lambda_max; supply an explicit lambda path"
        )
    x = _as_2d(x, "x")
    y = _as_2d(y, "y")
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"x has {x.shape[0]} rows but y has {y.shape[0]}")
    g = x.T @ y / x.shape[0]
    row_norms = np.sqrt((g * g).sum(axis=1))
    return float(row_norms.max()) / alpha


def make_lambda_path(lambda_max: float, nlambda: int, lambda_min_ratio: float) -> np.ndarray:
    """Geometric grid of ``nlambda`` values from lambda_max down to
    lambda_max * lambda_min_ratio."""
    if not lambda_max > 0:
        raise ValueError(f"lambda_max must be positive, got {lambda_max!r}")
    if nlambda < 2:
        raise ValueError(f"nlambda must be >= 2, got {nlambda!r}")
    if not 0.0 < lambda_min_ratio < 1.0:
        raise ValueError(
            f"lambda_min_ratio must lie in (0, 1), got {lambda_min_ratio!r}"
        )
    return np.geomspace(lambda_max, lambda_max * lambda_min_ratio, nlambda)


def default_lambda_grid(x, y, config: EnetConfig | None = None) -> np.ndarray:
    """The grid the path fitters build when no explicit one is supplied."""
    cfg = config if config is not None else EnetConfig()
    x = _as_2d(x, "x")
    y = _as_2d(y, "y")
    n, p = x.shape
    if cfg.fit_intercept:
        x = x - x.mean(axis=0)
        y = y - y.mean(axis=0)
    lam_max = compute_lambda_max(x, y, cfg.alpha)
    if lam_max <= 0:
        raise ValueError(
            "every predictor is uncorrelated with the response; "
            "no data-driven lambda grid exists"
        )
    ratio = cfg.lambda_min_ratio
    if ratio is None:
        ratio = 1e-4 if n > p else 1e-2
    return make_lambda_path(lam_max, cfg.nlambda, ratio)


def fit_gaussian_path(x, y, config: EnetConfig | None = None, lambdas=None) -> EnetPath:
    """Single-response elastic-net path.

    Parameters
    ----------
    x : (N, p) array
        Standardized design; the solver does not rescale.
    y : (N,) or (N, 1) array
        Response. Centered internally when ``fit_intercept`` is set.
    config : EnetConfig, optional
    lambdas : sequence of float, optional
        Explicit strictly decreasing grid; required for alpha = 0.

    Returns
    -------
    EnetPath with coefficient shape (L, p, 1).
    """
    cfg = config if config is not None else EnetConfig()
    y = _as_2d(y, "y")
    if y.shape[1] != 1:
        raise ValueError(f"gaussian fit expects a single response, got {y.shape[1]}")
    return _fit_path(x, y, cfg, lambdas, grouped=False)


def fit_mgaussian_path(x, y, config: EnetConfig | None = None, lambdas=None) -> EnetPath:
    """Multi-response grouped elastic-net path.

    A predictor is dropped when its entire coefficient row across the K
    responses is zero. With K = 1 this delegates to the single-response
    kernel, so results match :func:`fit_gaussian_path` bit for bit.
    """
    cfg = config if config is not None else EnetConfig()
    y = _as_2d(y, "y")
    return _fit_path(x, y, cfg, lambdas, grouped=y.shape[1] > 1)


def kkt_check(x, y, b, b0, lam: float, alpha: float, tol: float = KKT_TOL) -> KktReport:
    """Stationarity certificate for a candidate solution.

    Zero rows need ||(1/N) x_j'(y - yhat)||_2 <= lam * alpha + tol; nonzero
    rows need the full subgradient residual below tol. Diagnostic only:
    reports, never raises.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y.reshape(-1, 1)
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    b0 = np.atleast_1d(np.asarray(b0, dtype=float))
    n, p = x.shape
    resid = y - b0 - x @ b
    grad = x.T @ resid / n
    violations: list[int] = []
    worst = 0.0
    for j in range(p):
        bj = b[j]
        if not bj.any():
            v = max(0.0, math.sqrt(float(grad[j] @ grad[j])) - lam * alpha)
        else:
            nrm = math.sqrt(float(bj @ bj))
            g = grad[j] - lam * (1.0 - alpha) * bj - lam * alpha * bj / nrm
            v = math.sqrt(float(g @ g))
        if v > worst:
            worst = v
        if v > tol:
            violations.append(j)
    return KktReport(max_violation=worst, violations=violations)


def deviance_explained(path: EnetPath, y) -> np.ndarray:
    """Per-lambda fraction of deviance explained, 1 - RSS / TSS.

    TSS is taken about the column means of ``y``. The result is also
    written into ``path.dev_ratio``.
    """
    y = _as_2d(y, "y")
    centered = y - y.mean(axis=0)
    tss = float((centered * centered).sum())
    if tss == 0.0:
        raise ValueError("responses are constant; deviance ratio is undefined")
    ratios = 1.0 - path.rss / tss
    path.dev_ratio = ratios
    return ratios


# ---------------------------------------------------------------------------
# solver internals


class _SweepBudgetExceeded(Exception):
    pass


def _fit_path(
    x,
    y: np.ndarray,
    cfg: EnetConfig,
    lambdas,
    grouped: bool,
    use_active_set: bool = True,
    objective_traces: list | None = None,
) -> EnetPath:
    x = _as_2d(x, "x")
    n, p = x.shape
    k = y.shape[1]
    if y.shape[0] != n:
        raise ValueError(f"x has {n} rows but y has {y.shape[0]}")

    if cfg.fit_intercept:
        x_off = x.mean(axis=0)
        y_off = y.mean(axis=0)
    else:
        x_off = np.zeros(p)
        y_off = np.zeros(k)
    xw = np.asfortranarray(x - x_off)
    yw = y - y_off

    col_sq = np.einsum("ij,ij->j", xw, xw) / n
    degenerate = np.flatnonzero(col_sq == 0.0)
    if degenerate.size:
        raise ValueError(
            f"predictor column {int(degenerate[0])} is constant; standardize inputs first"
        )

    lam_max = compute_lambda_max(xw, yw, cfg.alpha) if cfg.alpha > 0 else None
    if lambdas is None:
        if lam_max is None:
            raise ValueError(
                "alpha = 0 has no data-driven grid; pass an explicit lambda path"
            )
        if lam_max <= 0:
            raise ValueError(
                "every predictor is uncorrelated with the response; "
                "no data-driven lambda grid exists"
            )
        ratio = cfg.lambda_min_ratio
        if ratio is None:
            ratio = 1e-4 if n > p else 1e-2
        lams = make_lambda_path(lam_max, cfg.nlambda, ratio)
    else:
        lams = np.asarray(lambdas, dtype=float)
        if lams.ndim != 1 or lams.size < 1:
            raise ValueError("lambdas must be a nonempty 1-D sequence")
        if np.any(lams < 0) or not np.all(np.isfinite(lams)):
            raise ValueError("lambdas must be finite and nonnegative")
        if lams.size > 1 and not np.all(np.diff(lams) < 0):
            raise ValueError("lambdas must be strictly decreasing")

    n_lams = lams.size
    b = np.zeros((p, k))
    coefs = np.empty((n_lams, p, k))
    intercepts = np.empty((n_lams, k))
    nonzero = np.empty(n_lams, dtype=np.int64)
    rss = np.empty(n_lams)

    for i, lam in enumerate(lams):
        trace: list[float] | None = None
        if objective_traces is not None:
            trace = []
            objective_traces.append(trace)
        if lam_max is not None and lam >= lam_max:
            # the all-zero solution is stationary here by construction
            b[:] = 0.0
        else:
            try:
                _solve_single(
                    xw, yw, b, float(lam), cfg, col_sq, grouped, use_active_set, trace
                )
            except _SweepBudgetExceeded:
                raise ConvergenceError(i, cfg.max_iter) from None
        resid = yw - xw @ b
        rss[i] = float((resid * resid).sum())
        coefs[i] = b
        intercepts[i] = y_off - x_off @ b
        nonzero[i] = int(np.count_nonzero(np.any(b != 0.0, axis=1)))

    path = EnetPath(
        lambdas=lams,
        coefs=coefs,
        intercepts=intercepts,
        dev_ratio=np.empty(n_lams),
        nonzero=nonzero,
        rss=rss,
    )
    deviance_explained(path, y)
    return path


def _solve_single(
    xw: np.ndarray,
    yw: np.ndarray,
    b: np.ndarray,
    lam: float,
    cfg: EnetConfig,
    col_sq: np.ndarray,
    grouped: bool,
    use_active_set: bool,
    trace: list[float] | None,
) -> None:
    """Coordinate descent at a single lambda, warm-started from ``b``."""
    n, p = xw.shape
    gamma = lam * cfg.alpha
    denom = col_sq + lam * (1.0 - cfg.alpha)
    resid = yw - xw @ b
    all_idx = np.arange(p)
    sweeps = 0
    tol = cfg.tol

    def run_sweep(idx: np.ndarray) -> float:
        if grouped:
            return _sweep_grouped(xw, resid, b, col_sq, denom, gamma, n, idx)
        return _sweep_scalar(xw, resid, b, col_sq, denom, gamma, n, idx)

    def record() -> None:
        if trace is not None:
            trace.append(
                float((resid * resid).sum()) / (2.0 * n) + lam * _penalty(b, cfg.alpha)
            )

    while True:
        if sweeps >= cfg.max_iter:
            raise _SweepBudgetExceeded
        delta = run_sweep(all_idx)
        sweeps += 1
        record()
        if delta <= tol:
            if _kkt_violation(xw, resid, b, lam, cfg.alpha, n) <= KKT_TOL:
                return
            # sweep metric passed but stationarity did not; tighten and go on
            tol /= 10.0
            continue
        if use_active_set:
            active = np.flatnonzero(np.any(b != 0.0, axis=1))
            while active.size:
                if sweeps >= cfg.max_iter:
                    raise _SweepBudgetExceeded
                delta = run_sweep(active)
                sweeps += 1
                record()
                if delta <= tol:
                    break


def _sweep_scalar(
    xw: np.ndarray,
    resid: np.ndarray,
    b: np.ndarray,
    col_sq: np.ndarray,
    denom: np.ndarray,
    gamma: float,
    n: int,
    idx: np.ndarray,
) -> float:
    r = resid[:, 0]
    max_delta = 0.0
    for j in idx:
        bj = b[j, 0]
        z = float(xw[:, j] @ r) / n + col_sq[j] * bj
        m = abs(z) - gamma
        bn = 0.0 if m <= 0.0 else math.copysign(m, z) / denom[j]
        if bn != bj:
            r += xw[:, j] * (bj - bn)
            b[j, 0] = bn
            step = col_sq[j] * (bn - bj) ** 2
            if step > max_delta:
                max_delta = step
    return max_delta


def _sweep_grouped(
    xw: np.ndarray,
    resid: np.ndarray,
    b: np.ndarray,
    col_sq: np.ndarray,
    denom: np.ndarray,
    gamma: float,
    n: int,
    idx: np.ndarray,
) -> float:
    max_delta = 0.0
    for j in idx:
        bj = b[j].copy()
        u = (resid.T @ xw[:, j]) / n + col_sq[j] * bj
        nrm = math.sqrt(float(u @ u))
        if nrm <= gamma:
            bn = np.zeros_like(u)
        else:
            bn = u * ((1.0 - gamma / nrm) / denom[j])
        diff = bj - bn
        if diff.any():
            resid += np.outer(xw[:, j], diff)
            b[j] = bn
            step = col_sq[j] * float((diff * diff).max())
            if step > max_delta:
                max_delta = step
    return max_delta


def _kkt_violation(
    xw: np.ndarray,
    resid: np.ndarray,
    b: np.ndarray,
    lam: float,
    alpha: float,
    n: int,
) -> float:
    grad = xw.T @ resid / n
    worst = 0.0
    for j in range(b.shape[0]):
        bj = b[j]
        if not bj.any():
            v = max(0.0, math.sqrt(float(grad[j] @ grad[j])) - lam * alpha)
        else:
            nrm = math.sqrt(float(bj @ bj))
            g = grad[j] - lam * (1.0 - alpha) * bj - lam * alpha * bj / nrm
            v = math.sqrt(float(g @ g))
        if v > worst:
            worst = v
    return worst
