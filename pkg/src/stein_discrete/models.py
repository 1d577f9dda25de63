"""Catalog of lattice distributions.

Ten families on integer boxes: Poisson, binomial, Yule-Simon, beta negative
binomial, logarithmic, truncated Poisson, truncated binomial, negative
multinomial, truncated negative multinomial, and Dirichlet negative
multinomial.  Each family exposes a fully normalized log-pmf, its support
box, and the positive weight function that drives the forward-difference
operator used by the estimators in :mod:`stein_discrete.stein`.

All pmf computation is done in log space through ``gammaln``; normalizing
sums for truncated families use log-sum-exp, exact over finite supports and
tail-truncated over infinite ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping

import numpy as np
from scipy.special import betaln, gammaln, logsumexp

from .errors import DomainError, InvalidModelError
from .support import Bound, LatticeBox

__all__ = [
    "Family",
    "ModelSpec",
    "TauWeight",
    "poisson",
    "binomial",
    "yule_simon",
    "beta_neg_binomial",
    "logarithmic",
    "trunc_poisson",
    "trunc_binomial",
    "neg_multinomial",
    "trunc_neg_multinomial",
    "dirichlet_neg_multinomial",
    "make_model",
    "component_names",
    "log_pmf",
    "log_pmf_many",
    "tau",
]


class Family(str, Enum):
    POISSON = "poisson"
    BINOMIAL = "binomial"
    YULE_SIMON = "yule_simon"
    BETA_NEG_BINOMIAL = "beta_neg_binomial"
    LOGARITHMIC = "logarithmic"
    TRUNC_POISSON = "trunc_poisson"
    TRUNC_BINOMIAL = "trunc_binomial"
    NEG_MULTINOMIAL = "neg_multinomial"
    TRUNC_NEG_MULTINOMIAL = "trunc_neg_multinomial"
    DIRICHLET_NEG_MULTINOMIAL = "dirichlet_neg_multinomial"


#: Families whose estimable parameter is a d-vector (d = support dimension).
MULTIVARIATE_FAMILIES = frozenset(
    {Family.NEG_MULTINOMIAL, Family.TRUNC_NEG_MULTINOMIAL, Family.DIRICHLET_NEG_MULTINOMIAL}
)

#: Families defined by restricting a parent family to a sub-box.
TRUNCATED_FAMILIES = frozenset(
    {Family.TRUNC_POISSON, Family.TRUNC_BINOMIAL, Family.TRUNC_NEG_MULTINOMIAL}
)


@dataclass(frozen=True)
class ModelSpec:
    """A fully specified catalog distribution.

    ``theta`` holds the estimable parameters, ``fixed`` the known
    hyperparameters (``m`` for binomial, ``r`` for the negative-binomial
    style families, ``alpha0`` for the Dirichlet negative multinomial, and
    truncation bounds ``a``/``b``), and ``support`` the lattice box.
    """

    family: Family
    theta: tuple[float, ...]
    fixed: Mapping[str, object] = field(default_factory=dict)
    support: LatticeBox = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        _validate(self)

    @property
    def dim(self) -> int:
        return self.support.dim

    @property
    def q(self) -> int:
        """Number of estimable parameters."""
        return len(self.theta)

    def with_theta(self, theta) -> "ModelSpec":
        return ModelSpec(self.family, tuple(np.atleast_1d(theta)), dict(self.fixed), self.support)

    def key(self) -> tuple:
        """Hashable identity, usable as a cache key."""
        fx = tuple(sorted((k, _freeze(v)) for k, v in self.fixed.items()))
        lo = tuple(b.value for b in self.support.lower)
        hi = tuple(b.value for b in self.support.upper)
        return (self.family.value, self.theta, fx, lo, hi)


def _freeze(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return tuple(float(x) for x in v)
    return float(v)


# --------------------------------------------------------------------------
# Constructors
# --------------------------------------------------------------------------


def poisson(lam: float) -> ModelSpec:
    return ModelSpec(Family.POISSON, (lam,), {}, LatticeBox.interval(0, math.inf))


def binomial(m: int, p: float) -> ModelSpec:
    return ModelSpec(Family.BINOMIAL, (p,), {"m": int(m)}, LatticeBox.interval(0, int(m)))


def yule_simon(rho: float) -> ModelSpec:
    return ModelSpec(Family.YULE_SIMON, (rho,), {}, LatticeBox.interval(1, math.inf))


def beta_neg_binomial(alpha: float, beta: float, r: float) -> ModelSpec:
    return ModelSpec(
        Family.BETA_NEG_BINOMIAL, (alpha, beta), {"r": float(r)}, LatticeBox.interval(0, math.inf)
    )


def logarithmic(p: float) -> ModelSpec:
    return ModelSpec(Family.LOGARITHMIC, (p,), {}, LatticeBox.interval(1, math.inf))


def trunc_poisson(lam: float, a: int, b: float) -> ModelSpec:
    b_val = math.inf if math.isinf(b) else int(b)
    return ModelSpec(
        Family.TRUNC_POISSON,
        (lam,),
        {"a": int(a), "b": b_val},
        LatticeBox.interval(int(a), b_val),
    )


def trunc_binomial(m: int, p: float, a: int, b: int) -> ModelSpec:
    return ModelSpec(
        Family.TRUNC_BINOMIAL,
        (p,),
        {"m": int(m), "a": int(a), "b": int(b)},
        LatticeBox.interval(int(a), int(b)),
    )


def neg_multinomial(r: float, p) -> ModelSpec:
    p = tuple(float(v) for v in p)
    d = len(p)
    box = LatticeBox.of([0] * d, [math.inf] * d)
    return ModelSpec(Family.NEG_MULTINOMIAL, p, {"r": float(r)}, box)


def trunc_neg_multinomial(r: float, p, a, b) -> ModelSpec:
    p = tuple(float(v) for v in p)
    a = tuple(int(v) for v in a)
    b = tuple(int(v) for v in b)
    box = LatticeBox.of(a, b)
    return ModelSpec(Family.TRUNC_NEG_MULTINOMIAL, p, {"r": float(r), "a": a, "b": b}, box)


def dirichlet_neg_multinomial(r: float, alpha0: float, alpha) -> ModelSpec:
    alpha = tuple(float(v) for v in alpha)
    d = len(alpha)
    box = LatticeBox.of([0] * d, [math.inf] * d)
    return ModelSpec(
        Family.DIRICHLET_NEG_MULTINOMIAL, alpha, {"r": float(r), "alpha0": float(alpha0)}, box
    )


_CONSTRUCTOR_ARGS = {
    Family.POISSON: ("lambda",),
    Family.BINOMIAL: ("p",),
    Family.YULE_SIMON: ("rho",),
    Family.BETA_NEG_BINOMIAL: ("alpha", "beta"),
    Family.LOGARITHMIC: ("p",),
    Family.TRUNC_POISSON: ("lambda",),
    Family.TRUNC_BINOMIAL: ("p",),
    Family.NEG_MULTINOMIAL: ("p",),
    Family.TRUNC_NEG_MULTINOMIAL: ("p",),
    Family.DIRICHLET_NEG_MULTINOMIAL: ("alpha",),
}


def make_model(family: Family, theta, fixed: Mapping[str, object] | None = None) -> ModelSpec:
    """Build a ModelSpec from a flat (family, theta, fixed) description."""
    fixed = dict(fixed or {})
    theta = tuple(float(t) for t in np.atleast_1d(theta))
    fam = Family(family)
    if fam is Family.POISSON:
        return poisson(theta[0])
    if fam is Family.BINOMIAL:
        return binomial(_req(fixed, "m", fam), theta[0])
    if fam is Family.YULE_SIMON:
        return yule_simon(theta[0])
    if fam is Family.BETA_NEG_BINOMIAL:
        return beta_neg_binomial(theta[0], theta[1], _req(fixed, "r", fam))
    if fam is Family.LOGARITHMIC:
        return logarithmic(theta[0])
    if fam is Family.TRUNC_POISSON:
        return trunc_poisson(theta[0], _req(fixed, "a", fam), _req(fixed, "b", fam))
    if fam is Family.TRUNC_BINOMIAL:
        return trunc_binomial(
            _req(fixed, "m", fam), theta[0], _req(fixed, "a", fam), _req(fixed, "b", fam)
        )
    if fam is Family.NEG_MULTINOMIAL:
        return neg_multinomial(_req(fixed, "r", fam), theta)
    if fam is Family.TRUNC_NEG_MULTINOMIAL:
        return trunc_neg_multinomial(
            _req(fixed, "r", fam), theta, _req(fixed, "a", fam), _req(fixed, "b", fam)
        )
    if fam is Family.DIRICHLET_NEG_MULTINOMIAL:
        return dirichlet_neg_multinomial(_req(fixed, "r", fam), _req(fixed, "alpha0", fam), theta)
    raise InvalidModelError(f"unknown family {family!r}")


def _req(fixed: dict, name: str, fam: Family):
    try:
        return fixed[name]
    except KeyError:
        raise InvalidModelError(f"{fam.value} requires fixed parameter {name!r}") from None


def component_names(family: Family, d: int) -> tuple[str, ...]:
    """Names of the estimable parameter components, in theta order."""
    fam = Family(family)
    if fam in (Family.POISSON, Family.TRUNC_POISSON):
        return ("lambda",)
    if fam in (Family.BINOMIAL, Family.TRUNC_BINOMIAL, Family.LOGARITHMIC):
        return ("p",)
    if fam is Family.YULE_SIMON:
        return ("rho",)
    if fam is Family.BETA_NEG_BINOMIAL:
        return ("alpha", "beta")
    if fam in (Family.NEG_MULTINOMIAL, Family.TRUNC_NEG_MULTINOMIAL):
        return tuple(f"p{i + 1}" for i in range(d))
    if fam is Family.DIRICHLET_NEG_MULTINOMIAL:
        return tuple(f"alpha{i + 1}" for i in range(d))
    raise InvalidModelError(f"unknown family {family!r}")


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------


def theta_violation(family: Family, theta, fixed: Mapping[str, object]) -> str | None:
    """Return a description of the violated constraint, or None if theta is valid.

    Used both by model validation (where a violation is an error) and by the
    estimators (where a violation makes an estimate non-eligible).
    """
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    if not np.all(np.isfinite(th)):
        return "non-finite parameter"
    fam = Family(family)
    if fam in (Family.POISSON, Family.TRUNC_POISSON):
        if th[0] <= 0:
            return "lambda must be > 0"
    elif fam in (Family.BINOMIAL, Family.TRUNC_BINOMIAL, Family.LOGARITHMIC):
        if not 0 < th[0] < 1:
            return "p must lie in (0, 1)"
    elif fam is Family.YULE_SIMON:
        if th[0] <= 0:
            return "rho must be > 0"
    elif fam is Family.BETA_NEG_BINOMIAL:
        if th[0] <= 0 or th[1] <= 0:
            return "alpha and beta must be > 0"
    elif fam in (Family.NEG_MULTINOMIAL, Family.TRUNC_NEG_MULTINOMIAL):
        if np.any(th <= 0) or np.any(th >= 1):
            return "each p_i must lie in (0, 1)"
        if th.sum() >= 1:
            return "p_0 = 1 - sum(p) must be > 0"
    elif fam is Family.DIRICHLET_NEG_MULTINOMIAL:
        if np.any(th <= 0):
            return "each alpha_i must be > 0"
    else:
        return f"unknown family {family!r}"
    return None


def _validate(model: ModelSpec) -> None:
    fam = model.family
    viol = theta_violation(fam, model.theta, model.fixed)
    if viol is not None:
        raise InvalidModelError(f"{fam.value}: {viol}")
    d = model.support.dim
    expected_q = d if fam in MULTIVARIATE_FAMILIES else (2 if fam is Family.BETA_NEG_BINOMIAL else 1)
    if len(model.theta) != expected_q:
        raise InvalidModelError(f"{fam.value}: expected {expected_q} parameters, got {len(model.theta)}")
    if fam not in MULTIVARIATE_FAMILIES and d != 1:
        raise InvalidModelError(f"{fam.value} is univariate")

    lo, hi = model.support.lower_array(), model.support.upper_array()
    if fam in (Family.BETA_NEG_BINOMIAL, Family.NEG_MULTINOMIAL, Family.TRUNC_NEG_MULTINOMIAL):
        if float(model.fixed["r"]) <= 0:
            raise InvalidModelError(f"{fam.value}: r must be > 0")
    if fam is Family.DIRICHLET_NEG_MULTINOMIAL:
        r = float(model.fixed["r"])
        alpha0 = float(model.fixed["alpha0"])
        if r <= 0 or not float(r).is_integer():
            raise InvalidModelError("dirichlet_neg_multinomial: r must be a positive integer")
        if alpha0 <= 0:
            raise InvalidModelError("dirichlet_neg_multinomial: alpha0 must be > 0")
    if fam is Family.POISSON and not (lo[0] == 0 and math.isinf(hi[0])):
        raise InvalidModelError("poisson support must be {0, 1, ...}")
    if fam is Family.BINOMIAL:
        m = int(model.fixed["m"])
        if m < 1:
            raise InvalidModelError("binomial: m must be >= 1")
        if not (lo[0] == 0 and hi[0] == m):
            raise InvalidModelError("binomial support must be {0..m}")
    if fam in (Family.YULE_SIMON, Family.LOGARITHMIC) and not (lo[0] == 1 and math.isinf(hi[0])):
        raise InvalidModelError(f"{fam.value} support must be {{1, 2, ...}}")
    if fam is Family.TRUNC_POISSON:
        a, b = int(model.fixed["a"]), model.fixed["b"]
        if a < 0 or not (a < (math.inf if math.isinf(float(b)) else int(b))):
            raise InvalidModelError("trunc_poisson requires 0 <= a < b")
    if fam is Family.TRUNC_BINOMIAL:
        m, a, b = (int(model.fixed[k]) for k in ("m", "a", "b"))
        if not (0 <= a < b <= m):
            raise InvalidModelError("trunc_binomial requires 0 <= a < b <= m")
    if fam is Family.TRUNC_NEG_MULTINOMIAL:
        a = np.asarray(model.fixed["a"], dtype=int)
        b = np.asarray(model.fixed["b"], dtype=int)
        if a.shape != (d,) or b.shape != (d,) or np.any(a < 0) or np.any(a >= b):
            raise InvalidModelError("trunc_neg_multinomial requires 0 <= a_i < b_i per axis")


# --------------------------------------------------------------------------
# Log pmf
# --------------------------------------------------------------------------


def _as_points(model: ModelSpec, k) -> np.ndarray:
    """Normalize input to an (n, d) int64 array."""
    arr = np.asarray(k)
    if model.dim == 1:
        arr = arr.reshape(-1, 1) if arr.ndim <= 1 else arr
    elif arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != model.dim:
        raise DomainError(f"expected points of dimension {model.dim}, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.allclose(arr, rounded):
            raise DomainError("lattice points must be integers")
        arr = rounded
    return arr.astype(np.int64)


def _table_gammaln(k: np.ndarray, offset: float) -> np.ndarray:
    """gammaln(k + offset) for a non-negative integer array, via a lookup table.

    Lattice arguments repeat heavily inside box sums; a table keeps the cost
    at one gammaln call per distinct value.
    """
    kmax = int(k.max()) if k.size else 0
    if k.size <= 4 * (kmax + 1) or kmax > 50_000_000:
        return gammaln(k + offset)
    table = gammaln(np.arange(kmax + 1, dtype=np.float64) + offset)
    return table[k]


def _log_unnorm_poisson(lam: float, k: np.ndarray) -> np.ndarray:
    return k * math.log(lam) - _table_gammaln(k, 1.0)


def _log_norm_trunc_poisson(lam: float, a: int, b: float) -> float:
    """log sum_{i=a}^{b} lambda^i / i!  (tail-truncated when b is infinite)."""
    if math.isinf(b):
        # enumerate past the mode until terms fall 60 log-units below the peak
        hi = int(max(a + 64, lam + 40.0 * math.sqrt(lam + 1.0) + 64))
        while True:
            ks = np.arange(a, hi + 1, dtype=np.int64)
            terms = _log_unnorm_poisson(lam, ks)
            if terms[-1] < terms.max() - 60.0 or hi > 2_000_000:
                return float(logsumexp(terms))
            hi *= 2
    ks = np.arange(a, int(b) + 1, dtype=np.int64)
    return float(logsumexp(_log_unnorm_poisson(lam, ks)))


def _log_binom_pmf(m: int, p: float, k: np.ndarray) -> np.ndarray:
    return (
        gammaln(m + 1)
        - _table_gammaln(k, 1.0)
        - _table_gammaln(m - k, 1.0)
        + k * math.log(p)
        + (m - k) * math.log1p(-p)
    )


def _log_unnorm_nm(r: float, log_p: np.ndarray, pts: np.ndarray) -> np.ndarray:
    total = pts.sum(axis=1)
    out = _table_gammaln(total, r) + pts @ log_p
    for i in range(pts.shape[1]):
        out -= _table_gammaln(pts[:, i], 1.0)
    return out


def _log_norm_tnm(model: ModelSpec) -> float:
    r = float(model.fixed["r"])
    log_p = np.log(np.asarray(model.theta))
    pts = model.support.enumerate_points()
    return float(logsumexp(_log_unnorm_nm(r, log_p, pts)))


def log_pmf_many(model: ModelSpec, k, validate: bool = True) -> np.ndarray:
    """Normalized log pmf at an array of lattice points.

    Accepts an ``(n,)`` array for univariate models or ``(n, d)`` in general
    and returns an ``(n,)`` float array.
    """
    pts = _as_points(model, k)
    if validate:
        inside = model.support.contains_many(pts)
        if not np.all(inside):
            bad = pts[~inside][0]
            raise DomainError(f"point {bad.tolist()} outside support of {model.family.value}")
    fam = model.family
    th = np.asarray(model.theta)

    if fam is Family.POISSON:
        lam = th[0]
        return _log_unnorm_poisson(lam, pts[:, 0]) - lam
    if fam is Family.BINOMIAL:
        return _log_binom_pmf(int(model.fixed["m"]), th[0], pts[:, 0])
    if fam is Family.YULE_SIMON:
        rho = th[0]
        kk = pts[:, 0]
        return math.log(rho) + betaln(kk, rho + 1.0)
    if fam is Family.BETA_NEG_BINOMIAL:
        alpha, beta = th
        r = float(model.fixed["r"])
        kk = pts[:, 0]
        return (
            betaln(r + kk, alpha + beta)
            - betaln(r, alpha)
            + _table_gammaln(kk, beta)
            - _table_gammaln(kk, 1.0)
            - gammaln(beta)
        )
    if fam is Family.LOGARITHMIC:
        p = th[0]
        kk = pts[:, 0]
        return kk * math.log(p) - np.log(kk) - math.log(-math.log1p(-p))
    if fam is Family.TRUNC_POISSON:
        lam = th[0]
        a, b = int(model.fixed["a"]), float(model.fixed["b"])
        return _log_unnorm_poisson(lam, pts[:, 0]) - _log_norm_trunc_poisson(lam, a, b)
    if fam is Family.TRUNC_BINOMIAL:
        m = int(model.fixed["m"])
        a, b = int(model.fixed["a"]), int(model.fixed["b"])
        ks = np.arange(a, b + 1, dtype=np.int64)
        log_norm = logsumexp(_log_binom_pmf(m, th[0], ks))
        return _log_binom_pmf(m, th[0], pts[:, 0]) - log_norm
    if fam is Family.NEG_MULTINOMIAL:
        r = float(model.fixed["r"])
        p0 = 1.0 - th.sum()
        return _log_unnorm_nm(r, np.log(th), pts) + r * math.log(p0) - gammaln(r)
    if fam is Family.TRUNC_NEG_MULTINOMIAL:
        r = float(model.fixed["r"])
        return _log_unnorm_nm(r, np.log(th), pts) - _log_norm_tnm(model)
    if fam is Family.DIRICHLET_NEG_MULTINOMIAL:
        r = float(model.fixed["r"])
        alpha0 = float(model.fixed["alpha0"])
        asum = th.sum()
        total = pts.sum(axis=1)
        out = betaln(r + total, alpha0 + asum) - betaln(r, alpha0)
        for i in range(model.dim):
            out += _table_gammaln(pts[:, i], th[i]) - _table_gammaln(pts[:, i], 1.0) - gammaln(th[i])
        return out
    raise InvalidModelError(f"unknown family {fam!r}")


def log_pmf(model: ModelSpec, k) -> float:
    """Natural log of the normalized pmf at a single lattice point."""
    if not model.support.contains(k):
        raise DomainError(f"point {k!r} outside support of {model.family.value}")
    return float(log_pmf_many(model, k, validate=False)[0])


# --------------------------------------------------------------------------
# Stein weight tau
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TauWeight:
    """Componentwise positive weight on the support.

    ``evaluate_many`` maps an ``(n, d)`` int array to an ``(n, d)`` float
    array; ``evaluate`` is the single-point convenience form.
    """

    evaluate_many: Callable[[np.ndarray], np.ndarray]
    depends_on: tuple[str, ...]

    def evaluate(self, k) -> np.ndarray:
        pt = np.atleast_2d(np.asarray(k, dtype=np.int64))
        return self.evaluate_many(pt)[0]


def tau(model: ModelSpec) -> TauWeight:
    """The family's weight function for the forward-difference operator."""
    fam = model.family
    th = np.asarray(model.theta)
    if fam in (Family.POISSON, Family.TRUNC_POISSON):
        return TauWeight(lambda K: K.astype(float), ())
    if fam in (Family.BINOMIAL, Family.TRUNC_BINOMIAL):
        p = th[0]
        c = (1.0 - p) / p
        return TauWeight(lambda K: np.full(K.shape, c, dtype=float), ("p",))
    if fam is Family.YULE_SIMON:
        rho = th[0]
        return TauWeight(lambda K: K + rho, ("rho",))
    if fam is Family.BETA_NEG_BINOMIAL:
        alpha, beta = th
        r = float(model.fixed["r"])
        c = r + alpha + beta - 1.0
        return TauWeight(lambda K: (K + c) * K, ("alpha", "beta", "r"))
    if fam is Family.LOGARITHMIC:
        return TauWeight(lambda K: np.ones(K.shape, dtype=float), ())
    if fam in (Family.NEG_MULTINOMIAL, Family.TRUNC_NEG_MULTINOMIAL):
        return TauWeight(lambda K: K.astype(float), ())
    if fam is Family.DIRICHLET_NEG_MULTINOMIAL:
        r = float(model.fixed["r"])
        alpha0 = float(model.fixed["alpha0"])
        c = r + alpha0 + th.sum() - 1.0
        return TauWeight(
            lambda K: K * (K.sum(axis=1, keepdims=True) + c),
            ("alpha", "alpha0", "r"),
        )
    raise InvalidModelError(f"unknown family {fam!r}")
