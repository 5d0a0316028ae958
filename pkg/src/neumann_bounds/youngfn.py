"""Young functions and their numerics.

A Young function is a non-decreasing convex function M on [0, inf) with
M(0) = 0 and M(u) -> inf.  This module provides the concrete families used
by the eigenvalue bounds (power functions, exponential types, the
``u log(u+e)`` family and its powered variant, and the conjugate-power
compositions built from them), together with

* numerical inverses (bracketed bisection, with a log-domain branch for the
  ``u log^eps(u+e)`` family so that arguments far outside double range stay
  usable),
* complementary (convex conjugate) functions, closed-form where registered
  and a one-sided numeric fallback otherwise,
* probes for the submultiplicativity / supermultiplicativity growth
  conditions and for "essentially greater growth" ratios.

All evaluation functions accept scalars or numpy arrays and are pure;
instances are immutable after construction and safe to share across threads.
Exponential kinds carry a log-space twin (``log_eval``) because downstream
constants are composed entirely in log space.
"""

from __future__ import annotations

import logging

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError

__all__ = [
    "YoungFunction",
    "PowerP",
    "ExpSquare",
    "ExpPow",
    "LogLinear",
    "LogPow",
    "LogLinearTilde",
    "ExpMinusOne",
    "PsiAlpha",
    "PsiEpsAlpha",
    "NumericComplement",
    "TableYoung",
    "default_probe_grid",
    "probe_delta_prime",
    "probe_nabla_prime",
    "essentially_greater",
]

log = logging.getLogger(__name__)

_E = float(np.e)


def _checked(u, name="u"):
    """Validate a nonnegative finite argument, return it as a float array."""
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {u!r}")
    if np.any(arr < 0):
        raise DomainError(f"{name} must be nonnegative, got {u!r}")
    return arr


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def _log_expm1(y):
    """log(e^y - 1), stable for both tiny and large y (elementwise)."""
    y = np.asarray(y, dtype=float)
    small = y < 33.0
    out = np.empty_like(y)
    with np.errstate(divide="ignore"):
        out[small] = np.log(np.expm1(y[small]))
    ys = y[~small]
    out[~small] = ys + np.log1p(-np.exp(-ys))
    return out


def _log_exp_plus_e(x):
    """log(e^x + e) without overflow, for any float x (elementwise)."""
    x = np.asarray(x, dtype=float)
    return np.maximum(x, 1.0) + np.log1p(np.exp(-np.abs(x - 1.0)))


class YoungFunction:
    """Base class: a convex growth function with numeric helpers."""

    name = "young"
    #: registered submultiplicativity constant, if known (M(uv) <= C M(u)M(v))
    delta_prime_constant = None
    #: registered supermultiplicativity constant, if known (M(Cuv) >= M(u)M(v))
    nabla_prime_constant = None

    def eval(self, u):
        raise NotImplementedError

    def log_eval(self, u):
        """log M(u); default takes the log of ``eval`` (overflow -> +inf)."""
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(divide="ignore", over="ignore"):
            out = np.log(self.eval(u))
        return _ret(out, scalar)

    # -- inversion ---------------------------------------------------------

    def inverse(self, t, rtol=1e-10):
        """Solve M(u) = t for u >= 0 by bracketed bisection.

        ``inverse(0) == 0``.  Raises on non-finite input and when 2048 bracket
        doublings fail to enclose ``t``.
        """
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise DomainError(f"inverse target must be finite, got {t!r}")
        if np.any(t < 0):
            raise DomainError("inverse target must be nonnegative")
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.zeros_like(t)
        pos = t > 0
        if pos.any():
            out[pos] = self._bisect_inverse(t[pos], rtol)
        return _ret(out[0] if scalar else out, scalar)

    def _bisect_inverse(self, t, rtol):
        lo = np.zeros_like(t)
        hi = np.ones_like(t)
        with np.errstate(over="ignore"):
            need = self.eval(hi) < t
            for _ in range(2048):
                if not need.any():
                    break
                hi[need] *= 2.0
                need = self.eval(hi) < t
            else:
                raise ConvergenceError(
                    f"{self.name}: no bracket for inverse after 2048 doublings"
                )
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                high = self.eval(mid) >= t
                hi = np.where(high, mid, hi)
                lo = np.where(high, lo, mid)
                if np.all(hi - lo <= rtol * np.maximum(hi, 1e-300)):
                    break
        return 0.5 * (lo + hi)

    # -- conjugation -------------------------------------------------------

    def complementary(self):
        """Convex conjugate sup{uv - M(u)}; numeric unless a closed form exists.

        The numeric fallback is memoized per instance (it caches grid values
        of this function, which are reusable across calls).
        """
        memo = self.__dict__.get("_numeric_complement")
        if memo is None:
            memo = NumericComplement(self)
            self.__dict__["_numeric_complement"] = memo
        return memo

    def __repr__(self):
        return f"<{self.__class__.__name__} {self.name}>"


class PowerP(YoungFunction):
    """M(u) = coef * u^p.  ``coef=1/p`` gives the normalized pairing variant."""

    def __init__(self, p, coef=None, normalized=False):
        if p < 1:
            raise ParameterError(f"power exponent must satisfy p >= 1, got {p}")
        if coef is None:
            coef = 1.0 / p if normalized else 1.0
        if coef <= 0:
            raise ParameterError("power coefficient must be positive")
        self.p = float(p)
        self.coef = float(coef)
        self.name = f"power(p={self.p:g},coef={self.coef:g})"
        self.delta_prime_constant = 1.0 / self.coef

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(over="ignore"):
            out = self.coef * u**self.p
        return _ret(out, scalar)

    def log_eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(divide="ignore"):
            out = np.log(self.coef) + self.p * np.log(u)
        return _ret(out, scalar)

    def inverse(self, t, rtol=1e-10):
        t = _checked(t, "t")
        scalar = t.ndim == 0
        return _ret((t / self.coef) ** (1.0 / self.p), scalar)

    def complementary(self):
        if self.p == 1.0:
            raise ParameterError("conjugate of a linear function is degenerate")
        q = self.p / (self.p - 1.0)
        coef_star = ((self.p - 1.0) / self.p) * (self.coef * self.p) ** (
            -1.0 / (self.p - 1.0)
        )
        return PowerP(q, coef=coef_star)


class ExpSquare(YoungFunction):
    """M(u) = exp(u^2) - 1, the optimal-embedding target function."""

    name = "exp_square"

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(over="ignore"):
            out = np.expm1(u * u)
        return _ret(out, scalar)

    def log_eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(over="ignore"):
            out = _log_expm1(u * u)
        return _ret(out, scalar)

    def inverse(self, t, rtol=1e-10):
        t = _checked(t, "t")
        scalar = t.ndim == 0
        return _ret(np.sqrt(np.log1p(t)), scalar)


class ExpPow(YoungFunction):
    """M(u) = exp(u^(2/eps)) - 1 for eps > 1; grows essentially slower
    than exp(u^2) - 1 and restores compactness of the embedding."""

    def __init__(self, eps):
        if eps <= 1:
            raise ParameterError(f"eps must exceed 1, got {eps}")
        self.eps = float(eps)
        self.name = f"exp_pow(eps={self.eps:g})"

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(over="ignore"):
            out = np.expm1(u ** (2.0 / self.eps))
        return _ret(out, scalar)

    def log_eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(over="ignore"):
            out = _log_expm1(u ** (2.0 / self.eps))
        return _ret(out, scalar)

    def inverse(self, t, rtol=1e-10):
        t = _checked(t, "t")
        scalar = t.ndim == 0
        return _ret(np.log1p(t) ** (self.eps / 2.0), scalar)


class LogPow(YoungFunction):
    """M(u) = u * log(u+e)^eps.  ``eps=1`` is the submultiplicative
    companion of exp(u)-1 used throughout the Jacobian functionals."""

    def __init__(self, eps=1.0):
        if eps < 1:
            raise ParameterError(f"log power must satisfy eps >= 1, got {eps}")
        self.eps = float(eps)
        self.name = f"log_pow(eps={self.eps:g})"
        if self.eps == 1.0:
            # global submultiplicativity constant for u log(u+e)
            self.delta_prime_constant = 2.0

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(over="ignore"):
            out = u * np.log(u + _E) ** self.eps
        return _ret(out, scalar)

    def log_eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(divide="ignore"):
            out = np.log(u) + self.eps * np.log(np.log(u + _E))
        return _ret(out, scalar)

    # log-domain twin: x = log u  ->  log M(u) = x + eps*log(log(e^x + e))

    def log_eval_from_log(self, x):
        """log M(e^x) for unrestricted float x (no overflow)."""
        x = np.asarray(x, dtype=float)
        return x + self.eps * np.log(_log_exp_plus_e(x))

    def inverse_log(self, log_t):
        """log of the inverse: solve log M(e^x) = log_t for x by bisection.

        Works for targets far outside double range in either direction; this
        is the asymptotic branch used for tiny and huge arguments.
        """
        log_t = np.asarray(log_t, dtype=float)
        scalar = log_t.ndim == 0
        log_t = np.atleast_1d(log_t)
        hi = log_t.copy()  # log M(e^x) >= x, so x <= log t
        lo = log_t - self.eps * np.log(_log_exp_plus_e(log_t)) - 1.0
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            high = self.log_eval_from_log(mid) >= log_t
            hi = np.where(high, mid, hi)
            lo = np.where(high, lo, mid)
            if np.all(hi - lo <= 1e-14 * np.maximum(np.abs(hi), 1.0)):
                break
        out = 0.5 * (lo + hi)
        return _ret(out[0] if scalar else out, scalar)

    def inverse(self, t, rtol=1e-10):
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise DomainError(f"inverse target must be finite, got {t!r}")
        if np.any(t < 0):
            raise DomainError("inverse target must be nonnegative")
        scalar = t.ndim == 0
        t = np.atleast_1d(t.astype(float))
        out = np.zeros_like(t)
        tiny = (t > 0) & (t < 1e-300)
        pos = t >= 1e-300
        if tiny.any():
            out[tiny] = np.exp(self.inverse_log(np.log(t[tiny])))
        if pos.any():
            out[pos] = self._bisect_inverse(t[pos], rtol)
        return _ret(out[0] if scalar else out, scalar)


class LogLinear(LogPow):
    """M(u) = u * log(u+e), submultiplicative with constant 2."""

    def __init__(self):
        super().__init__(eps=1.0)
        self.name = "log_linear"


class LogLinearTilde(YoungFunction):
    """M(u) = (1+u) log(1+u) - u, the closed-form conjugate of exp(u)-1."""

    name = "log_linear_tilde"

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        out = (1.0 + u) * np.log1p(u) - u
        return _ret(out, scalar)

    def complementary(self):
        return ExpMinusOne()


class ExpMinusOne(YoungFunction):
    """M(u) = exp(u) - 1; conjugate pair of (1+u)log(1+u) - u."""

    name = "exp_minus_one"

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        with np.errstate(over="ignore"):
            out = np.expm1(u)
        return _ret(out, scalar)

    def log_eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        return _ret(_log_expm1(u), scalar)

    def inverse(self, t, rtol=1e-10):
        t = _checked(t, "t")
        scalar = t.ndim == 0
        return _ret(np.log1p(t), scalar)

    def complementary(self):
        return LogLinearTilde()


class PsiAlpha(YoungFunction):
    """The conjugate-power composition

        Psi(u) = (2/alpha) * (w * (e^w - e))^((alpha-2)/2),   w = Minv(u),

    where Minv is the inverse of u log(u+e).  Vanishes for u <= log(1+e)+...
    (where e^w <= e) and satisfies
    Psi(M(u / Minv(u))) = (2/alpha) u^((alpha-2)/2).
    """

    def __init__(self, alpha, eps=None):
        if alpha <= 2:
            raise ParameterError(f"alpha must exceed 2, got {alpha}")
        self.alpha = float(alpha)
        self.eps = None if eps is None else float(eps)
        self._phi = LogLinear() if eps is None else LogPow(eps)
        tag = "" if eps is None else f",eps={self.eps:g}"
        self.name = f"psi(alpha={self.alpha:g}{tag})"

    def _inner_exponent(self, w):
        """Exponent y such that the inner factor is w*(e^y - e)."""
        if self.eps is None:
            return w
        return w ** (1.0 / self.eps)

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        w = self._phi.inverse(np.atleast_1d(u))
        y = self._inner_exponent(w)
        with np.errstate(over="ignore", invalid="ignore"):
            inner = w * _E * np.expm1(y - 1.0)
            inner = np.maximum(inner, 0.0)
            out = (2.0 / self.alpha) * inner ** ((self.alpha - 2.0) / 2.0)
        out = np.where(w <= 0, 0.0, out)
        return _ret(out[0] if scalar else out.reshape(np.shape(u)), scalar)

    def log_eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        w = self._phi.inverse(np.atleast_1d(u))
        y = self._inner_exponent(w)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            log_inner = np.log(w) + 1.0 + _log_expm1(y - 1.0)
            out = np.log(2.0 / self.alpha) + 0.5 * (self.alpha - 2.0) * log_inner
        out = np.where(y <= 1.0, -np.inf, out)
        return _ret(out[0] if scalar else out.reshape(np.shape(u)), scalar)

    def log_eval_from_log(self, log_u):
        """log Psi(u) from log u, as an mpmath float.

        The inner factor is exp(w)-scale with w itself potentially far beyond
        double range, so the final sum is carried out with arbitrary-exponent
        arithmetic.  Accepts a float log u of any magnitude.
        """
        import mpmath as mp

        x = float(self._phi.inverse_log(log_u))  # x = log w
        half = mp.mpf(self.alpha - 2.0) / 2
        w = mp.exp(x)
        y = w if self.eps is None else mp.exp(x / self.eps)
        if y <= 1:
            return mp.mpf("-inf")
        # log(w * (e^y - e)) = log w + 1 + (y-1) + log1p(-exp(1-y))
        log_inner = mp.mpf(x) + 1 + (y - 1) + mp.log1p(-mp.exp(1 - y))
        return mp.log(mp.mpf(2.0) / self.alpha) + half * log_inner


class PsiEpsAlpha(PsiAlpha):
    """Variant of ``PsiAlpha`` built on u log^eps(u+e), with inner factor
    w * (e^(w^(1/eps)) - e)."""

    def __init__(self, eps, alpha):
        if eps <= 1:
            raise ParameterError(f"eps must exceed 1, got {eps}")
        super().__init__(alpha, eps=eps)


class NumericComplement(YoungFunction):
    """One-sided numeric convex conjugate sup_u {uv - M(u)}.

    The supremum is taken over a cached geometric grid, optionally refined by
    golden-section ascent (the objective is concave in u).  The result never
    exceeds the true conjugate; the deficit is controlled by the grid density
    and refinement.
    """

    def __init__(self, of, u_lo=1e-8, u_hi=1e4, n_grid=2048, refine=True):
        self.of = of
        self.name = f"conjugate({of.name})"
        self._u_lo = float(u_lo)
        self._u_hi = float(u_hi)
        self._n = int(n_grid)
        self._refine_default = bool(refine)
        self._build_grid(self._u_hi)

    def _build_grid(self, u_hi):
        self._grid = np.geomspace(self._u_lo, u_hi, self._n)
        with np.errstate(over="ignore"):
            self._m_grid = np.asarray(self.of.eval(self._grid))
        self._u_hi = u_hi

    def _objective(self, u, v):
        with np.errstate(over="ignore", invalid="ignore"):
            val = u * v - np.asarray(self.of.eval(u))
        return np.where(np.isnan(val), -np.inf, val)

    def eval(self, v, refine=None):
        v = _checked(v, "v")
        scalar = v.ndim == 0
        v = np.atleast_1d(v)
        refine = self._refine_default if refine is None else refine
        out = np.zeros_like(v)
        pos = v > 0
        if pos.any():
            out[pos] = self._sup(v[pos], refine)
        return _ret(out[0] if scalar else out.reshape(np.shape(v)), scalar)

    def _sup(self, v, refine):
        def grid_argmax():
            with np.errstate(over="ignore", invalid="ignore"):
                obj = v[:, None] * self._grid[None, :] - self._m_grid[None, :]
            obj = np.where(np.isnan(obj), -np.inf, obj)
            return obj, np.argmax(obj, axis=1)

        # expand the grid while the argmax presses against the top; entries
        # whose maximizer stays beyond the cap remain one-sided low
        obj, idx = grid_argmax()
        for _ in range(12):
            if idx.max() < self._n - 2 or self._u_hi >= 1e120:
                break
            self._build_grid(self._u_hi * 64.0)
            obj, idx = grid_argmax()
        best = obj[np.arange(len(v)), idx]
        if not refine:
            return np.maximum(best, 0.0)
        lo = self._grid[np.maximum(idx - 1, 0)]
        hi = self._grid[np.minimum(idx + 1, self._n - 1)]
        invphi = (np.sqrt(5.0) - 1.0) / 2.0
        c = hi - invphi * (hi - lo)
        d = lo + invphi * (hi - lo)
        fc = self._objective(c, v)
        fd = self._objective(d, v)
        for _ in range(48):
            left = fc >= fd
            hi = np.where(left, d, hi)
            lo = np.where(left, lo, c)
            c = hi - invphi * (hi - lo)
            d = lo + invphi * (hi - lo)
            fc = self._objective(c, v)
            fd = self._objective(d, v)
        best = np.maximum(best, np.maximum(fc, fd))
        return np.maximum(best, 0.0)


class TableYoung(YoungFunction):
    """Young function given by a sampled table, linearly interpolated.

    The table must start at (0, 0), be nondecreasing and discretely convex;
    evaluation beyond the last sample extrapolates the final slope.
    """

    def __init__(self, u_table, m_table):
        u = np.asarray(u_table, dtype=float)
        m = np.asarray(m_table, dtype=float)
        if u.ndim != 1 or u.shape != m.shape or len(u) < 3:
            raise ParameterError("table needs matching 1-D arrays, >= 3 points")
        if u[0] != 0.0 or m[0] != 0.0:
            raise ParameterError("table must start at (0, 0)")
        if np.any(np.diff(u) <= 0) or np.any(np.diff(m) < 0):
            raise ParameterError("table must be strictly increasing in u")
        slopes = np.diff(m) / np.diff(u)
        if np.any(np.diff(slopes) < -1e-10 * max(1.0, m[-1])):
            raise ParameterError("table is not convex")
        self._u = u
        self._m = m
        self._final_slope = slopes[-1]
        self.name = f"table({len(u)} pts)"

    def eval(self, u):
        u = _checked(u)
        scalar = u.ndim == 0
        out = np.interp(u, self._u, self._m)
        beyond = u > self._u[-1]
        out = np.where(beyond, self._m[-1] + self._final_slope * (u - self._u[-1]), out)
        return _ret(out, scalar)


# ---------------------------------------------------------------------------
# growth-condition probes
# ---------------------------------------------------------------------------


def default_probe_grid(lo=1e-3, hi=1e3, n=48):
    """Log-uniform grid on [lo, hi] used for the growth probes."""
    if n < 40:
        raise ParameterError("probe grid needs at least 40 points per axis")
    return np.geomspace(lo, hi, n)


def probe_delta_prime(young, grid=None):
    """Empirical submultiplicativity constant sup M(uv) / (M(u) M(v)).

    Evaluated in log space over the tensor grid; points where the ratio is
    indeterminate (both sides vanish) are skipped with a counter.  Returns
    None if every point was skipped; the result may be ``inf`` for kinds
    whose ratio grows without bound.
    """
    g = default_probe_grid() if grid is None else np.asarray(grid, dtype=float)
    uu, vv = np.meshgrid(g, g)
    lr = (
        np.asarray(young.log_eval(uu * vv))
        - np.asarray(young.log_eval(uu))
        - np.asarray(young.log_eval(vv))
    )
    bad = np.isnan(lr)
    if bad.any():
        log.warning("probe_delta_prime(%s): skipped %d grid points", young.name, bad.sum())
    if bad.all():
        return None
    with np.errstate(over="ignore"):
        return float(np.exp(np.nanmax(lr)))


def probe_nabla_prime(young, grid=None, c_max=1e6):
    """Smallest C in [1, c_max] with M(C u v) >= M(u) M(v) on the grid.

    Bisection on log C against the worst grid point; returns None when even
    ``c_max`` fails.  Comparisons run in log space so exponential kinds do
    not overflow.
    """
    g = default_probe_grid() if grid is None else np.asarray(grid, dtype=float)
    uu, vv = np.meshgrid(g, g)
    rhs = np.asarray(young.log_eval(uu)) + np.asarray(young.log_eval(vv))
    prod = uu * vv

    def feasible(c):
        lhs = np.asarray(young.log_eval(c * prod))
        with np.errstate(invalid="ignore"):
            ok = lhs >= rhs - 1e-12 * np.abs(rhs)
        # -inf rhs imposes no constraint
        return bool(np.all(ok | np.isneginf(rhs)))

    if not feasible(c_max):
        return None
    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, np.log(c_max)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if feasible(np.exp(mid)):
            hi = mid
        else:
            lo = mid
    return float(np.exp(hi))


def essentially_greater(y1, y2, k_list, u_max, tol=1e-6, n_samples=64):
    """Numerical probe of the growth ordering: does Y1(k u)/Y2(u) -> 0?

    True iff, for each k, the log-space ratio is non-increasing across the
    top decade [u_max/10, u_max] and falls below ``tol`` at ``u_max``.  This
    is a finite-range probe, not a proof; slowly separating pairs (ratios
    decaying like 1/log u) need a larger ``tol`` to register.
    """
    if u_max < 1e3:
        raise ParameterError("u_max must be at least 1e3")
    u = np.geomspace(u_max / 10.0, u_max, n_samples)
    for k in k_list:
        if k <= 0:
            raise ParameterError("scale factors k must be positive")
        lr = np.asarray(y1.log_eval(k * u)) - np.asarray(y2.log_eval(u))
        if not np.all(np.isfinite(lr)):
            return False
        if np.any(np.diff(lr) > 1e-9 * np.maximum(np.abs(lr[:-1]), 1.0)):
            return False
        if lr[-1] >= np.log(tol):
            return False
    return True
