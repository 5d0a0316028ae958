"""Lower bounds for the first nonzero Neumann eigenvalue with density.

Each ``mu_lower_*`` operation assembles one analytic lower bound for the
eigenvalue of  -div grad u = mu * rho * u  on the conformal image of the
unit disk, and returns a BoundReport carrying the bound, its natural log,
every named intermediate constant, and validity flags.  All image-domain
integrals are pulled back to the disk (no meshing), and every constant that
can leave double range is composed in log space; the one chain that leaves
even *log* range (the jacobian-free Orlicz route, whose inner constant is a
double exponential) runs on arbitrary-exponent floats from mpmath.

Flags used in reports:

* ``NuGeOne`` - the auxiliary quantity nu in the quasidisk Jacobian-norm
  constant exceeds one for essentially all admissible (alpha, K), which
  makes the printed constant formula meaningless as-is; |1 - nu| is
  substituted and the flag is raised (see the decisions ledger).
* ``ConstantConventionConservative`` - the Orlicz-route prefactor is stated
  inconsistently at two places in the source chain (18 vs 12); the report
  carries both and ``bound`` uses the smaller, always-safe one.
* ``BoundUnderflow`` - ``bound_log`` is finite but exp underflows float64;
  ``bound`` is reported as 0.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from . import fem_oracle
from .conformal import build_disk_quadrature, image_area, pullback_mass_density
from .errors import ConvergenceError, ParameterError
from .orlicz import SampledFunction, luxemburg_norm
from .youngfn import (
    LogPow,
    NumericComplement,
    PsiAlpha,
    PsiEpsAlpha,
    probe_nabla_prime,
)

__all__ = [
    "ScenarioParams",
    "BoundReport",
    "b_qp_disk",
    "mu_pq_disk_bracket",
    "k_esssup",
    "k_esssup_refined",
    "mu_lower_esssup",
    "k_q",
    "mu_lower_kq",
    "log_c_j",
    "mu_lower_quasidisc",
    "gaussian_sweep",
    "fit_loglog_slope",
    "k_phi",
    "mu_lower_orlicz",
    "mu_lower_orlicz_quasidisc",
    "METHODS",
]

FLAG_NU_GE_ONE = "NuGeOne"
FLAG_CONSTANT_CONVENTION = "ConstantConventionConservative"
FLAG_UNDERFLOW = "BoundUnderflow"

METHODS = (
    "esssup",
    "lq",
    "quasidisc",
    "gaussian_sweep",
    "orlicz",
    "orlicz_quasidisc",
)

_LN_PI = math.log(math.pi)


@dataclass(frozen=True)
class ScenarioParams:
    """Exponent bundle (p, q, alpha, K, eps) with the range checks.

    kappa = 1/p - 1/q.  The quasidisk constant K is supplied by the scenario
    (K = 1 for the identity map); only the admissibility inequalities are
    validated here, estimating K itself is out of scope.
    """

    p: float = 1.5
    q: float = 4.0
    alpha: float = 12.0
    K: float = 1.0
    eps: float = 2.0

    @property
    def kappa(self):
        return 1.0 / self.p - 1.0 / self.q

    def validate_pq(self, strict=True):
        if not 1.0 <= self.p < 2.0:
            raise ParameterError(f"p must lie in [1, 2), got {self.p}")
        q_sup = 2.0 * self.p / (2.0 - self.p)
        if strict:
            if not 2.0 < self.q < q_sup:
                raise ParameterError(
                    f"q={self.q} violates 2 < q < 2p/(2-p) = {q_sup:g} "
                    "(compact embedding range)"
                )
        elif not 2.0 < self.q <= q_sup:
            raise ParameterError(
                f"q={self.q} violates 2 < q <= 2p/(2-p) = {q_sup:g}"
            )

    def alpha_sup(self):
        if self.K < 1.0:
            raise ParameterError(f"quasidisk constant must satisfy K >= 1, got {self.K}")
        if self.K == 1.0:
            return math.inf
        return 2.0 * self.K**2 / (self.K**2 - 1.0)

    def validate_quasidisc(self):
        asup = self.alpha_sup()
        if not 2.0 < self.alpha < asup:
            raise ParameterError(
                f"alpha={self.alpha} violates 2 < alpha < 2K^2/(K^2-1) = {asup:g}"
            )

    def validate_jacobian_free(self):
        """Range for the map-independent route: 2q/(q-2) < alpha as well."""
        self.validate_pq(strict=True)
        self.validate_quasidisc()
        alo = 2.0 * self.q / (self.q - 2.0)
        if not self.alpha > alo:
            raise ParameterError(
                f"alpha={self.alpha} violates alpha > 2q/(q-2) = {alo:g}"
            )

    def lebesgue_exponent(self):
        """The density-norm exponent s = q(alpha-2)/(q alpha - 2q - 2 alpha)."""
        denom = self.q * self.alpha - 2.0 * self.q - 2.0 * self.alpha
        if denom <= 0:
            raise ParameterError(
                f"(q, alpha) = ({self.q}, {self.alpha}) give a nonpositive "
                "density-norm exponent; need alpha > 2q/(q-2)"
            )
        return self.q * (self.alpha - 2.0) / denom

    def as_dict(self):
        return {"p": self.p, "q": self.q, "alpha": self.alpha, "K": self.K, "eps": self.eps}


@dataclass
class BoundReport:
    """One analytic lower bound with its provenance.

    ``bound_log`` may be an mpmath float when the value leaves double log
    range; ``bound`` is always a float64 (0.0 with ``BoundUnderflow`` when
    exp underflows).
    """

    method: str
    bound_log: object
    bound: float
    intermediates: dict = field(default_factory=dict)
    validity_flags: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def sound_flags_empty(self):
        return not self.validity_flags


def _finish(method, bound_log, intermediates, flags, params):
    import mpmath as mp

    if isinstance(bound_log, mp.mpf):
        bound = float(mp.exp(bound_log))
    else:
        bound_log = float(bound_log)
        bound = math.exp(bound_log) if bound_log > -745.0 else 0.0
    flags = list(flags)
    if bound == 0.0:
        flags.append(FLAG_UNDERFLOW)
    return BoundReport(
        method=method,
        bound_log=bound_log,
        bound=bound,
        intermediates=intermediates,
        validity_flags=flags,
        params=params,
    )


# ---------------------------------------------------------------------------
# disk Sobolev-Poincare constants
# ---------------------------------------------------------------------------


def b_qp_disk(p, q):
    """Upper estimate of the disk (q,p)-Poincare-Sobolev constant:
    2/pi^kappa * ((1-kappa)/(1/2-kappa))^(1-kappa), kappa = 1/p - 1/q."""
    kappa = 1.0 / p - 1.0 / q
    if not 0.0 <= kappa < 0.5:
        raise ParameterError(
            f"kappa = 1/p - 1/q = {kappa:g} outside [0, 1/2); the constant "
            "blows up at the excluded endpoint"
        )
    return 2.0 / math.pi**kappa * ((1.0 - kappa) / (0.5 - kappa)) ** (1.0 - kappa)


def mu_pq_disk_bracket(p, q):
    """Two-sided bracket for the disk (p,q)-eigenvalue: [B^-p, 2^p B^-p].

    The lower end is the value used in every eigenvalue lower bound.
    """
    b = b_qp_disk(p, q)
    lo = b**-p
    return lo, 2.0**p * lo


# ---------------------------------------------------------------------------
# esssup route
# ---------------------------------------------------------------------------


def k_esssup(cmap, rho, quad):
    """Grid maximum of the mass-weighted pullback rho(phi(z)) J(z).

    This under-estimates the true essential supremum (continuous fixtures,
    so the grid max converges under refinement; see k_esssup_refined).
    """
    return float(pullback_mass_density(rho, cmap, quad).values.max())


def k_esssup_refined(cmap, rho, quad, levels=3):
    """Esssup probe on ``levels`` successively doubled grids.

    Returns (value, diagnostics) where value is the finest-grid maximum and
    diagnostics carries the per-level values, the Aitken-accelerated limit
    when the increments contract, and a stall indicator.
    """
    values = []
    n_r, n_t = quad.n_radial, quad.n_angular
    for i in range(levels):
        q_i = build_disk_quadrature(n_r * 2**i, n_t * 2**i)
        values.append(k_esssup(cmap, rho, q_i))
    diag = {"values": values, "aitken": None, "stalled": False}
    if levels >= 3:
        d1 = values[-2] - values[-3]
        d2 = values[-1] - values[-2]
        if abs(d2) >= abs(d1) and abs(d2) > 1e-14 * abs(values[-1]):
            diag["stalled"] = True
        elif abs(d2 - d1) > 0:
            diag["aitken"] = values[-1] - d2**2 / (d2 - d1)
    return values[-1], diag


def mu_lower_esssup(cmap, rho, quad):
    """Eigenvalue bound mu(disk) / esssup(rho / inverse-Jacobian).

    mu(disk) is the exact Bessel-root reference, not the Poincare bracket.
    """
    kval = k_esssup(cmap, rho, quad)
    mu_disk = fem_oracle.mu_disk_reference()
    bound_log = math.log(mu_disk) - math.log(kval)
    inter = {"k_esssup": kval, "mu_disk": mu_disk}
    return _finish("esssup", bound_log, inter, [], {})


# ---------------------------------------------------------------------------
# Lq route
# ---------------------------------------------------------------------------


def k_q(cmap, rho, q, quad):
    """The q/(q-2)-norm functional of the mass-weighted pullback:

        ( sum_i w_i (rho(phi(z_i)) J(z_i))^(q/(q-2)) )^((q-2)/q)

    computed with a log-space sum so large Jacobians cannot overflow.
    """
    if q <= 2:
        raise ParameterError(f"q must exceed 2, got {q}")
    g = pullback_mass_density(rho, cmap, quad)
    r = q / (q - 2.0)
    log_terms = r * np.log(g.values) + np.log(g.weights)
    return float(math.exp(logsumexp(log_terms) / r))


def mu_lower_kq(cmap, rho, p, q, quad):
    """Eigenvalue bound through the disk (p,q)-eigenvalue and the Lq
    functional.  The report carries both the composed theorem form

        bracket.lo / (2^(2p) pi^(2(2-p)/p) K_q)

    and the sharper direct proof-chain form

        1 / (pi^(2(2-p)/p) B_qp^2 K_q),

    which is the default ``bound``.
    """
    params = ScenarioParams(p=p, q=q)
    params.validate_pq(strict=True)
    b = b_qp_disk(p, q)
    kq = k_q(cmap, rho, q, quad)
    pi_exp = 2.0 * (2.0 - p) / p
    sharper_log = -pi_exp * _LN_PI - 2.0 * math.log(b) - math.log(kq)
    lo, hi = mu_pq_disk_bracket(p, q)
    theorem_log = math.log(lo) - 2.0 * p * math.log(2.0) - pi_exp * _LN_PI - math.log(kq)
    inter = {
        "k_q": kq,
        "b_qp": b,
        "mu_pq_lo": lo,
        "mu_pq_hi": hi,
        "bound_log_theorem_form": theorem_log,
        "bound_log_sharper_form": sharper_log,
    }
    return _finish("lq", sharper_log, inter, [], {"p": p, "q": q})


# ---------------------------------------------------------------------------
# quasidisk (map-independent) route
# ---------------------------------------------------------------------------


def log_c_j(alpha, K, area):
    """log of the quasidisk Jacobian-norm constant, assembled in log space:

        log C_J = 2 log C_alpha + 2 log K + (2/alpha - 1) log pi - log 4
                  + K^2 pi^2 (2 + pi^4)^2 / (2 log 3) + log area,

    with C_alpha = 10^6 / [(alpha-1)(1-nu)]^(1/alpha) and
    nu = 10^(4 alpha) (alpha-2)/(alpha-1) (24 pi^2 K^2)^alpha.

    nu exceeds one for essentially every admissible (alpha, K); |1 - nu| is
    substituted and the NuGeOne flag raised.  Returns
    (log_value, flags, intermediates); the intermediates reproduce the
    composition term by term.
    """
    if K < 1.0:
        raise ParameterError(f"K must be >= 1, got {K}")
    asup = math.inf if K == 1.0 else 2.0 * K**2 / (K**2 - 1.0)
    if not 2.0 < alpha < asup:
        raise ParameterError(
            f"alpha={alpha} violates 2 < alpha < 2K^2/(K^2-1) = {asup:g}"
        )
    if area <= 0:
        raise ParameterError(f"area must be positive, got {area}")

    flags = []
    ln_nu = (
        4.0 * alpha * math.log(10.0)
        + math.log((alpha - 2.0) / (alpha - 1.0))
        + alpha * math.log(24.0 * math.pi**2 * K**2)
    )
    if ln_nu == 0.0:
        raise ParameterError("nu = 1 exactly; the constant is undefined there")
    if ln_nu > 0.0:
        flags.append(FLAG_NU_GE_ONE)
        ln_abs_one_minus_nu = ln_nu + math.log1p(-math.exp(-ln_nu))
    else:
        ln_abs_one_minus_nu = math.log1p(-math.exp(ln_nu))
    ln_c_alpha = 6.0 * math.log(10.0) - (
        math.log(alpha - 1.0) + ln_abs_one_minus_nu
    ) / alpha
    exp_term = K**2 * math.pi**2 * (2.0 + math.pi**4) ** 2 / (2.0 * math.log(3.0))
    # exactly-rounded sums; the area-free part is bit-identical across areas,
    # which carries the linear-in-area identity at full precision (the final
    # float sum itself resolves only to one ulp of the ~5e4 magnitude)
    area_free = math.fsum(
        [
            2.0 * ln_c_alpha,
            2.0 * math.log(K),
            (2.0 / alpha - 1.0) * _LN_PI,
            -math.log(4.0),
            exp_term,
        ]
    )
    value = area_free + math.log(area)
    inter = {
        "ln_nu": ln_nu,
        "ln_abs_one_minus_nu": ln_abs_one_minus_nu,
        "ln_c_alpha": ln_c_alpha,
        "exp_term": exp_term,
        "ln_area": math.log(area),
        "log_c_j_area_free": area_free,
        "log_c_j": value,
    }
    return value, flags, inter


def _log_rho_norm_pullback(cmap, rho, s, quad):
    """log of the L^s(image) norm of rho, by pullback quadrature.

    Uses the density's log-space twin, so sharply concentrated densities
    whose tails underflow linear evaluation stay usable.
    """
    log_vals = np.asarray(rho.log_on_disk(cmap, quad.nodes), dtype=float)
    jac = cmap.jacobian(quad.nodes)
    log_terms = s * log_vals + np.log(jac) + np.log(quad.weights)
    return float(logsumexp(log_terms) / s)


def mu_lower_quasidisc(cmap, rho, params, quad):
    """Map-independent eigenvalue bound for quasidisk images.

    Assembled fully in log space; the resulting bound is astronomically
    small (the Jacobian-norm constant dominates), so ``bound`` generally
    underflows to 0.0 while ``bound_log`` stays finite.
    """
    params.validate_jacobian_free()
    s = params.lebesgue_exponent()
    area = image_area(cmap, quad)
    lcj, flags, inter_cj = log_c_j(params.alpha, params.K, area)
    log_rho_s = _log_rho_norm_pullback(cmap, rho, s, quad)
    kappa = params.kappa
    p, q, alpha = params.p, params.q, params.alpha
    bound_log = (
        -math.log(4.0)
        - (2.0 * (p - 2.0) / p - 2.0 * kappa) * _LN_PI
        - (2.0 - 2.0 * kappa) * math.log((1.0 - kappa) / (0.5 - kappa))
        - (q - 2.0) / q * log_rho_s
        - (2.0 * alpha / (q * (alpha - 2.0))) * lcj
    )
    inter = {
        "s": s,
        "area": area,
        "log_rho_norm_s": log_rho_s,
        "kappa": kappa,
        **inter_cj,
    }
    return _finish("quasidisc", bound_log, inter, flags, params.as_dict())


def gaussian_sweep(n_list, params, cmap, quad):
    """Map-independent bounds for the Gaussian density family e^(-n|x|^2).

    For each sharpness n the density norm is computed by pullback quadrature
    and checked against the closed-form domination (pi/(n s))^(1/s); the
    check allows a 1e-12 relative quadrature slack and raises on violation.
    The emitted bound reports grow like n^((q-2)/(q s)); fit the log-log
    slope with ``fit_loglog_slope``.
    """
    from .densities import GaussianDensity

    params.validate_jacobian_free()
    s = params.lebesgue_exponent()
    reports = []
    for n in n_list:
        if n < 1:
            raise ParameterError(f"gaussian sharpness must be >= 1, got {n}")
        rho_n = GaussianDensity(n)
        report = mu_lower_quasidisc(cmap, rho_n, params, quad)
        log_quad_norm = report.intermediates["log_rho_norm_s"]
        log_dominated = (math.log(math.pi) - math.log(n * s)) / s
        if log_quad_norm > log_dominated + 1e-12:
            raise ConvergenceError(
                f"quadrature norm exceeds the closed-form domination at n={n}: "
                f"{log_quad_norm} > {log_dominated}"
            )
        report.intermediates["n"] = float(n)
        report.intermediates["log_rho_norm_dominated"] = log_dominated
        report.method = "gaussian_sweep"
        reports.append(report)
    return reports


def fit_loglog_slope(n_list, reports):
    """Least-squares slope of bound_log against log n."""
    x = np.log(np.asarray(n_list, dtype=float))
    y = np.asarray([float(r.bound_log) for r in reports])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Orlicz route
# ---------------------------------------------------------------------------


def k_phi(cmap, rho, phi_young, quad):
    """Luxemburg-norm functional of rho against the Jacobian profile:

    the image-domain norm of rho / (Jinv * PhiInv(1/Jinv)) pulled back to
    the disk, where the integrand at node z is
    g(z) = rho(phi(z)) J(z) / PhiInv(J(z)) on the Jacobian-weighted measure.
    """
    jac = cmap.jacobian(quad.nodes)
    vals = np.asarray(rho.on_disk(cmap, quad.nodes), dtype=float)
    g = vals * jac / np.asarray(phi_young.inverse(jac))
    pushed = SampledFunction(g, quad.weights * jac, quad.measure_id + ":image")
    return luxemburg_norm(pushed, phi_young)


def mu_lower_orlicz(cmap, rho, eps, b_m_eps=None, quad=None):
    """Orlicz-route eigenvalue bound 1 / (18 B^2 K_phi).

    ``b_m_eps`` is the disk embedding constant for the compact exponential
    class; it has no known closed form, so it is either pinned by the
    caller or defaulted to the variational lower estimate (which makes the
    reported bound an optimistic version of the analytic one; the report
    records which source was used).  The prefactor 18 is the conservative
    one of the two stated conventions (18 vs 12); both forms are carried.
    """
    if eps <= 1:
        raise ParameterError(f"eps must exceed 1, got {eps}")
    if quad is None:
        quad = build_disk_quadrature(64, 64)
    b_source = "pinned"
    if b_m_eps is None:
        b_m_eps = fem_oracle.b_m2_disk_estimate()
        b_source = "trial_estimate"
    if b_m_eps <= 0:
        raise ParameterError("embedding constant must be positive")
    phi_eps = LogPow(eps)
    kphi = k_phi(cmap, rho, phi_eps, quad)
    bound_log = -math.log(18.0) - 2.0 * math.log(b_m_eps) - math.log(kphi)
    inter = {
        "k_phi": kphi,
        # Luxemburg value; the Orlicz-norm reading lies within [k_phi, 2 k_phi]
        "k_phi_bracket_hi": 2.0 * kphi,
        "b_m_eps": b_m_eps,
        "b_m_eps_source": b_source,
        "bound_log_alt_convention": -math.log(12.0)
        - 2.0 * math.log(b_m_eps)
        - math.log(kphi),
        "poincare_upper_proof": 2.0 * math.sqrt(3.0) * b_m_eps * math.sqrt(kphi),
        "poincare_upper_statement": 3.0 * math.sqrt(2.0) * b_m_eps * math.sqrt(kphi),
    }
    return _finish(
        "orlicz", bound_log, inter, [FLAG_CONSTANT_CONVENTION], {"eps": eps}
    )


def _log_phi_inv_tiny(log_s, phi_eps_exponent=1.0):
    """log PhiInv(s) from log s for s far below double range (mpmath).

    Near zero, u log^eps(u+e) ~ u, so log PhiInv(s) = log s minus an
    exp(log s)-scale correction; evaluated with arbitrary-exponent floats.
    """
    import mpmath as mp

    log_s = mp.mpf(log_s) if not hasattr(log_s, "_mpf_") else log_s
    # log(u+e) = 1 + log1p(u/e);  log PhiInv(s) = log s - eps*log(log(u+e))
    u_over_e = mp.exp(log_s - 1)
    return log_s - phi_eps_exponent * mp.log(1 + mp.log1p(u_over_e))


def mu_lower_orlicz_quasidisc(cmap, rho, params, b_m_eps=None, quad=None):
    """Map-independent Orlicz-route bound (the double-exponential chain).

    Builds the conjugate-power composition for (eps, alpha), probes its
    supermultiplicativity constant, computes the conjugate-norm of the
    transformed density by pullback, and assembles

        log C~ = log 288 + log C_psi - log PhiInv(1 / Psi(T)),
        T = (alpha/(alpha-2))^((alpha-2)/2) * C_J^(alpha/2),

    on mpmath floats: Psi(T) is a double exponential, so even its log
    leaves double range.  The resulting bound_log is an mpmath float;
    ``bound`` underflows to 0.0 by construction.
    """
    import mpmath as mp

    if quad is None:
        quad = build_disk_quadrature(48, 32)
    params.validate_quasidisc()
    if params.eps <= 1:
        raise ParameterError(f"eps must exceed 1, got {params.eps}")
    b_source = "pinned"
    if b_m_eps is None:
        b_m_eps = fem_oracle.b_m2_disk_estimate()
        b_source = "trial_estimate"
    alpha, eps = params.alpha, params.eps

    phi_eps = LogPow(eps)
    psi_eps = PsiEpsAlpha(eps, alpha)
    psi = PsiAlpha(alpha)
    c_psi = probe_nabla_prime(psi_eps)
    if c_psi is None:
        raise ConvergenceError(
            "no supermultiplicativity constant found for the conjugate-power "
            "composition on the probe grid"
        )

    # conjugate-norm of the transformed density, by pullback
    jac = cmap.jacobian(quad.nodes)
    vals = np.asarray(rho.on_disk(cmap, quad.nodes), dtype=float)
    transformed = SampledFunction(
        np.asarray(phi_eps.eval(vals)), quad.weights * jac, quad.measure_id + ":image"
    )
    psi_eps_star = NumericComplement(psi_eps, refine=False)
    norm_psi_star = luxemburg_norm(transformed, psi_eps_star)

    area = image_area(cmap, quad)
    lcj, flags, inter_cj = log_c_j(alpha, params.K, area)

    log_t = 0.5 * (alpha - 2.0) * math.log(alpha / (alpha - 2.0)) + 0.5 * alpha * lcj
    log_psi_t = psi.log_eval_from_log(log_t)  # mpf, astronomically large
    log_phi_inv = _log_phi_inv_tiny(-log_psi_t)  # log PhiInv(1/Psi(T))
    log_c_tilde = mp.log(288.0) + mp.log(c_psi) - log_phi_inv

    # bound_log = log PhiEpsInv(1/norm) - log C~ - 2 log B
    log_phi_eps_inv = float(
        phi_eps.inverse_log(math.log(1.0 / norm_psi_star))
        if norm_psi_star > 0
        else 0.0
    )
    bound_log = mp.mpf(log_phi_eps_inv) - log_c_tilde - 2.0 * mp.log(b_m_eps)

    inter = {
        "c_psi": c_psi,
        "norm_phi_rho_psi_star": norm_psi_star,
        "area": area,
        "log_t": log_t,
        "log_psi_of_t": log_psi_t,
        "log_phi_inv_of_inv_psi": log_phi_inv,
        "log_c_tilde_j": log_c_tilde,
        "log_phi_eps_inv_of_inv_norm": log_phi_eps_inv,
        "b_m_eps": b_m_eps,
        "b_m_eps_source": b_source,
        **inter_cj,
    }
    return _finish(
        "orlicz_quasidisc", bound_log, inter, flags, params.as_dict()
    )
