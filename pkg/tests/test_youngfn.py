import numpy as np
import pytest

from neumann_bounds import youngfn as yf
from neumann_bounds.errors import DomainError, ParameterError

E = np.e


def young_validity_check(young, u_hi=30.0, n=600):
    """Shared numeric validation: zero at zero, monotone, convex, unbounded."""
    assert young.eval(0.0) == 0.0
    grid = np.linspace(0.0, u_hi, n)
    vals = np.asarray(young.eval(grid))
    assert np.all(np.diff(vals) >= -1e-12 * max(1.0, vals.max()))
    d2 = np.diff(vals, 2)
    assert d2.min() >= -1e-10 * max(1.0, vals.max())
    # growth to infinity, compared in log space (linear eval may overflow)
    assert young.log_eval(1e6) > young.log_eval(1e3)


STRICT_KINDS = [
    yf.PowerP(2.0),
    yf.PowerP(2.0, normalized=True),
    yf.PowerP(3.5),
    yf.ExpSquare(),
    yf.ExpPow(2.0),
    yf.LogLinear(),
    yf.LogPow(2.0),
    yf.ExpMinusOne(),
]


@pytest.mark.parametrize("young", STRICT_KINDS, ids=lambda y: y.name)
def test_young_invariants(young):
    young_validity_check(young, u_hi=5.0 if "exp" in young.name else 30.0)


@pytest.mark.parametrize("alpha", [4.0, 6.0, 12.0])
def test_psi_young_invariants(alpha):
    # the conjugate-power composition is convex for alpha >= 4; below that the
    # printed formula dips concave at its positivity knee (see ledger)
    young_validity_check(yf.PsiAlpha(alpha), u_hi=20.0)
    young_validity_check(yf.PsiEpsAlpha(2.0, alpha), u_hi=20.0)


def test_eval_examples():
    assert yf.LogLinear().eval(0.0) == 0.0
    assert yf.ExpSquare().eval(1.0) == pytest.approx(np.e - 1.0, rel=1e-12)
    assert yf.PowerP(2.0, normalized=True).eval(3.0) == pytest.approx(4.5, rel=1e-14)


def test_eval_domain_errors():
    for bad in (-1.0, np.nan, np.inf):
        with pytest.raises(DomainError):
            yf.LogLinear().eval(bad)


def test_log_eval_matches_eval():
    u = np.geomspace(1e-4, 20.0, 200)
    for young in STRICT_KINDS:
        lv = np.asarray(young.log_eval(u))
        direct = np.log(np.asarray(young.eval(u)))
        ok = np.isfinite(direct)
        assert np.max(np.abs(lv[ok] - direct[ok])) < 1e-12


def test_inverse_examples():
    phi = yf.LogLinear()
    assert phi.inverse(0.0) == 0.0
    # bisection oracle for u log(u+e) = 1/pi
    assert phi.inverse(1.0 / np.pi) == pytest.approx(0.2890921358, rel=1e-9)
    assert yf.ExpSquare().inverse(np.e - 1.0) == pytest.approx(1.0, rel=1e-12)


def test_inverse_errors():
    with pytest.raises(DomainError):
        yf.LogLinear().inverse(np.inf)
    with pytest.raises(DomainError):
        yf.LogLinear().inverse(-0.5)


@pytest.mark.parametrize(
    "young,u_hi",
    [
        (yf.LogLinear(), 1e3),
        (yf.LogPow(2.0), 1e3),
        (yf.PowerP(2.7), 1e3),
        (yf.ExpSquare(), 25.0),
        (yf.ExpPow(2.0), 500.0),
        (yf.ExpMinusOne(), 500.0),
    ],
    ids=lambda v: getattr(v, "name", v),
)
def test_inverse_roundtrip(young, u_hi):
    u = np.geomspace(1e-6, u_hi, 120)
    back = np.asarray(young.inverse(np.asarray(young.eval(u))))
    assert np.max(np.abs(back - u) / u) < 1e-8


def test_inverse_tiny_asymptotic_branch():
    phi = yf.LogLinear()
    t = 1e-305
    u = phi.inverse(t)
    # Phi(u) ~ u near zero, so the inverse is t itself to high accuracy
    assert u == pytest.approx(t, rel=1e-10)
    assert phi.eval(u) == pytest.approx(t, rel=1e-10)


def test_inverse_log_branches():
    phi = yf.LogLinear()
    # huge target: x + log(x) = log t
    x = phi.inverse_log(127834.0)
    assert x + np.log(x) == pytest.approx(127834.0, abs=1e-8)
    # consistency with the linear inverse in ordinary range
    for t in (0.3, 1.0, 7.0, 1e5):
        assert np.exp(phi.inverse_log(np.log(t))) == pytest.approx(
            phi.inverse(t), rel=1e-10
        )


class TestComplementary:
    def test_power_pair(self):
        # normalized quadratic is self-dual
        star = yf.PowerP(2.0, normalized=True).complementary()
        assert star.eval(2.0) == pytest.approx(2.0, rel=1e-14)
        # unnormalized square: sup(uv - u^2) = v^2/4
        star2 = yf.PowerP(2.0).complementary()
        assert star2.eval(3.0) == pytest.approx(9.0 / 4.0, rel=1e-14)
        with pytest.raises(ParameterError):
            yf.PowerP(1.0).complementary()

    def test_registered_exp_pair(self):
        tilde = yf.LogLinearTilde()
        star = tilde.complementary()
        assert isinstance(star, yf.ExpMinusOne)
        assert star.eval(1.0) == pytest.approx(np.e - 1.0, rel=1e-14)
        assert isinstance(star.complementary(), yf.LogLinearTilde)

    def test_numeric_matches_closed_form(self):
        # the exact Legendre conjugate of (1+u)log(1+u)-u is e^v - v - 1; the
        # registered pair e^v - 1 is the standard equivalent form and lies
        # above it, which is the safe direction for the Holder machinery
        num = yf.NumericComplement(yf.LogLinearTilde())
        v = np.geomspace(0.05, 5.0, 40)
        exact = np.expm1(v) - v
        got = np.asarray(num.eval(v))
        assert np.all(got <= exact * (1.0 + 1e-12))
        assert np.max((exact - got) / (1.0 + exact)) < 1e-6
        registered = yf.LogLinearTilde().complementary()
        assert np.all(got <= np.asarray(registered.eval(v)))

    @pytest.mark.parametrize(
        "young", [yf.LogLinear(), yf.PowerP(2.0, normalized=True), yf.ExpSquare()],
        ids=lambda y: y.name,
    )
    def test_young_inequality(self, young):
        star = young.complementary()
        u = np.linspace(0.0, 100.0, 41)
        v = np.linspace(0.0, 100.0, 41)
        uu, vv = np.meshgrid(u, v)
        with np.errstate(over="ignore"):
            rhs = np.asarray(young.eval(uu)) + np.asarray(star.eval(vv.ravel())).reshape(vv.shape)
        assert np.all(uu * vv <= rhs + 1e-9 * (1.0 + uu * vv))

    @pytest.mark.parametrize(
        "young", [yf.LogLinear(), yf.LogLinearTilde(), yf.PowerP(3.0)],
        ids=lambda y: y.name,
    )
    def test_biconjugation(self, young):
        bic = yf.NumericComplement(yf.NumericComplement(young))
        u = np.geomspace(1e-2, 1e2, 50)
        orig = np.asarray(young.eval(u))
        got = np.asarray(bic.eval(u))
        assert np.max(np.abs(got - orig) / np.maximum(orig, 1e-30)) < 1e-4


class TestProbes:
    def test_delta_prime_log_linear(self):
        sup = yf.probe_delta_prime(yf.LogLinear())
        assert sup <= 2.0 + 1e-9
        assert yf.LogLinear().delta_prime_constant == 2.0

    def test_delta_prime_power_exact(self):
        sup = yf.probe_delta_prime(yf.PowerP(2.0, normalized=True))
        assert sup == pytest.approx(2.0, rel=1e-12)

    def test_delta_prime_exponential_unbounded(self):
        sup = yf.probe_delta_prime(yf.ExpSquare())
        assert sup > 1e6

    def test_nabla_prime_expsquare_restricted(self):
        c = yf.probe_nabla_prime(yf.ExpSquare(), grid=np.geomspace(1.0, 10.0, 40))
        assert c is not None and c <= 2.0

    def test_nabla_prime_psi(self):
        c = yf.probe_nabla_prime(yf.PsiAlpha(4.0))
        assert c is not None and np.isfinite(c)

    def test_nabla_prime_log_linear_grows_with_scale(self):
        # submultiplicative kinds fail the global condition: the per-grid
        # constant keeps growing as the grid extends (None only shows up once
        # the constant cap is exhausted)
        phi = yf.LogLinear()
        c1 = yf.probe_nabla_prime(phi, grid=np.geomspace(1e-3, 1e3, 40))
        c2 = yf.probe_nabla_prime(phi, grid=np.geomspace(1e-3, 1e9, 40))
        c3 = yf.probe_nabla_prime(phi, grid=np.geomspace(1e-3, 1e15, 40))
        assert c1 < c2 < c3
        assert yf.probe_nabla_prime(phi, grid=np.geomspace(1e-3, 1e9, 40), c_max=1.5) is None

    def test_essentially_greater(self):
        ks = [0.5, 1.0, 2.0]
        assert yf.essentially_greater(yf.ExpPow(2.0), yf.ExpSquare(), ks, 1e3)
        assert not yf.essentially_greater(yf.ExpSquare(), yf.ExpSquare(), [1.0], 1e3)
        # the log pair separates like 1/log(u): needs the loosened tolerance
        assert yf.essentially_greater(yf.LogLinear(), yf.LogPow(2.0), ks, 1e8, tol=0.25)
        assert not yf.essentially_greater(yf.LogPow(2.0), yf.LogLinear(), ks, 1e6, tol=0.25)


@pytest.mark.parametrize("alpha", [3.0, 4.0, 12.0])
def test_psi_composition_identity(alpha):
    # Psi(Phi(u / PhiInv(u))) == (2/alpha) u^((alpha-2)/2) on [1, 1e3]
    phi = yf.LogLinear()
    psi = yf.PsiAlpha(alpha)
    u = np.geomspace(1.0, 1e3, 64)
    w = np.asarray(phi.inverse(u))
    lhs = np.asarray(psi.eval(np.asarray(phi.eval(u / w))))
    rhs = (2.0 / alpha) * u ** ((alpha - 2.0) / 2.0)
    assert np.max(np.abs(lhs - rhs) / rhs) < 1e-6


def test_psi_eps_variant_uses_eps_root():
    # the eps-variant inner exponent is w^(1/eps): cross-check one point by hand
    eps, alpha = 2.0, 4.0
    psi = yf.PsiEpsAlpha(eps, alpha)
    phi_eps = yf.LogPow(eps)
    u = 50.0
    w = phi_eps.inverse(u)
    expected = (2.0 / alpha) * (w * (np.exp(w ** (1.0 / eps)) - np.e)) ** ((alpha - 2) / 2)
    assert psi.eval(u) == pytest.approx(expected, rel=1e-10)


def test_psi_log_eval_from_log_matches_direct():
    psi = yf.PsiAlpha(4.0)
    for u in (10.0, 100.0, 5e3):
        direct = psi.log_eval(u)
        via_log = float(psi.log_eval_from_log(np.log(u)))
        assert via_log == pytest.approx(direct, rel=1e-9)


def test_psi_log_eval_from_log_huge():
    import mpmath as mp

    psi = yf.PsiAlpha(4.0)
    g = psi.log_eval_from_log(127834.0)
    assert mp.isfinite(g) and g > mp.mpf(10) ** 55000


def test_table_young():
    u = np.linspace(0.0, 4.0, 9)
    tab = yf.TableYoung(u, u**2)
    assert tab.eval(2.0) == pytest.approx(4.0, rel=1e-10)
    assert tab.eval(10.0) > tab.eval(4.0)
    young_validity_check(tab, u_hi=4.0, n=9)
    with pytest.raises(ParameterError):
        yf.TableYoung([0.0, 1.0, 2.0], [0.0, 1.0, 0.5])


def test_constructor_parameter_errors():
    with pytest.raises(ParameterError):
        yf.PowerP(0.5)
    with pytest.raises(ParameterError):
        yf.ExpPow(1.0)
    with pytest.raises(ParameterError):
        yf.PsiAlpha(2.0)
    with pytest.raises(ParameterError):
        yf.PsiEpsAlpha(1.0, 4.0)
