#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opcut/matfun.hpp"
#include "opcut/rng.hpp"
#include "opcut/seminorms.hpp"

using namespace opcut;

TEST_CASE("test functions: evaluation, class membership, parsing") {
    const TestFunction e = TestFunction::exponential(2.0);
    const TestFunction g = TestFunction::gaussian(0.5);
    const TestFunction pe = TestFunction::poly_exp(2, 1.0);
    CHECK(e(1.5) == doctest::Approx(std::exp(-3.0)));
    CHECK(g(2.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(pe(3.0) == doctest::Approx(9.0 * std::exp(-3.0)));

    // positive, bounded, and x^k f(x) small at large x for every tested k
    for (const TestFunction& f : default_test_functions()) {
        double sup = 0.0;
        for (double x = 0.0; x <= 400.0; x += 0.25) {
            CHECK(f(x) >= 0.0);
            sup = std::max(sup, f(x));
            for (int k = 0; k <= 8; ++k)
                CHECK(std::isfinite(std::pow(x, double(k)) * f(x)));
        }
        CHECK(sup <= 2.0);
        for (int k = 0; k <= 8; ++k)
            CHECK(std::pow(400.0, double(k)) * f(400.0) <= 1e-100);
    }

    CHECK(TestFunction::parse("exp:2").alpha == doctest::Approx(2.0));
    CHECK(TestFunction::parse("gauss").kind == TestFunction::Kind::gaussian);
    const TestFunction parsed = TestFunction::parse("polyexp:3:0.5");
    CHECK(parsed.m == 3);
    CHECK(parsed.alpha == doctest::Approx(0.5));
    CHECK_THROWS_AS(TestFunction::parse("cosine:1"), ConfigError);
    CHECK_THROWS_AS(TestFunction::parse("polyexp"), ConfigError);
    CHECK_THROWS_AS(TestFunction::parse("exp:abc"), ConfigError);
}

TEST_CASE("seminorm: zero observable and the diagonal closed form") {
    const auto s = hermitian_eig(OperatorMatrix::diagonal(std::vector<double>{1, 2, 3}));
    const TestFunction f = TestFunction::exponential(1.0);

    CHECK(quasi_uniform_seminorm(OperatorMatrix(3), s, f, 2).value == 0.0);

    // A = I, k = 1: max over the spectrum of lambda e^{-lambda} = e^{-1}
    const auto v = quasi_uniform_seminorm(OperatorMatrix::identity(3), s, f, 1);
    CHECK(v.value == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(v.left == doctest::Approx(v.right).epsilon(1e-14));

    // diagonal A commuting with S: value = max |A_jj| lambda^k f(lambda)
    const OperatorMatrix a =
        OperatorMatrix::diagonal(std::vector<double>{-0.4, 2.5, 0.3});
    for (int k = 0; k <= 3; ++k) {
        double expected = 0.0;
        const std::vector<double> lam = {1, 2, 3};
        const std::vector<double> av = {0.4, 2.5, 0.3};
        for (int j = 0; j < 3; ++j)
            expected = std::max(expected,
                                av[j] * std::pow(lam[j], double(k)) * f(lam[j]));
        CHECK(quasi_uniform_seminorm(a, s, f, k).value ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("seminorm axioms on random observables") {
    const ModelInstance m = build_model("number-aN-sym", 10, {});
    const auto s = hermitian_eig(m.H0);
    const TestFunction f = TestFunction::gaussian(0.2);
    const OperatorMatrix a = random_matrix(10, 31);
    const OperatorMatrix b = random_matrix(10, 32);

    for (int k = 0; k <= 3; ++k) {
        const double na = quasi_uniform_seminorm(a, s, f, k).value;
        const double nb = quasi_uniform_seminorm(b, s, f, k).value;
        const double nab = quasi_uniform_seminorm(a + b, s, f, k).value;
        CHECK(nab <= na + nb + 1e-9);

        const double scaled =
            quasi_uniform_seminorm(scale({-2.5, 0.0}, a), s, f, k).value;
        CHECK(scaled == doctest::Approx(2.5 * na).epsilon(1e-10));

        const double nadj = quasi_uniform_seminorm(adjoint(a), s, f, k).value;
        CHECK(nadj == doctest::Approx(na).epsilon(1e-10));
    }

    // Hermitian A: the two orderings carry the same norm
    const OperatorMatrix h = random_hermitian(10, 33);
    const auto v = quasi_uniform_seminorm(h, s, f, 2);
    CHECK(v.left == doctest::Approx(v.right).epsilon(1e-10));

    // the one-sided toggle agrees for Hermitian observables
    const auto one_sided = quasi_uniform_seminorm(h, s, f, 2, "H0", true);
    CHECK(one_sided.value == doctest::Approx(v.right).epsilon(1e-12));

    // estimator path agrees with the exact path
    const auto est = quasi_uniform_seminorm(a, s, f, 3, "H0", false, true);
    const auto exact = quasi_uniform_seminorm(a, s, f, 3);
    CHECK(est.value == doctest::Approx(exact.value).epsilon(1e-9));
}

TEST_CASE("seminorm grid: shape and cardinality") {
    const auto s = hermitian_eig(OperatorMatrix::diagonal(std::vector<double>{1, 2, 3, 4}));
    const auto grid =
        seminorm_grid(OperatorMatrix::identity(4), s, default_test_functions(), 4);
    CHECK(grid.size() == default_test_functions().size() * 5);

    const auto single = seminorm_grid(OperatorMatrix::identity(4), s,
                                      {TestFunction::gaussian(1.0)}, 0);
    CHECK(single.size() == 1);
    double fmax = 0.0;
    for (double lam : s.eigenvalues)
        fmax = std::max(fmax, std::exp(-lam * lam));
    CHECK(single[0].value == doctest::Approx(fmax).epsilon(1e-12));

    CHECK_THROWS_AS(seminorm_grid(OperatorMatrix::identity(4), s, {}, 2), BadParams);
}

TEST_CASE("poly-exp ladder: the k+1 value is controlled by lambda_max") {
    const ModelInstance m = build_model("number-aN-sym", 12, {});
    const auto s = hermitian_eig(m.H0);
    const OperatorMatrix a = random_matrix(12, 5);
    const double lam_max = s.eigenvalues.back();
    for (int k = 0; k <= 3; ++k) {
        const double vk =
            quasi_uniform_seminorm(a, s, TestFunction::poly_exp(2, 1.0), k).value;
        const double vk1 =
            quasi_uniform_seminorm(a, s, TestFunction::poly_exp(2, 1.0), k + 1).value;
        CHECK(vk1 <= vk * lam_max + 1e-9);
    }
}

TEST_CASE("equivalence profile: trivial, controlled, and broken domains") {
    // B = 0: both constants are exactly 1 with ell = k
    ModelParams p0;
    p0.alpha = 0.0;
    const ModelInstance m0 = build_model("oscillator-linear", 16, p0);
    const auto prof0 = equivalence_profile(m0, 2, {16, 32});
    CHECK(prof0.ell_found);
    CHECK(prof0.ell == 2);
    for (double v : prof0.c_left) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    for (double v : prof0.c_right) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    // linear coupling: some admissible ell keeps both profiles flat
    const ModelInstance m2 = build_model("oscillator-linear", 16, {});
    const auto prof2 = equivalence_profile(m2, 2, {16, 32, 64, 128});
    CHECK(prof2.ell_found);

    // rank-one projector: the right profile keeps growing
    const ModelInstance m4 = build_model("rank-one", 16, {});
    const auto prof4 = equivalence_profile(m4, 2, {16, 32, 64, 128});
    CHECK_FALSE(prof4.ell_found);

    const ModelInstance m1 = build_model("number-aN", 16, {});
    CHECK_THROWS_AS(equivalence_profile(m1, 2, {16, 32}), NotHermitianH);
    CHECK_THROWS_AS(equivalence_profile(m2, 2, {16}), BadParams);
}
