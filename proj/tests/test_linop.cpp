#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "opcut/eig.hpp"
#include "opcut/json_io.hpp"
#include "opcut/matfun.hpp"
#include "opcut/models.hpp"
#include "opcut/rng.hpp"

using namespace opcut;

namespace {

OperatorMatrix from_rows(std::size_t n, std::initializer_list<cxd> vals) {
    return OperatorMatrix(n, std::vector<cxd>(vals));
}

} // namespace

TEST_CASE("adjoint: transpose, conjugation, Hermitian fixed point") {
    const OperatorMatrix x = from_rows(2, {{0, 0}, {1, 0}, {0, 0}, {0, 0}});
    const OperatorMatrix xt = adjoint(x);
    CHECK(xt(0, 1) == cxd{0.0, 0.0});
    CHECK(xt(1, 0) == cxd{1.0, 0.0});

    OperatorMatrix ii(2);
    ii(0, 0) = ii(1, 1) = cxd{0.0, 1.0};
    const OperatorMatrix iid = adjoint(ii);
    CHECK(iid(0, 0) == cxd{0.0, -1.0});

    const OperatorMatrix m = random_matrix(8, 42);
    const OperatorMatrix herm = scale({0.5, 0.0}, m + adjoint(m));
    CHECK(max_abs_diff(herm, adjoint(herm)) == 0.0);

    // involution
    CHECK(max_abs_diff(adjoint(adjoint(m)), m) == 0.0);
}

TEST_CASE("commutator and anticommutator basics") {
    const OperatorMatrix x = random_matrix(5, 1);
    CHECK(max_abs(commutator(x, x)) <= 1e-14);

    const OperatorMatrix d1 = OperatorMatrix::diagonal(std::vector<double>{1, 2});
    const OperatorMatrix d2 = OperatorMatrix::diagonal(std::vector<double>{3, 4});
    CHECK(max_abs(commutator(d1, d2)) == 0.0);

    const auto [a, ad] = fock_ladder(4);
    const OperatorMatrix c = commutator(a, ad);
    const OperatorMatrix expected =
        OperatorMatrix::diagonal(std::vector<double>{1, 1, 1, -3});
    CHECK(max_abs_diff(c, expected) <= 1e-14);

    CHECK_THROWS_AS(commutator(OperatorMatrix(2), OperatorMatrix(3)),
                    DimensionMismatch);

    const OperatorMatrix y = random_matrix(5, 2);
    CHECK(max_abs_diff(anticommutator(OperatorMatrix::identity(5), y),
                       scale({2.0, 0.0}, y)) <= 1e-15);
    CHECK(max_abs(anticommutator(y, OperatorMatrix(5))) == 0.0);

    // projector: {Q, Q} = 2Q since Q^2 = Q
    OperatorMatrix q(3);
    q(0, 0) = q(1, 1) = cxd{1.0, 0.0};
    CHECK(max_abs_diff(anticommutator(q, q), scale({2.0, 0.0}, q)) == 0.0);
}

TEST_CASE("hermitian_eig: explicit small cases") {
    const auto s1 = hermitian_eig(
        OperatorMatrix::diagonal(std::vector<double>{3, 1, 2}));
    CHECK(s1.eigenvalues == std::vector<double>{1, 2, 3});
    // permutation eigenvectors
    CHECK(std::abs(s1.eigenvectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s1.eigenvectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(s1.eigenvectors(0, 2)) == doctest::Approx(1.0));

    OperatorMatrix sx(2);
    sx(0, 1) = sx(1, 0) = cxd{1.0, 0.0};
    const auto s2 = hermitian_eig(sx);
    CHECK(s2.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s2.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    // eigenvectors (1, -/+1)/sqrt(2) up to phase
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < 2; ++j) {
        const cxd v0 = s2.eigenvectors(0, j);
        const cxd v1 = s2.eigenvectors(1, j);
        const double overlap =
            std::abs(r * std::conj(v0) + (j == 0 ? -r : r) * std::conj(v1));
        CHECK(overlap == doctest::Approx(1.0).epsilon(1e-12));
    }

    const auto [a, ad] = fock_ladder(6);
    const auto s3 = hermitian_eig(ad * a + OperatorMatrix::identity(6));
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(s3.eigenvalues[j] == doctest::Approx(double(j + 1)).epsilon(1e-13));
}

TEST_CASE("hermitian_eig invariants on random matrices") {
    for (std::size_t dim : {8, 32, 64}) {
        const OperatorMatrix h = random_hermitian(dim, dim);
        const auto s = hermitian_eig(h);

        // ascending
        for (std::size_t j = 1; j < dim; ++j)
            CHECK(s.eigenvalues[j] >= s.eigenvalues[j - 1]);

        // unitarity
        const OperatorMatrix gram = adjoint(s.eigenvectors) * s.eigenvectors;
        CHECK(max_abs_diff(gram, OperatorMatrix::identity(dim)) <= 1e-10);

        // reconstruction, relative Frobenius
        const OperatorMatrix rec = matrix_function(s, [](double x) {
            return cxd{x, 0.0};
        });
        CHECK(frobenius_norm(rec - h) <= 1e-10 * frobenius_norm(h));
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    OperatorMatrix x(3);
    x(0, 1) = cxd{5.0, 1.0}; // no conjugate partner
    CHECK_THROWS_AS(hermitian_eig(x), NotHermitian);
}

TEST_CASE("hermiticity report threshold") {
    OperatorMatrix x = random_hermitian(6, 5);
    CHECK(hermiticity(x).is_hermitian);
    x(2, 4) += cxd{1e-6, 0.0};
    const auto rep = hermiticity(x);
    CHECK_FALSE(rep.is_hermitian);
    CHECK(rep.defect == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("matrix_function: identity, exponential decay, inverse") {
    const OperatorMatrix h = random_hermitian(12, 7);
    const auto s = hermitian_eig(h);
    const OperatorMatrix rec =
        matrix_function(s, [](double x) { return cxd{x, 0.0}; });
    CHECK(frobenius_norm(rec - h) <= 1e-10 * frobenius_norm(h));

    const auto sd = hermitian_eig(OperatorMatrix::diagonal(std::vector<double>{1, 2}));
    const OperatorMatrix e = matrix_function(sd, [](double x) {
        return cxd{std::exp(-x), 0.0};
    });
    CHECK(e(0, 0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(e(1, 1).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));

    // x^{-1} against the pinned spectrum >= 1
    const ModelInstance m = build_model("number-aN-sym", 16, {});
    const auto s0 = hermitian_eig(m.H0);
    const OperatorMatrix inv =
        matrix_function(s0, [](double x) { return cxd{1.0 / x, 0.0}; });
    CHECK(max_abs_diff(inv * m.H0, OperatorMatrix::identity(16)) <= 1e-10);

    CHECK_THROWS_AS(matrix_function(sd, [](double) {
        return cxd{std::numeric_limits<double>::infinity(), 0.0};
    }), NonFiniteValue);
}

TEST_CASE("matrix_function respects composition on commuting arguments") {
    const OperatorMatrix h = random_hermitian(10, 3);
    const auto s = hermitian_eig(h);
    const auto f = [](double x) { return cxd{std::exp(-x * x / 50.0), 0.0}; };
    const auto g = [](double x) { return cxd{x / (1.0 + std::abs(x)), 0.0}; };
    const OperatorMatrix lhs = matrix_function(s, f) * matrix_function(s, g);
    const OperatorMatrix rhs =
        matrix_function(s, [&](double x) { return f(x) * g(x); });
    CHECK(max_abs_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("power: repeated squaring") {
    const OperatorMatrix x = random_matrix(6, 9);
    CHECK(max_abs_diff(power(x, 0), OperatorMatrix::identity(6)) == 0.0);

    const OperatorMatrix d = OperatorMatrix::diagonal(std::vector<double>{2, 3});
    const OperatorMatrix d2 = power(d, 2);
    CHECK(d2(0, 0).real() == doctest::Approx(4.0));
    CHECK(d2(1, 1).real() == doctest::Approx(9.0));

    const auto [a, ad] = fock_ladder(4);
    const OperatorMatrix n3 = power(ad * a, 3);
    const OperatorMatrix expected =
        OperatorMatrix::diagonal(std::vector<double>{0, 1, 8, 27});
    CHECK(max_abs_diff(n3, expected) <= 1e-12);

    CHECK(max_abs_diff(power(x, 5), x * x * x * x * x) <= 1e-10);
}

TEST_CASE("operator_norm: explicit values and properties") {
    CHECK(operator_norm(OperatorMatrix::diagonal(std::vector<double>{1, -3, 2})) ==
          doctest::Approx(3.0));
    CHECK(operator_norm(OperatorMatrix(4)) == 0.0);

    // ladder norm: singular values sqrt(1..dim-1)
    const auto [a, ad] = fock_ladder(5);
    CHECK(operator_norm(a) == doctest::Approx(2.0).epsilon(1e-12));

    // submultiplicative on random pairs
    for (int seed = 0; seed < 5; ++seed) {
        const OperatorMatrix x = random_matrix(9, 100 + seed);
        const OperatorMatrix y = random_matrix(9, 200 + seed);
        CHECK(operator_norm(x * y) <=
              operator_norm(x) * operator_norm(y) + 1e-9);
    }

    // Hermitian input: equals max |eigenvalue|
    const OperatorMatrix h = random_hermitian(12, 4);
    const auto s = hermitian_eig(h);
    const double expected =
        std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
    CHECK(operator_norm(h) == doctest::Approx(expected).epsilon(1e-12));

    // estimator agrees with the exact path
    const OperatorMatrix g = random_matrix(20, 77);
    CHECK(operator_norm_est(g) ==
          doctest::Approx(operator_norm(g)).epsilon(1e-9));
}

TEST_CASE("propagator: spectral path") {
    const OperatorMatrix h = random_hermitian(16, 11);
    CHECK(max_abs_diff(propagator(h, 0.0), OperatorMatrix::identity(16)) == 0.0);

    const OperatorMatrix d =
        OperatorMatrix::diagonal(std::vector<double>{M_PI, 2.0 * M_PI});
    const OperatorMatrix u = propagator(d, 1.0);
    CHECK(u(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(u(1, 1).real() == doctest::Approx(1.0).epsilon(1e-13));

    PropagatorInfo info;
    const OperatorMatrix u5 = propagator(h, 5.0, &info);
    CHECK(info.spectral_path);
    CHECK(max_abs_diff(adjoint(u5) * u5, OperatorMatrix::identity(16)) <= 1e-10);
    CHECK(max_abs_diff(u5 * propagator(h, -5.0), OperatorMatrix::identity(16)) <=
          1e-9);
}

TEST_CASE("propagator: scaling-and-squaring path for non-Hermitian input") {
    const ModelInstance m = build_model("number-aN", 12, {});
    const OperatorMatrix h = m.hamiltonian(); // upper triangular
    PropagatorInfo info;
    const OperatorMatrix u = propagator(h, 0.7, &info);
    CHECK_FALSE(info.spectral_path);
    // cross-check against the triangular-calculus route
    const OperatorMatrix ref = matrix_function_general(h, [](double x) {
        return std::exp(cxd{0.0, 0.7 * x});
    });
    CHECK(max_abs_diff(u, ref) <= 1e-9 * max_abs(ref));
}

TEST_CASE("expm: exact nilpotent series and Hermitian cross-check") {
    OperatorMatrix nil(3);
    nil(0, 1) = cxd{2.0, 0.0};
    nil(1, 2) = cxd{-1.0, 0.5};
    OperatorMatrix expected = OperatorMatrix::identity(3) + nil;
    expected = expected + scale({0.5, 0.0}, nil * nil);
    CHECK(max_abs_diff(expm(nil), expected) <= 1e-14);

    const OperatorMatrix h = random_hermitian(10, 5);
    const OperatorMatrix via_expm = expm(scale(cxd{0.0, 1.3}, h));
    const OperatorMatrix via_spectral = propagator(h, 1.3);
    CHECK(max_abs_diff(via_expm, via_spectral) <= 1e-12);
}

TEST_CASE("general_eig reconstructs random and triangular matrices") {
    const OperatorMatrix g = random_matrix(16, 31);
    const GeneralEig ge = general_eig(g);
    OperatorMatrix lam(16);
    for (std::size_t j = 0; j < 16; ++j) lam(j, j) = ge.eigenvalues[j];
    const OperatorMatrix rec = ge.eigenvectors * lam * inverse(ge.eigenvectors);
    CHECK(max_abs_diff(rec, g) <= 1e-9 * max_abs(g));

    // eigenvalues of a triangular matrix are its diagonal (as a multiset)
    const ModelInstance m = build_model("number-aN", 10, {});
    const GeneralEig te = general_eig(m.hamiltonian());
    std::vector<double> read;
    for (const cxd& l : te.eigenvalues) {
        CHECK(std::abs(l.imag()) <= 1e-9);
        read.push_back(l.real());
    }
    std::sort(read.begin(), read.end());
    for (std::size_t j = 0; j < 10; ++j)
        CHECK(read[j] == doctest::Approx(double(j + 1)).epsilon(1e-9));
}

TEST_CASE("schur form: unitary similarity to upper triangular") {
    const OperatorMatrix g = random_matrix(14, 63);
    const SchurForm sf = schur_form(g);
    CHECK(max_abs_diff(adjoint(sf.z) * sf.z, OperatorMatrix::identity(14)) <= 1e-12);
    for (std::size_t i = 0; i < 14; ++i)
        for (std::size_t j = 0; j < i; ++j)
            CHECK(std::abs(sf.t(i, j)) == 0.0);
    CHECK(max_abs_diff(sf.z * sf.t * adjoint(sf.z), g) <= 1e-10 * max_abs(g));
}

TEST_CASE("matrix_function_general: triangular calculus") {
    const ModelInstance m = build_model("number-aN", 16, {});
    const OperatorMatrix h = m.hamiltonian();

    const OperatorMatrix ident =
        matrix_function_general(h, [](double x) { return cxd{x, 0.0}; });
    CHECK(max_abs_diff(ident, h) <= 1e-9 * max_abs(h));

    const OperatorMatrix sq =
        matrix_function_general(h, [](double x) { return cxd{x * x, 0.0}; });
    CHECK(max_abs_diff(sq, h * h) <= 1e-9 * max_abs(h * h));

    // independent route: scaling-and-squaring of -H
    const OperatorMatrix e1 =
        matrix_function_general(h, [](double x) { return cxd{std::exp(-x), 0.0}; });
    const OperatorMatrix e2 = expm(scale({-1.0, 0.0}, h));
    CHECK(max_abs_diff(e1, e2) <= 1e-9 * std::max(1.0, max_abs(e2)));

    // Hermitian input goes through the spectral path
    const OperatorMatrix hh = random_hermitian(8, 2);
    const OperatorMatrix f1 =
        matrix_function_general(hh, [](double x) { return cxd{std::tanh(x), 0.0}; });
    const OperatorMatrix f2 = matrix_function(
        hermitian_eig(hh), [](double x) { return cxd{std::tanh(x), 0.0}; });
    CHECK(max_abs_diff(f1, f2) <= 1e-12);
}

TEST_CASE("lu solve and inverse") {
    const OperatorMatrix a = random_matrix(24, 55);
    const OperatorMatrix ainv = inverse(a);
    CHECK(max_abs_diff(a * ainv, OperatorMatrix::identity(24)) <= 1e-10);

    OperatorMatrix sing(3); // rank deficient
    sing(0, 0) = sing(1, 1) = cxd{1.0, 0.0};
    CHECK_THROWS_AS(inverse(sing), SingularResolvent);
}

TEST_CASE("json round trip is exact") {
    const OperatorMatrix a = random_matrix(7, 99);
    const auto j = to_json(a);
    CHECK(j["dim"] == 7);
    const OperatorMatrix back = matrix_from_json(j);
    CHECK(back.dim() == a.dim());
    CHECK(max_abs_diff(a, back) == 0.0);

    nlohmann::json bad = {{"dim", 3}, {"entries", {{1.0, 0.0}}}};
    CHECK_THROWS_AS(matrix_from_json(bad), IoError);
}

TEST_CASE("degenerate eigenvalues keep solver order") {
    const OperatorMatrix d =
        OperatorMatrix::diagonal(std::vector<double>{2, 2, 1});
    const auto s = hermitian_eig(d);
    CHECK(s.eigenvalues == std::vector<double>{1, 2, 2});
    // the two degenerate columns stay in input order (stable sort)
    CHECK(std::abs(s.eigenvectors(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(s.eigenvectors(1, 2)) == doctest::Approx(1.0));
}
