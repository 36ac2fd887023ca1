#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opcut/cutoff.hpp"
#include "opcut/matfun.hpp"
#include "opcut/rng.hpp"

#include "oracles/oracles.hpp"

using namespace opcut;

namespace {

SpectralDecomposition diag_spectrum(std::initializer_list<double> vals) {
    return hermitian_eig(OperatorMatrix::diagonal(std::vector<double>(vals)));
}

} // namespace

TEST_CASE("spectral projection: explicit cases and the inclusive tie rule") {
    const auto s = diag_spectrum({1, 2, 3, 4});
    const OperatorMatrix q = spectral_projection(s, 2.5);
    CHECK(max_abs_diff(q, OperatorMatrix::diagonal(std::vector<double>{1, 1, 0, 0})) ==
          0.0);

    CHECK(max_abs_diff(spectral_projection(s, 4.0), OperatorMatrix::identity(4)) ==
          0.0);
    CHECK(max_abs(spectral_projection(s, 0.5)) == 0.0);

    // eigenvalues within the tie window of L are included
    const auto st = diag_spectrum({1, 2, 2, 5});
    CHECK(max_abs_diff(spectral_projection(st, 2.0),
                       OperatorMatrix::diagonal(std::vector<double>{1, 1, 1, 0})) ==
          0.0);
}

TEST_CASE("cutoff family invariants on a dense eigenbasis") {
    // random Hermitian with shifted spectrum: the eigenvectors are dense, so
    // the projector identities are exercised away from the diagonal case
    OperatorMatrix h = random_hermitian(24, 17);
    const auto raw = hermitian_eig(h);
    const double shift = 1.0 - raw.eigenvalues.front();
    h = h + scale({shift, 0.0}, OperatorMatrix::identity(24));
    const auto s = hermitian_eig(h);

    std::vector<double> grid;
    for (std::size_t j = 2; j + 2 < 24; j += 4)
        grid.push_back(0.5 * (s.eigenvalues[j] + s.eigenvalues[j + 1]));
    const CutoffFamily fam = build_cutoff_family(s, grid);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const OperatorMatrix& q = fam.projector_at(i);
        CHECK(max_abs_diff(q * q, q) <= 1e-12);
        CHECK(max_abs_diff(q, adjoint(q)) <= 1e-12);
        CHECK(max_abs(commutator(q, h)) <= 1e-12 * max_abs(h));
        // nesting
        for (std::size_t j = i; j < grid.size(); ++j)
            CHECK(max_abs_diff(fam.projector_at(i) * fam.projector_at(j),
                               fam.projector_at(i)) <= 1e-12);
    }
    CHECK_THROWS_AS(build_cutoff_family(s, {3.0, 2.0}), BadParams);
}

TEST_CASE("cutoff hamiltonian forms agree") {
    const ModelInstance m = build_model("number-aN-sym", 16, {});
    const auto s = hermitian_eig(m.H0);

    // B = 0: H_L = H0 Q_L
    ModelInstance m0 = m;
    m0.B = OperatorMatrix(16);
    const OperatorMatrix q = spectral_projection(s, 8.5);
    CHECK(max_abs_diff(cutoff_hamiltonian(m0, q), m.H0 * q) <= 1e-13);

    // full projector: H_L = H
    CHECK(max_abs_diff(cutoff_hamiltonian(m, OperatorMatrix::identity(16)),
                       m.hamiltonian()) == 0.0);

    // Hermitian B gives Hermitian H_L
    CHECK(hermiticity(cutoff_hamiltonian(m, q)).is_hermitian);

    // a non-projector is rejected
    OperatorMatrix bad = q;
    bad(0, 0) = cxd{0.5, 0.0};
    CHECK_THROWS_AS(cutoff_hamiltonian(m, bad), ProjectionMismatch);
}

TEST_CASE("ladder model: H_L equals H Q_L exactly") {
    for (int n : {2, 3}) {
        ModelParams p;
        p.n = n;
        const ModelInstance m = build_model("number-aN", 32, p);
        const auto s = hermitian_eig(m.H0);
        for (double L : {5.5, 12.5, 20.5}) {
            const OperatorMatrix q = spectral_projection(s, L);
            CHECK(max_abs_diff(cutoff_hamiltonian(m, q), m.hamiltonian() * q) <=
                  1e-11);
        }
    }
}

TEST_CASE("tail norm: explicit value, bound, monotonicity") {
    const auto s = diag_spectrum({1, 2, 3, 4, 5});
    CHECK(tail_norm(s, 3.0, 2) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(tail_norm(s, 5.0, 2) == 0.0);

    const ModelInstance m = build_model("number-aN-sym", 32, {});
    const auto s0 = hermitian_eig(m.H0);
    double prev_l = std::numeric_limits<double>::infinity();
    for (double L : {2.5, 7.5, 15.5, 23.5}) {
        for (unsigned ell : {1u, 2u, 3u}) {
            const double v = tail_norm(s0, L, ell);
            CHECK(v <= std::pow(L, -double(ell)) + 1e-12);
            CHECK(v == doctest::Approx(oracle::tail_max(s0.eigenvalues, L, ell))
                           .epsilon(1e-14));
        }
        const double v1 = tail_norm(s0, L, 1);
        CHECK(v1 <= prev_l + 1e-15); // nonincreasing in L
        prev_l = v1;
        // nonincreasing in ell
        CHECK(tail_norm(s0, L, 3) <= tail_norm(s0, L, 2) + 1e-15);
        CHECK(tail_norm(s0, L, 2) <= tail_norm(s0, L, 1) + 1e-15);
    }

    CHECK_THROWS_AS(tail_norm(s0, 4.0, 0), BadParams);
    const auto below = diag_spectrum({0.5, 2.0});
    CHECK_THROWS_AS(tail_norm(below, 1.0, 1), SpectrumBelowOne);
}

TEST_CASE("band projector") {
    const auto s = diag_spectrum({1, 2, 3, 4, 5, 6, 7, 8});
    const OperatorMatrix p = band_projector(s, 3.0, 2);
    CHECK(max_abs_diff(
              p, OperatorMatrix::diagonal(std::vector<double>{0, 0, 0, 1, 1, 0, 0, 0})) ==
          0.0);

    // n reaching past the spectrum top: I - Q_L
    const OperatorMatrix rest = band_projector(s, 5.0, 10);
    CHECK(max_abs_diff(rest, OperatorMatrix::identity(8) -
                                 spectral_projection(s, 5.0)) == 0.0);

    const ModelInstance m = build_model("number-aN", 20, {});
    const auto s0 = hermitian_eig(m.H0);
    const OperatorMatrix pb = band_projector(s0, 6.0 + m.shift, 3);
    CHECK(max_abs_diff(pb * pb, pb) <= 1e-12);
    CHECK(max_abs_diff(pb, adjoint(pb)) <= 1e-12);

    CHECK_THROWS_AS(band_projector(s, 3.0, 0), BadParams);
}

TEST_CASE("ladder commutation identities") {
    const ModelInstance m = build_model("number-aN", 8, {});
    CHECK(ladder_commutation_check(m, 3.0) <= 1e-12);

    // L at the top: both sides equal a itself
    CHECK(ladder_commutation_check(m, 7.0) <= 1e-12);

    CHECK(ladder_level_commutation_check(m) <= 1e-12);

    const ModelInstance m2 = build_model("oscillator-linear", 8, {});
    CHECK_THROWS_AS(ladder_commutation_check(m2, 3.0), WrongModelFamily);
}

TEST_CASE("default cutoff grid stays in the lower half and avoids ties") {
    const ModelInstance m = build_model("number-aN-sym", 32, {});
    const auto s = hermitian_eig(m.H0);
    const auto grid = default_cutoff_grid(s, 12);
    CHECK(grid.size() <= 12);
    CHECK(grid.size() >= 4);
    const double top = s.eigenvalues[16 - 1];
    for (double L : grid) {
        CHECK(L <= top);
        for (double lam : s.eigenvalues) CHECK(std::abs(lam - L) > 1e-6);
    }
    // ascending
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

    const auto full = default_cutoff_grid(s, 12, GridRule::midpoints, true);
    CHECK(full.back() > top); // the override opens the upper half

    const auto logged = default_cutoff_grid(s, 8, GridRule::midpoints_log);
    CHECK(logged.front() == grid.front());
    CHECK(logged.back() == grid.back());
}
