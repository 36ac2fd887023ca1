#ifndef OPCUT_MODELS_HPP
#define OPCUT_MODELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "opcut/matrix.hpp"

namespace opcut {

// Truncated annihilation/creation pair: a[n-1, n] = sqrt(n).
struct LadderPair {
    OperatorMatrix a;
    OperatorMatrix a_dagger;
};

LadderPair fock_ladder(std::size_t dim);

// Position and momentum built from the ladder pair:
// q = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2).
OperatorMatrix position_operator(std::size_t dim);
OperatorMatrix momentum_operator(std::size_t dim);

struct ModelParams {
    int n = 2;             // ladder power for number-aN variants
    double alpha = 1.0;    // linear coupling for oscillator-linear
    double coupling = 1.0; // bound of g for the commuting model
};

// A named (H0, B) pair on a truncated space.  H0 is stored with the shift
// already applied, so spectrum(H0) >= 1 by construction.
struct ModelInstance {
    std::string name;
    std::size_t dim = 0;
    OperatorMatrix H0;
    OperatorMatrix B;
    double shift = 0.0;    // added to the raw H0
    bool b_hermitian = true;
    bool number_family = false; // H0 = a^dag a + 1 with unit-spaced levels
    ModelParams params;
    std::string description;

    OperatorMatrix hamiltonian() const { return H0 + B; }
};

struct CatalogEntry {
    std::string name;
    std::string params_schema;
    std::string description;
};

const std::vector<CatalogEntry>& model_catalog();

// Catalog:
//   number-aN          H0 = N + 1, B = a^n          (B non-Hermitian)
//   number-aN-sym      H0 = N + 1, B = a^n + (a^dag)^n
//   oscillator-linear  H0 = p^2 + q^2, B = alpha q
//   oscillator-minus-q2  H0 = p^2 + q^2, B = -q^2
//   rank-one           H0 = N + 1, B = |f><f|, f_n ~ 1/(n+1)
//   commuting          H0 = N + 1, B = c/(1 + H0)   (bounded, [B, H0] = 0)
ModelInstance build_model(const std::string& name, std::size_t dim,
                          const ModelParams& params = {});

// The bounded g of the commuting model, shared with its scalar oracles.
double commuting_g(double x, double coupling);

struct RelativeBoundEstimate {
    std::vector<std::pair<double, double>> a_values; // (lambda, a(lambda))
    double a_inf = 0.0;   // a at the largest lambda sampled
    double b_witness = 0.0; // lambda_max * a(lambda_max)
};

// a(lambda) = ||B (H0 - i lambda)^{-1}|| over an ascending positive grid.
RelativeBoundEstimate relative_bound_profile(const ModelInstance& m,
                                             const std::vector<double>& lambda_grid);

struct CrossBoundProfile {
    unsigned k = 0, ell = 0;
    std::vector<std::size_t> dims;
    std::vector<double> values; // ||H0^k H^{-ell}|| per dim
    std::vector<double> shifts; // shift applied to H per dim
};

// ||H0^k H^{-ell}|| across truncation dimensions; a flat profile is
// evidence that powers of H0 are controlled by powers of H.
CrossBoundProfile cross_bound_profile(const ModelInstance& prototype, unsigned k,
                                      unsigned ell,
                                      const std::vector<std::size_t>& dims);

} // namespace opcut

#endif
