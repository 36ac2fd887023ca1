#ifndef OPCUT_SEMINORMS_HPP
#define OPCUT_SEMINORMS_HPP

#include <string>
#include <vector>

#include "opcut/eig.hpp"
#include "opcut/models.hpp"

namespace opcut {

// Member of the damping class F: positive, bounded, and decaying faster
// than any inverse power, so that lambda^k f(lambda) stays finite on any
// spectrum for every k.
struct TestFunction {
    enum class Kind { exponential, gaussian, poly_exp };
    Kind kind = Kind::exponential;
    double alpha = 1.0;
    int m = 0; // polynomial degree for poly_exp

    double operator()(double x) const;
    std::string kind_name() const;   // "exp" | "gauss" | "polyexp"
    std::string params_string() const;

    static TestFunction exponential(double alpha = 1.0) {
        return {Kind::exponential, alpha, 0};
    }
    static TestFunction gaussian(double alpha = 1.0) {
        return {Kind::gaussian, alpha, 0};
    }
    static TestFunction poly_exp(int m, double alpha = 1.0) {
        return {Kind::poly_exp, alpha, m};
    }
    // "exp:1", "gauss:0.5", "polyexp:2:1"
    static TestFunction parse(const std::string& spec);
};

// Small spanning default: three qualitatively different decays.  The class
// F is infinite, so every convergence verdict is "for all tested (f, k)".
const std::vector<TestFunction>& default_test_functions();

struct SeminormValue {
    TestFunction f;
    int k = 0;
    std::string reference; // "H0" or "H"
    double left = 0.0;     // ||S^k A f(S)||
    double right = 0.0;    // ||f(S) A S^k||
    double value = 0.0;    // max(left, right)
};

// ||A||_*^{f,k} with respect to the generator decomposed in `s`.
// `right_term_only` keeps just ||f(S) A S^k|| (enough for symmetric A);
// off by default.  `estimate` switches the inner norm to the iterative
// estimator the studies use.
SeminormValue quasi_uniform_seminorm(const OperatorMatrix& a,
                                     const SpectralDecomposition& s,
                                     const TestFunction& f, int k,
                                     const std::string& reference = "H0",
                                     bool right_term_only = false,
                                     bool estimate = false,
                                     const Tolerances& tol = default_tolerances());

// All (f, k) pairs with k = 0..k_max, in deterministic order (f outer).
std::vector<SeminormValue> seminorm_grid(const OperatorMatrix& a,
                                         const SpectralDecomposition& s,
                                         const std::vector<TestFunction>& f_set,
                                         int k_max,
                                         const std::string& reference = "H0",
                                         bool estimate = false,
                                         const Tolerances& tol = default_tolerances());

struct EquivalenceProfile {
    unsigned k = 0;
    unsigned ell = 0;             // exponent found by the search, or k+5 if none
    bool ell_found = false;
    std::vector<std::size_t> dims;
    std::vector<double> c_left;   // ||H^k H0^{-ell}||
    std::vector<double> c_right;  // ||H0^k H^{-ell}||
    std::vector<double> shifts;   // shift applied to H per dim
};

// Searches the smallest ell <= k+4 for which both cross-norm profiles stay
// flat across the dimension sweep (top-octave variation below 10%); a
// profile that keeps growing for every admissible ell is evidence that the
// smooth domains of H and H0 differ.
EquivalenceProfile equivalence_profile(const ModelInstance& prototype, unsigned k,
                                       const std::vector<std::size_t>& dims);

} // namespace opcut

#endif
