#ifndef OPCUT_ORACLES_HPP
#define OPCUT_ORACLES_HPP

// Brute-force and closed-form reference values, kept apart from the library
// proper: everything here is computed from scalar spectral data (the
// commuting model is simultaneously diagonal), so it can cross-check the
// operator-algebra implementation.  Matrix-valued references are built
// entrywise from scalar phases; only the final norm is shared with the
// library.

#include "opcut/harness.hpp"
#include "opcut/matrix.hpp"
#include "opcut/seminorms.hpp"

namespace opcut::oracle {

// max over eigenvalues above L of lambda^{-ell}
double tail_max(const std::vector<double>& spectrum, double L, unsigned ell,
                double tie = 1e-12);

// Scalar data of the commuting model: lam_j = j+1, mu_j = lam_j + g(lam_j).
struct CommutingModel {
    std::size_t dim = 0;
    double coupling = 1.0;
    std::vector<double> lam;
    std::vector<double> mu;

    static CommutingModel make(std::size_t dim, double coupling = 1.0);
    bool inside(std::size_t j, double L, double tie = 1e-12) const {
        return lam[j] <= L + tie;
    }
};

// ||f(H0)(B - Q B Q) H0^k||
double lemma2_2_value(const CommutingModel& m, const TestFunction& f, int k,
                      double L);
// ||H_L - H0||^{f,k} with B = 0
double c1_value(const CommutingModel& m, const TestFunction& f, int k, double L);
// || e^{itH_L} - e^{itH0} ||^{f,k} with B = 0
double c2_value(const CommutingModel& m, const TestFunction& f, int k, double L,
                double t);
// alpha_L^t(A) - alpha^t(A) with B = 0, entrywise phases on a given A
OperatorMatrix c3_gap(const CommutingModel& m, const OperatorMatrix& a, double L,
                      double t);
// i [A, H_L - H] entrywise
OperatorMatrix derivation_gap(const CommutingModel& m, const OperatorMatrix& a,
                              double L);
// ||H0^{-s}(H_L - H)H0^k||; arithmetic mirrors the diagonal evaluation path
// so the frozen fixture matches byte for byte
double lemma59_value(const CommutingModel& m, unsigned s, int k, double L);
// integral_0^T ||f(H0) e^{iH_L u} H0^s|| du = T * max f(lam) lam^s
double prop60_value(const CommutingModel& m, const TestFunction& f, unsigned s,
                    double T);
// ||f(H)(H_L^ell - H^ell)H^k||
double lemma61_value(const CommutingModel& m, const TestFunction& f, unsigned ell,
                     int k, double L);
// beta_L^t(A) - alpha^t(A) (derivative order d), entrywise
OperatorMatrix beta_gap(const CommutingModel& m, const OperatorMatrix& a, double L,
                        double t, unsigned d);
// ||H^n (V_L^t - e^{iHt}) e_j|| for the basis vector j (derivative order d)
double vector_gap(const CommutingModel& m, std::size_t j, double L, double t,
                  unsigned n, unsigned d);
// The Leibniz correction, entrywise
OperatorMatrix leibniz_correction_gap(const CommutingModel& m,
                                      const OperatorMatrix& a, double L);
// ||B (H0 - i lambda)^{-1}||
double relative_bound_value(const CommutingModel& m, double lambda);
// ||H0^k H^{-ell}||
double cross_bound_value(const CommutingModel& m, unsigned k, unsigned ell);

// Quasi-uniform seminorm of an entrywise-built gap against the diagonal
// spectrum: weights applied entrywise, final norm shared with the library.
double seminorm_of(const OperatorMatrix& gap, const std::vector<double>& spectrum,
                   const TestFunction& f, int k);

// Full oracle-path run of the lemma59 study on the commuting model; emits a
// report with the same shape as run_study for the golden fixture.
ConvergenceReport lemma59_report(const StudyConfig& cfg);

} // namespace opcut::oracle

#endif
