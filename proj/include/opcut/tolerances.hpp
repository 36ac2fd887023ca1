#ifndef OPCUT_TOLERANCES_HPP
#define OPCUT_TOLERANCES_HPP

namespace opcut {

// Every numeric comparison in the library and in the test surface goes
// through one of these named tolerances.  Studies may override a copy;
// the defaults below are the reference values.
struct Tolerances {
    double herm = 1e-12;            // hermiticity defect, relative to (1 + maxabs)
    double unitary = 1e-10;         // maxabs of U^dag U - I
    double recon = 1e-10;           // relative Frobenius error of U L U^dag
    double proj = 1e-12;            // projector idempotency / symmetry / nesting
    double cutoff_identity = 1e-11; // H_L = H0 Q + Q B Q cross-check
    double eig_tie = 1e-12;         // eigenvalues within this of L count as <= L
    double quad_target = 1e-9;      // panel-doubling agreement target
    int    quad_max_panels = 16384; // 2^14, refinement budget
    double fit_floor = 1e-13;       // log-log fit uses points with value above this
    double verdict_final = 1e-3;    // "converged" requires final value below this
    double verdict_stability = 0.01;   // <1% change on dimension doubling
    double prop60_uniformity = 0.2;    // max/min spread of the bound across L
    double eigvec_cond_limit = 1e6;    // general matrix functions refuse beyond this
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tols{};
    return tols;
}

} // namespace opcut

#endif
