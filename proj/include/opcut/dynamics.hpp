#ifndef OPCUT_DYNAMICS_HPP
#define OPCUT_DYNAMICS_HPP

#include <optional>

#include "opcut/cutoff.hpp"
#include "opcut/matfun.hpp"
#include "opcut/models.hpp"
#include "opcut/seminorms.hpp"

namespace opcut {

// Model + cutoff family + cached decompositions; the unit every study
// iterates over.  Immutable after construction.
struct DynamicsScene {
    ModelInstance model;
    CutoffFamily cutoffs;
    SpectralDecomposition h0_eig;
    std::optional<SpectralDecomposition> h_eig; // absent when B is non-Hermitian
    OperatorMatrix hamiltonian;

    static DynamicsScene build(ModelInstance m, const std::vector<double>& L_grid,
                               const Tolerances& tol = default_tolerances());
};

// e^{iHt} A e^{-iHt}
OperatorMatrix heisenberg(const OperatorMatrix& h, const OperatorMatrix& a, double t,
                          const Tolerances& tol = default_tolerances());
OperatorMatrix heisenberg(const SpectralDecomposition& h_eig, const OperatorMatrix& a,
                          double t);

// d^n/dt^n of the Heisenberg evolution, computed analytically.
OperatorMatrix heisenberg_derivative(const SpectralDecomposition& h_eig,
                                     const OperatorMatrix& a, double t, unsigned n);

// e^{iH_L t} - e^{iHt}
OperatorMatrix propagator_gap_direct(const DynamicsScene& sc, std::size_t l_idx,
                                     double t,
                                     const Tolerances& tol = default_tolerances());

// Same gap through its integral representation
//   i * integral_0^t e^{iH_L(t-s)} (H_L - H) e^{iHs} ds
// with composite Gauss-Legendre panels doubled to agreement.
OperatorMatrix propagator_gap_integral(const DynamicsScene& sc, std::size_t l_idx,
                                       double t, int points = 8,
                                       int initial_panels = 1,
                                       const Tolerances& tol = default_tolerances(),
                                       int* panels_used = nullptr);

// ||H0^{-s} (H_L - H) H0^k||
double generator_gap_norm(const DynamicsScene& sc, std::size_t l_idx, unsigned s,
                          unsigned k, const Tolerances& tol = default_tolerances());

// integral_0^T ||f(H0) e^{iH_L u} H0^s|| du
double evolution_bound_integral(const DynamicsScene& sc, std::size_t l_idx,
                                const TestFunction& f, unsigned s, double T,
                                int points = 8, int initial_panels = 1,
                                const Tolerances& tol = default_tolerances());

// Uniform bound for the ladder model: lhs/rhs of
//   ||f(H)(H + (e^{iH tau}-1) a^n P_{L,n})|| <= ||f(H) H|| + 2 ||f(H) a^n||
// at a cutoff given in number-operator labels.
struct LadderBound {
    double lhs = 0.0;
    double rhs = 0.0;
};
LadderBound ladder_bound_check(const ModelInstance& m, const TestFunction& f,
                               double L_label, double tau,
                               const Tolerances& tol = default_tolerances());

// ||f(H) (H_L^ell - H^ell) H^k||
double power_gap_norm(const DynamicsScene& sc, std::size_t l_idx,
                      const TestFunction& f, unsigned ell, unsigned k,
                      const Tolerances& tol = default_tolerances());

// C_1 = [X, Y], C_{j+1} = [X, C_j]; returns C_m.
OperatorMatrix iterated_commutator(const OperatorMatrix& x, const OperatorMatrix& y,
                                   unsigned m);

// Smallest m with maxabs(C_{m+1}) <= 1e-10 * maxabs(C_1), if any.
std::optional<unsigned> nilpotency_order(const OperatorMatrix& x,
                                         const OperatorMatrix& y, unsigned max_m);

// Truncated conjugation series
//   sum_{j=0}^m (i dt)^j / j! * C_j,   C_0 = Y
// valid exactly when the commutator chain terminates at order m+1.
OperatorMatrix adjoint_series(const OperatorMatrix& x, const OperatorMatrix& y,
                              double dt, unsigned m);

// V_L^t = Q_L e^{iHt} Q_L and its analytic time derivatives
// Q_L (iH)^n e^{iHt} Q_L.
OperatorMatrix compressed_propagator(const DynamicsScene& sc, std::size_t l_idx,
                                     double t, unsigned deriv_order = 0);

// beta_L^t(A) = V_L^t A V_L^{-t} and its analytic time derivatives.
OperatorMatrix compressed_heisenberg(const DynamicsScene& sc, std::size_t l_idx,
                                     const OperatorMatrix& a, double t,
                                     unsigned deriv_order = 0);

// delta(A) = i [A, H_gen]
OperatorMatrix derivation(const OperatorMatrix& h_gen, const OperatorMatrix& a);

// eta_L(A) = Q_L delta(A) Q_L with delta taken against the full H.
OperatorMatrix compressed_derivation(const ModelInstance& m, const OperatorMatrix& q_l,
                                     const OperatorMatrix& a);

// The correction that restores the Leibniz rule:
//   -i * ( {Q_L H0, [Q_L, A]} + Q_L B [Q_L, A] + [Q_L, A] B Q_L )
// pinned so that eta_L + correction = i[A, H_L] holds identically.
OperatorMatrix leibniz_correction(const ModelInstance& m, const OperatorMatrix& q_l,
                                  const OperatorMatrix& a);

} // namespace opcut

#endif
