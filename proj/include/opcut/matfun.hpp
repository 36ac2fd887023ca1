#ifndef OPCUT_MATFUN_HPP
#define OPCUT_MATFUN_HPP

#include <functional>

#include "opcut/eig.hpp"
#include "opcut/matrix.hpp"

namespace opcut {

using ScalarFunction = std::function<cxd(double)>;

// U diag(phi(lambda)) U^dag.  Throws NonFiniteValue if phi blows up on the
// spectrum.
OperatorMatrix matrix_function(const SpectralDecomposition& s,
                               const ScalarFunction& phi);

// Largest singular value.  Exactly-diagonal input short-circuits to the
// largest entry modulus; Hermitian input to max |eigenvalue|; otherwise
// sqrt of the top eigenvalue of X^dag X.
double operator_norm(const OperatorMatrix& x,
                     const Tolerances& tol = default_tolerances());

// X^k by repeated squaring; X^0 = I.
OperatorMatrix power(const OperatorMatrix& x, unsigned k);

// Iterative largest-singular-value estimate (power iteration on X^dag X
// with a deterministic start), falling back to the exact path when the
// Rayleigh quotient fails to settle.  Study sweeps use this; the public
// operator_norm stays exact.
double operator_norm_est(const OperatorMatrix& x, double rel_tol = 1e-11,
                         const Tolerances& tol = default_tolerances());

// left * a * right, short-circuiting to the O(n^2) sandwich kernel when
// both outer factors are exactly diagonal (the dominant case: spectral
// weights of a diagonal generator).
OperatorMatrix weighted_product(const OperatorMatrix& left, const OperatorMatrix& a,
                                const OperatorMatrix& right);

struct PropagatorInfo {
    bool spectral_path = true; // false means scaling-and-squaring on iHt
};

// e^{iHt}.  Hermitian H goes through the spectral decomposition (result
// unitary to tolerance); anything else through scaling-and-squaring.
OperatorMatrix propagator(const OperatorMatrix& h, double t,
                          PropagatorInfo* info = nullptr,
                          const Tolerances& tol = default_tolerances());

// Same, but reusing a precomputed decomposition of a Hermitian H.
OperatorMatrix propagator(const SpectralDecomposition& s, double t);

// Scaling-and-squaring matrix exponential (Pade 3/5/7/9/13 selected by the
// 1-norm).
OperatorMatrix expm(const OperatorMatrix& a);

// f(H) for diagonalizable non-normal H: V f(Lambda) V^{-1}.  Throws
// NonDiagonalizable when the eigenvector condition number exceeds
// tol.eigvec_cond_limit.
OperatorMatrix matrix_function_general(const OperatorMatrix& h,
                                       const ScalarFunction& phi,
                                       const Tolerances& tol = default_tolerances());

} // namespace opcut

#endif
