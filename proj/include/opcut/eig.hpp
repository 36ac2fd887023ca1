#ifndef OPCUT_EIG_HPP
#define OPCUT_EIG_HPP

#include <vector>

#include "opcut/matrix.hpp"

namespace opcut {

// Eigensystem of a Hermitian matrix: ascending real eigenvalues and the
// unitary matrix of eigenvectors (column j belongs to eigenvalue j).
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    OperatorMatrix eigenvectors;

    std::size_t dim() const { return eigenvalues.size(); }
};

// Cyclic Jacobi with threshold sweeps.  Chosen over tridiagonalization for
// its unconditional stability and the near-exact orthogonality of the
// accumulated rotations; at the target dimensions (<= 512) the cubic sweep
// cost is affordable.  Degenerate eigenvalues keep solver order; no
// eigenvector phase canonicalization (all downstream uses are
// phase-invariant).
SpectralDecomposition hermitian_eig(const OperatorMatrix& x,
                                    const Tolerances& tol = default_tolerances());

// Eigensystem of a general (possibly non-normal) matrix via Hessenberg
// reduction and shifted QR, eigenvectors by back-substitution on the
// triangular factor.  Not guaranteed well conditioned; callers check the
// eigenvector condition number before trusting matrix functions built on it.
struct GeneralEig {
    std::vector<cxd> eigenvalues;
    OperatorMatrix eigenvectors;
};

GeneralEig general_eig(const OperatorMatrix& x);

// Unitary Schur form: x = Z T Z^dag with T upper triangular.
struct SchurForm {
    OperatorMatrix t;
    OperatorMatrix z;
};

SchurForm schur_form(const OperatorMatrix& x);

// PA = LU with partial pivoting, then solves.  Throws SingularResolvent on
// an exactly singular pivot.
struct LuFactors {
    OperatorMatrix lu;
    std::vector<std::size_t> perm;
};

LuFactors lu_factor(const OperatorMatrix& a);
Vector lu_solve(const LuFactors& f, const Vector& b);
OperatorMatrix lu_solve(const LuFactors& f, const OperatorMatrix& b);
OperatorMatrix inverse(const OperatorMatrix& a);

} // namespace opcut

#endif
