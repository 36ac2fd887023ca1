#ifndef OPCUT_CUTOFF_HPP
#define OPCUT_CUTOFF_HPP

#include <map>
#include <string>
#include <vector>

#include "opcut/eig.hpp"
#include "opcut/models.hpp"

namespace opcut {

// Projection onto the eigenspaces with eigenvalue <= L.  Eigenvalues within
// tol.eig_tie of L are included (closed upper limit).  L below the whole
// spectrum gives the zero matrix.
OperatorMatrix spectral_projection(const SpectralDecomposition& s, double L,
                                   const Tolerances& tol = default_tolerances());

// Family of nested projectors over an ascending cutoff grid, built once and
// then read-only; safe to read in parallel across L.
struct CutoffFamily {
    SpectralDecomposition source;       // decomposition of H0
    std::vector<double> L_grid;         // ascending
    std::vector<OperatorMatrix> projectors; // aligned with L_grid

    const OperatorMatrix& projector_at(std::size_t idx) const {
        return projectors.at(idx);
    }
};

CutoffFamily build_cutoff_family(const SpectralDecomposition& s,
                                 const std::vector<double>& L_grid,
                                 const Tolerances& tol = default_tolerances());

enum class GridRule { midpoints, midpoints_log };

GridRule grid_rule_from_string(const std::string& name);

// Default cutoff grid: midpoints between consecutive distinct eigenvalues,
// restricted to the lower half of the spectrum unless allow_upper is set.
// Midpoints avoid ties by construction; `count` of them are picked with
// even (or log-even) index spacing, always keeping the first and last.
std::vector<double> default_cutoff_grid(const SpectralDecomposition& s, int count,
                                        GridRule rule = GridRule::midpoints,
                                        bool allow_upper = false);

// H_L = Q_L (H0 + B) Q_L.  Cross-checks the equivalent form
// H0 Q_L + Q_L B Q_L (valid because [Q_L, H0] = 0) and that Q_L is a
// projector; ProjectionMismatch if either fails.
OperatorMatrix cutoff_hamiltonian(const ModelInstance& m, const OperatorMatrix& q_l,
                                  const Tolerances& tol = default_tolerances());

// ||H0^{-ell} (I - Q_L)|| = max over eigenvalues above L of lambda^{-ell};
// bounded by L^{-ell} whenever the spectrum starts at 1.
double tail_norm(const SpectralDecomposition& s, double L, unsigned ell,
                 const Tolerances& tol = default_tolerances());

// Q_{L+n} - Q_L
OperatorMatrix band_projector(const SpectralDecomposition& s, double L, unsigned n,
                              const Tolerances& tol = default_tolerances());

// Unit-spaced ladder identity Q_L a = a Q_{L+1}, stated in number-operator
// labels l (eigenvalue l of a^dag a); the stored H0 = N + 1 shifts labels by
// one, handled internally.  Returns the max-abs defect.
double ladder_commutation_check(const ModelInstance& m, double L_label,
                                const Tolerances& tol = default_tolerances());

// Per-level variant: max over interior levels l of maxabs(Pi_l a - a Pi_{l+1}).
double ladder_level_commutation_check(const ModelInstance& m,
                                      const Tolerances& tol = default_tolerances());

} // namespace opcut

#endif
