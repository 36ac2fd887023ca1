#include "opcut/cutoff.hpp"

#include <algorithm>
#include <cmath>

#include "opcut/matfun.hpp"

namespace opcut {

OperatorMatrix spectral_projection(const SpectralDecomposition& s, double L,
                                   const Tolerances& tol) {
    const double cut = L + tol.eig_tie;
    return matrix_function(s, [cut](double lam) {
        return lam <= cut ? cxd{1.0, 0.0} : cxd{0.0, 0.0};
    });
}

CutoffFamily build_cutoff_family(const SpectralDecomposition& s,
                                 const std::vector<double>& L_grid,
                                 const Tolerances& tol) {
    for (std::size_t i = 0; i < L_grid.size(); ++i)
        if (L_grid[i] <= 0.0 || (i > 0 && L_grid[i] <= L_grid[i - 1]))
            throw BadParams("cutoff grid must be positive ascending");
    CutoffFamily fam;
    fam.source = s;
    fam.L_grid = L_grid;
    fam.projectors.reserve(L_grid.size());
    for (double L : L_grid) fam.projectors.push_back(spectral_projection(s, L, tol));
    return fam;
}

GridRule grid_rule_from_string(const std::string& name) {
    if (name == "midpoints") return GridRule::midpoints;
    if (name == "midpoints-log") return GridRule::midpoints_log;
    throw ConfigError("unknown cutoff grid rule '" + name + "'");
}

std::vector<double> default_cutoff_grid(const SpectralDecomposition& s, int count,
                                        GridRule rule, bool allow_upper) {
    if (count < 1) throw BadParams("cutoff grid count must be >= 1");
    const auto& ev = s.eigenvalues;
    const std::size_t n = ev.size();
    // distinct eigenvalues (collapse near-degenerate pairs)
    std::vector<double> distinct;
    const double tie = 1e-9 * std::max(1.0, std::abs(ev.back()));
    for (double v : ev)
        if (distinct.empty() || v > distinct.back() + tie) distinct.push_back(v);

    const double top = allow_upper ? ev.back() : ev[(n + 1) / 2 - 1];
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        if (distinct[i + 1] > top + tie) break;
        mids.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    }
    if (mids.empty()) throw BadParams("spectrum too degenerate for a cutoff grid");
    const int m = static_cast<int>(mids.size());
    if (count >= m) return mids;

    std::vector<double> out;
    out.reserve(count);
    if (count == 1) return {mids.back()};
    for (int i = 0; i < count; ++i) {
        double pos;
        if (rule == GridRule::midpoints) {
            pos = static_cast<double>(i) * (m - 1) / (count - 1);
        } else {
            // log-even index spacing: denser at the low end
            pos = std::exp(std::log(1.0) + (std::log(static_cast<double>(m)) -
                                            std::log(1.0)) *
                                               i / (count - 1)) -
                  1.0;
        }
        const int idx = std::min(m - 1, static_cast<int>(std::lround(pos)));
        if (out.empty() || mids[idx] > out.back()) out.push_back(mids[idx]);
    }
    if (out.back() != mids.back()) out.push_back(mids.back());
    return out;
}

namespace {

void require_projector(const OperatorMatrix& q, const Tolerances& tol) {
    const double sym = max_abs_diff(q, adjoint(q));
    const double idem = max_abs_diff(q * q, q);
    if (sym > tol.proj || idem > tol.proj)
        throw ProjectionMismatch("not a projector: symmetry defect " +
                                 std::to_string(sym) + ", idempotency defect " +
                                 std::to_string(idem));
}

} // namespace

OperatorMatrix cutoff_hamiltonian(const ModelInstance& m, const OperatorMatrix& q_l,
                                  const Tolerances& tol) {
    require_same_dim(m.H0, q_l);
    require_projector(q_l, tol);
    const OperatorMatrix h = m.hamiltonian();
    const OperatorMatrix h_l = q_l * h * q_l;
    const OperatorMatrix alt = m.H0 * q_l + q_l * m.B * q_l;
    if (max_abs_diff(h_l, alt) > tol.cutoff_identity)
        throw ProjectionMismatch("projector does not commute with H0: the two "
                                 "cutoff forms disagree");
    return h_l;
}

double tail_norm(const SpectralDecomposition& s, double L, unsigned ell,
                 const Tolerances& tol) {
    if (ell < 1) throw BadParams("tail norm needs ell >= 1");
    if (s.eigenvalues.front() < 1.0 - 1e-10)
        throw SpectrumBelowOne("tail norm assumes spectrum >= 1");
    const OperatorMatrix q = spectral_projection(s, L, tol);
    const OperatorMatrix inv_pow = matrix_function(s, [ell](double lam) {
        return cxd{std::pow(lam, -static_cast<double>(ell)), 0.0};
    });
    const OperatorMatrix rest = OperatorMatrix::identity(s.dim()) - q;
    return operator_norm(inv_pow * rest, tol);
}

OperatorMatrix band_projector(const SpectralDecomposition& s, double L, unsigned n,
                              const Tolerances& tol) {
    if (n < 1) throw BadParams("band projector needs n >= 1");
    return spectral_projection(s, L + n, tol) - spectral_projection(s, L, tol);
}

double ladder_commutation_check(const ModelInstance& m, double L_label,
                                const Tolerances& tol) {
    if (!m.number_family)
        throw WrongModelFamily("ladder identities need a number-operator model");
    const auto s = hermitian_eig(m.H0, tol);
    const auto [a, ad] = fock_ladder(m.dim);
    // label l corresponds to eigenvalue l + shift of the stored H0
    const OperatorMatrix q_l = spectral_projection(s, L_label + m.shift, tol);
    const OperatorMatrix q_l1 = spectral_projection(s, L_label + 1.0 + m.shift, tol);
    const double defect = max_abs_diff(q_l * a, a * q_l1);
    if (defect > 1e-12)
        throw Error("ladder commutation identity violated: defect " +
                    std::to_string(defect));
    return defect;
}

double ladder_level_commutation_check(const ModelInstance& m,
                                      const Tolerances& tol) {
    if (!m.number_family)
        throw WrongModelFamily("ladder identities need a number-operator model");
    const auto s = hermitian_eig(m.H0, tol);
    const auto [a, ad] = fock_ladder(m.dim);
    double worst = 0.0;
    // interior levels only: Pi_{l+1} needs level l+1 inside the truncation
    for (std::size_t l = 0; l + 2 < m.dim; ++l) {
        const double lo = static_cast<double>(l) + m.shift;
        const OperatorMatrix pi_l =
            spectral_projection(s, lo, tol) - spectral_projection(s, lo - 1.0, tol);
        const OperatorMatrix pi_l1 =
            spectral_projection(s, lo + 1.0, tol) - spectral_projection(s, lo, tol);
        worst = std::max(worst, max_abs_diff(pi_l * a, a * pi_l1));
    }
    return worst;
}

} // namespace opcut
