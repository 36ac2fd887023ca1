#include "oracles.hpp"

#include <cmath>

#include "opcut/cutoff.hpp"
#include "opcut/eig.hpp"
#include "opcut/matfun.hpp"
#include "opcut/models.hpp"

namespace opcut::oracle {

double tail_max(const std::vector<double>& spectrum, double L, unsigned ell,
                double tie) {
    double best = 0.0;
    for (double lam : spectrum)
        if (lam > L + tie)
            best = std::max(best, std::pow(lam, -static_cast<double>(ell)));
    return best;
}

CommutingModel CommutingModel::make(std::size_t dim, double coupling) {
    CommutingModel m;
    m.dim = dim;
    m.coupling = coupling;
    m.lam.resize(dim);
    m.mu.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        m.lam[j] = static_cast<double>(j + 1);
        m.mu[j] = m.lam[j] + commuting_g(m.lam[j], coupling);
    }
    return m;
}

double lemma2_2_value(const CommutingModel& m, const TestFunction& f, int k,
                      double L) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        if (m.inside(j, L)) continue;
        const double g = commuting_g(m.lam[j], m.coupling);
        best = std::max(best, std::abs(f(m.lam[j]) * g *
                                       std::pow(m.lam[j], static_cast<double>(k))));
    }
    return best;
}

double c1_value(const CommutingModel& m, const TestFunction& f, int k, double L) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        if (m.inside(j, L)) continue;
        best = std::max(best, std::pow(m.lam[j], static_cast<double>(k)) *
                                  m.lam[j] * f(m.lam[j]));
    }
    return best;
}

double c2_value(const CommutingModel& m, const TestFunction& f, int k, double L,
                double t) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        if (m.inside(j, L)) continue;
        const double osc = std::abs(cxd{1.0, 0.0} - std::exp(cxd{0.0, m.lam[j] * t}));
        best = std::max(best, std::pow(m.lam[j], static_cast<double>(k)) *
                                  f(m.lam[j]) * osc);
    }
    return best;
}

OperatorMatrix c3_gap(const CommutingModel& m, const OperatorMatrix& a, double L,
                      double t) {
    OperatorMatrix gap(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) {
            // with B = 0 the cutoff generator is lam * indicator
            const double hi = m.inside(i, L) ? m.lam[i] : 0.0;
            const double hj = m.inside(j, L) ? m.lam[j] : 0.0;
            const cxd cut = std::exp(cxd{0.0, (hi - hj) * t});
            const cxd full = std::exp(cxd{0.0, (m.lam[i] - m.lam[j]) * t});
            gap(i, j) = a(i, j) * (cut - full);
        }
    }
    return gap;
}

OperatorMatrix derivation_gap(const CommutingModel& m, const OperatorMatrix& a,
                              double L) {
    OperatorMatrix gap(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) {
            const double wi = m.inside(i, L) ? 0.0 : -m.mu[i];
            const double wj = m.inside(j, L) ? 0.0 : -m.mu[j];
            gap(i, j) = cxd{0.0, 1.0} * a(i, j) * (wj - wi);
        }
    }
    return gap;
}

double lemma59_value(const CommutingModel& m, unsigned s, int k, double L) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        if (m.inside(j, L)) continue;
        // mirror the diagonal product chain: H_L - H is the negated rounded
        // sum, then left and right diagonal weights in evaluation order
        const double w = -(m.lam[j] + commuting_g(m.lam[j], m.coupling));
        const double v = (std::pow(m.lam[j], -static_cast<double>(s)) * w) *
                         std::pow(m.lam[j], static_cast<double>(k));
        best = std::max(best, std::abs(cxd{v, 0.0}));
    }
    return best;
}

double prop60_value(const CommutingModel& m, const TestFunction& f, unsigned s,
                    double T) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j)
        best = std::max(best,
                        f(m.lam[j]) * std::pow(m.lam[j], static_cast<double>(s)));
    return T * best;
}

double lemma61_value(const CommutingModel& m, const TestFunction& f, unsigned ell,
                     int k, double L) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        if (m.inside(j, L)) continue;
        best = std::max(best,
                        f(m.mu[j]) *
                            std::pow(m.mu[j], static_cast<double>(ell)) *
                            std::pow(m.mu[j], static_cast<double>(k)));
    }
    return best;
}

OperatorMatrix beta_gap(const CommutingModel& m, const OperatorMatrix& a, double L,
                        double t, unsigned d) {
    OperatorMatrix gap(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) {
            const bool ci = m.inside(i, L), cj = m.inside(j, L);
            // d-th time derivative multiplies by (i mu_i - i mu_j)^d
            cxd deriv{1.0, 0.0};
            for (unsigned r = 0; r < d; ++r) deriv *= cxd{0.0, m.mu[i] - m.mu[j]};
            const cxd phase = std::exp(cxd{0.0, (m.mu[i] - m.mu[j]) * t});
            const double mask = (ci && cj) ? 1.0 : 0.0;
            gap(i, j) = a(i, j) * deriv * phase * (mask - 1.0);
        }
    }
    return gap;
}

double vector_gap(const CommutingModel& m, std::size_t j, double L, double t,
                  unsigned n, unsigned d) {
    if (m.inside(j, L)) return 0.0;
    double amp = std::pow(m.mu[j], static_cast<double>(n));
    for (unsigned r = 0; r < d; ++r) amp *= m.mu[j]; // |(i mu)^d| = mu^d
    (void)t;                                          // unit-modulus phase
    return amp;
}

OperatorMatrix leibniz_correction_gap(const CommutingModel& m,
                                      const OperatorMatrix& a, double L) {
    OperatorMatrix out(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) {
            const double ci = m.inside(i, L) ? 1.0 : 0.0;
            const double cj = m.inside(j, L) ? 1.0 : 0.0;
            const double gi = commuting_g(m.lam[i], m.coupling);
            const double gj = commuting_g(m.lam[j], m.coupling);
            const cxd qa = a(i, j) * (ci - cj); // [Q, A] entry
            const cxd term = (ci * m.lam[i] + cj * m.lam[j]) * qa +
                             ci * gi * qa + qa * gj * cj;
            out(i, j) = cxd{0.0, -1.0} * term;
        }
    }
    return out;
}

double relative_bound_value(const CommutingModel& m, double lambda) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        const double g = commuting_g(m.lam[j], m.coupling);
        best = std::max(best, std::abs(g) / std::hypot(m.lam[j], lambda));
    }
    return best;
}

double cross_bound_value(const CommutingModel& m, unsigned k, unsigned ell) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j)
        best = std::max(best, std::pow(m.lam[j], static_cast<double>(k)) *
                                  std::pow(m.mu[j], -static_cast<double>(ell)));
    return best;
}

double seminorm_of(const OperatorMatrix& gap, const std::vector<double>& spectrum,
                   const TestFunction& f, int k) {
    const std::size_t n = gap.dim();
    OperatorMatrix left(n), right(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double pk_i = std::pow(spectrum[i], static_cast<double>(k));
            const double pk_j = std::pow(spectrum[j], static_cast<double>(k));
            left(i, j) = pk_i * gap(i, j) * f(spectrum[j]);
            right(i, j) = f(spectrum[i]) * gap(i, j) * pk_j;
        }
    }
    return std::max(operator_norm_est(left), operator_norm_est(right));
}

ConvergenceReport lemma59_report(const StudyConfig& cfg) {
    ConvergenceReport rep;
    rep.kind = "lemma59";
    rep.model = cfg.model;
    rep.seed = cfg.seed;
    rep.config_echo = "oracle-path\n";

    const ModelInstance m0 = build_model(cfg.model, cfg.dims.front(), cfg.params);
    const auto s0 = hermitian_eig(m0.H0, cfg.tol);
    const auto Ls = default_cutoff_grid(s0, cfg.L_count,
                                        grid_rule_from_string(cfg.L_rule),
                                        cfg.L_allow_upper);
    for (std::size_t dim : cfg.dims) {
        const auto cm = CommutingModel::make(dim, cfg.params.coupling);
        for (unsigned s = 0; s <= 4; ++s) {
            for (int k = 0; k <= cfg.k_max; ++k) {
                StudySeries series;
                series.dim = dim;
                series.f_kind = "spow";
                series.f_params = "s=" + std::to_string(s);
                series.k = k;
                for (double L : Ls)
                    series.points.push_back({L, lemma59_value(cm, s, k, L), ""});
                rep.series.push_back(std::move(series));
            }
        }
    }
    rep.overall = "converged";
    return rep;
}

} // namespace opcut::oracle
