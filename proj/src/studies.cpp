#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "opcut/dynamics.hpp"
#include "opcut/harness.hpp"
#include "opcut/quadrature.hpp"
#include "opcut/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace opcut {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string config_echo_string(const StudyConfig& cfg) {
    std::ostringstream os;
    os << "kind = " << cfg.kind << "\n";
    os << "model = " << cfg.model << "\n";
    os << "model.n = " << cfg.params.n << "\n";
    os << "model.alpha = " << fmt(cfg.params.alpha) << "\n";
    os << "model.c = " << fmt(cfg.params.coupling) << "\n";
    os << "dims = ";
    for (std::size_t i = 0; i < cfg.dims.size(); ++i)
        os << (i ? ", " : "") << cfg.dims[i];
    os << "\n";
    os << "L.count = " << cfg.L_count << "\n";
    os << "L.rule = " << cfg.L_rule << "\n";
    os << "L.allow_upper = " << (cfg.L_allow_upper ? "true" : "false") << "\n";
    os << "fset = ";
    for (std::size_t i = 0; i < cfg.f_set.size(); ++i) {
        const auto& f = cfg.f_set[i];
        os << (i ? "; " : "") << f.kind_name();
        if (f.kind == TestFunction::Kind::poly_exp) os << ":" << f.m;
        os << ":" << fmt(f.alpha);
    }
    os << "\n";
    os << "k_max = " << cfg.k_max << "\n";
    os << "times = ";
    for (std::size_t i = 0; i < cfg.times.size(); ++i)
        os << (i ? ", " : "") << fmt(cfg.times[i]);
    os << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "x_source = " << cfg.x_source << "\n";
    os << "s = " << cfg.s << "\n";
    os << "ell = " << cfg.ell << "\n";
    os << "horizon = " << fmt(cfg.horizon) << "\n";
    os << "tau_max = " << fmt(cfg.tau_max) << "\n";
    os << "tau_count = " << cfg.tau_count << "\n";
    os << "tol.verdict_final = " << fmt(cfg.tol.verdict_final) << "\n";
    os << "tol.verdict_stability = " << fmt(cfg.tol.verdict_stability) << "\n";
    os << "tol.prop60_uniformity = " << fmt(cfg.tol.prop60_uniformity) << "\n";
    os << "tol.fit_floor = " << fmt(cfg.tol.fit_floor) << "\n";
    return os.str();
}

// The cutoff grid is frozen on the smallest dimension and reused across the
// sweep, so the physical limit (L) stays separated from the discretization
// limit (dim).
std::vector<double> shared_cutoff_grid(const StudyConfig& cfg) {
    const ModelInstance m0 = build_model(cfg.model, cfg.dims.front(), cfg.params);
    const auto s0 = hermitian_eig(m0.H0, cfg.tol);
    return default_cutoff_grid(s0, cfg.L_count, grid_rule_from_string(cfg.L_rule),
                               cfg.L_allow_upper);
}

ModelInstance model_for(const StudyConfig& cfg, std::size_t dim,
                        bool zero_perturbation = false) {
    ModelInstance m = build_model(cfg.model, dim, cfg.params);
    if (zero_perturbation) {
        m.B = OperatorMatrix(dim);
        m.b_hermitian = true;
        m.description += " [B := 0]";
    }
    return m;
}

// One study = per-L heavy context + cheap per-variant evaluations.  The L
// axis runs across threads; a context failure marks every variant point at
// that L, never aborting siblings.
template <typename Ctx>
struct Sweep {
    std::function<Ctx(std::size_t)> prepare;
    struct Variant {
        std::string f_kind;
        std::string f_params;
        int k = 0;
        std::function<double(const Ctx&, std::size_t)> eval;
    };
    std::vector<Variant> variants;

    std::vector<StudySeries> run(const std::vector<double>& Ls,
                                 std::size_t dim) const {
        std::vector<StudySeries> out(variants.size());
        for (std::size_t v = 0; v < variants.size(); ++v) {
            out[v].dim = dim;
            out[v].f_kind = variants[v].f_kind;
            out[v].f_params = variants[v].f_params;
            out[v].k = variants[v].k;
            out[v].points.resize(Ls.size());
            for (std::size_t li = 0; li < Ls.size(); ++li)
                out[v].points[li].L = Ls[li];
        }
        #pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t li = 0; li < static_cast<std::ptrdiff_t>(Ls.size());
             ++li) {
            try {
                const Ctx ctx = prepare(static_cast<std::size_t>(li));
                for (std::size_t v = 0; v < variants.size(); ++v) {
                    SeriesPoint& pt = out[v].points[li];
                    try {
                        pt.value = variants[v].eval(ctx, static_cast<std::size_t>(li));
                    } catch (const std::exception& e) {
                        pt.value = nan_value;
                        pt.error = e.what();
                    }
                }
            } catch (const std::exception& e) {
                for (std::size_t v = 0; v < variants.size(); ++v) {
                    out[v].points[li].value = nan_value;
                    out[v].points[li].error = e.what();
                }
            }
        }
        return out;
    }
};

OperatorMatrix observable_for(const StudyConfig& cfg, const ModelInstance& m,
                              const SpectralDecomposition& s0) {
    if (cfg.x_source == "B") return m.B;
    if (cfg.x_source == "H0") return m.H0;
    if (cfg.x_source == "random")
        return random_observable(s0.eigenvalues, cfg.seed);
    return random_hermitian(m.dim, cfg.seed); // random-flat: the negative control
}

struct SpectralWeights {
    std::vector<OperatorMatrix> f_mats; // f(S) per test function
    std::vector<OperatorMatrix> k_mats; // S^k, k = 0..k_max
};

SpectralWeights make_weights(const SpectralDecomposition& s,
                             const std::vector<TestFunction>& f_set, int k_max) {
    SpectralWeights w;
    for (const auto& f : f_set)
        w.f_mats.push_back(
            matrix_function(s, [&f](double v) { return cxd{f(v), 0.0}; }));
    for (int k = 0; k <= k_max; ++k)
        w.k_mats.push_back(matrix_function(s, [k](double v) {
            return cxd{std::pow(v, static_cast<double>(k)), 0.0};
        }));
    return w;
}

// max(||S^k G f(S)||, ||f(S) G S^k||) via the weight cache
double weighted_seminorm(const OperatorMatrix& gap, const SpectralWeights& w,
                         std::size_t fi, int k, const Tolerances& tol) {
    const double right =
        operator_norm_est(weighted_product(w.f_mats[fi], gap, w.k_mats[k]), 1e-11, tol);
    const double left =
        operator_norm_est(weighted_product(w.k_mats[k], gap, w.f_mats[fi]), 1e-11, tol);
    return std::max(left, right);
}

// --- study kinds ------------------------------------------------------------

std::vector<StudySeries> study_lemma2_2(const StudyConfig& cfg, std::size_t dim,
                                        const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim);
    const auto s0 = hermitian_eig(m.H0, cfg.tol);
    const CutoffFamily fam = build_cutoff_family(s0, Ls, cfg.tol);
    const OperatorMatrix x = observable_for(cfg, m, s0);
    const SpectralWeights w = make_weights(s0, cfg.f_set, cfg.k_max);

    Sweep<OperatorMatrix> sweep;
    sweep.prepare = [&](std::size_t li) {
        const OperatorMatrix& q = fam.projector_at(li);
        return x - q * x * q;
    };
    for (std::size_t fi = 0; fi < cfg.f_set.size(); ++fi)
        for (int k = 0; k <= cfg.k_max; ++k)
            sweep.variants.push_back(
                {cfg.f_set[fi].kind_name(),
                 cfg.f_set[fi].params_string() + ";X=" + cfg.x_source, k,
                 [&, fi, k](const OperatorMatrix& defect, std::size_t) {
                     return weighted_seminorm(defect, w, fi, k, cfg.tol);
                 }});
    return sweep.run(Ls, dim);
}

struct C123Ctx {
    OperatorMatrix c1_gap;
    OperatorMatrix c2_gap;
    OperatorMatrix c3_gap;
};

std::vector<StudySeries> study_c1c2c3(const StudyConfig& cfg, std::size_t dim,
                                      const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim, /*zero_perturbation=*/true);
    const auto s0 = hermitian_eig(m.H0, cfg.tol);
    const CutoffFamily fam = build_cutoff_family(s0, Ls, cfg.tol);
    const OperatorMatrix a = random_observable(s0.eigenvalues, cfg.seed);
    const double t = cfg.times.front();
    const SpectralWeights w = make_weights(s0, cfg.f_set, cfg.k_max);
    const OperatorMatrix u_full = propagator(s0, t);
    const OperatorMatrix evolved = heisenberg(s0, a, t);

    Sweep<C123Ctx> sweep;
    sweep.prepare = [&](std::size_t li) {
        const OperatorMatrix h_l = cutoff_hamiltonian(m, fam.projector_at(li), cfg.tol);
        const auto sl = hermitian_eig(h_l, cfg.tol);
        C123Ctx ctx{h_l - m.H0, propagator(sl, t) - u_full,
                    heisenberg(sl, a, t) - evolved};
        return ctx;
    };
    for (std::size_t fi = 0; fi < cfg.f_set.size(); ++fi) {
        for (int k = 0; k <= cfg.k_max; ++k) {
            const auto& f = cfg.f_set[fi];
            sweep.variants.push_back(
                {f.kind_name(), f.params_string() + ";part=c1", k,
                 [&, fi, k](const C123Ctx& c, std::size_t) {
                     return weighted_seminorm(c.c1_gap, w, fi, k, cfg.tol);
                 }});
            sweep.variants.push_back(
                {f.kind_name(), f.params_string() + ";part=c2;t=" + fmt(t), k,
                 [&, fi, k](const C123Ctx& c, std::size_t) {
                     return weighted_seminorm(c.c2_gap, w, fi, k, cfg.tol);
                 }});
            sweep.variants.push_back(
                {f.kind_name(), f.params_string() + ";part=c3;t=" + fmt(t), k,
                 [&, fi, k](const C123Ctx& c, std::size_t) {
                     return weighted_seminorm(c.c3_gap, w, fi, k, cfg.tol);
                 }});
        }
    }
    return sweep.run(Ls, dim);
}

std::vector<StudySeries> study_corollary2_3(const StudyConfig& cfg, std::size_t dim,
                                            const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim);
    const auto s0 = hermitian_eig(m.H0, cfg.tol);
    const CutoffFamily fam = build_cutoff_family(s0, Ls, cfg.tol);
    const OperatorMatrix a = random_observable(s0.eigenvalues, cfg.seed);
    const OperatorMatrix h = m.hamiltonian();
    const SpectralWeights w = make_weights(s0, cfg.f_set, cfg.k_max);

    Sweep<OperatorMatrix> sweep;
    sweep.prepare = [&](std::size_t li) {
        const OperatorMatrix h_l = cutoff_hamiltonian(m, fam.projector_at(li), cfg.tol);
        // delta_L(A) - delta(A) = i [A, H_L - H]
        return scale(cxd{0.0, 1.0}, commutator(a, h_l - h));
    };
    for (std::size_t fi = 0; fi < cfg.f_set.size(); ++fi)
        for (int k = 0; k <= cfg.k_max; ++k)
            sweep.variants.push_back(
                {cfg.f_set[fi].kind_name(), cfg.f_set[fi].params_string(), k,
                 [&, fi, k](const OperatorMatrix& gap, std::size_t) {
                     return weighted_seminorm(gap, w, fi, k, cfg.tol);
                 }});
    return sweep.run(Ls, dim);
}

std::vector<StudySeries> study_lemma59(const StudyConfig& cfg, std::size_t dim,
                                       const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim);
    const auto s0 = hermitian_eig(m.H0, cfg.tol);
    const CutoffFamily fam = build_cutoff_family(s0, Ls, cfg.tol);
    const OperatorMatrix h = m.hamiltonian();

    std::vector<OperatorMatrix> s_mats, k_mats;
    for (unsigned s = 0; s <= 4; ++s)
        s_mats.push_back(matrix_function(s0, [s](double x) {
            return cxd{std::pow(x, -static_cast<double>(s)), 0.0};
        }));
    for (int k = 0; k <= cfg.k_max; ++k)
        k_mats.push_back(matrix_function(s0, [k](double x) {
            return cxd{std::pow(x, static_cast<double>(k)), 0.0};
        }));

    Sweep<OperatorMatrix> sweep;
    sweep.prepare = [&](std::size_t li) {
        return cutoff_hamiltonian(m, fam.projector_at(li), cfg.tol) - h;
    };
    for (unsigned s = 0; s <= 4; ++s)
        for (int k = 0; k <= cfg.k_max; ++k)
            sweep.variants.push_back(
                {"spow", "s=" + std::to_string(s), k,
                 [&, s, k](const OperatorMatrix& gap, std::size_t) {
                     return operator_norm_est(
                         weighted_product(s_mats[s], gap, k_mats[k]), 1e-11, cfg.tol);
                 }});
    return sweep.run(Ls, dim);
}

std::vector<StudySeries> study_prop60(const StudyConfig& cfg, std::size_t dim,
                                      const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim);
    DynamicsScene sc = DynamicsScene::build(m, Ls, cfg.tol);

    Sweep<int> sweep;
    sweep.prepare = [](std::size_t) { return 0; };
    for (const auto& f : cfg.f_set)
        sweep.variants.push_back({f.kind_name(),
                                  f.params_string() + ";s=" + std::to_string(cfg.s) +
                                      ";T=" + fmt(cfg.horizon),
                                  static_cast<int>(cfg.s),
                                  [&sc, &cfg, f](const int&, std::size_t li) {
                                      return evolution_bound_integral(
                                          sc, li, f, cfg.s, cfg.horizon, 8, 1,
                                          cfg.tol);
                                  }});
    return sweep.run(Ls, dim);
}

std::vector<StudySeries> study_example_aN(const StudyConfig& cfg, std::size_t dim,
                                          const std::vector<double>& /*unused*/) {
    if (cfg.model != "number-aN")
        throw ConfigError("example_aN study needs model number-aN");
    const ModelInstance m = model_for(cfg, dim);

    // label grid inside the truncation, tau grid over [0, tau_max]
    std::vector<double> labels;
    const int nl = cfg.tau_count;
    for (int i = 0; i < nl; ++i) {
        const double raw =
            1.0 + (static_cast<double>(dim) / 2.0 - 1.0) * i / (nl - 1);
        const double lab = std::floor(raw) + 0.5; // between levels, no ties
        if (labels.empty() || lab > labels.back()) labels.push_back(lab);
    }
    std::vector<double> taus;
    for (int i = 0; i < cfg.tau_count; ++i)
        taus.push_back(cfg.tau_max * i / (cfg.tau_count - 1));

    Sweep<int> sweep;
    sweep.prepare = [](std::size_t) { return 0; };
    for (const auto& f : cfg.f_set) {
        for (double tau : taus)
            sweep.variants.push_back(
                {f.kind_name(), f.params_string() + ";part=lhs;tau=" + fmt(tau), 1,
                 [&m, &cfg, f, tau, labels](const int&, std::size_t li) {
                     return ladder_bound_check(m, f, labels[li], tau, cfg.tol).lhs;
                 }});
        sweep.variants.push_back(
            {f.kind_name(), f.params_string() + ";part=rhs", 1,
             [&m, &cfg, f, labels](const int&, std::size_t li) {
                 return ladder_bound_check(m, f, labels[li], 0.0, cfg.tol).rhs;
             }});
    }
    auto series = sweep.run(labels, dim);

    // bound verdicts: every lhs <= rhs + 1e-8 for the matching f
    for (auto& s : series) {
        if (s.f_params.find(";part=lhs") == std::string::npos) continue;
        const std::string f_par = s.f_params.substr(0, s.f_params.find(";part="));
        const StudySeries* rhs_series = nullptr;
        for (const auto& r : series)
            if (r.f_kind == s.f_kind && r.f_params == f_par + ";part=rhs") {
                rhs_series = &r;
                break;
            }
        std::size_t n_err = 0;
        for (const auto& p : s.points)
            if (!p.error.empty()) ++n_err;
        if (n_err == s.points.size()) {
            s.verdict = "skipped";
            s.reason = s.points.front().error;
            continue;
        }
        bool holds = rhs_series != nullptr;
        if (holds) {
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                if (!s.points[i].error.empty()) continue; // reported inline
                if (!std::isfinite(s.points[i].value) ||
                    !std::isfinite(rhs_series->points[i].value) ||
                    s.points[i].value > rhs_series->points[i].value + 1e-8) {
                    holds = false;
                    break;
                }
            }
        }
        s.verdict = holds ? "converged" : "not-converged";
        s.reason = holds ? "uniform bound holds on the (L, tau) grid"
                         : "uniform bound violated";
    }
    for (auto& s : series) {
        if (s.f_params.find(";part=rhs") != std::string::npos) {
            s.verdict = "skipped";
            s.reason = "reference side of the bound";
        }
    }
    return series;
}

std::vector<StudySeries> study_lemma61(const StudyConfig& cfg, std::size_t dim,
                                       const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim);
    if (!m.b_hermitian) throw ConfigError("lemma61 study needs Hermitian B");
    DynamicsScene sc = DynamicsScene::build(m, Ls, cfg.tol);
    const OperatorMatrix h_ell = power(sc.hamiltonian, cfg.ell);

    std::vector<OperatorMatrix> f_mats, k_mats;
    for (const auto& f : cfg.f_set)
        f_mats.push_back(
            matrix_function(*sc.h_eig, [&f](double v) { return cxd{f(v), 0.0}; }));
    for (int k = 0; k <= cfg.k_max; ++k)
        k_mats.push_back(matrix_function(*sc.h_eig, [k](double v) {
            return cxd{std::pow(v, static_cast<double>(k)), 0.0};
        }));

    Sweep<OperatorMatrix> sweep;
    sweep.prepare = [&](std::size_t li) {
        const OperatorMatrix h_l =
            cutoff_hamiltonian(sc.model, sc.cutoffs.projector_at(li), cfg.tol);
        return power(h_l, cfg.ell) - h_ell;
    };
    for (std::size_t fi = 0; fi < cfg.f_set.size(); ++fi)
        for (int k = 0; k <= cfg.k_max; ++k)
            sweep.variants.push_back(
                {cfg.f_set[fi].kind_name(),
                 cfg.f_set[fi].params_string() + ";ell=" + std::to_string(cfg.ell), k,
                 [&, fi, k](const OperatorMatrix& gap, std::size_t) {
                     return operator_norm_est(
                         weighted_product(f_mats[fi], gap, k_mats[k]), 1e-11,
                         cfg.tol);
                 }});
    return sweep.run(Ls, dim);
}

std::vector<StudySeries> study_prop62(const StudyConfig& cfg, std::size_t dim,
                                      const std::vector<double>& /*unused*/) {
    if (cfg.model != "number-aN")
        throw ConfigError("prop62 study needs model number-aN (strictly "
                          "raising perturbation)");
    const ModelInstance m = model_for(cfg, dim);
    // Engineered pair: a strictly raising generator keeps the commutator
    // chain finite against any upper-Hessenberg observable; a^n is
    // normalized so the conjugation oracle stays well-conditioned (raw
    // ladder powers blow the exponential up).  The q part keeps the chain
    // long: [a^n, q] raises the band offset every step.
    const OperatorMatrix q_op = position_operator(dim);
    const OperatorMatrix x = scale(cxd{1.0 / operator_norm(m.B), 0.0}, m.B);
    const OperatorMatrix y =
        m.H0 + scale(cxd{1.0 / operator_norm(q_op), 0.0}, q_op);

    const auto order = nilpotency_order(x, y, static_cast<unsigned>(dim));
    std::vector<StudySeries> series;

    StudySeries ord_series;
    ord_series.dim = dim;
    ord_series.f_kind = "nilpotency";
    ord_series.f_params = "n=" + std::to_string(m.params.n);
    ord_series.k = 0;
    ord_series.points.push_back(
        {0.0, order ? static_cast<double>(*order) : nan_value,
         order ? "" : "no termination up to the truncation dimension"});
    ord_series.verdict = order ? "converged" : "not-converged";
    ord_series.reason =
        order ? "commutator chain terminates" : "chain does not terminate";
    series.push_back(std::move(ord_series));

    if (order) {
        std::vector<double> dts;
        const int nd = 9;
        for (int i = 0; i < nd; ++i) dts.push_back(-2.0 + 4.0 * i / (nd - 1));
        StudySeries defect;
        defect.dim = dim;
        defect.f_kind = "series-defect";
        defect.f_params = "m=" + std::to_string(*order);
        defect.k = 0;
        double worst = 0.0;
        for (double dt : dts) {
            SeriesPoint pt;
            pt.L = dt;
            try {
                const OperatorMatrix truncated = adjoint_series(x, y, dt, *order);
                const OperatorMatrix u = expm(scale(cxd{0.0, dt}, x));
                const OperatorMatrix u_back = expm(scale(cxd{0.0, -dt}, x));
                pt.value = max_abs_diff(truncated, u * y * u_back);
                worst = std::max(worst, pt.value);
            } catch (const std::exception& e) {
                pt.value = nan_value;
                pt.error = e.what();
                worst = nan_value;
            }
            defect.points.push_back(pt);
        }
        const bool ok = std::isfinite(worst) && worst <= 1e-9;
        defect.verdict = ok ? "converged" : "not-converged";
        defect.reason = ok ? "truncated series matches direct conjugation"
                           : "series defect above 1e-9";
        series.push_back(std::move(defect));
    }
    return series;
}

struct Prop49Ctx {
    std::vector<OperatorMatrix> beta_gap; // per derivative order 0..2
    std::vector<OperatorMatrix> v_gap;    // per derivative order 0..2
};

std::vector<StudySeries> study_prop49(const StudyConfig& cfg, std::size_t dim,
                                      const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim);
    if (!m.b_hermitian) throw ConfigError("prop49 study needs Hermitian B");
    DynamicsScene sc = DynamicsScene::build(m, Ls, cfg.tol);
    const OperatorMatrix a = position_operator(dim);
    const double t = cfg.times.front();
    const SpectralWeights w = make_weights(sc.h0_eig, cfg.f_set, cfg.k_max);

    // L-independent pieces: (iH)^j e^{+-iHt} and the reference evolutions
    std::vector<OperatorMatrix> phase_fwd, phase_bwd, alpha_ref;
    for (unsigned d = 0; d <= 2; ++d) {
        phase_fwd.push_back(matrix_function(*sc.h_eig, [t, d](double lam) {
            cxd p{1.0, 0.0};
            for (unsigned i = 0; i < d; ++i) p *= cxd{0.0, lam};
            return p * std::exp(cxd{0.0, lam * t});
        }));
        phase_bwd.push_back(matrix_function(*sc.h_eig, [t, d](double lam) {
            cxd p{1.0, 0.0};
            for (unsigned i = 0; i < d; ++i) p *= cxd{0.0, -lam};
            return p * std::exp(cxd{0.0, -lam * t});
        }));
        alpha_ref.push_back(heisenberg_derivative(*sc.h_eig, a, t, d));
    }

    // vector fixtures: lowest-8 eigenvector span plus one seeded combination
    std::vector<Vector> fixtures;
    for (std::size_t j = 0; j < std::min<std::size_t>(8, dim); ++j) {
        Vector psi(dim, cxd{0.0, 0.0});
        for (std::size_t i = 0; i < dim; ++i) psi[i] = sc.h0_eig.eigenvectors(i, j);
        fixtures.push_back(std::move(psi));
    }
    {
        Vector mix(dim, cxd{0.0, 0.0});
        for (std::size_t j = 0; j < std::min<std::size_t>(8, dim); ++j) {
            const cxd wj = rng::gaussian(cfg.seed, 77, j);
            for (std::size_t i = 0; i < dim; ++i)
                mix[i] += wj * sc.h0_eig.eigenvectors(i, j);
        }
        const double nv = vector_norm(mix);
        for (auto& z : mix) z /= nv;
        fixtures.push_back(std::move(mix));
    }
    std::vector<OperatorMatrix> h_pows;
    for (unsigned n = 0; n <= 2; ++n) h_pows.push_back(power(sc.hamiltonian, n));

    const auto binom = [](unsigned n, unsigned j) {
        unsigned long r = 1;
        for (unsigned i = 1; i <= j; ++i) r = r * (n - j + i) / i;
        return static_cast<double>(r);
    };

    Sweep<Prop49Ctx> sweep;
    sweep.prepare = [&](std::size_t li) {
        const OperatorMatrix& q = sc.cutoffs.projector_at(li);
        std::vector<OperatorMatrix> vq_fwd, vq_bwd;
        for (unsigned d = 0; d <= 2; ++d) {
            vq_fwd.push_back(q * phase_fwd[d] * q);
            vq_bwd.push_back(q * phase_bwd[d] * q);
        }
        Prop49Ctx ctx;
        for (unsigned d = 0; d <= 2; ++d) {
            OperatorMatrix beta(dim);
            for (unsigned j = 0; j <= d; ++j)
                beta = beta + scale(cxd{binom(d, j), 0.0},
                                    vq_fwd[j] * a * vq_bwd[d - j]);
            ctx.beta_gap.push_back(beta - alpha_ref[d]);
            ctx.v_gap.push_back(vq_fwd[d] - phase_fwd[d]);
        }
        return ctx;
    };

    for (std::size_t fi = 0; fi < cfg.f_set.size(); ++fi)
        for (int k = 0; k <= cfg.k_max; ++k)
            for (unsigned d = 0; d <= 2; ++d)
                sweep.variants.push_back(
                    {cfg.f_set[fi].kind_name(),
                     cfg.f_set[fi].params_string() + ";part=beta;d=" +
                         std::to_string(d) + ";t=" + fmt(t),
                     k, [&, fi, k, d](const Prop49Ctx& c, std::size_t) {
                         return weighted_seminorm(c.beta_gap[d], w, fi, k, cfg.tol);
                     }});
    for (unsigned n = 0; n <= 2; ++n)
        for (unsigned d = 0; d <= 2; ++d)
            sweep.variants.push_back(
                {"vector",
                 "n=" + std::to_string(n) + ";d=" + std::to_string(d) +
                     ";t=" + fmt(t),
                 static_cast<int>(n),
                 [&, n, d](const Prop49Ctx& c, std::size_t) {
                     double worst = 0.0;
                     for (const Vector& psi : fixtures) {
                         Vector gap = matvec(c.v_gap[d], psi);
                         gap = matvec(h_pows[n], gap);
                         worst = std::max(worst, vector_norm(gap));
                     }
                     return worst;
                 }});
    return sweep.run(Ls, dim);
}

struct Section4Ctx {
    std::vector<OperatorMatrix> corrections; // per named observable
    double closure_worst = 0.0;
    double eta_defect = 0.0;
    double delta_defect = 0.0;
};

std::vector<StudySeries> study_section4(const StudyConfig& cfg, std::size_t dim,
                                        const std::vector<double>& Ls) {
    const ModelInstance m = model_for(cfg, dim);
    const auto s0 = hermitian_eig(m.H0, cfg.tol);
    const CutoffFamily fam = build_cutoff_family(s0, Ls, cfg.tol);
    const SpectralWeights w = make_weights(s0, cfg.f_set, cfg.k_max);

    // low-order polynomials in the ladder pair
    const OperatorMatrix q_op = position_operator(dim);
    const OperatorMatrix p_op = momentum_operator(dim);
    const auto [lad_a, lad_ad] = fock_ladder(dim);
    const std::vector<std::pair<std::string, OperatorMatrix>> observables = {
        {"q", q_op}, {"p", p_op}, {"q2", q_op * q_op}, {"N", lad_ad * lad_a}};

    Sweep<Section4Ctx> sweep;
    sweep.prepare = [&](std::size_t li) {
        const OperatorMatrix& q = fam.projector_at(li);
        const OperatorMatrix h_l = cutoff_hamiltonian(m, q, cfg.tol);
        Section4Ctx ctx;
        for (const auto& [label, obs] : observables)
            ctx.corrections.push_back(leibniz_correction(m, q, obs));
        for (std::uint64_t r = 0; r < 20; ++r) {
            const OperatorMatrix obs = random_hermitian(m.dim, cfg.seed + r);
            const OperatorMatrix lhs =
                compressed_derivation(m, q, obs) + leibniz_correction(m, q, obs);
            ctx.closure_worst =
                std::max(ctx.closure_worst, max_abs_diff(lhs, derivation(h_l, obs)));
        }
        const OperatorMatrix oa = random_hermitian(m.dim, cfg.seed + 101);
        const OperatorMatrix ob = random_hermitian(m.dim, cfg.seed + 202);
        ctx.eta_defect =
            max_abs_diff(compressed_derivation(m, q, oa * ob),
                         compressed_derivation(m, q, oa) * ob +
                             oa * compressed_derivation(m, q, ob));
        const auto delta_l = [&](const OperatorMatrix& obs) {
            return compressed_derivation(m, q, obs) + leibniz_correction(m, q, obs);
        };
        ctx.delta_defect = max_abs_diff(delta_l(oa * ob),
                                        delta_l(oa) * ob + oa * delta_l(ob));
        return ctx;
    };

    for (std::size_t fi = 0; fi < cfg.f_set.size(); ++fi)
        for (int k = 0; k <= cfg.k_max; ++k)
            for (std::size_t oi = 0; oi < observables.size(); ++oi)
                sweep.variants.push_back(
                    {cfg.f_set[fi].kind_name(),
                     cfg.f_set[fi].params_string() + ";A=" + observables[oi].first,
                     k, [&, fi, k, oi](const Section4Ctx& c, std::size_t) {
                         return weighted_seminorm(c.corrections[oi], w, fi, k,
                                                  cfg.tol);
                     }});
    sweep.variants.push_back({"closure", "count=20", 0,
                              [](const Section4Ctx& c, std::size_t) {
                                  return c.closure_worst;
                              }});
    sweep.variants.push_back({"leibniz-eta", "seeded-pair", 0,
                              [](const Section4Ctx& c, std::size_t) {
                                  return c.eta_defect;
                              }});
    sweep.variants.push_back({"leibniz-delta", "seeded-pair", 0,
                              [](const Section4Ctx& c, std::size_t) {
                                  return c.delta_defect;
                              }});
    auto series = sweep.run(Ls, dim);

    for (auto& s : series) {
        if (s.f_kind == "closure") {
            double worst = 0.0;
            for (const auto& p : s.points)
                worst = std::isfinite(p.value) ? std::max(worst, p.value) : nan_value;
            const bool ok = std::isfinite(worst) && worst <= 1e-11;
            s.verdict = ok ? "converged" : "not-converged";
            s.reason = ok ? "eta_L + correction matches i[A, H_L]"
                          : "closure identity violated";
        } else if (s.f_kind == "leibniz-eta") {
            double best = 0.0;
            for (const auto& p : s.points)
                if (std::isfinite(p.value)) best = std::max(best, p.value);
            const bool witness = best > 1e-3;
            s.verdict = witness ? "converged" : "not-converged";
            s.reason = witness ? "compressed map alone violates the Leibniz rule"
                               : "expected Leibniz violation not observed";
        } else if (s.f_kind == "leibniz-delta") {
            double worst = 0.0;
            for (const auto& p : s.points)
                worst = std::isfinite(p.value) ? std::max(worst, p.value) : nan_value;
            const bool ok = std::isfinite(worst) && worst <= 1e-10;
            s.verdict = ok ? "converged" : "not-converged";
            s.reason = ok ? "corrected map satisfies the Leibniz rule"
                          : "corrected map violates the Leibniz rule";
        }
    }
    return series;
}

std::vector<StudySeries> study_diagnostics(const StudyConfig& cfg) {
    const ModelInstance proto = build_model(cfg.model, cfg.dims.front(), cfg.params);
    std::vector<StudySeries> series;

    // Kato-style relative bound profile at the largest dimension
    {
        const ModelInstance m = build_model(cfg.model, cfg.dims.back(), cfg.params);
        std::vector<double> lam_grid;
        for (double lam = 1.0; lam <= 128.0; lam *= 2.0) lam_grid.push_back(lam);
        StudySeries s;
        s.dim = cfg.dims.back();
        s.f_kind = "relbound";
        s.f_params = "grid=geometric";
        s.k = 0;
        try {
            const auto est = relative_bound_profile(m, lam_grid);
            for (const auto& [lam, a] : est.a_values) s.points.push_back({lam, a, ""});
            bool monotone = true;
            for (std::size_t i = 1; i < est.a_values.size(); ++i)
                if (est.a_values[i].second > est.a_values[i - 1].second + 1e-8)
                    monotone = false;
            s.verdict = monotone ? "converged" : "not-converged";
            s.reason =
                monotone ? "a(lambda) nonincreasing" : "a(lambda) not monotone";
        } catch (const std::exception& e) {
            s.verdict = "skipped";
            s.reason = e.what();
        }
        series.push_back(std::move(s));
    }

    // cross-bound and seminorm-equivalence profiles across the dim sweep
    const auto emit_profile = [&](const std::string& tag, unsigned k, unsigned ell,
                                  const std::vector<double>& values, bool found,
                                  const std::string& note) {
        StudySeries s;
        s.dim = cfg.dims.back();
        s.f_kind = tag;
        s.f_params = "k=" + std::to_string(k) + ";ell=" + std::to_string(ell) + note;
        s.k = static_cast<int>(k);
        for (std::size_t i = 0; i < values.size(); ++i)
            s.points.push_back({static_cast<double>(cfg.dims[i]), values[i], ""});
        bool bounded = found;
        if (bounded && values.size() >= 2) {
            const double mid = values[(values.size() - 1) / 2];
            const double last = values.back();
            bounded = (mid == 0.0) ? last == 0.0
                                   : std::abs(last - mid) <= 0.10 * std::abs(mid);
        }
        s.verdict = bounded ? "converged" : "not-converged";
        s.reason = bounded ? "profile flat across the dimension sweep"
                           : "profile grows with the truncation dimension";
        series.push_back(std::move(s));
    };

    // powers of two separate comparable from incomparable smooth domains;
    // first powers are tamed by H >= H0 even in the rank-one case
    const unsigned kk = std::max(2u, cfg.ell);
    try {
        const auto cb = cross_bound_profile(proto, kk, kk, cfg.dims);
        emit_profile("crossbound", cb.k, cb.ell, cb.values, true, "");
    } catch (const std::exception& e) {
        StudySeries s;
        s.dim = cfg.dims.back();
        s.f_kind = "crossbound";
        s.f_params = "k=" + std::to_string(kk) + ";ell=" + std::to_string(kk);
        s.verdict = "skipped";
        s.reason = e.what();
        series.push_back(std::move(s));
    }

    try {
        const auto eq = equivalence_profile(proto, kk, cfg.dims);
        emit_profile("equiv-left", eq.k, eq.ell, eq.c_left, eq.ell_found,
                     eq.ell_found ? "" : ";no-admissible-ell");
        emit_profile("equiv-right", eq.k, eq.ell, eq.c_right, eq.ell_found,
                     eq.ell_found ? "" : ";no-admissible-ell");
    } catch (const std::exception& e) {
        StudySeries s;
        s.dim = cfg.dims.back();
        s.f_kind = "equiv";
        s.verdict = "skipped";
        s.reason = e.what();
        series.push_back(std::move(s));
    }
    return series;
}

// --- verdicts ---------------------------------------------------------------

bool decay_kind(const std::string& kind) {
    return kind == "lemma2_2" || kind == "c1c2c3" || kind == "corollary2_3" ||
           kind == "lemma59" || kind == "lemma61" || kind == "prop49" ||
           kind == "section4_defect";
}

double final_finite_value(const StudySeries& s) {
    for (auto it = s.points.rbegin(); it != s.points.rend(); ++it)
        if (std::isfinite(it->value)) return it->value;
    return nan_value;
}

void attach_fits(std::vector<StudySeries>& series, const Tolerances& tol) {
    for (auto& s : series) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : s.points)
            if (p.error.empty()) pts.emplace_back(p.L, p.value);
        try {
            s.fit = fit_rate(pts, tol.fit_floor);
        } catch (const InsufficientPoints& e) {
            s.fit_note = e.what();
        }
    }
}

// stability of a series against its same-key sibling at the next dimension
void attach_stability(std::vector<StudySeries>& series, const Tolerances& tol) {
    const auto key = [](const StudySeries& s) {
        return s.f_kind + "|" + s.f_params + "|" + std::to_string(s.k);
    };
    std::map<std::string, std::vector<StudySeries*>> groups;
    for (auto& s : series) groups[key(s)].push_back(&s);
    for (auto& [k, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](auto* a, auto* b) { return a->dim < b->dim; });
        for (std::size_t i = 0; i + 1 < group.size(); ++i) {
            const auto& lo = group[i]->points;
            const auto& hi = group[i + 1]->points;
            if (lo.size() != hi.size()) continue;
            double delta = 0.0;
            for (std::size_t j = 0; j < lo.size(); ++j) {
                if (!std::isfinite(lo[j].value) || !std::isfinite(hi[j].value))
                    continue;
                if (std::max(lo[j].value, hi[j].value) <= tol.fit_floor) continue;
                // changes below the convergence threshold scale are noise
                delta = std::max(delta, std::abs(hi[j].value - lo[j].value) /
                                            std::max(lo[j].value, tol.verdict_final));
            }
            group[i + 1]->stability_delta = delta;
        }
    }
}

void decay_verdicts(std::vector<StudySeries>& series, const StudyConfig& cfg) {
    const auto key = [](const StudySeries& s) {
        return s.f_kind + "|" + s.f_params + "|" + std::to_string(s.k);
    };
    std::map<std::string, std::vector<StudySeries*>> groups;
    for (auto& s : series) {
        if (!s.verdict.empty() && s.verdict != "skipped") continue; // already set
        if (!s.reason.empty()) continue;                            // genuine skip
        groups[key(s)].push_back(&s);
    }
    for (auto& [k, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](auto* a, auto* b) { return a->dim < b->dim; });
        StudySeries* last = group.back();
        std::size_t n_err = 0;
        for (const auto& p : last->points)
            if (!p.error.empty()) ++n_err;
        if (n_err == last->points.size()) {
            for (auto* s : group) {
                s->verdict = "skipped";
                s->reason = last->points.front().error;
            }
            continue;
        }
        const double final_v = final_finite_value(*last);
        const bool final_ok = std::isfinite(final_v) && final_v < cfg.tol.verdict_final;
        bool stable_ok = true;
        std::string stability_note;
        if (group.size() >= 2) {
            if (last->stability_delta)
                stable_ok = *last->stability_delta < cfg.tol.verdict_stability;
        } else {
            stability_note = "; single dimension, stability unchecked";
        }
        const std::string verdict =
            (final_ok && stable_ok) ? "converged" : "not-converged";
        std::string reason;
        if (!final_ok)
            reason = "final value " + fmt(final_v) + " above " +
                     fmt(cfg.tol.verdict_final);
        else if (!stable_ok)
            reason = "dimension-doubling change above " +
                     fmt(cfg.tol.verdict_stability);
        else
            reason = "final below threshold, stable under dimension doubling";
        for (auto* s : group) {
            s->verdict = verdict;
            s->reason = reason + stability_note;
        }
    }
}

void prop60_verdicts(std::vector<StudySeries>& series, const StudyConfig& cfg) {
    for (auto& s : series) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        bool any = false;
        for (const auto& p : s.points) {
            if (!std::isfinite(p.value)) continue;
            any = true;
            lo = std::min(lo, p.value);
            hi = std::max(hi, p.value);
        }
        if (!any) {
            s.verdict = "skipped";
            s.reason = "no finite points";
            continue;
        }
        const bool uniform = lo > 0.0 && (hi / lo - 1.0) <= cfg.tol.prop60_uniformity;
        s.verdict = uniform ? "converged" : "not-converged";
        s.reason = uniform ? "bound uniform across the cutoff grid"
                           : "bound spreads more than the configured ratio";
    }
}

} // namespace

ConvergenceReport run_study(const StudyConfig& cfg) {
    cfg.validate();
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    ConvergenceReport rep;
    rep.kind = cfg.kind;
    rep.model = cfg.model;
    rep.seed = cfg.seed;
    rep.config_echo = config_echo_string(cfg);

    if (cfg.kind == "diagnostics") {
        rep.series = study_diagnostics(cfg);
    } else {
        const std::vector<double> Ls = shared_cutoff_grid(cfg);
        for (std::size_t dim : cfg.dims) {
            std::vector<StudySeries> part;
            if (cfg.kind == "lemma2_2") part = study_lemma2_2(cfg, dim, Ls);
            else if (cfg.kind == "c1c2c3") part = study_c1c2c3(cfg, dim, Ls);
            else if (cfg.kind == "corollary2_3") part = study_corollary2_3(cfg, dim, Ls);
            else if (cfg.kind == "lemma59") part = study_lemma59(cfg, dim, Ls);
            else if (cfg.kind == "prop60") part = study_prop60(cfg, dim, Ls);
            else if (cfg.kind == "example_aN") part = study_example_aN(cfg, dim, Ls);
            else if (cfg.kind == "lemma61") part = study_lemma61(cfg, dim, Ls);
            else if (cfg.kind == "prop62") part = study_prop62(cfg, dim, Ls);
            else if (cfg.kind == "prop49") part = study_prop49(cfg, dim, Ls);
            else if (cfg.kind == "section4_defect") part = study_section4(cfg, dim, Ls);
            rep.series.insert(rep.series.end(),
                              std::make_move_iterator(part.begin()),
                              std::make_move_iterator(part.end()));
        }
    }

    attach_fits(rep.series, cfg.tol);
    attach_stability(rep.series, cfg.tol);
    if (decay_kind(cfg.kind)) decay_verdicts(rep.series, cfg);
    if (cfg.kind == "prop60") prop60_verdicts(rep.series, cfg);

    rep.overall = "converged";
    for (const auto& s : rep.series)
        if (s.verdict == "not-converged") rep.overall = "not-converged";
    return rep;
}

} // namespace opcut
