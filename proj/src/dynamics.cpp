#include "opcut/dynamics.hpp"

#include <cmath>

#include "opcut/quadrature.hpp"

namespace opcut {

DynamicsScene DynamicsScene::build(ModelInstance m, const std::vector<double>& L_grid,
                                   const Tolerances& tol) {
    DynamicsScene sc;
    sc.h0_eig = hermitian_eig(m.H0, tol);
    sc.cutoffs = build_cutoff_family(sc.h0_eig, L_grid, tol);
    sc.hamiltonian = m.hamiltonian();
    if (m.b_hermitian) sc.h_eig = hermitian_eig(sc.hamiltonian, tol);
    sc.model = std::move(m);
    return sc;
}

OperatorMatrix heisenberg(const SpectralDecomposition& h_eig, const OperatorMatrix& a,
                          double t) {
    const OperatorMatrix u = propagator(h_eig, t);
    return u * a * adjoint(u);
}

OperatorMatrix heisenberg(const OperatorMatrix& h, const OperatorMatrix& a, double t,
                          const Tolerances& tol) {
    require_same_dim(h, a);
    if (hermiticity(h, tol).is_hermitian)
        return heisenberg(hermitian_eig(h, tol), a, t);
    const OperatorMatrix u = propagator(h, t, nullptr, tol);
    const OperatorMatrix u_back = propagator(h, -t, nullptr, tol);
    return u * a * u_back;
}

namespace {

unsigned long binom(unsigned n, unsigned j) {
    unsigned long r = 1;
    for (unsigned i = 1; i <= j; ++i) r = r * (n - j + i) / i;
    return r;
}

// (iH)^n e^{iHt} through the spectral calculus
OperatorMatrix phase_power(const SpectralDecomposition& s, double t, unsigned n) {
    return matrix_function(s, [t, n](double lam) {
        const cxd ih{0.0, lam};
        cxd p{1.0, 0.0};
        for (unsigned i = 0; i < n; ++i) p *= ih;
        return p * std::exp(cxd{0.0, lam * t});
    });
}

} // namespace

OperatorMatrix heisenberg_derivative(const SpectralDecomposition& h_eig,
                                     const OperatorMatrix& a, double t, unsigned n) {
    // d^n/dt^n [e^{iHt} A e^{-iHt}] = sum_j C(n,j) (iH)^j e^{iHt} A e^{-iHt} (-iH)^{n-j}
    OperatorMatrix acc(a.dim());
    for (unsigned j = 0; j <= n; ++j) {
        const OperatorMatrix left = phase_power(h_eig, t, j);
        const OperatorMatrix right = phase_power(h_eig, -t, n - j);
        const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
        acc = acc + scale(cxd{static_cast<double>(binom(n, j)) * sign, 0.0},
                          left * a * right);
    }
    return acc;
}

namespace {

// Propagator of the (possibly non-Hermitian) cutoff Hamiltonian.
struct CutoffPropagator {
    std::optional<SpectralDecomposition> eig; // set when H_L is Hermitian
    OperatorMatrix h_l;
    Tolerances tol;

    CutoffPropagator(const DynamicsScene& sc, std::size_t l_idx, const Tolerances& t)
        : h_l(cutoff_hamiltonian(sc.model, sc.cutoffs.projector_at(l_idx), t)),
          tol(t) {
        if (sc.model.b_hermitian) eig = hermitian_eig(h_l, tol);
    }

    OperatorMatrix at(double t) const {
        if (eig) return propagator(*eig, t);
        if (t == 0.0) return OperatorMatrix::identity(h_l.dim());
        return expm(scale(cxd{0.0, t}, h_l));
    }
};

OperatorMatrix full_propagator(const DynamicsScene& sc, double t,
                               const Tolerances& tol) {
    if (sc.h_eig) return propagator(*sc.h_eig, t);
    if (t == 0.0) return OperatorMatrix::identity(sc.hamiltonian.dim());
    return expm(scale(cxd{0.0, t}, sc.hamiltonian));
}

} // namespace

OperatorMatrix propagator_gap_direct(const DynamicsScene& sc, std::size_t l_idx,
                                     double t, const Tolerances& tol) {
    const CutoffPropagator ul(sc, l_idx, tol);
    return ul.at(t) - full_propagator(sc, t, tol);
}

OperatorMatrix propagator_gap_integral(const DynamicsScene& sc, std::size_t l_idx,
                                       double t, int points, int initial_panels,
                                       const Tolerances& tol, int* panels_used) {
    if (t < 0.0) throw BadParams("integral representation assumes t >= 0");
    const std::size_t dim = sc.model.dim;
    if (t == 0.0) {
        if (panels_used) *panels_used = 0;
        return OperatorMatrix(dim);
    }
    const CutoffPropagator ul(sc, l_idx, tol);
    const OperatorMatrix gap = ul.h_l - sc.hamiltonian;
    const auto integrand = [&](double s) {
        return ul.at(t - s) * gap * full_propagator(sc, s, tol);
    };
    OperatorMatrix integral = integrate_matrix_adaptive(integrand, dim, 0.0, t,
                                                        points, initial_panels, tol,
                                                        panels_used);
    return scale(cxd{0.0, 1.0}, integral);
}

double generator_gap_norm(const DynamicsScene& sc, std::size_t l_idx, unsigned s,
                          unsigned k, const Tolerances& tol) {
    const OperatorMatrix h_l =
        cutoff_hamiltonian(sc.model, sc.cutoffs.projector_at(l_idx), tol);
    const OperatorMatrix gap = h_l - sc.hamiltonian;
    const OperatorMatrix left = matrix_function(sc.h0_eig, [s](double x) {
        return cxd{std::pow(x, -static_cast<double>(s)), 0.0};
    });
    const OperatorMatrix right = matrix_function(sc.h0_eig, [k](double x) {
        return cxd{std::pow(x, static_cast<double>(k)), 0.0};
    });
    return operator_norm_est(weighted_product(left, gap, right), 1e-11, tol);
}

double evolution_bound_integral(const DynamicsScene& sc, std::size_t l_idx,
                                const TestFunction& f, unsigned s, double T,
                                int points, int initial_panels,
                                const Tolerances& tol) {
    if (T <= 0.0) throw BadParams("integration horizon must be positive");
    const CutoffPropagator ul(sc, l_idx, tol);
    const OperatorMatrix f_h0 =
        matrix_function(sc.h0_eig, [&f](double x) { return cxd{f(x), 0.0}; });
    const OperatorMatrix h0_s = matrix_function(sc.h0_eig, [s](double x) {
        return cxd{std::pow(x, static_cast<double>(s)), 0.0};
    });
    const GaussLegendreRule rule(points);

    // nodes sit at k*h + offset_i, so one panel-step propagator and `points`
    // offset propagators cover a whole refinement level; this keeps the
    // scaling-and-squaring path affordable when H_L is not Hermitian
    const auto level_value = [&](int panels) {
        const double h = T / panels;
        std::vector<OperatorMatrix> u_off;
        u_off.reserve(rule.nodes.size());
        for (double x : rule.nodes) u_off.push_back(ul.at(0.5 * h * (x + 1.0)));
        const OperatorMatrix step = ul.at(h);
        OperatorMatrix walker = OperatorMatrix::identity(f_h0.dim());
        double acc = 0.0;
        for (int p = 0; p < panels; ++p) {
            for (std::size_t i = 0; i < u_off.size(); ++i)
                acc += 0.5 * h * rule.weights[i] *
                       operator_norm_est(
                           weighted_product(f_h0, walker * u_off[i], h0_s), 1e-11,
                           tol);
            if (p + 1 < panels) walker = walker * step;
        }
        return acc;
    };

    int panels = std::max(1, initial_panels);
    double prev = level_value(panels);
    while (true) {
        if (2 * panels > tol.quad_max_panels)
            throw QuadratureBudgetExceeded("evolution bound quadrature budget");
        panels *= 2;
        const double next = level_value(panels);
        if (std::abs(next - prev) <= tol.quad_target * std::max(1.0, std::abs(next)))
            return next;
        prev = next;
    }
}

LadderBound ladder_bound_check(const ModelInstance& m, const TestFunction& f,
                               double L_label, double tau, const Tolerances& tol) {
    if (!m.number_family || m.b_hermitian || m.params.n < 1)
        throw WrongModelFamily("uniform bound check needs the a^n ladder model");
    const unsigned n = static_cast<unsigned>(m.params.n);
    const OperatorMatrix h = m.hamiltonian(); // upper triangular
    const auto s0 = hermitian_eig(m.H0, tol);

    const OperatorMatrix f_h = matrix_function_general(
        h, [&f](double x) { return cxd{f(x), 0.0}; }, tol);
    const OperatorMatrix band =
        band_projector(s0, L_label + m.shift, n, tol); // labels -> spectrum
    const OperatorMatrix phase =
        expm(scale(cxd{0.0, tau}, h)) - OperatorMatrix::identity(m.dim);
    const OperatorMatrix inner = h + phase * m.B * band;

    LadderBound out;
    out.lhs = operator_norm(f_h * inner, tol);
    out.rhs = operator_norm(f_h * h, tol) + 2.0 * operator_norm(f_h * m.B, tol);
    return out;
}

double power_gap_norm(const DynamicsScene& sc, std::size_t l_idx,
                      const TestFunction& f, unsigned ell, unsigned k,
                      const Tolerances& tol) {
    if (!sc.h_eig) throw NotHermitianH("power gap norm needs Hermitian H");
    if (ell == 0) return 0.0;
    const OperatorMatrix h_l =
        cutoff_hamiltonian(sc.model, sc.cutoffs.projector_at(l_idx), tol);
    const OperatorMatrix gap = power(h_l, ell) - power(sc.hamiltonian, ell);
    const OperatorMatrix f_h =
        matrix_function(*sc.h_eig, [&f](double x) { return cxd{f(x), 0.0}; });
    const OperatorMatrix h_k = matrix_function(*sc.h_eig, [k](double x) {
        return cxd{std::pow(x, static_cast<double>(k)), 0.0};
    });
    return operator_norm_est(weighted_product(f_h, gap, h_k), 1e-11, tol);
}

OperatorMatrix iterated_commutator(const OperatorMatrix& x, const OperatorMatrix& y,
                                   unsigned m) {
    if (m < 1) throw BadParams("iterated commutator order must be >= 1");
    OperatorMatrix c = commutator(x, y);
    for (unsigned j = 1; j < m; ++j) c = commutator(x, c);
    return c;
}

std::optional<unsigned> nilpotency_order(const OperatorMatrix& x,
                                         const OperatorMatrix& y, unsigned max_m) {
    OperatorMatrix c = commutator(x, y);
    const double base = max_abs(c);
    if (base == 0.0) return 0u; // already commuting
    for (unsigned m = 1; m <= max_m; ++m) {
        c = commutator(x, c); // now C_{m+1}
        if (max_abs(c) <= 1e-10 * base) return m;
    }
    return std::nullopt;
}

OperatorMatrix adjoint_series(const OperatorMatrix& x, const OperatorMatrix& y,
                              double dt, unsigned m) {
    require_same_dim(x, y);
    if (m > 0) {
        const OperatorMatrix tail = iterated_commutator(x, y, m + 1);
        const OperatorMatrix first = commutator(x, y);
        if (max_abs(tail) > 1e-10 * std::max(max_abs(first), 1e-300))
            throw NotNilpotent("commutator chain does not terminate at order " +
                               std::to_string(m + 1));
    } else {
        if (max_abs(commutator(x, y)) > 1e-10 * std::max(max_abs(y), 1e-300))
            throw NotNilpotent("operators do not commute");
    }
    OperatorMatrix sum = y;
    OperatorMatrix c = y;
    cxd coeff{1.0, 0.0};
    for (unsigned j = 1; j <= m; ++j) {
        c = commutator(x, c);
        coeff *= cxd{0.0, dt} / static_cast<double>(j);
        sum = sum + scale(coeff, c);
    }
    return sum;
}

OperatorMatrix compressed_propagator(const DynamicsScene& sc, std::size_t l_idx,
                                     double t, unsigned deriv_order) {
    if (!sc.h_eig) throw NotHermitianH("compressed propagator needs Hermitian H");
    const OperatorMatrix& q = sc.cutoffs.projector_at(l_idx);
    return q * phase_power(*sc.h_eig, t, deriv_order) * q;
}

OperatorMatrix compressed_heisenberg(const DynamicsScene& sc, std::size_t l_idx,
                                     const OperatorMatrix& a, double t,
                                     unsigned deriv_order) {
    if (!sc.h_eig) throw NotHermitianH("compressed map needs Hermitian H");
    const OperatorMatrix& q = sc.cutoffs.projector_at(l_idx);
    if (deriv_order == 0) {
        const OperatorMatrix v_fwd = q * propagator(*sc.h_eig, t) * q;
        const OperatorMatrix v_bwd = q * propagator(*sc.h_eig, -t) * q;
        return v_fwd * a * v_bwd;
    }
    // Leibniz over d^j V^t and d^{n-j} V^{-t}; derivatives of V^{-t} in t
    // carry (-iH)^{n-j}.
    OperatorMatrix acc(a.dim());
    for (unsigned j = 0; j <= deriv_order; ++j) {
        const unsigned r = deriv_order - j;
        const OperatorMatrix dj = q * phase_power(*sc.h_eig, t, j) * q;
        const double sign = (r % 2 == 0) ? 1.0 : -1.0;
        const OperatorMatrix dr = q * phase_power(*sc.h_eig, -t, r) * q;
        acc = acc + scale(cxd{static_cast<double>(binom(deriv_order, j)) * sign, 0.0},
                          dj * a * dr);
    }
    return acc;
}

OperatorMatrix derivation(const OperatorMatrix& h_gen, const OperatorMatrix& a) {
    return scale(cxd{0.0, 1.0}, commutator(a, h_gen));
}

OperatorMatrix compressed_derivation(const ModelInstance& m, const OperatorMatrix& q_l,
                                     const OperatorMatrix& a) {
    require_same_dim(m.H0, a);
    return q_l * derivation(m.hamiltonian(), a) * q_l;
}

OperatorMatrix leibniz_correction(const ModelInstance& m, const OperatorMatrix& q_l,
                                  const OperatorMatrix& a) {
    require_same_dim(m.H0, a);
    const OperatorMatrix qa = commutator(q_l, a);
    const OperatorMatrix sum = anticommutator(q_l * m.H0, qa) + q_l * m.B * qa +
                               qa * m.B * q_l;
    return scale(cxd{0.0, -1.0}, sum);
}

} // namespace opcut
