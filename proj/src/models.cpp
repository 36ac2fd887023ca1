#include "opcut/models.hpp"

#include <cmath>

#include "opcut/eig.hpp"
#include "opcut/matfun.hpp"

namespace opcut {

LadderPair fock_ladder(std::size_t dim) {
    if (dim < 2) throw BadDimension("ladder needs dim >= 2");
    OperatorMatrix a(dim);
    for (std::size_t n = 1; n < dim; ++n)
        a(n - 1, n) = cxd{std::sqrt(static_cast<double>(n)), 0.0};
    return {a, adjoint(a)};
}

OperatorMatrix position_operator(std::size_t dim) {
    const auto [a, ad] = fock_ladder(dim);
    return scale(cxd{1.0 / std::sqrt(2.0), 0.0}, a + ad);
}

OperatorMatrix momentum_operator(std::size_t dim) {
    const auto [a, ad] = fock_ladder(dim);
    return scale(cxd{0.0, 1.0 / std::sqrt(2.0)}, ad - a);
}

double commuting_g(double x, double coupling) { return coupling / (1.0 + x); }

const std::vector<CatalogEntry>& model_catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"number-aN", "n: integer, 1 <= n < dim",
         "H0 = a^dag a + 1, B = a^n (non-Hermitian ladder power)"},
        {"number-aN-sym", "n: integer, 1 <= n < dim",
         "H0 = a^dag a + 1, B = a^n + (a^dag)^n (Hermitian ladder power)"},
        {"oscillator-linear", "alpha: real",
         "H0 = p^2 + q^2, B = alpha q (shifted oscillator)"},
        {"oscillator-minus-q2", "",
         "H0 = p^2 + q^2, B = -q^2 (free-particle limit)"},
        {"rank-one", "",
         "H0 = a^dag a + 1, B = rank-one projector with coefficients ~ 1/(n+1)"},
        {"commuting", "c: real",
         "H0 = a^dag a + 1, B = c/(1 + H0) (bounded, commutes with H0)"},
    };
    return entries;
}

namespace {

OperatorMatrix number_plus_one(std::size_t dim) {
    // diag(1..dim) exactly; equals a^dag a + 1 without product round-off
    std::vector<double> d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = static_cast<double>(i + 1);
    return OperatorMatrix::diagonal(d);
}

OperatorMatrix ladder_power(std::size_t dim, int n) {
    const auto [a, ad] = fock_ladder(dim);
    return power(a, static_cast<unsigned>(n));
}

} // namespace

ModelInstance build_model(const std::string& name, std::size_t dim,
                          const ModelParams& params) {
    if (dim < 4) throw BadParams("catalog models need dim >= 4");
    ModelInstance m;
    m.name = name;
    m.dim = dim;
    m.params = params;

    if (name == "number-aN" || name == "number-aN-sym") {
        if (params.n < 1 || static_cast<std::size_t>(params.n) >= dim)
            throw BadParams("ladder power n must satisfy 1 <= n < dim");
        m.H0 = number_plus_one(dim);
        m.shift = 1.0; // raw a^dag a has minimum 0
        m.number_family = true;
        const OperatorMatrix an = ladder_power(dim, params.n);
        if (name == "number-aN") {
            m.B = an;
            m.b_hermitian = false;
            m.description = "H0 = N + 1, B = a^" + std::to_string(params.n);
        } else {
            m.B = an + adjoint(an);
            m.b_hermitian = true;
            m.description = "H0 = N + 1, B = a^" + std::to_string(params.n) +
                            " + (a^dag)^" + std::to_string(params.n);
        }
    } else if (name == "oscillator-linear" || name == "oscillator-minus-q2") {
        const OperatorMatrix q = position_operator(dim);
        const OperatorMatrix p = momentum_operator(dim);
        m.H0 = p * p + q * q; // exactly diagonal: the off-band products cancel
        m.shift = 0.0;        // lowest level is already 1
        m.number_family = false;
        if (name == "oscillator-linear") {
            m.B = scale(cxd{params.alpha, 0.0}, q);
            m.description = "H0 = p^2 + q^2, B = alpha q, alpha = " +
                            std::to_string(params.alpha);
        } else {
            m.B = scale(cxd{-1.0, 0.0}, q * q);
            m.description = "H0 = p^2 + q^2, B = -q^2";
        }
        m.b_hermitian = true;
    } else if (name == "rank-one") {
        m.H0 = number_plus_one(dim);
        m.shift = 1.0;
        m.number_family = true;
        // slowest square-summable decay clearly outside the smooth domain
        std::vector<double> f(dim);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            f[i] = 1.0 / static_cast<double>(i + 1);
            norm2 += f[i] * f[i];
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : f) v *= inv;
        OperatorMatrix b(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                b(i, j) = cxd{f[i] * f[j], 0.0};
        m.B = std::move(b);
        m.b_hermitian = true;
        m.description = "H0 = N + 1, B = |f><f| with f_n ~ 1/(n+1)";
    } else if (name == "commuting") {
        m.H0 = number_plus_one(dim);
        m.shift = 1.0;
        m.number_family = true;
        OperatorMatrix b(dim);
        for (std::size_t i = 0; i < dim; ++i)
            b(i, i) = cxd{commuting_g(static_cast<double>(i + 1), params.coupling), 0.0};
        m.B = std::move(b);
        m.b_hermitian = true;
        m.description = "H0 = N + 1, B = c/(1 + H0), c = " +
                        std::to_string(params.coupling);
    } else {
        throw UnknownModel("no catalog entry named '" + name + "'");
    }
    return m;
}

RelativeBoundEstimate relative_bound_profile(const ModelInstance& m,
                                             const std::vector<double>& lambda_grid) {
    if (lambda_grid.empty()) throw BadParams("lambda grid must be nonempty");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (lambda_grid[i] <= 0.0 ||
            (i > 0 && lambda_grid[i] <= lambda_grid[i - 1]))
            throw BadParams("lambda grid must be positive ascending");
    }
    const auto s = hermitian_eig(m.H0);
    RelativeBoundEstimate est;
    for (double lam : lambda_grid) {
        // (H0 - i lambda)^{-1} through the spectral calculus; the resolvent
        // never degenerates for real spectrum and lambda > 0
        const OperatorMatrix resolvent = matrix_function(
            s, [lam](double x) { return 1.0 / cxd{x, -lam}; });
        const double a = operator_norm(m.B * resolvent);
        est.a_values.emplace_back(lam, a);
    }
    est.a_inf = est.a_values.back().second;
    est.b_witness = lambda_grid.back() * est.a_inf;
    return est;
}

CrossBoundProfile cross_bound_profile(const ModelInstance& prototype, unsigned k,
                                      unsigned ell,
                                      const std::vector<std::size_t>& dims) {
    if (!prototype.b_hermitian)
        throw NotHermitianH("cross-bound profile needs Hermitian H = H0 + B");
    CrossBoundProfile out;
    out.k = k;
    out.ell = ell;
    for (std::size_t d : dims) {
        const ModelInstance m = build_model(prototype.name, d, prototype.params);
        OperatorMatrix h = m.hamiltonian();
        const auto sh = hermitian_eig(h);
        double shift = 0.0;
        if (sh.eigenvalues.front() < 1.0) shift = 1.0 - sh.eigenvalues.front();
        SpectralDecomposition shifted = sh;
        for (double& lam : shifted.eigenvalues) lam += shift;
        const OperatorMatrix h_inv_ell = matrix_function(
            shifted, [ell](double x) { return std::pow(x, -static_cast<double>(ell)); });
        const OperatorMatrix h0_k = power(m.H0, k);
        out.dims.push_back(d);
        out.values.push_back(operator_norm(h0_k * h_inv_ell));
        out.shifts.push_back(shift);
    }
    return out;
}

} // namespace opcut
