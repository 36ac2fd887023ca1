#include "opcut/seminorms.hpp"

#include <cmath>

#include "opcut/matfun.hpp"

namespace opcut {

double TestFunction::operator()(double x) const {
    switch (kind) {
        case Kind::exponential: return std::exp(-alpha * x);
        case Kind::gaussian: return std::exp(-alpha * x * x);
        case Kind::poly_exp:
            return std::pow(x, static_cast<double>(m)) * std::exp(-alpha * x);
    }
    return 0.0;
}

std::string TestFunction::kind_name() const {
    switch (kind) {
        case Kind::exponential: return "exp";
        case Kind::gaussian: return "gauss";
        case Kind::poly_exp: return "polyexp";
    }
    return "?";
}

namespace {
std::string trim_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}
} // namespace

std::string TestFunction::params_string() const {
    if (kind == Kind::poly_exp)
        return "m=" + std::to_string(m) + ";alpha=" + trim_number(alpha);
    return "alpha=" + trim_number(alpha);
}

TestFunction TestFunction::parse(const std::string& spec) {
    const auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(':', start);
            parts.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    const auto parts = split(spec);
    try {
        if (parts[0] == "exp")
            return exponential(parts.size() > 1 ? std::stod(parts[1]) : 1.0);
        if (parts[0] == "gauss")
            return gaussian(parts.size() > 1 ? std::stod(parts[1]) : 1.0);
        if (parts[0] == "polyexp") {
            if (parts.size() < 2) throw ConfigError("polyexp needs a degree");
            const int m = std::stoi(parts[1]);
            const double a = parts.size() > 2 ? std::stod(parts[2]) : 1.0;
            return poly_exp(m, a);
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("malformed test-function spec '" + spec + "'");
    }
    throw ConfigError("unknown test-function kind in '" + spec + "'");
}

const std::vector<TestFunction>& default_test_functions() {
    static const std::vector<TestFunction> fs = {
        TestFunction::exponential(1.0),
        TestFunction::gaussian(1.0),
        TestFunction::poly_exp(2, 1.0),
    };
    return fs;
}

SeminormValue quasi_uniform_seminorm(const OperatorMatrix& a,
                                     const SpectralDecomposition& s,
                                     const TestFunction& f, int k,
                                     const std::string& reference,
                                     bool right_term_only, bool estimate,
                                     const Tolerances& tol) {
    if (a.dim() != s.dim()) throw DimensionMismatch("observable vs generator dim");
    if (k < 0) throw BadParams("seminorm order k must be >= 0");

    const OperatorMatrix s_pow = matrix_function(
        s, [k](double x) { return cxd{std::pow(x, static_cast<double>(k)), 0.0}; });
    const OperatorMatrix f_s =
        matrix_function(s, [&f](double x) { return cxd{f(x), 0.0}; });

    const auto norm_of = [&](const OperatorMatrix& w) {
        return estimate ? operator_norm_est(w, 1e-11, tol) : operator_norm(w, tol);
    };

    SeminormValue out;
    out.f = f;
    out.k = k;
    out.reference = reference;
    out.right = norm_of(weighted_product(f_s, a, s_pow));
    out.left = right_term_only ? out.right : norm_of(weighted_product(s_pow, a, f_s));
    out.value = std::max(out.left, out.right);
    return out;
}

std::vector<SeminormValue> seminorm_grid(const OperatorMatrix& a,
                                         const SpectralDecomposition& s,
                                         const std::vector<TestFunction>& f_set,
                                         int k_max, const std::string& reference,
                                         bool estimate, const Tolerances& tol) {
    if (f_set.empty()) throw BadParams("seminorm grid needs a nonempty F set");
    std::vector<SeminormValue> out;
    out.reserve(f_set.size() * static_cast<std::size_t>(k_max + 1));
    for (const TestFunction& f : f_set)
        for (int k = 0; k <= k_max; ++k)
            out.push_back(
                quasi_uniform_seminorm(a, s, f, k, reference, false, estimate, tol));
    return out;
}

namespace {

bool profile_bounded(const std::vector<double>& values) {
    // flat over the top octave: the last value within 10% of the value at
    // half the largest dimension index
    if (values.size() < 2) return true;
    const double last = values.back();
    const double mid = values[(values.size() - 1) / 2];
    if (mid == 0.0) return last == 0.0;
    return std::abs(last - mid) <= 0.10 * std::abs(mid);
}

} // namespace

EquivalenceProfile equivalence_profile(const ModelInstance& prototype, unsigned k,
                                       const std::vector<std::size_t>& dims) {
    if (!prototype.b_hermitian)
        throw NotHermitianH("equivalence profile needs Hermitian H = H0 + B");
    if (dims.size() < 2) throw BadParams("equivalence profile needs >= 2 dims");

    EquivalenceProfile out;
    out.k = k;
    for (unsigned ell = k; ell <= k + 4; ++ell) {
        out.ell = ell;
        out.dims.clear();
        out.c_left.clear();
        out.c_right.clear();
        out.shifts.clear();
        for (std::size_t d : dims) {
            const ModelInstance m = build_model(prototype.name, d, prototype.params);
            const OperatorMatrix h = m.hamiltonian();
            auto sh = hermitian_eig(h);
            double shift = 0.0;
            if (sh.eigenvalues.front() < 1.0) shift = 1.0 - sh.eigenvalues.front();
            for (double& lam : sh.eigenvalues) lam += shift;
            const auto s0 = hermitian_eig(m.H0);

            const auto pow_fun = [](double e) {
                return [e](double x) { return cxd{std::pow(x, e), 0.0}; };
            };
            const OperatorMatrix h_k = matrix_function(sh, pow_fun(double(k)));
            const OperatorMatrix h_minus_ell = matrix_function(sh, pow_fun(-double(ell)));
            const OperatorMatrix h0_k = matrix_function(s0, pow_fun(double(k)));
            const OperatorMatrix h0_minus_ell =
                matrix_function(s0, pow_fun(-double(ell)));

            out.dims.push_back(d);
            out.c_left.push_back(operator_norm_est(h_k * h0_minus_ell));
            out.c_right.push_back(operator_norm_est(h0_k * h_minus_ell));
            out.shifts.push_back(shift);
        }
        if (profile_bounded(out.c_left) && profile_bounded(out.c_right)) {
            out.ell_found = true;
            return out;
        }
    }
    out.ell_found = false; // report the k+4 attempt
    return out;
}

} // namespace opcut
