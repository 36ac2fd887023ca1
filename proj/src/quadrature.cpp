#include "opcut/quadrature.hpp"

#include <cmath>

#include "opcut/errors.hpp"

namespace opcut {

GaussLegendreRule::GaussLegendreRule(int points) {
    if (points < 1) throw BadParams("quadrature needs >= 1 point");
    const int n = points;
    nodes.resize(n);
    weights.resize(n);
    // roots come in +/- pairs; Newton from the Chebyshev-like initial guess
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // evaluate P_n and P_n' by the three-term recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

std::vector<std::pair<double, double>> CompositeQuadrature::abscissae() const {
    const GaussLegendreRule rule(points);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(points) * panels);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double left = a + p * h;
        for (int i = 0; i < points; ++i) {
            const double x = left + 0.5 * h * (rule.nodes[i] + 1.0);
            out.emplace_back(x, 0.5 * h * rule.weights[i]);
        }
    }
    return out;
}

double integrate_scalar(const std::function<double(double)>& f,
                        const CompositeQuadrature& q) {
    double acc = 0.0;
    for (const auto& [x, w] : q.abscissae()) acc += w * f(x);
    return acc;
}

OperatorMatrix integrate_matrix(const std::function<OperatorMatrix(double)>& f,
                                std::size_t dim, const CompositeQuadrature& q) {
    OperatorMatrix acc(dim);
    for (const auto& [x, w] : q.abscissae()) {
        const OperatorMatrix fx = f(x);
        require_same_dim(acc, fx);
        for (std::size_t i = 0; i < dim * dim; ++i)
            acc.data()[i] += w * fx.data()[i];
    }
    return acc;
}

OperatorMatrix integrate_matrix_adaptive(
    const std::function<OperatorMatrix(double)>& f, std::size_t dim, double a,
    double b, int points, int initial_panels, const Tolerances& tol,
    int* panels_used) {
    if (b == a) {
        if (panels_used) *panels_used = 0;
        return OperatorMatrix(dim);
    }
    int panels = std::max(1, initial_panels);
    OperatorMatrix prev = integrate_matrix(f, dim, {points, panels, a, b});
    while (true) {
        if (2 * panels > tol.quad_max_panels)
            throw QuadratureBudgetExceeded(
                "no quadrature agreement below " + std::to_string(tol.quad_target) +
                " within " + std::to_string(tol.quad_max_panels) + " panels");
        panels *= 2;
        OperatorMatrix next = integrate_matrix(f, dim, {points, panels, a, b});
        if (max_abs_diff(prev, next) <= tol.quad_target) {
            if (panels_used) *panels_used = panels;
            return next;
        }
        prev = std::move(next);
    }
}

double integrate_scalar_adaptive(const std::function<double(double)>& f,
                                 double a, double b, int points,
                                 int initial_panels, const Tolerances& tol,
                                 int* panels_used) {
    if (b == a) {
        if (panels_used) *panels_used = 0;
        return 0.0;
    }
    int panels = std::max(1, initial_panels);
    double prev = integrate_scalar(f, {points, panels, a, b});
    while (true) {
        if (2 * panels > tol.quad_max_panels)
            throw QuadratureBudgetExceeded("scalar quadrature budget exhausted");
        panels *= 2;
        const double next = integrate_scalar(f, {points, panels, a, b});
        if (std::abs(next - prev) <= tol.quad_target) {
            if (panels_used) *panels_used = panels;
            return next;
        }
        prev = next;
    }
}

} // namespace opcut
