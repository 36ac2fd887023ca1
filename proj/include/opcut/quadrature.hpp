#ifndef OPCUT_QUADRATURE_HPP
#define OPCUT_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "opcut/matrix.hpp"
#include "opcut/tolerances.hpp"

namespace opcut {

// Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1],
// computed by Newton iteration on the Legendre polynomial.
struct GaussLegendreRule {
    explicit GaussLegendreRule(int points);
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Composite rule: `panels` equal panels over [a, b], q points each.
struct CompositeQuadrature {
    int points = 8;
    int panels = 1;
    double a = 0.0;
    double b = 1.0;

    // all (node, weight) pairs in evaluation order
    std::vector<std::pair<double, double>> abscissae() const;
};

double integrate_scalar(const std::function<double(double)>& f,
                        const CompositeQuadrature& q);

OperatorMatrix integrate_matrix(const std::function<OperatorMatrix(double)>& f,
                                std::size_t dim, const CompositeQuadrature& q);

// Doubles the panel count until two successive composite values agree to
// tol.quad_target in max-abs, starting from `initial_panels`.  Throws
// QuadratureBudgetExceeded past tol.quad_max_panels.
OperatorMatrix integrate_matrix_adaptive(
    const std::function<OperatorMatrix(double)>& f, std::size_t dim, double a,
    double b, int points = 8, int initial_panels = 1,
    const Tolerances& tol = default_tolerances(), int* panels_used = nullptr);

double integrate_scalar_adaptive(const std::function<double(double)>& f,
                                 double a, double b, int points = 8,
                                 int initial_panels = 1,
                                 const Tolerances& tol = default_tolerances(),
                                 int* panels_used = nullptr);

} // namespace opcut

#endif
