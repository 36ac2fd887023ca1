#include "opcut/matrix.hpp"

#include <cmath>

#include "opcut/kernels.hpp"

namespace opcut {

OperatorMatrix OperatorMatrix::identity(std::size_t dim) {
    OperatorMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = cxd{1.0, 0.0};
    return m;
}

OperatorMatrix OperatorMatrix::diagonal(const std::vector<double>& d) {
    OperatorMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = cxd{d[i], 0.0};
    return m;
}

OperatorMatrix OperatorMatrix::diagonal(const std::vector<cxd>& d) {
    OperatorMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

void require_same_dim(const OperatorMatrix& x, const OperatorMatrix& y) {
    if (x.dim() != y.dim())
        throw DimensionMismatch("operand dimensions differ");
}

OperatorMatrix adjoint(const OperatorMatrix& x) {
    OperatorMatrix r(x.dim());
    kernels::adjoint(x.data(), r.data(), x.dim());
    return r;
}

OperatorMatrix multiply(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_dim(x, y);
    OperatorMatrix r(x.dim());
    kernels::gemm(x.data(), y.data(), r.data(), x.dim());
    return r;
}

OperatorMatrix add(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_dim(x, y);
    OperatorMatrix r(x.dim());
    kernels::axpby({1.0, 0.0}, x.data(), {1.0, 0.0}, y.data(), r.data(),
                   x.dim() * x.dim());
    return r;
}

OperatorMatrix subtract(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_dim(x, y);
    OperatorMatrix r(x.dim());
    kernels::axpby({1.0, 0.0}, x.data(), {-1.0, 0.0}, y.data(), r.data(),
                   x.dim() * x.dim());
    return r;
}

OperatorMatrix scale(cxd alpha, const OperatorMatrix& x) {
    OperatorMatrix r(x.dim());
    kernels::axpby(alpha, x.data(), {0.0, 0.0}, x.data(), r.data(),
                   x.dim() * x.dim());
    return r;
}

OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_dim(x, y);
    return subtract(multiply(x, y), multiply(y, x));
}

OperatorMatrix anticommutator(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_dim(x, y);
    return add(multiply(x, y), multiply(y, x));
}

Vector matvec(const OperatorMatrix& x, const Vector& v) {
    if (v.size() != x.dim()) throw DimensionMismatch("vector length != dim");
    Vector y(v.size());
    kernels::gemv(x.data(), v.data(), y.data(), x.dim());
    return y;
}

cxd trace(const OperatorMatrix& x) {
    cxd t{0.0, 0.0};
    for (std::size_t i = 0; i < x.dim(); ++i) t += x(i, i);
    return t;
}

double max_abs(const OperatorMatrix& x) {
    return kernels::maxabs(x.data(), x.dim() * x.dim());
}

double max_abs_diff(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_dim(x, y);
    double m = 0.0;
    const std::size_t nn = x.dim() * x.dim();
    for (std::size_t i = 0; i < nn; ++i)
        m = std::max(m, std::abs(x.data()[i] - y.data()[i]));
    return m;
}

double frobenius_norm(const OperatorMatrix& x) {
    return kernels::frobenius(x.data(), x.dim());
}

double vector_norm(const Vector& v) {
    double s = 0.0;
    for (const cxd& z : v) s += z.real() * z.real() + z.imag() * z.imag();
    return std::sqrt(s);
}

bool is_exactly_diagonal(const OperatorMatrix& x) {
    for (std::size_t i = 0; i < x.dim(); ++i)
        for (std::size_t j = 0; j < x.dim(); ++j)
            if (i != j && x(i, j) != cxd{0.0, 0.0}) return false;
    return true;
}

HermiticityReport hermiticity(const OperatorMatrix& x, const Tolerances& tol) {
    double defect = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i)
        for (std::size_t j = i; j < x.dim(); ++j)
            defect = std::max(defect, std::abs(x(i, j) - std::conj(x(j, i))));
    HermiticityReport rep;
    rep.defect = defect;
    rep.is_hermitian = defect <= tol.herm * (1.0 + max_abs(x));
    return rep;
}

} // namespace opcut
