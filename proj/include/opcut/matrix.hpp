#ifndef OPCUT_MATRIX_HPP
#define OPCUT_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "opcut/errors.hpp"
#include "opcut/tolerances.hpp"

namespace opcut {

using cxd = std::complex<double>;
using Vector = std::vector<cxd>;

// Dense square complex matrix, row-major.  Represents an operator on a
// d-dimensional truncation of the Hilbert space.  Values are immutable in
// spirit: every operation returns a fresh matrix.
class OperatorMatrix {
  public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(std::size_t dim)
        : dim_(dim), entries_(dim * dim, cxd{0.0, 0.0}) {
        if (dim == 0) throw BadDimension("matrix dimension must be >= 1");
    }
    OperatorMatrix(std::size_t dim, std::vector<cxd> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim == 0) throw BadDimension("matrix dimension must be >= 1");
        if (entries_.size() != dim * dim)
            throw DimensionMismatch("entry count does not match dim^2");
    }

    std::size_t dim() const { return dim_; }
    cxd& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const cxd& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * dim_ + j];
    }
    cxd* data() { return entries_.data(); }
    const cxd* data() const { return entries_.data(); }
    const std::vector<cxd>& entries() const { return entries_; }

    static OperatorMatrix identity(std::size_t dim);
    static OperatorMatrix zero(std::size_t dim) { return OperatorMatrix(dim); }
    static OperatorMatrix diagonal(const std::vector<double>& d);
    static OperatorMatrix diagonal(const std::vector<cxd>& d);

  private:
    std::size_t dim_ = 0;
    std::vector<cxd> entries_;
};

struct HermiticityReport {
    bool is_hermitian = false;
    double defect = 0.0; // maxabs of X - X^dag
};

// --- arithmetic -----------------------------------------------------------

OperatorMatrix adjoint(const OperatorMatrix& x);
OperatorMatrix multiply(const OperatorMatrix& x, const OperatorMatrix& y);
OperatorMatrix add(const OperatorMatrix& x, const OperatorMatrix& y);
OperatorMatrix subtract(const OperatorMatrix& x, const OperatorMatrix& y);
OperatorMatrix scale(cxd alpha, const OperatorMatrix& x);
OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y);
OperatorMatrix anticommutator(const OperatorMatrix& x, const OperatorMatrix& y);

inline OperatorMatrix operator*(const OperatorMatrix& x, const OperatorMatrix& y) {
    return multiply(x, y);
}
inline OperatorMatrix operator+(const OperatorMatrix& x, const OperatorMatrix& y) {
    return add(x, y);
}
inline OperatorMatrix operator-(const OperatorMatrix& x, const OperatorMatrix& y) {
    return subtract(x, y);
}
inline OperatorMatrix operator*(cxd alpha, const OperatorMatrix& x) {
    return scale(alpha, x);
}

Vector matvec(const OperatorMatrix& x, const Vector& v);
cxd trace(const OperatorMatrix& x);
double max_abs(const OperatorMatrix& x);
double max_abs_diff(const OperatorMatrix& x, const OperatorMatrix& y);
double frobenius_norm(const OperatorMatrix& x);
double vector_norm(const Vector& v);

// True when every off-diagonal entry is exactly zero.
bool is_exactly_diagonal(const OperatorMatrix& x);

HermiticityReport hermiticity(const OperatorMatrix& x,
                              const Tolerances& tol = default_tolerances());

void require_same_dim(const OperatorMatrix& x, const OperatorMatrix& y);

} // namespace opcut

#endif
