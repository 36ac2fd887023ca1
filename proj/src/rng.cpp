#include "opcut/rng.hpp"

#include <algorithm>

namespace opcut {

OperatorMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
    OperatorMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            cxd z = rng::gaussian(seed, i, j);
            if (i == j) z = cxd{z.real(), 0.0};
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    return m;
}

OperatorMatrix random_matrix(std::size_t dim, std::uint64_t seed) {
    OperatorMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            m(i, j) = rng::gaussian(seed, i, j);
    return m;
}

OperatorMatrix random_observable(const std::vector<double>& spectrum,
                                 std::uint64_t seed, double order) {
    const std::size_t dim = spectrum.size();
    OperatorMatrix m(dim);
    double peak = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            cxd z = rng::gaussian(seed, i, j);
            if (i == j) z = cxd{z.real(), 0.0};
            z *= std::pow(1.0 + spectrum[i] + spectrum[j], -order);
            m(i, j) = z;
            m(j, i) = std::conj(z);
            peak = std::max(peak, std::abs(z));
        }
    }
    if (peak > 0.0) {
        const double inv = 1.0 / peak;
        for (std::size_t i = 0; i < dim * dim; ++i) m.data()[i] *= inv;
    }
    return m;
}

} // namespace opcut
