#ifndef OPCUT_RNG_HPP
#define OPCUT_RNG_HPP

#include <cmath>
#include <cstdint>

#include "opcut/matrix.hpp"

namespace opcut {

// Counter-based generator: the value at (i, j) depends only on (seed, i, j),
// never on the matrix dimension.  Growing the truncation extends a fixture
// instead of redrawing it, which is what the dimension-doubling stability
// checks rely on.  splitmix64 finisher, Box-Muller for normals.
namespace rng {

inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t i, std::uint64_t j,
                        std::uint64_t stream) {
    std::uint64_t h = mix(seed ^ mix(i * 0x100000001b3ull + 11400714819323198485ull * j + stream));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline cxd gaussian(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    double u1 = uniform01(seed, i, j, 0x517cc1b727220a95ull);
    double u2 = uniform01(seed, i, j, 0x2545f4914f6cdd1dull);
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

} // namespace rng

// Random Hermitian matrix with O(1) entries.
OperatorMatrix random_hermitian(std::size_t dim, std::uint64_t seed);

// Random complex matrix with O(1) entries.
OperatorMatrix random_matrix(std::size_t dim, std::uint64_t seed);

// Random Hermitian observable with the polynomial energy envelope
// (1 + lambda_i + lambda_j)^{-order}, normalized to max-abs 1.  Test
// observables need an energy decay to stand for operators that keep the
// common smooth domain invariant: with flat O(1) entries the compression
// defect does not shrink with the cutoff.  A polynomial order p keeps the
// weighted norms finite for weight exponents up to ~p - 2 and makes the
// compression defect a clean power law, so fitted rates are meaningful;
// entries depend only on (seed, i, j), so growing the truncation extends
// the fixture.
OperatorMatrix random_observable(const std::vector<double>& spectrum,
                                 std::uint64_t seed, double order = 10.0);

} // namespace opcut

#endif
