// Timing comparison of the OpenMP kernels against the serial reference.

#include <chrono>
#include <cstdio>

#include "opcut/eig.hpp"
#include "opcut/kernels.hpp"
#include "opcut/matfun.hpp"
#include "opcut/rng.hpp"
#include "opcut/seminorms.hpp"

using namespace opcut;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        fn();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

} // namespace

int main() {
    std::printf("%-28s %8s %12s %12s %8s\n", "kernel", "dim", "serial_ms",
                "parallel_ms", "speedup");
    for (std::size_t dim : {64, 128, 256, 512}) {
        const OperatorMatrix a = random_matrix(dim, 11);
        const OperatorMatrix b = random_matrix(dim, 12);
        OperatorMatrix c(dim);

        const double ts = time_best_of(3, [&] {
            kernels::gemm_serial(a.data(), b.data(), c.data(), dim);
        });
        const double tp = time_best_of(3, [&] {
            kernels::gemm_parallel(a.data(), b.data(), c.data(), dim);
        });
        std::printf("%-28s %8zu %12.3f %12.3f %8.2f\n", "gemm", dim, ts, tp, ts / tp);

        const double fs = time_best_of(3, [&] {
            (void)kernels::frobenius_serial(a.data(), dim);
        });
        const double fp = time_best_of(3, [&] {
            (void)kernels::frobenius_parallel(a.data(), dim);
        });
        std::printf("%-28s %8zu %12.3f %12.3f %8.2f\n", "frobenius", dim, fs, fp,
                    fs / fp);
    }

    // end-to-end: one seminorm sweep, both backends
    for (std::size_t dim : {64, 128}) {
        const OperatorMatrix h0 = random_hermitian(dim, 21);
        const auto s = hermitian_eig(OperatorMatrix::diagonal([&] {
            std::vector<double> d(dim);
            for (std::size_t i = 0; i < dim; ++i) d[i] = double(i + 1);
            return d;
        }()));
        const OperatorMatrix obs = random_observable(s.eigenvalues, 5);
        for (auto backend : {kernels::Backend::serial, kernels::Backend::parallel}) {
            kernels::active_backend() = backend;
            const double t = time_best_of(2, [&] {
                (void)seminorm_grid(obs, s, default_test_functions(), 4, "H0", true);
            });
            std::printf("%-28s %8zu %12.3f  (%s)\n", "seminorm_grid k<=4", dim, t,
                        backend == kernels::Backend::serial ? "serial" : "parallel");
        }
        kernels::active_backend() = kernels::Backend::parallel;
    }
    return 0;
}
