#include "opcut/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace opcut::kernels {

Backend& active_backend() {
#ifdef _OPENMP
    static Backend b = Backend::parallel;
#else
    static Backend b = Backend::serial;
#endif
    return b;
}

// Threshold below which the OpenMP variants fall back to the serial loop;
// spawning a team for tiny matrices costs more than it saves.
static constexpr std::size_t par_min_dim = 48;

void gemm_serial(const cxd* a, const cxd* b, cxd* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cxd* ci = c + i * n;
        std::fill(ci, ci + n, cxd{0.0, 0.0});
        for (std::size_t k = 0; k < n; ++k) {
            const cxd aik = a[i * n + k];
            if (aik == cxd{0.0, 0.0}) continue;
            const cxd* bk = b + k * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
}

void gemm_parallel(const cxd* a, const cxd* b, cxd* c, std::size_t n) {
#ifdef _OPENMP
    if (n >= par_min_dim) {
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            cxd* ci = c + i * n;
            std::fill(ci, ci + n, cxd{0.0, 0.0});
            for (std::size_t k = 0; k < n; ++k) {
                const cxd aik = a[i * n + k];
                if (aik == cxd{0.0, 0.0}) continue;
                const cxd* bk = b + k * n;
                for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
            }
        }
        return;
    }
#endif
    gemm_serial(a, b, c, n);
}

void gemm(const cxd* a, const cxd* b, cxd* c, std::size_t n) {
    if (active_backend() == Backend::parallel) gemm_parallel(a, b, c, n);
    else gemm_serial(a, b, c, n);
}

void gemv_serial(const cxd* a, const cxd* x, cxd* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cxd acc{0.0, 0.0};
        const cxd* ai = a + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += ai[j] * x[j];
        y[i] = acc;
    }
}

void gemv_parallel(const cxd* a, const cxd* x, cxd* y, std::size_t n) {
#ifdef _OPENMP
    if (n >= par_min_dim) {
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            cxd acc{0.0, 0.0};
            const cxd* ai = a + i * n;
            for (std::size_t j = 0; j < n; ++j) acc += ai[j] * x[j];
            y[i] = acc;
        }
        return;
    }
#endif
    gemv_serial(a, x, y, n);
}

void gemv(const cxd* a, const cxd* x, cxd* y, std::size_t n) {
    if (active_backend() == Backend::parallel) gemv_parallel(a, x, y, n);
    else gemv_serial(a, x, y, n);
}

void adjoint_serial(const cxd* a, cxd* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[j * n + i] = std::conj(a[i * n + j]);
}

void adjoint_parallel(const cxd* a, cxd* b, std::size_t n) {
#ifdef _OPENMP
    if (n >= par_min_dim) {
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            for (std::size_t j = 0; j < n; ++j)
                b[j * n + i] = std::conj(a[i * n + j]);
        return;
    }
#endif
    adjoint_serial(a, b, n);
}

void adjoint(const cxd* a, cxd* b, std::size_t n) {
    if (active_backend() == Backend::parallel) adjoint_parallel(a, b, n);
    else adjoint_serial(a, b, n);
}

void axpby_serial(cxd alpha, const cxd* a, cxd beta, const cxd* b, cxd* c,
                  std::size_t nn) {
    for (std::size_t i = 0; i < nn; ++i) c[i] = alpha * a[i] + beta * b[i];
}

void axpby_parallel(cxd alpha, const cxd* a, cxd beta, const cxd* b, cxd* c,
                    std::size_t nn) {
#ifdef _OPENMP
    if (nn >= par_min_dim * par_min_dim) {
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nn); ++i)
            c[i] = alpha * a[i] + beta * b[i];
        return;
    }
#endif
    axpby_serial(alpha, a, beta, b, c, nn);
}

void axpby(cxd alpha, const cxd* a, cxd beta, const cxd* b, cxd* c,
           std::size_t nn) {
    if (active_backend() == Backend::parallel) axpby_parallel(alpha, a, beta, b, c, nn);
    else axpby_serial(alpha, a, beta, b, c, nn);
}

static double abs1(const cxd& z) {
    // max-norm uses the true modulus; hypot avoids overflow for large parts
    return std::hypot(z.real(), z.imag());
}

double maxabs_serial(const cxd* a, std::size_t nn) {
    double m = 0.0;
    for (std::size_t i = 0; i < nn; ++i) m = std::max(m, abs1(a[i]));
    return m;
}

double maxabs_parallel(const cxd* a, std::size_t nn) {
#ifdef _OPENMP
    if (nn >= par_min_dim * par_min_dim) {
        double m = 0.0;
        #pragma omp parallel for schedule(static) reduction(max : m)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nn); ++i)
            m = std::max(m, abs1(a[i]));
        return m;
    }
#endif
    return maxabs_serial(a, nn);
}

double maxabs(const cxd* a, std::size_t nn) {
    if (active_backend() == Backend::parallel) return maxabs_parallel(a, nn);
    return maxabs_serial(a, nn);
}

double frobenius_serial(const cxd* a, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        const cxd* ai = a + i * n;
        for (std::size_t j = 0; j < n; ++j)
            row += ai[j].real() * ai[j].real() + ai[j].imag() * ai[j].imag();
        total += row;
    }
    return std::sqrt(total);
}

double frobenius_parallel(const cxd* a, std::size_t n) {
#ifdef _OPENMP
    if (n >= par_min_dim) {
        std::vector<double> row_sums(n);
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            double row = 0.0;
            const cxd* ai = a + i * n;
            for (std::size_t j = 0; j < n; ++j)
                row += ai[j].real() * ai[j].real() + ai[j].imag() * ai[j].imag();
            row_sums[i] = row;
        }
        // combine in row order so the sum matches the serial kernel exactly
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += row_sums[i];
        return std::sqrt(total);
    }
#endif
    return frobenius_serial(a, n);
}

double frobenius(const cxd* a, std::size_t n) {
    if (active_backend() == Backend::parallel) return frobenius_parallel(a, n);
    return frobenius_serial(a, n);
}

void diag_sandwich_serial(const cxd* wl, const cxd* a, const cxd* wr, cxd* c,
                          std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const cxd li = wl[i];
        const cxd* ai = a + i * n;
        cxd* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] = li * ai[j] * wr[j];
    }
}

void diag_sandwich_parallel(const cxd* wl, const cxd* a, const cxd* wr, cxd* c,
                            std::size_t n) {
#ifdef _OPENMP
    if (n >= par_min_dim) {
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            const cxd li = wl[i];
            const cxd* ai = a + i * n;
            cxd* ci = c + i * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] = li * ai[j] * wr[j];
        }
        return;
    }
#endif
    diag_sandwich_serial(wl, a, wr, c, n);
}

void diag_sandwich(const cxd* wl, const cxd* a, const cxd* wr, cxd* c,
                   std::size_t n) {
    if (active_backend() == Backend::parallel) diag_sandwich_parallel(wl, a, wr, c, n);
    else diag_sandwich_serial(wl, a, wr, c, n);
}

} // namespace opcut::kernels
