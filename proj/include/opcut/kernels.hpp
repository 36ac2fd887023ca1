#ifndef OPCUT_KERNELS_HPP
#define OPCUT_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace opcut::kernels {

using cxd = std::complex<double>;

// Backend selection for the data-parallel kernels.  `parallel` uses OpenMP
// when compiled in; `serial` is the reference implementation kept for
// testing and benchmarking.  Both produce bit-identical results: each
// output element is accumulated by exactly one thread in a fixed order,
// and reductions combine per-row partials in row order.
enum class Backend { serial, parallel };

Backend& active_backend();

// C = A * B, dense row-major n x n complex.
void gemm_serial(const cxd* a, const cxd* b, cxd* c, std::size_t n);
void gemm_parallel(const cxd* a, const cxd* b, cxd* c, std::size_t n);
void gemm(const cxd* a, const cxd* b, cxd* c, std::size_t n);

// y = A * x
void gemv_serial(const cxd* a, const cxd* x, cxd* y, std::size_t n);
void gemv_parallel(const cxd* a, const cxd* x, cxd* y, std::size_t n);
void gemv(const cxd* a, const cxd* x, cxd* y, std::size_t n);

// B = A^dag (conjugate transpose)
void adjoint_serial(const cxd* a, cxd* b, std::size_t n);
void adjoint_parallel(const cxd* a, cxd* b, std::size_t n);
void adjoint(const cxd* a, cxd* b, std::size_t n);

// c = alpha*a + beta*b, elementwise over n*n entries
void axpby_serial(cxd alpha, const cxd* a, cxd beta, const cxd* b, cxd* c,
                  std::size_t nn);
void axpby_parallel(cxd alpha, const cxd* a, cxd beta, const cxd* b, cxd* c,
                    std::size_t nn);
void axpby(cxd alpha, const cxd* a, cxd beta, const cxd* b, cxd* c,
           std::size_t nn);

// max_ij |a_ij| over n*n entries
double maxabs_serial(const cxd* a, std::size_t nn);
double maxabs_parallel(const cxd* a, std::size_t nn);
double maxabs(const cxd* a, std::size_t nn);

// Frobenius norm; partial sums are taken per row and combined in row
// order so the result does not depend on the thread count.
double frobenius_serial(const cxd* a, std::size_t n);
double frobenius_parallel(const cxd* a, std::size_t n);
double frobenius(const cxd* a, std::size_t n);

// Sandwich kernel: C = diag(wl) * A * diag(wr) with complex weights.
void diag_sandwich_serial(const cxd* wl, const cxd* a, const cxd* wr, cxd* c,
                          std::size_t n);
void diag_sandwich_parallel(const cxd* wl, const cxd* a, const cxd* wr, cxd* c,
                            std::size_t n);
void diag_sandwich(const cxd* wl, const cxd* a, const cxd* wr, cxd* c,
                   std::size_t n);

} // namespace opcut::kernels

#endif
