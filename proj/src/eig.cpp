#include "opcut/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace opcut {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// One Jacobi rotation zeroing the (p,q) entry of the Hermitian working
// matrix.  The complex entry is first rotated onto the real axis with the
// unit factor w = conj(a_pq)/|a_pq|, then the standard real rotation
// (tau, t, c, s) is applied.  J = [[c, s], [-s*w, c*w]], A <- J^dag A J.
void jacobi_rotate(std::vector<cxd>& a, std::vector<cxd>& u, std::size_t n,
                   std::size_t p, std::size_t q) {
    const cxd apq = a[p * n + q];
    const double abs_apq = std::abs(apq);
    if (abs_apq == 0.0) return;

    const cxd w = std::conj(apq) / abs_apq;
    const double app = a[p * n + p].real();
    const double aqq = a[q * n + q].real();
    const double tau = (aqq - app) / (2.0 * abs_apq);
    double t;
    if (tau >= 0.0) t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const cxd sw = s * w;
    const cxd swc = s * std::conj(w);

    // rows p and q:  A <- J^dag A
    for (std::size_t k = 0; k < n; ++k) {
        const cxd apk = a[p * n + k];
        const cxd aqk = a[q * n + k];
        a[p * n + k] = c * apk - swc * aqk;
        a[q * n + k] = s * apk + c * std::conj(w) * aqk;
    }
    // columns p and q:  A <- A J
    for (std::size_t k = 0; k < n; ++k) {
        const cxd akp = a[k * n + p];
        const cxd akq = a[k * n + q];
        a[k * n + p] = c * akp - sw * akq;
        a[k * n + q] = s * akp + c * w * akq;
    }
    // accumulate U <- U J
    for (std::size_t k = 0; k < n; ++k) {
        const cxd ukp = u[k * n + p];
        const cxd ukq = u[k * n + q];
        u[k * n + p] = c * ukp - sw * ukq;
        u[k * n + q] = s * ukp + c * w * ukq;
    }
    // restore exact symmetry at the pivot
    a[p * n + q] = cxd{0.0, 0.0};
    a[q * n + p] = cxd{0.0, 0.0};
    a[p * n + p] = cxd{a[p * n + p].real(), 0.0};
    a[q * n + q] = cxd{a[q * n + q].real(), 0.0};
}

double max_offdiag(const std::vector<cxd>& a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m = std::max(m, std::abs(a[i * n + j]));
    return m;
}

} // namespace

SpectralDecomposition hermitian_eig(const OperatorMatrix& x, const Tolerances& tol) {
    const auto rep = hermiticity(x, tol);
    if (!rep.is_hermitian)
        throw NotHermitian("hermiticity defect " + std::to_string(rep.defect));

    const std::size_t n = x.dim();
    // work on the symmetrized copy so rounding in the input cannot leak
    std::vector<cxd> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i * n + j] = 0.5 * (x(i, j) + std::conj(x(j, i)));

    std::vector<cxd> u(n * n, cxd{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) u[i * n + i] = cxd{1.0, 0.0};

    double scale = 0.0;
    for (const cxd& z : a) scale = std::max(scale, std::abs(z));
    const double stop = std::max(scale, 1.0) * 0.5 * eps;

    const int max_sweeps = 64;
    int sweep = 0;
    while (max_offdiag(a, n) > stop) {
        if (++sweep > max_sweeps)
            throw ConvergenceFailure("jacobi sweep budget exhausted");
        // threshold sweep: skip entries already negligible
        const double thresh = (sweep < 4) ? max_offdiag(a, n) / (5.0 * n * n) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a[p * n + q]) > std::max(thresh, stop))
                    jacobi_rotate(a, u, n, p, q);
    }

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i].real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

    out.eigenvectors = OperatorMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i)
            out.eigenvectors(i, j) = u[i * n + order[j]];
    }
    return out;
}

// --- LU -------------------------------------------------------------------

LuFactors lu_factor(const OperatorMatrix& a) {
    const std::size_t n = a.dim();
    LuFactors f{a, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    cxd* m = f.lu.data();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(m[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(m[i * n + k]);
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) throw SingularResolvent("singular pivot in LU");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
            std::swap(f.perm[k], f.perm[piv]);
        }
        const cxd inv_pivot = cxd{1.0, 0.0} / m[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const cxd lik = m[i * n + k] * inv_pivot;
            m[i * n + k] = lik;
            if (lik == cxd{0.0, 0.0}) continue;
            for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= lik * m[k * n + j];
        }
    }
    return f;
}

Vector lu_solve(const LuFactors& f, const Vector& b) {
    const std::size_t n = f.lu.dim();
    if (b.size() != n) throw DimensionMismatch("rhs length != dim");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        cxd acc = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * y[j];
        y[i] = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        cxd acc = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(ii, j) * y[j];
        y[ii] = acc / f.lu(ii, ii);
    }
    return y;
}

OperatorMatrix lu_solve(const LuFactors& f, const OperatorMatrix& b) {
    const std::size_t n = f.lu.dim();
    require_same_dim(f.lu, b);
    OperatorMatrix x(n);
    Vector col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
        Vector sol = lu_solve(f, col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
    }
    return x;
}

OperatorMatrix inverse(const OperatorMatrix& a) {
    return lu_solve(lu_factor(a), OperatorMatrix::identity(a.dim()));
}

// --- general eigensystem ---------------------------------------------------

namespace {

// Householder reduction to upper Hessenberg form, accumulating Q.
void hessenberg_reduce(std::vector<cxd>& h, std::vector<cxd>& q, std::size_t n) {
    std::vector<cxd> v(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double normx = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) normx += std::norm(h[i * n + k]);
        normx = std::sqrt(normx);
        if (normx < 1e-300) continue;

        const cxd alpha = h[(k + 1) * n + k];
        const cxd beta = (std::abs(alpha) == 0.0)
                             ? cxd{-normx, 0.0}
                             : -(alpha / std::abs(alpha)) * normx;

        const std::size_t m = n - k - 1;
        double normv2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = h[(k + 1 + i) * n + k];
            if (i == 0) v[i] -= beta;
            normv2 += std::norm(v[i]);
        }
        if (normv2 < 1e-300) continue;
        const double inv = 1.0 / std::sqrt(normv2);
        for (std::size_t i = 0; i < m; ++i) v[i] *= inv;

        // left: H <- (I - 2 v v^dag) H on rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            cxd dot{0.0, 0.0};
            for (std::size_t i = 0; i < m; ++i)
                dot += std::conj(v[i]) * h[(k + 1 + i) * n + j];
            dot *= 2.0;
            for (std::size_t i = 0; i < m; ++i)
                h[(k + 1 + i) * n + j] -= v[i] * dot;
        }
        // right: H <- H (I - 2 v v^dag) on cols k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            cxd dot{0.0, 0.0};
            for (std::size_t j = 0; j < m; ++j)
                dot += h[i * n + (k + 1 + j)] * v[j];
            dot *= 2.0;
            for (std::size_t j = 0; j < m; ++j)
                h[i * n + (k + 1 + j)] -= dot * std::conj(v[j]);
        }
        // accumulate Q <- Q (I - 2 v v^dag)
        for (std::size_t i = 0; i < n; ++i) {
            cxd dot{0.0, 0.0};
            for (std::size_t j = 0; j < m; ++j)
                dot += q[i * n + (k + 1 + j)] * v[j];
            dot *= 2.0;
            for (std::size_t j = 0; j < m; ++j)
                q[i * n + (k + 1 + j)] -= dot * std::conj(v[j]);
        }
        h[(k + 1) * n + k] = beta;
        for (std::size_t i = k + 2; i < n; ++i) h[i * n + k] = cxd{0.0, 0.0};
    }
}

struct Givens {
    double c;
    cxd s;
};

Givens make_givens(cxd f, cxd g) {
    if (std::abs(g) == 0.0) return {1.0, cxd{0.0, 0.0}};
    if (std::abs(f) == 0.0) {
        // swap-like rotation
        return {0.0, std::conj(g) / std::abs(g)};
    }
    const double d = std::hypot(std::abs(f), std::abs(g));
    const double c = std::abs(f) / d;
    const cxd s = (f / std::abs(f)) * std::conj(g) / d;
    return {c, s};
}

// Shifted QR with deflation on the Hessenberg matrix; Z accumulates the
// similarity so that input = Z T Z^dag with T upper triangular.
void qr_triangularize(std::vector<cxd>& h, std::vector<cxd>& z, std::size_t n) {
    if (n < 2) return;
    double scale = 0.0;
    for (const cxd& e : h) scale = std::max(scale, std::abs(e));
    if (scale == 0.0) return;

    std::size_t hi = n - 1;
    long iter_total = 0;
    int iter_since_deflate = 0;
    const long budget = 60L * static_cast<long>(n);
    std::vector<Givens> rot(n);

    while (true) {
        // deflate negligible subdiagonals
        for (std::size_t m = 1; m <= hi; ++m) {
            const double small =
                eps * (std::abs(h[(m - 1) * n + (m - 1)]) + std::abs(h[m * n + m]));
            if (std::abs(h[m * n + (m - 1)]) <= std::max(small, eps * scale * 1e-2))
                h[m * n + (m - 1)] = cxd{0.0, 0.0};
        }
        while (hi > 0 && h[hi * n + (hi - 1)] == cxd{0.0, 0.0}) {
            --hi;
            iter_since_deflate = 0;
        }
        if (hi == 0) break;

        std::size_t lo = hi;
        while (lo > 0 && h[lo * n + (lo - 1)] != cxd{0.0, 0.0}) --lo;

        if (++iter_total > budget)
            throw ConvergenceFailure("qr iteration budget exhausted");

        // Wilkinson shift from the trailing 2x2 block
        const cxd a = h[(hi - 1) * n + (hi - 1)];
        const cxd b = h[(hi - 1) * n + hi];
        const cxd c2 = h[hi * n + (hi - 1)];
        const cxd d = h[hi * n + hi];
        cxd mu;
        if (++iter_since_deflate % 12 == 0) {
            // exceptional shift to break rare cycles
            mu = d + std::abs(c2) * cxd{1.0, 0.0};
        } else {
            const cxd tr2 = 0.5 * (a + d);
            const cxd disc = std::sqrt(tr2 * tr2 - (a * d - b * c2));
            const cxd l1 = tr2 + disc;
            const cxd l2 = tr2 - disc;
            mu = (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
        }

        for (std::size_t i = lo; i <= hi; ++i) h[i * n + i] -= mu;

        // QR sweep: rotations zero the subdiagonal of the shifted window
        for (std::size_t i = lo; i < hi; ++i) {
            rot[i] = make_givens(h[i * n + i], h[(i + 1) * n + i]);
            const double c = rot[i].c;
            const cxd s = rot[i].s;
            for (std::size_t j = i; j < n; ++j) {
                const cxd t1 = h[i * n + j];
                const cxd t2 = h[(i + 1) * n + j];
                h[i * n + j] = c * t1 + s * t2;
                h[(i + 1) * n + j] = -std::conj(s) * t1 + c * t2;
            }
            h[(i + 1) * n + i] = cxd{0.0, 0.0};
        }
        // RQ: apply the adjoint rotations on the right, Z follows
        for (std::size_t i = lo; i < hi; ++i) {
            const double c = rot[i].c;
            const cxd s = rot[i].s;
            const std::size_t top = std::min(i + 2, hi) + 1;
            for (std::size_t r = 0; r < top; ++r) {
                const cxd t1 = h[r * n + i];
                const cxd t2 = h[r * n + (i + 1)];
                h[r * n + i] = c * t1 + std::conj(s) * t2;
                h[r * n + (i + 1)] = -s * t1 + c * t2;
            }
            for (std::size_t r = 0; r < n; ++r) {
                const cxd t1 = z[r * n + i];
                const cxd t2 = z[r * n + (i + 1)];
                z[r * n + i] = c * t1 + std::conj(s) * t2;
                z[r * n + (i + 1)] = -s * t1 + c * t2;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) h[i * n + i] += mu;
    }
}

} // namespace

SchurForm schur_form(const OperatorMatrix& x) {
    const std::size_t n = x.dim();
    std::vector<cxd> h(x.entries());
    std::vector<cxd> z(n * n, cxd{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = cxd{1.0, 0.0};

    hessenberg_reduce(h, z, n);
    qr_triangularize(h, z, n);
    // scrub the lower triangle: the iteration only deflates to roundoff
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) h[i * n + j] = cxd{0.0, 0.0};
    return {OperatorMatrix(n, std::move(h)), OperatorMatrix(n, std::move(z))};
}

GeneralEig general_eig(const OperatorMatrix& x) {
    const std::size_t n = x.dim();
    std::vector<cxd> h(x.entries());
    std::vector<cxd> z(n * n, cxd{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = cxd{1.0, 0.0};

    hessenberg_reduce(h, z, n);
    qr_triangularize(h, z, n);

    double tnorm = 0.0;
    for (const cxd& e : h) tnorm = std::max(tnorm, std::abs(e));
    const double den_floor = std::max(tnorm, 1.0) * eps;

    GeneralEig out;
    out.eigenvalues.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.eigenvalues[j] = h[j * n + j];

    // eigenvectors of the triangular factor by back-substitution
    OperatorMatrix y(n);
    for (std::size_t j = 0; j < n; ++j) {
        y(j, j) = cxd{1.0, 0.0};
        for (std::size_t ii = j; ii-- > 0;) {
            cxd acc{0.0, 0.0};
            for (std::size_t k = ii + 1; k <= j; ++k) acc += h[ii * n + k] * y(k, j);
            cxd den = h[ii * n + ii] - out.eigenvalues[j];
            if (std::abs(den) < den_floor) den = cxd{den_floor, 0.0};
            y(ii, j) = -acc / den;
        }
    }

    OperatorMatrix zz(n, z);
    out.eigenvectors = multiply(zz, y);
    // normalize columns
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::norm(out.eigenvectors(i, j));
        s = std::sqrt(s);
        if (s > 0.0)
            for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) /= s;
    }
    return out;
}

} // namespace opcut
