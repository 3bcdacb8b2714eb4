#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace bfw {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double pi = std::numbers::pi;

namespace linalg {

/// Kronecker product with row-major tensor indexing: (i*rows(b)+k, j*cols(b)+l).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

inline Eigen::VectorXd singular_values(const Matrix& m) {
    if (m.size() == 0) return {};
    if (m.rows() == 1 && m.cols() == 1) return Eigen::VectorXd::Constant(1, std::abs(m(0, 0)));
    return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

/// Sum of singular values.
inline double trace_norm(const Matrix& m) { return singular_values(m).sum(); }

inline double op_norm(const Matrix& m) {
    const auto s = singular_values(m);
    return s.size() == 0 ? 0.0 : s.maxCoeff();
}

/// Hilbert-Schmidt norm.
inline double hs_norm(const Matrix& m) { return m.norm(); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct Polar {
    Matrix unitary;   // V, with V*V the projection onto range(|A|) completed to a unitary
    Matrix modulus;   // |A| = (A*A)^{1/2}
    Matrix sqrt_modulus;
};

/// A = V|A| from a full SVD A = U S W*; V = U W*, |A| = W S W*.
inline Polar polar(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix& u = svd.matrixU();
    const Matrix& w = svd.matrixV();
    const Eigen::VectorXd s = svd.singularValues();
    Polar p;
    p.unitary = u * w.adjoint();
    p.modulus = w * s.cast<cplx>().asDiagonal() * w.adjoint();
    p.sqrt_modulus = w * s.cwiseSqrt().cast<cplx>().asDiagonal() * w.adjoint();
    return p;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

}  // namespace linalg

/// Worker count, capped by BFW_THREADS when set.
inline unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BFW_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Runs body(chunk) for chunk in [0, chunks) on up to thread_budget() threads.
/// Callers store per-chunk results and reduce them in chunk order, so results
/// never depend on scheduling.
inline void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::min<std::size_t>(thread_budget(), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers) body(c);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bfw
