#pragma once

// Representation matrices of SU(2) and its complexification SL(2,C).
//
// pi_n acts on Sym^n(C^2) in the orthonormal monomial basis
//   u_k = sqrt(binom(n,k)) e1^(n-k) e2^k,   k = 0..n,
// which is the standard |j, m> basis with j = n/2, m = j - k and the
// Condon-Shortley sign convention (lowering operator has positive entries).

#include "bfw/linalg.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

namespace bfw::su2 {

/// Derived representation d pi_n(X) for any complex 2x2 X (tridiagonal).
inline Matrix lie_rep(int n, const Matrix2& x) {
    Matrix out = Matrix::Zero(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
        out(k, k) = double(n - k) * x(0, 0) + double(k) * x(1, 1);
        if (k + 1 <= n) out(k + 1, k) = x(1, 0) * std::sqrt(double(n - k) * (k + 1));
        if (k >= 1) out(k - 1, k) = x(0, 1) * std::sqrt(double(k) * (n - k + 1));
    }
    return out;
}

namespace detail {

struct YEigen {
    Matrix vectors;
    Eigen::VectorXd values;
};

// Eigen-decomposition of H = i d pi_n(Y), Y = [[0,-1/2],[1/2,0]]; exp(b Y) = R_y(b).
inline const YEigen& y_eigen(int n) {
    static std::mutex mu;
    static std::map<int, YEigen> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Matrix2 y;
    y << 0.0, -0.5, 0.5, 0.0;
    const Matrix h = cplx(0, 1) * lie_rep(n, y);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    return cache.emplace(n, YEigen{es.eigenvectors(), es.eigenvalues()}).first->second;
}

}  // namespace detail

/// Internal Euler parametrization h = D(a) R_y(b) D(c), D(x) = diag(e^{ix}, e^{-ix}).
struct InternalEuler {
    double a, b, c;
};

inline Matrix2 d_phase(double x) {
    Matrix2 d = Matrix2::Zero();
    d(0, 0) = std::polar(1.0, x);
    d(1, 1) = std::polar(1.0, -x);
    return d;
}

inline Matrix2 r_y(double b) {
    Matrix2 r;
    r << std::cos(b / 2), -std::sin(b / 2), std::sin(b / 2), std::cos(b / 2);
    return r;
}

inline InternalEuler internal_euler(const Matrix2& h) {
    const cplx a = h(0, 0), bb = h(0, 1);
    const double ca = std::abs(a), sb = std::abs(bb);
    const double beta = 2.0 * std::atan2(sb, ca);
    const double sum = ca > 1e-300 ? std::arg(a) : 0.0;      // alpha + gamma
    const double diff = sb > 1e-300 ? std::arg(-bb) : 0.0;   // alpha - gamma
    return {(sum + diff) / 2, beta, (sum - diff) / 2};
}

/// Physics ZYZ Euler angles: R_z(a) R_y(b) R_z(c), R_z(x) = diag(e^{-ix/2}, e^{ix/2}).
inline Matrix2 from_euler(double a, double b, double c) { return d_phase(-a / 2) * r_y(b) * d_phase(-c / 2); }

inline std::array<double, 3> to_euler(const Matrix2& h) {
    const auto e = internal_euler(h);
    return {-2 * e.a, e.b, -2 * e.c};
}

/// pi_n(h) for h in SU(2).
inline Matrix rep_unitary(int n, const Matrix2& h) {
    const auto e = internal_euler(h);
    const auto& ye = detail::y_eigen(n);
    Vector phase(n + 1);
    for (int k = 0; k <= n; ++k) phase(k) = std::polar(1.0, -e.b * ye.values(k));
    Matrix d = ye.vectors * phase.asDiagonal() * ye.vectors.adjoint();
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k) d(j, k) *= std::polar(1.0, (n - 2 * j) * e.a + (n - 2 * k) * e.c);
    return d;
}

inline bool is_unitary(const Matrix2& g, double tol = 1e-12) {
    return (g * g.adjoint() - Matrix2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Factorization g = c * U diag(s, 1/s) W* with U, W in SU(2), s >= 1, c^2 = det g.
struct Cartan {
    Matrix2 left, right;
    double stretch;
    cplx scale;
};

inline Cartan cartan(const Matrix2& g) {
    const cplx c = std::sqrt(g.determinant());
    const Matrix2 g0 = g / c;
    Eigen::JacobiSVD<Matrix2> svd(g0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix2 u = svd.matrixU(), w = svd.matrixV();
    u /= std::sqrt(u.determinant());
    w /= std::sqrt(w.determinant());
    const Eigen::Vector2d s = svd.singularValues();
    const double stretch = std::sqrt(s(0) / s(1));  // det g0 = 1 forces s0 s1 = 1 up to rounding
    Matrix2 diag = Matrix2::Zero();
    diag(0, 0) = stretch;
    diag(1, 1) = 1.0 / stretch;
    if ((u * diag * w.adjoint() - g0).cwiseAbs().maxCoeff() > 1e-6 * (1 + stretch * stretch)) u = -u;
    return {u, w, stretch, c};
}

/// pi_n(g) for g in GL(2, C); holomorphic extension of the unitary representation.
inline Matrix rep(int n, const Matrix2& g) {
    if (is_unitary(g, 1e-13) && std::abs(g.determinant() - 1.0) < 1e-13) return rep_unitary(n, g);
    const Cartan ct = cartan(g);
    Vector diag(n + 1);
    for (int k = 0; k <= n; ++k) diag(k) = std::pow(ct.stretch, n - 2 * k);
    Matrix out = rep_unitary(n, ct.left) * diag.asDiagonal() * rep_unitary(n, ct.right).adjoint();
    if (n > 0) out *= std::pow(ct.scale, n);
    return out;
}

/// Character of pi_n via the recursion chi_{k+1} = chi_1 chi_k - chi_{k-1} (valid on SL(2,C)).
inline cplx character(int n, const Matrix2& g) {
    const cplx det = g.determinant();
    const cplx tr = g.trace();
    cplx prev = 1.0, cur = tr;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        const cplx next = tr * cur - det * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace detail {

inline long double log_fact(int k) { return std::lgamma(static_cast<long double>(k) + 1.0L); }

}  // namespace detail

/// Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M>, all arguments doubled (so integers).
inline double clebsch_gordan(int j1, int m1, int j2, int m2, int j, int m) {
    if (m1 + m2 != m) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m) > j) return 0.0;
    if (j > j1 + j2 || j < std::abs(j1 - j2)) return 0.0;
    if ((j1 + j2 + j) % 2 || (j1 + m1) % 2 || (j2 + m2) % 2 || (j + m) % 2) return 0.0;
    using detail::log_fact;
    const int a = (j1 + j2 - j) / 2, b = (j1 - m1) / 2, c = (j2 + m2) / 2;
    const int d = (j - j2 + m1) / 2, e = (j - j1 - m2) / 2;
    const long double log_pref =
        0.5L * (std::log(static_cast<long double>(j + 1)) + log_fact((j + j1 - j2) / 2) + log_fact((j - j1 + j2) / 2) +
                log_fact(a) - log_fact((j1 + j2 + j) / 2 + 1) + log_fact((j + m) / 2) + log_fact((j - m) / 2) +
                log_fact((j1 - m1) / 2) + log_fact((j1 + m1) / 2) + log_fact((j2 - m2) / 2) +
                log_fact((j2 + m2) / 2));
    const int kmin = std::max({0, -d, -e});
    const int kmax = std::min({a, b, c});
    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; ++k) {
        const long double log_den =
            log_fact(k) + log_fact(a - k) + log_fact(b - k) + log_fact(c - k) + log_fact(d + k) + log_fact(e + k);
        const long double term = std::exp(log_pref - log_den);
        sum += (k % 2 ? -term : term);
    }
    return static_cast<double>(sum);
}

/// Isometry H_{pi_total} -> H_{pi_n1} (x) H_{pi_n2}, rows indexed k1*(n2+1)+k2.
inline Matrix cg_isometry(int n1, int n2, int total) {
    Matrix v = Matrix::Zero((n1 + 1) * (n2 + 1), total + 1);
    for (int k1 = 0; k1 <= n1; ++k1)
        for (int k2 = 0; k2 <= n2; ++k2) {
            const int m = (n1 - 2 * k1) + (n2 - 2 * k2);
            if (std::abs(m) > total || (total - m) % 2) continue;
            const int kk = (total - m) / 2;
            v(k1 * (n2 + 1) + k2, kk) = clebsch_gordan(n1, n1 - 2 * k1, n2, n2 - 2 * k2, total, m);
        }
    return v;
}

/// J with conj(pi_n(g)) = J pi_n(g) J* on SU(2): J = pi_n(eps), eps = [[0,1],[-1,0]].
inline Matrix conjugation_intertwiner(int n) {
    Matrix2 eps;
    eps << 0.0, 1.0, -1.0, 0.0;
    return rep_unitary(n, eps);
}

}  // namespace bfw::su2
