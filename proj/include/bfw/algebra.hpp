#pragma once

// Elements of A_omega(G) and L^2_omega(G) as finitely supported operator fields.
//
// Coefficient convention: u(s) = sum_pi d_pi Tr(u^(pi) pi(s)) and u^(pi) = int u(s) pi(s^-1) ds.
// The matrix coefficient s -> (pi(s) eta, xi) therefore has u^(pi) = eta xi^* / d_pi, and the
// pairing with T = (T_pi) is <u, T> = sum d_pi Tr(u^(pi) T_pi).

#include "bfw/errors.hpp"
#include "bfw/group.hpp"
#include "bfw/weights.hpp"

#include <functional>
#include <map>
#include <vector>

namespace bfw {

class OperatorField {
public:
    explicit OperatorField(GroupDual dual) : dual_(std::move(dual)) {}

    const GroupDual& dual() const { return dual_; }
    const std::map<IrrepLabel, Matrix>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    bool contains(const IrrepLabel& a) const { return terms_.count(a) > 0; }

    /// Stores m at a, replacing any previous block; blocks with all entries <= 1e-15 are pruned.
    OperatorField& set(const IrrepLabel& a, const Matrix& m) {
        const int d = dual_.dim(a);
        if (m.rows() != d || m.cols() != d)
            throw Error("block at " + a.str() + " must be " + std::to_string(d) + "x" + std::to_string(d));
        if (linalg::max_abs(m) <= prune_threshold) terms_.erase(a);
        else terms_[a] = m;
        return *this;
    }

    OperatorField& add(const IrrepLabel& a, const Matrix& m) {
        auto it = terms_.find(a);
        return set(a, it == terms_.end() ? m : Matrix(it->second + m));
    }

    Matrix at(const IrrepLabel& a) const {
        auto it = terms_.find(a);
        if (it != terms_.end()) return it->second;
        const int d = dual_.dim(a);
        return Matrix::Zero(d, d);
    }

    OperatorField operator+(const OperatorField& o) const {
        check_same(o);
        OperatorField r = *this;
        for (const auto& [l, m] : o.terms_) r.add(l, m);
        return r;
    }
    OperatorField operator-(const OperatorField& o) const { return *this + o * cplx(-1.0); }
    OperatorField operator*(cplx c) const {
        OperatorField r(dual_);
        for (const auto& [l, m] : terms_) r.set(l, c * m);
        return r;
    }

    /// Largest entrywise difference over the union of supports.
    double max_abs_diff(const OperatorField& o) const {
        check_same(o);
        double d = 0;
        for (const auto& [l, m] : terms_) d = std::max(d, linalg::max_abs(m - o.at(l)));
        for (const auto& [l, m] : o.terms_)
            if (!contains(l)) d = std::max(d, linalg::max_abs(m));
        return d;
    }

    void check_same(const OperatorField& o) const {
        if (!(dual_ == o.dual_)) throw FamilyMismatch("fields live on different duals");
    }

    static constexpr double prune_threshold = 1e-15;

    static OperatorField one(const GroupDual& g) {
        return OperatorField(g).set(g.trivial(), Matrix::Identity(1, 1));
    }

    /// Character chi_pi = Tr pi(.), i.e. u^(pi) = I / d_pi.
    static OperatorField character(const GroupDual& g, const IrrepLabel& a) {
        const int d = g.dim(a);
        return OperatorField(g).set(a, Matrix::Identity(d, d) / double(d));
    }

    /// s -> (pi(s) eta, xi).
    static OperatorField matrix_coefficient(const GroupDual& g, const IrrepLabel& a, const Vector& xi, const Vector& eta) {
        const int d = g.dim(a);
        if (xi.size() != d || eta.size() != d) throw Error("coefficient vectors must match the label dimension");
        return OperatorField(g).set(a, eta * xi.adjoint() / double(d));
    }

private:
    GroupDual dual_;
    std::map<IrrepLabel, Matrix> terms_;
};

inline void require_same(const OperatorField& u, const Weight& w) {
    if (!(u.dual() == w.dual())) throw FamilyMismatch("weight and field live on different duals");
}

/// ||u||_{A_omega} = sum d_pi omega(pi) ||u^(pi)||_1.
inline double norm_a_omega(const OperatorField& u, const Weight& w) {
    require_same(u, w);
    double s = 0;
    for (const auto& [l, m] : u.terms()) s += u.dual().dim(l) * w(l) * linalg::trace_norm(m);
    return s;
}

inline double norm_a(const OperatorField& u) {
    double s = 0;
    for (const auto& [l, m] : u.terms()) s += u.dual().dim(l) * linalg::trace_norm(m);
    return s;
}

/// ||f||_{2,omega} = (sum d_pi omega(pi) ||f^(pi)||_2^2)^{1/2}.
inline double norm_l2_omega(const OperatorField& f, const Weight& w) {
    require_same(f, w);
    double s = 0;
    for (const auto& [l, m] : f.terms()) s += f.dual().dim(l) * w(l) * m.squaredNorm();
    return std::sqrt(s);
}

inline double norm_l2(const OperatorField& f) {
    double s = 0;
    for (const auto& [l, m] : f.terms()) s += f.dual().dim(l) * m.squaredNorm();
    return std::sqrt(s);
}

struct DualNorm {
    double value = 0;
    std::optional<IrrepLabel> argmax;
    int cutoff = -1;  // -1 when the supremum was exact
};

/// sup_pi ||T_pi||_op / omega(pi) for a finitely supported functional.
inline DualNorm dual_norm(const OperatorField& t, const Weight& w) {
    require_same(t, w);
    DualNorm r;
    for (const auto& [l, m] : t.terms()) {
        const double v = linalg::op_norm(m) / w(l);
        if (v > r.value) {
            r.value = v;
            r.argmax = l;
        }
    }
    return r;
}

/// sup over labels of word length <= cutoff of ||pi(theta)||_op / omega(pi).
inline DualNorm dual_norm(const PointData& p, const Weight& w, int cutoff) {
    const GroupDual& g = w.dual();
    const LabelSet labels = g.labels_up_to(cutoff);
    std::vector<double> vals(labels.size());
    parallel_chunks(labels.size(), [&](std::size_t i) { vals[i] = linalg::op_norm(g.rep(labels[i], p)) / w(labels[i]); });
    DualNorm r;
    r.cutoff = cutoff;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (vals[i] > r.value || !r.argmax) {
            r.value = vals[i];
            r.argmax = labels[i];
        }
    return r;
}

inline DualNorm dual_norm(const GroupPoint& s, const Weight& w, int cutoff) { return dual_norm(s.data(), w, cutoff); }

namespace detail {

// V^* (A (x) B) V without forming the Kronecker product: each column of V, read as a
// d_a x d_b matrix X (row-major), maps to A X B^T.
inline Matrix compress(const Matrix& a, const Matrix& b, const Matrix& v) {
    const Eigen::Index da = a.rows(), db = b.rows();
    Matrix av(v.rows(), v.cols());
    const Matrix bt = b.transpose();
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Matrix x(da, db);
        for (Eigen::Index i = 0; i < da; ++i)
            for (Eigen::Index j = 0; j < db; ++j) x(i, j) = v(i * db + j, c);
        const Matrix y = a * x * bt;
        for (Eigen::Index i = 0; i < da; ++i)
            for (Eigen::Index j = 0; j < db; ++j) av(i * db + j, c) = y(i, j);
    }
    return v.adjoint() * av;
}

}  // namespace detail

/// Pointwise product. Since (pi (x) pi')(s) = sum_i V_i sigma_i(s) V_i^*, the sigma-block of uv
/// receives (d_pi d_pi' / d_sigma) V^* (u^(pi) (x) v^(pi')) V for every intertwiner V.
inline OperatorField multiply(const OperatorField& u, const OperatorField& v) {
    u.check_same(v);
    const GroupDual& g = u.dual();
    std::map<IrrepLabel, Matrix> acc;
    for (const auto& [a, ua] : u.terms())
        for (const auto& [b, vb] : v.terms()) {
            const double dadb = double(g.dim(a)) * g.dim(b);
            for (const auto& it : g.intertwiners(a, b)->maps) {
                const Matrix block = (dadb / it.v.cols()) * detail::compress(ua, vb, it.v);
                auto slot = acc.find(it.sigma);
                if (slot == acc.end()) acc.emplace(it.sigma, block);
                else slot->second += block;
            }
        }
    OperatorField r(g);
    for (const auto& [l, m] : acc) r.set(l, m);
    return r;
}

namespace detail {

inline bool scalar_block(const Matrix& m, cplx& c) {
    c = m(0, 0);
    if (m.rows() == 1) return true;
    const double scale = linalg::max_abs(m);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j) - (i == j ? c : cplx(0))) > 1e-15 * scale) return false;
    return true;
}

}  // namespace detail

/// u(theta) = sum d_pi Tr(u^(pi) pi(theta)) at a point of G or G_C; scalar blocks go through characters.
inline cplx evaluate(const OperatorField& u, const PointData& p) {
    const GroupDual& g = u.dual();
    cplx s = 0;
    for (const auto& [l, m] : u.terms()) {
        cplx c;
        if (detail::scalar_block(m, c)) s += double(g.dim(l)) * c * g.character(l, p);
        else s += double(g.dim(l)) * (m * g.rep(l, p)).trace();
    }
    return s;
}

inline cplx evaluate(const OperatorField& u, const GroupPoint& s) { return evaluate(u, s.data()); }

/// <u, T> = sum d_pi Tr(u^(pi) T_pi).
inline cplx pair(const OperatorField& t, const OperatorField& u) {
    t.check_same(u);
    cplx s = 0;
    for (const auto& [l, m] : u.terms())
        if (auto it = t.terms().find(l); it != t.terms().end()) s += double(u.dual().dim(l)) * (m * it->second).trace();
    return s;
}

enum class Side { left, right };

/// Right translation (rho(t)u)(s) = u(st): pi(t) u^; left (lambda(t)u)(s) = u(t^-1 s): u^ pi(t^-1).
inline OperatorField translate(const OperatorField& u, const GroupPoint& t, Side side) {
    const GroupDual& g = u.dual();
    const GroupPoint tinv = t.inverse();
    OperatorField r(g);
    for (const auto& [l, m] : u.terms()) r.set(l, side == Side::right ? Matrix(g.rep(l, t) * m) : Matrix(m * g.rep(l, tinv)));
    return r;
}

/// Pointwise complex conjugate: (u-bar)^(pi') = J^* conj(u^(pi)) J with conj(pi(s)) = J pi'(s) J^*.
inline OperatorField involution(const OperatorField& u) {
    const GroupDual& g = u.dual();
    OperatorField r(g);
    for (const auto& [l, m] : u.terms()) {
        const Matrix j = g.conjugation_intertwiner(l);
        r.set(g.conjugate(l), j.adjoint() * m.conjugate() * j);
    }
    return r;
}

inline bool is_real(const OperatorField& u, double tol = 1e-12) {
    return involution(u).max_abs_diff(u) <= tol * std::max(1.0, norm_a(u));
}

/// (f * g)^(pi) = g^(pi) f^(pi).
inline OperatorField convolve(const OperatorField& f, const OperatorField& g) {
    f.check_same(g);
    OperatorField r(f.dual());
    for (const auto& [l, m] : f.terms())
        if (auto it = g.terms().find(l); it != g.terms().end()) r.set(l, it->second * m);
    return r;
}

struct Factorization {
    OperatorField f;  // in L^2_{omega_2}
    OperatorField g;  // in L^2_{omega_1}
};

/// u = f * g with g^ = (w1/w)^{1/2} V |u^|^{1/2}, f^ = (w2/w)^{1/2} |u^|^{1/2}, w = (w1 w2)^{1/2}.
inline Factorization factorize(const OperatorField& u, const Weight& w1, const Weight& w2) {
    require_same(u, w1);
    require_same(u, w2);
    Factorization out{OperatorField(u.dual()), OperatorField(u.dual())};
    for (const auto& [l, m] : u.terms()) {
        const double l1 = w1.log_value(l), l2 = w2.log_value(l);
        const double lw = 0.5 * (l1 + l2);
        const auto p = linalg::polar(m);
        out.g.set(l, std::exp(0.5 * (l1 - lw)) * p.unitary * p.sqrt_modulus);
        out.f.set(l, std::exp(0.5 * (l2 - lw)) * p.sqrt_modulus);
    }
    return out;
}

enum class Scale { q, r };

/// Q_omega multiplies each block by omega^{1/2}, R_omega by omega^{-1/2}.
inline OperatorField scale_diag(const OperatorField& xi, const Weight& w, Scale dir) {
    require_same(xi, w);
    OperatorField r(xi.dual());
    for (const auto& [l, m] : xi.terms()) {
        const double h = 0.5 * w.log_value(l);
        r.set(l, std::exp(dir == Scale::q ? h : -h) * m);
    }
    return r;
}

/// Quadrature rule on G: points with positive weights summing to 1.
struct Grid {
    std::vector<PointData> points;
    std::vector<double> weights;
};

/// Rule exact for trigonometric polynomials whose total degree is at most `degree`
/// (sum of spins on SU(2), |frequency| per coordinate on tori).
inline Grid quadrature_grid(const GroupDual& g, int degree) {
    if (degree < 0) throw Error("quadrature degree must be nonnegative");
    Grid grid;
    switch (g.family()) {
        case Family::torus: {
            const int m = degree + 1;
            const int r = g.rank();
            std::size_t total = 1;
            for (int i = 0; i < r; ++i) total *= m;
            for (std::size_t idx = 0; idx < total; ++idx) {
                std::vector<double> ang(r);
                std::size_t rem = idx;
                for (int i = 0; i < r; ++i) {
                    ang[i] = 2 * pi * double(rem % m) / m;
                    rem /= m;
                }
                grid.points.push_back(GroupPoint::torus(ang).data());
                grid.weights.push_back(1.0 / double(total));
            }
            break;
        }
        case Family::su2:
        case Family::so3: {
            const int spin = g.family() == Family::so3 ? 2 * degree : degree;
            const int ma = spin + 1;
            const int mb = spin / 2 + 2;
            const auto [x, w] = linalg::gauss_legendre(mb);
            for (int i = 0; i < ma; ++i)
                for (int j = 0; j < mb; ++j)
                    for (int k = 0; k < ma; ++k) {
                        const double a = 2 * pi * i / ma, c = 2 * pi * k / ma, b = std::acos(x[j]);
                        PointData p;
                        p.family = g.family();
                        p.m = su2::d_phase(a) * su2::r_y(b) * su2::d_phase(c);
                        grid.points.push_back(p);
                        grid.weights.push_back(w[j] / 2 / double(ma) / double(ma));
                    }
            break;
        }
        case Family::semidirect: {
            const int m = degree + 1;
            for (int sign : {1, -1})
                for (int i = 0; i < m; ++i) {
                    grid.points.push_back(GroupPoint::semidirect(2 * pi * i / m, sign).data());
                    grid.weights.push_back(0.5 / m);
                }
            break;
        }
        case Family::product: {
            const Grid a = quadrature_grid(g.left(), degree), b = quadrature_grid(g.right(), degree);
            for (std::size_t i = 0; i < a.points.size(); ++i)
                for (std::size_t j = 0; j < b.points.size(); ++j) {
                    grid.points.push_back(PointData::make_product(a.points[i], b.points[j]));
                    grid.weights.push_back(a.weights[i] * b.weights[j]);
                }
            break;
        }
    }
    return grid;
}

/// Fourier coefficients u^(pi) = int fn(s) pi(s^-1) ds over the given labels.
inline OperatorField quadrature_coeffs_on(const std::function<cplx(const PointData&)>& fn, const GroupDual& g,
                                          const LabelSet& labels, const Grid& grid) {
    const std::size_t n = grid.points.size();
    const std::size_t chunks = std::min<std::size_t>(n, 64);
    std::vector<std::vector<Matrix>> partial(chunks);
    parallel_chunks(chunks, [&](std::size_t c) {
        auto& acc = partial[c];
        for (const auto& l : labels) acc.push_back(Matrix::Zero(g.dim(l), g.dim(l)));
        for (std::size_t i = c; i < n; i += chunks) {
            const cplx f = fn(grid.points[i]) * grid.weights[i];
            if (f == 0.0) continue;
            const PointData inv = grid.points[i].inverse();
            for (std::size_t k = 0; k < labels.size(); ++k) acc[k] += f * g.rep(labels[k], inv);
        }
    });
    OperatorField out(g);
    for (std::size_t k = 0; k < labels.size(); ++k) {
        Matrix s = Matrix::Zero(g.dim(labels[k]), g.dim(labels[k]));
        for (std::size_t c = 0; c < chunks; ++c) s += partial[c][k];
        out.set(labels[k], s);
    }
    return out;
}

struct QuadratureOptions {
    int fn_degree = -1;      // degree of fn as a trig polynomial; -1 means "use the cutoff"
    bool refine = true;      // compare with a finer rule
    double tolerance = 1e-10;
};

/// Coefficients of fn on labels of word length <= cutoff. Exact for trig polynomials of degree
/// fn_degree; with refine, a rule of twice the degree must agree within tolerance.
inline OperatorField quadrature_coeffs(const std::function<cplx(const PointData&)>& fn, const GroupDual& g, int cutoff,
                                       QuadratureOptions opt = {}) {
    const LabelSet labels = g.labels_up_to(cutoff);
    int label_degree = 0;
    for (const auto& l : labels) label_degree = std::max(label_degree, g.word_length(l));
    if (g.family() == Family::semidirect || g.family() == Family::torus || g.family() == Family::product)
        label_degree = cutoff;
    const int fd = opt.fn_degree >= 0 ? opt.fn_degree : cutoff;
    const int degree = fd + label_degree;
    OperatorField coarse = quadrature_coeffs_on(fn, g, labels, quadrature_grid(g, degree));
    if (!opt.refine) return coarse;
    OperatorField fine = quadrature_coeffs_on(fn, g, labels, quadrature_grid(g, 2 * degree + 2));
    const double delta = coarse.max_abs_diff(fine);
    if (delta > opt.tolerance)
        throw QuadratureError("quadrature did not converge under refinement (delta " + std::to_string(delta) + ")", delta);
    return fine;
}

}  // namespace bfw
