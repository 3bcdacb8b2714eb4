#pragma once

// Lie-analytic tools: Casimir data, smoothing kernels, e^{itu}, growth curves, separating
// functions, point derivations, synthesis degrees and the N-decomposition of an element.

#include "bfw/algebra.hpp"
#include "bfw/spectrum.hpp"

#include <array>
#include <exception>
#include <sstream>

namespace bfw {

// ---------------------------------------------------------------------------------------------
// Casimir

/// Orthonormal basis of su(2) for -Killing, kappa(X, Y) = 4 tr(XY): e_j = i sigma_j / (2 sqrt 2).
inline std::array<Matrix2, 3> su2_casimir_basis() {
    const cplx i(0, 1);
    const double s = 1.0 / (2.0 * std::sqrt(2.0));
    Matrix2 s1, s2, s3;
    s1 << 0, 1, 1, 0;
    s2 << 0, -i, i, 0;
    s3 << 1, 0, 0, -1;
    return {i * s * s1, i * s * s2, i * s * s3};
}

/// -sum_i d pi(X_i)^2 over the orthonormal basis (tori and the semidirect circle use the standard one).
inline Matrix casimir_matrix(const GroupDual& g, const IrrepLabel& a) {
    g.require(a);
    const int d = g.dim(a);
    Matrix c = Matrix::Zero(d, d);
    switch (g.family()) {
        case Family::su2:
        case Family::so3:
            for (const auto& x : su2_casimir_basis()) {
                LieElement e = LieElement::su2(x);
                e.family = g.family();
                const Matrix r = g.lie_rep(a, e);
                c -= r * r;
            }
            break;
        case Family::torus:
            for (int k = 0; k < g.rank(); ++k) {
                std::vector<cplx> x(g.rank(), 0.0);
                x[k] = 1.0;
                const Matrix r = g.lie_rep(a, LieElement::torus(x));
                c -= r * r;
            }
            break;
        case Family::semidirect: {
            const Matrix r = g.lie_rep(a, LieElement::semidirect(1.0));
            c -= r * r;
            break;
        }
        case Family::product: {
            const Matrix l = casimir_matrix(g.left(), a.left()), r = casimir_matrix(g.right(), a.right());
            c = linalg::kron(l, Matrix::Identity(r.rows(), r.cols())) + linalg::kron(Matrix::Identity(l.rows(), l.cols()), r);
            break;
        }
    }
    return c;
}

/// c(pi) with -Omega = c(pi) I on pi. SU(2): c(pi_n) = n(n+2)/8; tori: |mu|^2.
inline double casimir_eigenvalue(const GroupDual& g, const IrrepLabel& a) {
    const Matrix c = casimir_matrix(g, a);
    return c.trace().real() / double(c.rows());
}

/// max |(-Omega)_{ij} - c delta_ij| on pi.
inline double casimir_scalar_residual(const GroupDual& g, const IrrepLabel& a) {
    const Matrix c = casimir_matrix(g, a);
    const double v = c.trace().real() / double(c.rows());
    return linalg::max_abs(c - v * Matrix::Identity(c.rows(), c.cols()));
}

// ---------------------------------------------------------------------------------------------
// Series and smoothing kernels

struct SeriesRow {
    int n;
    double partial;
    double increment;
};

/// Partial sums of sum d_gamma^2 (1 + |gamma|^2)^{-s}, grouped by word length |gamma| <= N.
inline std::vector<SeriesRow> series_tail(const GroupDual& g, double s, int N) {
    std::vector<double> layer(N + 1, 0.0);
    for (const auto& a : g.labels_up_to(N)) {
        const int n = g.word_length(a);
        const double d = g.dim(a);
        layer[n] += d * d * std::pow(1.0 + double(n) * n, -s);
    }
    std::vector<SeriesRow> rows;
    double acc = 0;
    for (int n = 0; n <= N; ++n) {
        acc += layer[n];
        rows.push_back({n, acc, layer[n]});
    }
    return rows;
}

struct SmoothingKernel {
    int m = 1;
    int cutoff = 0;
    OperatorField field;
    double tail = 0;  // A-norm mass of the labels in (cutoff, 2 cutoff]
};

/// E_m(pi) = (1 + c(pi))^{-m} I on labels of word length <= cutoff.
inline SmoothingKernel smoothing_kernel(const GroupDual& g, int m, int cutoff) {
    SmoothingKernel k{m, cutoff, OperatorField(g), 0};
    for (const auto& a : g.labels_up_to(2 * cutoff)) {
        const int d = g.dim(a);
        const double v = std::pow(1.0 + casimir_eigenvalue(g, a), -m);
        if (g.word_length(a) <= cutoff) k.field.set(a, v * Matrix::Identity(d, d));
        else k.tail += double(d) * d * v;
    }
    return k;
}

// ---------------------------------------------------------------------------------------------
// e^{itu}

struct ExpOptions {
    int cutoff = -1;         // starting label cutoff; -1 picks ceil(c |t|) + 8
    int max_cutoff = 400;
    double tolerance = 1e-6; // Parseval defect allowed
    bool adaptive = true;
};

struct ExpResult {
    OperatorField field;
    int cutoff = 0;
    double defect = 0;  // |1 - sum d ||coef||_2^2|
};

namespace detail {

// sum tau(pi) d ||u^(pi)||_1: the spread of e^{itu} per unit t.
inline double spread(const OperatorField& u) {
    double c = 0;
    for (const auto& [l, m] : u.terms()) c += u.dual().word_length(l) * u.dual().dim(l) * linalg::trace_norm(m);
    return c;
}

inline double parseval_mass(const OperatorField& f) {
    double s = 0;
    for (const auto& [l, m] : f.terms()) s += f.dual().dim(l) * m.squaredNorm();
    return s;
}

inline bool is_central(const OperatorField& u) {
    cplx c;
    for (const auto& [l, m] : u.terms())
        if (!scalar_block(m, c)) return false;
    return true;
}

// Class-function route on SU(2) and SO(3): u(theta) = sum d c_n chi_n(theta), where theta is the
// half-angle of the conjugacy class and chi_n(theta) = sin((n+1)theta) / sin(theta).
inline OperatorField exp_central(const OperatorField& u, double t, int N) {
    const GroupDual& g = u.dual();
    const bool so3 = g.family() == Family::so3;
    std::vector<std::pair<int, double>> coef;  // (spin n, d * c)
    for (const auto& [l, m] : u.terms()) {
        const int n = so3 ? 2 * l.index() : l.index();
        coef.emplace_back(n, double(n + 1) * m(0, 0).real());
    }
    const LabelSet labels = g.labels_up_to(N);
    int top = 0;
    for (const auto& l : labels) top = std::max(top, so3 ? 2 * l.index() : l.index());
    const int M = 2 * top + 64;
    std::vector<cplx> f(M);
    std::vector<double> th(M);
    for (int j = 0; j < M; ++j) {
        th[j] = pi * (j + 0.5) / M;
        const double st = std::sin(th[j]);
        double v = 0;
        for (const auto& [n, c] : coef) v += c * std::sin((n + 1) * th[j]) / st;
        f[j] = std::polar(1.0, t * v) * std::sin(th[j]) * (2.0 / M);
    }
    OperatorField out(g);
    std::vector<cplx> vals(labels.size());
    parallel_chunks(labels.size(), [&](std::size_t k) {
        const int n = so3 ? 2 * labels[k].index() : labels[k].index();
        cplx s = 0;
        for (int j = 0; j < M; ++j) s += f[j] * std::sin((n + 1) * th[j]);
        vals[k] = s / double(n + 1);
    });
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const int d = g.dim(labels[k]);
        out.set(labels[k], vals[k] * Matrix::Identity(d, d));
    }
    return out;
}

inline OperatorField exp_torus(const OperatorField& u, double t, int N) {
    const GroupDual& g = u.dual();
    const int r = g.rank();
    const int M = 4 * N + 32;
    std::size_t total = 1;
    for (int i = 0; i < r; ++i) total *= M;
    std::vector<cplx> f(total);
    parallel_chunks(64, [&](std::size_t c) {
        for (std::size_t idx = c; idx < total; idx += 64) {
            std::vector<double> ang(r);
            std::size_t rem = idx;
            for (int i = 0; i < r; ++i) {
                ang[i] = 2 * pi * double(rem % M) / M;
                rem /= M;
            }
            f[idx] = std::polar(1.0, t * evaluate(u, GroupPoint::torus(ang)).real()) / double(total);
        }
    });
    const LabelSet labels = g.labels_up_to(N);
    std::vector<cplx> vals(labels.size());
    parallel_chunks(labels.size(), [&](std::size_t k) {
        const auto& mu = labels[k].weights();
        cplx s = 0;
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rem = idx;
            long long phase = 0;
            for (int i = 0; i < r; ++i) {
                phase += (long long)mu[i] * (long long)(rem % M);
                rem /= M;
            }
            phase %= M;
            s += f[idx] * std::polar(1.0, -2 * pi * double(phase) / M);
        }
        vals[k] = s;
    });
    OperatorField out(g);
    for (std::size_t k = 0; k < labels.size(); ++k) out.set(labels[k], Matrix::Constant(1, 1, vals[k]));
    return out;
}

}  // namespace detail

/// Coefficients of e^{itu} for real u. Tori: any u, by grid quadrature. SU(2)/SO(3): central u,
/// by the Weyl integration formula. The cutoff grows until the Parseval defect is below tolerance.
inline ExpResult exp_itu(const OperatorField& u, double t, ExpOptions opt = {}) {
    const GroupDual& g = u.dual();
    if (!is_real(u)) throw Error("exp_itu needs a real-valued element");
    const Family f = g.family();
    if (f != Family::torus && f != Family::su2 && f != Family::so3)
        throw Unsupported("exp_itu supports tori, su2 and so3");
    if (f != Family::torus && !detail::is_central(u))
        throw Unsupported("exp_itu on " + g.name() + " needs a central element (a combination of characters)");
    if (t == 0) return {OperatorField::one(g), 0, 0.0};
    int N = opt.cutoff > 0 ? opt.cutoff : int(std::ceil(detail::spread(u) * std::abs(t))) + 8;
    N = std::min(N, opt.max_cutoff);
    while (true) {
        ExpResult r{f == Family::torus ? detail::exp_torus(u, t, N) : detail::exp_central(u, t, N), N, 0};
        r.defect = std::abs(1.0 - detail::parseval_mass(r.field));
        if (r.defect <= opt.tolerance) {
            // a Parseval defect of eps still allows pointwise errors near sqrt(eps); pad the cutoff
            const int padded = std::min(opt.max_cutoff, N + 8);
            if (padded == N) return r;
            ExpResult p{f == Family::torus ? detail::exp_torus(u, t, padded) : detail::exp_central(u, t, padded), padded, 0};
            p.defect = std::abs(1.0 - detail::parseval_mass(p.field));
            return p;
        }
        if (!opt.adaptive || N >= opt.max_cutoff)
            throw InsufficientCutoff("e^{itu} at t=" + std::to_string(t) + " needs more than cutoff " + std::to_string(N) +
                                         " (Parseval defect " + std::to_string(r.defect) + ")",
                                     r.defect, N);
        N = std::min(opt.max_cutoff, N + std::max(8, N / 2));
    }
}

// ---------------------------------------------------------------------------------------------
// Growth curves

struct GrowthCurveRow {
    double t;
    double norm;
    double bound;
    int cutoff;
    double tail;
};

struct GrowthCurve {
    std::vector<GrowthCurveRow> rows;
    double exponent = 0;  // d(G)/2 + alpha
    double constant = 0;  // smallest C with norm <= C (1+|t|)^exponent on the rows
    double slope = 0;     // least-squares log-log slope over t in [t_max/10, t_max]
    bool pass = false;    // slope <= exponent + 0.5

    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "t,norm,bound,cutoff,tail\n";
        for (const auto& r : rows) os << r.t << ',' << r.norm << ',' << r.bound << ',' << r.cutoff << ',' << r.tail << '\n';
        return os.str();
    }
    std::string to_svg() const;
};

/// ||e^{itu}||_{A_omega} along t_list; alpha is the exponent of the polynomial weight w.
inline GrowthCurve growth_curve(const OperatorField& u, const Weight& w, double alpha, const std::vector<double>& t_list,
                                ExpOptions opt = {}) {
    require_same(u, w);
    GrowthCurve c;
    c.exponent = u.dual().lie_dimension() / 2.0 + alpha;
    std::vector<GrowthCurveRow> rows(t_list.size());
    std::vector<std::exception_ptr> errors(t_list.size());
    parallel_chunks(t_list.size(), [&](std::size_t i) {
        try {
            const ExpResult e = exp_itu(u, t_list[i], opt);
            rows[i] = {t_list[i], norm_a_omega(e.field, w), 0, e.cutoff, e.defect};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const auto& r : rows) c.constant = std::max(c.constant, r.norm / std::pow(1 + std::abs(r.t), c.exponent));
    for (auto& r : rows) r.bound = c.constant * std::pow(1 + std::abs(r.t), c.exponent);
    c.rows = rows;
    double tmax = 0;
    for (const auto& r : rows) tmax = std::max(tmax, std::abs(r.t));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rows) {
        const double at = std::abs(r.t);
        if (at <= 0 || at < tmax / 10) continue;
        const double x = std::log(at), y = std::log(r.norm);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2 && n * sxx - sx * sx > 0) c.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.pass = std::isfinite(c.slope) && c.slope <= c.exponent + 0.5;
    return c;
}

inline std::string GrowthCurve::to_svg() const {
    const double W = 640, H = 420, L = 60, B = 40;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    std::vector<std::array<double, 3>> pts;
    for (const auto& r : rows) {
        if (r.t <= 0) continue;
        const double x = std::log10(r.t), yn = std::log10(r.norm), yb = std::log10(r.bound);
        pts.push_back({x, yn, yb});
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min({y0, yn, yb});
        y1 = std::max({y1, yn, yb});
    }
    if (pts.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return L + (W - L - 20) * (x - x0) / (x1 - x0); };
    auto py = [&](double y) { return H - B - (H - B - 20) * (y - y0) / (y1 - y0); };
    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - 20 << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"20\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\">log10 t</text>\n";
    os << "<text x=\"4\" y=\"14\">log10 norm</text>\n";
    for (int k = 1; k <= 2; ++k) {
        os << "<polyline fill=\"none\" stroke=\"" << (k == 1 ? "steelblue" : "gray") << "\" points=\"";
        for (const auto& p : pts) os << px(p[0]) << ',' << py(p[k]) << ' ';
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------------------------------------
// Smooth embedding

struct EmbeddingReport {
    double lhs = 0;          // ||g||_{A_{omega_alpha}}
    double kernel_norm = 0;  // ||E_n||_{2, omega_alpha^2} over the support of g
    double smooth_norm = 0;  // ||(1 - Omega)^n g||_2
    double rhs = 0;
    bool precondition = false;  // n > d/4 + alpha/2
    bool finite = false;        // 2n - alpha > d/2: the full kernel norm converges
    bool holds = false;
};

inline EmbeddingReport smooth_embedding_check(const OperatorField& f, int n, double alpha) {
    const GroupDual& g = f.dual();
    const Weight w = alpha > 0 ? weights::polynomial(g, alpha) : weights::constant(g, 1.0);
    const double d = g.lie_dimension();
    EmbeddingReport r;
    r.precondition = n > d / 4 + alpha / 2;
    r.finite = 2.0 * n - alpha > d / 2;
    r.lhs = norm_a_omega(f, w);
    double k2 = 0, s2 = 0;
    for (const auto& [l, m] : f.terms()) {
        const double dl = g.dim(l), c = 1 + casimir_eigenvalue(g, l);
        k2 += dl * dl * std::exp(2 * w.log_value(l)) * std::pow(c, -2.0 * n);
        s2 += dl * std::pow(c, 2.0 * n) * m.squaredNorm();
    }
    r.kernel_norm = std::sqrt(k2);
    r.smooth_norm = std::sqrt(s2);
    r.rhs = r.kernel_norm * r.smooth_norm;
    r.holds = r.lhs <= r.rhs * (1 + 1e-12) + 1e-300;
    return r;
}

// ---------------------------------------------------------------------------------------------
// Separating functions

/// C^k bump: 0 on (-inf, a0], smoothstep up to 1 on [a1, b1], down to 0 at b0.
struct Bump {
    int k = 5;
    double a0 = 0.2, a1 = 0.8, b1 = 1.2, b0 = 1.8;

    static double smoothstep(int k, double x) {
        if (x <= 0) return 0;
        if (x >= 1) return 1;
        double s = 0, c = 1;
        for (int j = 0; j <= k; ++j) {
            if (j > 0) c = c * (k + j) / j;
            s += c * std::pow(1 - x, j);
        }
        return std::pow(x, k + 1) * s;
    }

    double operator()(double x) const {
        if (x <= a0 || x >= b0) return 0;
        if (x < a1) return smoothstep(k, (x - a0) / (a1 - a0));
        if (x <= b1) return 1;
        return smoothstep(k, (b0 - x) / (b0 - b1));
    }

    /// phi^(t) = int phi(x) e^{-2 pi i x t} dx.
    cplx hat(double t) const {
        const cplx i(0, 1);
        cplx flat;
        if (t == 0) flat = b1 - a1;
        else flat = (std::exp(-2 * pi * i * b1 * t) - std::exp(-2 * pi * i * a1 * t)) / (-2 * pi * i * t);
        static const auto gl = linalg::gauss_legendre(16);
        auto ramp = [&](double lo, double hi) {
            const int panels = std::max(4, int(std::ceil(4 * std::abs(t) * (hi - lo))));
            cplx s = 0;
            for (int p = 0; p < panels; ++p) {
                const double x0 = lo + (hi - lo) * p / panels, x1 = lo + (hi - lo) * (p + 1) / panels;
                for (std::size_t q = 0; q < gl.first.size(); ++q) {
                    const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gl.first[q];
                    s += 0.5 * (x1 - x0) * gl.second[q] * (*this)(x) * std::exp(-2 * pi * i * x * t);
                }
            }
            return s;
        };
        return flat + ramp(a0, a1) + ramp(b1, b0);
    }
};

struct SeparatingOptions {
    double t_max = 12;   // phi^ is integrated over [-t_max, t_max]
    double panel = 0.25;
    int nodes = 8;
    ExpOptions exp;
};

struct SeparatingResult {
    OperatorField v;
    double truncation = 0;  // int_{|t| > t_max} |phi^|, estimated from the decay rate
    int t_nodes = 0;
};

/// v = int phi^(t) e^{2 pi i t u0} dt by Gauss-Legendre panels in t, so that v = phi o u0.
inline SeparatingResult separating_function(const OperatorField& u0, const Bump& phi, SeparatingOptions opt = {}) {
    const auto gl = linalg::gauss_legendre(opt.nodes);
    std::vector<double> ts, ws;
    const int panels = int(std::ceil(2 * opt.t_max / opt.panel));
    for (int p = 0; p < panels; ++p) {
        const double a = -opt.t_max + p * opt.panel, b = a + opt.panel;
        for (int q = 0; q < opt.nodes; ++q) {
            ts.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.first[q]);
            ws.push_back(0.5 * (b - a) * gl.second[q]);
        }
    }
    std::vector<OperatorField> terms(ts.size(), OperatorField(u0.dual()));
    std::vector<std::exception_ptr> errors(ts.size());
    parallel_chunks(ts.size(), [&](std::size_t j) {
        try {
            terms[j] = exp_itu(u0, 2 * pi * ts[j], opt.exp).field * (ws[j] * phi.hat(ts[j]));
        } catch (...) {
            errors[j] = std::current_exception();
        }
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    SeparatingResult r{OperatorField(u0.dual()), 0, int(ts.size())};
    for (const auto& f : terms) r.v = r.v + f;
    // |phi^(t)| ~ C |t|^{-(k+2)}; C from the last node
    const double tail_c = std::abs(phi.hat(opt.t_max)) * std::pow(opt.t_max, phi.k + 2);
    r.truncation = 2 * tail_c * std::pow(opt.t_max, -(phi.k + 1)) / (phi.k + 1);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Point derivations

/// <X, u> = sum d Tr(u^(pi) d pi(X)), the derivative of u at e along X.
inline cplx point_derivation(const LieElement& x, const OperatorField& u) {
    const GroupDual& g = u.dual();
    cplx s = 0;
    for (const auto& [l, m] : u.terms()) s += double(g.dim(l)) * (m * g.lie_rep(l, x)).trace();
    return s;
}

/// ||d pi(X)||_op; closed form when X is normal (eigenvalues (n-k) mu_1 + k mu_2 on pi_n).
inline double lie_op_norm(const GroupDual& g, const IrrepLabel& a, const LieElement& x) {
    if (g.family() == Family::su2 || g.family() == Family::so3) {
        const Matrix2& m = x.m;
        if (linalg::max_abs(Matrix(m * m.adjoint() - m.adjoint() * m)) <= 1e-14 * std::max(1.0, linalg::max_abs(Matrix(m)))) {
            Eigen::ComplexEigenSolver<Matrix2> es(m);
            const int n = g.family() == Family::so3 ? 2 * a.index() : a.index();
            return n * std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(1)));
        }
    }
    return linalg::op_norm(g.lie_rep(a, x));
}

struct DerivationRow {
    int n;
    double sup;
};

/// n -> max over labels of word length <= n of ||d pi(X)|| / omega(pi).
inline std::vector<DerivationRow> derivation_bound_scan(const LieElement& x, const Weight& w, int N) {
    const GroupDual& g = w.dual();
    const LabelSet labels = g.labels_up_to(N);
    std::vector<double> vals(labels.size());
    std::vector<int> lens(labels.size());
    parallel_chunks(labels.size(), [&](std::size_t i) {
        vals[i] = lie_op_norm(g, labels[i], x) / w(labels[i]);
        lens[i] = g.word_length(labels[i]);
    });
    std::vector<double> layer(N + 1, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) layer[lens[i]] = std::max(layer[lens[i]], vals[i]);
    std::vector<DerivationRow> rows;
    double run = 0;
    for (int n = 0; n <= N; ++n) {
        run = std::max(run, layer[n]);
        rows.push_back({n, run});
    }
    return rows;
}

/// floor(m/2 + alpha) + 1.
inline int synthesis_degree(int m, double alpha) {
    if (m < 0) throw Error("m must be nonnegative");
    if (!(alpha > 0)) throw Error("alpha must be positive");
    return int(std::floor(m / 2.0 + alpha)) + 1;
}

// ---------------------------------------------------------------------------------------------
// N-decomposition: Nu(s, t) = u(s t^-1) = sum phi_ij(s) psi_ij(t)

struct NuTerm {
    IrrepLabel label;
    int i, j;
    OperatorField phi;  // s -> sqrt(d) (|u^|^{1/2} pi(s))_ij
    OperatorField psi;  // t -> sqrt(d) conj((|u^|^{1/2} V^* pi(t))_ij)
};

struct NuDecomposition {
    std::vector<NuTerm> terms;
    double phi_mass = 0;  // sum ||phi||_{2,omega}^2
    double psi_mass = 0;
    double a_norm = 0;    // ||u||_{A_omega}
};

namespace detail {

// s -> sqrt(d) (M pi(s))_ij = sqrt(d) (pi(s) e_j, M^* e_i)
inline OperatorField entry_function(const GroupDual& g, const IrrepLabel& l, const Matrix& m, int i, int j) {
    const int d = g.dim(l);
    Vector e = Vector::Zero(d);
    e(j) = 1;
    const Vector xi = m.adjoint().col(i);
    return OperatorField::matrix_coefficient(g, l, xi, e) * cplx(std::sqrt(double(d)));
}

}  // namespace detail

inline NuDecomposition nu_decompose(const OperatorField& u, const Weight& w) {
    require_same(u, w);
    const GroupDual& g = u.dual();
    NuDecomposition out;
    for (const auto& [l, m] : u.terms()) {
        const auto p = linalg::polar(m);
        const Matrix q = p.sqrt_modulus * p.unitary.adjoint();
        const int d = g.dim(l);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                NuTerm t{l, i, j, detail::entry_function(g, l, p.sqrt_modulus, i, j),
                         involution(detail::entry_function(g, l, q, i, j))};
                out.phi_mass += std::pow(norm_l2_omega(t.phi, w), 2);
                out.psi_mass += std::pow(norm_l2_omega(t.psi, w), 2);
                out.terms.push_back(std::move(t));
            }
    }
    out.a_norm = norm_a_omega(u, w);
    return out;
}

/// sum_ij phi_ij(s) psi_ij(t).
inline cplx nu_eval(const NuDecomposition& nu, const PointData& s, const PointData& t) {
    cplx v = 0;
    for (const auto& term : nu.terms) v += evaluate(term.phi, s) * evaluate(term.psi, t);
    return v;
}

/// <f, h>_omega = sum d omega Tr(f^ h^*).
inline cplx inner_omega(const OperatorField& f, const OperatorField& h, const Weight& w) {
    cplx s = 0;
    for (const auto& [l, m] : f.terms())
        if (auto it = h.terms().find(l); it != h.terms().end())
            s += f.dual().dim(l) * w(l) * (m * it->second.adjoint()).trace();
    return s;
}

/// S(T) on L^2_omega: f^(pi) -> f^(pi) T_pi / omega(pi).
inline OperatorField apply_s(const OperatorField& t, const OperatorField& f, const Weight& w) {
    OperatorField out(f.dual());
    for (const auto& [l, m] : f.terms()) out.set(l, m * t.at(l) / w(l));
    return out;
}

struct PairingCheck {
    cplx direct;    // <T, u>
    cplx via_nu;    // <S(T), Nu> = sum_ij <S(T) phi_ij, conj(psi_ij)>_omega
    double residual = 0;
};

inline PairingCheck pairing_identity_check(const OperatorField& t, const OperatorField& u, const Weight& w) {
    const NuDecomposition nu = nu_decompose(u, w);
    PairingCheck c{pair(t, u), 0.0, 0};
    for (const auto& term : nu.terms) c.via_nu += inner_omega(apply_s(t, term.phi, w), involution(term.psi), w);
    c.residual = std::abs(c.direct - c.via_nu);
    return c;
}

}  // namespace bfw
