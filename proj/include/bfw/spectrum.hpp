#pragma once

// The Gelfand spectrum G_omega, realized inside G_C as the points theta with
// ||pi(theta)|| <= omega(pi) for every pi.

#include "bfw/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace bfw {

struct ProbeRadius {
    IrrepLabel probe;
    double radius = 1;   // extrapolated rho_omega(probe)
    double rho_hat = 1;  // min_n omega(probe^{(x)n})^{1/n}, an upper bound
};

struct SpectrumDescription {
    std::string group;
    std::string weight;
    int N = 0;
    std::vector<ProbeRadius> probes;
    // su2 / so3: admissible singular values [1/rho, rho]; semidirect: annulus [1/rho, rho]
    double rho = 1;
    bool equals_g = true;

    double radius(const IrrepLabel& a) const {
        for (const auto& p : probes)
            if (p.probe == a) return p.radius;
        throw Error("no probe at " + a.str());
    }

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

namespace detail {

inline double round12(double x) {
    if (!std::isfinite(x) || x == 0) return x;
    const double scale = std::pow(10.0, 11 - std::floor(std::log10(std::abs(x))));
    return std::round(x * scale) / scale;
}

}  // namespace detail

inline nlohmann::json SpectrumDescription::to_json() const {
    nlohmann::json j;
    j["group"] = group;
    j["weight"] = weight;
    j["N"] = N;
    j["equals_G"] = equals_g;
    auto& arr = j["probes"] = nlohmann::json::array();
    for (const auto& p : probes)
        arr.push_back({{"probe", p.probe.str()}, {"radius", detail::round12(p.radius)}, {"rho_hat", detail::round12(p.rho_hat)}});
    const GroupDual g = GroupDual::parse(group);
    if (g.family() == Family::torus && g.rank() == 1)
        j["annulus"] = {detail::round12(1.0 / radius(IrrepLabel::torus({-1}))), detail::round12(radius(IrrepLabel::torus({1})))};
    if (g.family() == Family::semidirect) j["annulus"] = {detail::round12(1.0 / rho), detail::round12(rho)};
    if (g.family() == Family::su2 || g.family() == Family::so3) {
        j["rho"] = detail::round12(rho);
        j["singular_values"] = {detail::round12(1.0 / rho), detail::round12(rho)};
    }
    return j;
}

inline std::string SpectrumDescription::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "probe,radius\n";
    for (const auto& p : probes) os << '"' << p.probe.str() << "\"," << p.radius << '\n';
    return os.str();
}

/// Radii of G_omega from growth certificates along probe labels. Tori always probe +-e_i; extra
/// probes are added together with their conjugates. Other families probe the default generators.
inline SpectrumDescription spectrum_bounds(const Weight& w, int N, const LabelSet& extra_probes = {}) {
    const GroupDual& g = w.dual();
    LabelSet probes;
    auto add = [&](const IrrepLabel& a) {
        if (std::find(probes.begin(), probes.end(), a) == probes.end()) probes.push_back(a);
    };
    if (g.family() == Family::torus) {
        for (int i = 0; i < g.rank(); ++i)
            for (int s : {1, -1}) {
                std::vector<int> mu(g.rank(), 0);
                mu[i] = s;
                add(IrrepLabel::torus(mu));
            }
    } else {
        for (const auto& a : g.default_generators()) add(a);
    }
    for (const auto& a : extra_probes) {
        g.require(a);
        add(a);
        add(g.conjugate(a));
    }
    SpectrumDescription out;
    out.group = g.name();
    out.weight = w.descriptor();
    out.N = N;
    std::vector<std::optional<GrowthCertificate>> certs(probes.size());
    parallel_chunks(probes.size(), [&](std::size_t i) { certs[i] = growth_rate(w, probes[i], N); });
    for (const auto& oc : certs) {
        const GrowthCertificate& c = *oc;
        out.probes.push_back({c.label, c.rate, c.rho_hat});
        out.rho = std::max(out.rho, c.rate);
        if (c.exponential) out.equals_g = false;
    }
    // so3:1 is pi_2 of SU(2), whose norm at diag(l, 1/l) is l^2
    if (g.family() == Family::so3) out.rho = std::sqrt(out.rho);
    return out;
}

struct Membership {
    double margin = 0;  // max over scanned labels of ||pi(theta)||_op / omega(pi)
    std::optional<IrrepLabel> argmax;
    bool member = true;
    // margin <= 1 at a finite cutoff is only evidence; margin > 1 certifies non-membership
    bool certified = false;
    int cutoff = 0;
};

inline constexpr double membership_tolerance = 1e-9;

inline Membership membership(const SpectrumPoint& theta, const Weight& w, int N) {
    const GroupDual& g = w.dual();
    const LabelSet labels = g.labels_up_to(N);
    std::vector<double> vals(labels.size());
    parallel_chunks(labels.size(), [&](std::size_t i) {
        vals[i] = std::exp(std::log(linalg::op_norm(g.rep(labels[i], theta.data()))) - w.log_value(labels[i]));
    });
    Membership m;
    m.cutoff = N;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!m.argmax || vals[i] > m.margin) {
            m.margin = vals[i];
            m.argmax = labels[i];
        }
    m.member = m.margin <= 1 + membership_tolerance;
    m.certified = !m.member;
    return m;
}

/// theta(u) = sum d_pi Tr(u^(pi) pi(theta)).
inline cplx char_eval(const SpectrumPoint& theta, const OperatorField& u) { return evaluate(u, theta.data()); }

/// True when theta is a positive element of G_C (s = e).
inline bool is_positive(const PointData& p, double tol = 1e-12) {
    switch (p.family) {
        case Family::torus:
            for (auto v : p.z)
                if (std::abs(v.imag()) > tol || v.real() <= 0) return false;
            return true;
        case Family::su2:
        case Family::so3: {
            if (linalg::max_abs(Matrix(p.m - p.m.adjoint())) > tol * std::max(1.0, linalg::max_abs(Matrix(p.m)))) return false;
            Eigen::SelfAdjointEigenSolver<Matrix2> es(p.m);
            return es.eigenvalues().minCoeff() > 0;
        }
        case Family::semidirect: return p.sign == 1 && std::abs(p.w.imag()) <= tol && p.w.real() > 0;
        case Family::product: return is_positive(p.left(), tol) && is_positive(p.right(), tol);
    }
    return false;
}

/// theta^z for positive theta, via the logarithm of its positive part.
inline PointData positive_power(const PointData& p, cplx z) {
    if (!is_positive(p, 1e-10)) throw Error("positive_power needs a positive point");
    PointData q = p;
    switch (p.family) {
        case Family::torus:
            for (auto& v : q.z) v = std::exp(z * std::log(v.real()));
            break;
        case Family::su2:
        case Family::so3: {
            Eigen::SelfAdjointEigenSolver<Matrix2> es(Matrix2(0.5 * (p.m + p.m.adjoint())));
            Matrix2 d = Matrix2::Zero();
            for (int i = 0; i < 2; ++i) d(i, i) = std::exp(z * std::log(es.eigenvalues()(i)));
            q.m = es.eigenvectors() * d * es.eigenvectors().adjoint();
            break;
        }
        case Family::semidirect: q.w = std::exp(z * std::log(p.w.real())); break;
        case Family::product: q = PointData::make_product(positive_power(p.left(), z), positive_power(p.right(), z)); break;
    }
    return q;
}

/// u_theta(z) = sum d_pi Tr(u^(pi) pi(theta)^z), the power taken through the eigenvalues of pi(theta).
inline cplx analytic_eval(const OperatorField& u, const SpectrumPoint& theta, cplx z) {
    if (!is_positive(theta.data(), 1e-10)) throw Error("analytic_eval needs a positive spectrum point");
    const GroupDual& g = u.dual();
    cplx s = 0;
    for (const auto& [l, m] : u.terms()) {
        const Matrix r = g.rep(l, theta.data());
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (r + r.adjoint())));
        const Eigen::VectorXd ev = es.eigenvalues();
        Vector pw(ev.size());
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (!(ev(i) > 0)) throw Error("pi(theta) is not positive definite at " + l.str());
            pw(i) = std::exp(z * std::log(ev(i)));
        }
        const Matrix rz = es.eigenvectors() * pw.asDiagonal() * es.eigenvectors().adjoint();
        s += double(g.dim(l)) * (m * rz).trace();
    }
    return s;
}

/// ||J pi'(theta) J^* - pi(theta^-1)^T||_op: the conjugate representation, realized through its
/// intertwiner, against the contragredient.
inline double conj_rep_residual(const GroupDual& g, const SpectrumPoint& theta, const IrrepLabel& a) {
    const Matrix j = g.conjugation_intertwiner(a);
    const Matrix lhs = j * g.rep(g.conjugate(a), theta.data()) * j.adjoint();
    const Matrix rhs = g.rep(a, theta.data().inverse()).transpose();
    return linalg::op_norm(lhs - rhs);
}

/// Bracket for the strip {x : theta^x in G_omega} = [alpha, beta] at cutoff N. The outer ends
/// (alpha_lo, beta_hi) are certified non-members; the inner ends are members at the cutoff only.
struct StripBracket {
    double alpha_lo = -std::numeric_limits<double>::infinity(), alpha_hi = 0;
    double beta_lo = 0, beta_hi = std::numeric_limits<double>::infinity();
    int cutoff = 0;
};

inline StripBracket strip_bracket(const SpectrumPoint& theta, const Weight& w, int N, double x_max = 64,
                                  int iterations = 60) {
    StripBracket b;
    b.cutoff = N;
    auto member = [&](double x) {
        return membership(SpectrumPoint::from_data(positive_power(theta.data(), x)), w, N).member;
    };
    auto search = [&](double dir, double& in, double& out) {
        if (member(dir * x_max)) {
            in = dir * x_max;
            return;
        }
        double lo = 0, hi = x_max;
        for (int i = 0; i < iterations; ++i) {
            const double mid = 0.5 * (lo + hi);
            (member(dir * mid) ? lo : hi) = mid;
        }
        in = dir * lo;
        out = dir * hi;
    };
    search(1, b.beta_lo, b.beta_hi);
    search(-1, b.alpha_hi, b.alpha_lo);
    return b;
}

}  // namespace bfw
