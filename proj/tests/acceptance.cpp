// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include "bfw/bfw.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace bfw;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<GroupDual> families() {
    return {GroupDual::torus(1), GroupDual::torus(2), GroupDual::su2(), GroupDual::so3(), GroupDual::semidirect(),
            GroupDual::product(GroupDual::su2(), GroupDual::torus(1))};
}

OperatorField random_field(const GroupDual& g, int depth, std::mt19937_64& rng) {
    OperatorField u(g);
    std::uniform_real_distribution<double> coin(0, 1);
    for (const auto& l : g.labels_up_to(depth))
        if (coin(rng) < 0.7) u.set(l, oracle::random_matrix(rng, g.dim(l), 0.5));
    if (u.empty()) u.set(g.trivial(), Matrix::Identity(1, 1));
    return u;
}

int depth_for(const GroupDual& g) { return g.family() == Family::torus || g.family() == Family::product ? 2 : 3; }

// ---------------------------------------------------------------------------------------------

Verdict fusion_dimensions() {
    long pairs = 0;
    for (const auto& g : families()) {
        const LabelSet labels = g.labels_up_to(10);
        for (const auto& a : labels)
            for (const auto& b : labels) {
                long total = 0;
                for (const auto& [s, m] : g.fuse(a, b)) total += long(m) * g.dim(s);
                if (total != long(g.dim(a)) * g.dim(b))
                    return {false, g.name() + ": " + a.str() + " x " + b.str() + " sums to " + std::to_string(total)};
                ++pairs;
            }
    }
    return {true, std::to_string(pairs) + " pairs"};
}

Verdict submultiplicativity() {
    std::mt19937_64 rng(2);
    double worst = -1;
    std::string where;
    for (const auto& g : families()) {
        const std::vector<Weight> ws = {weights::constant(g, 1), weights::dimension(g), weights::polynomial(g, 1),
                                        weights::exponential(g, 2)};
        for (const auto& w : ws)
            for (int k = 0; k < 200; ++k) {
                const auto u = random_field(g, depth_for(g), rng), v = random_field(g, depth_for(g), rng);
                const double ratio = norm_a_omega(multiply(u, v), w) / (norm_a_omega(u, w) * norm_a_omega(v, w));
                if (ratio > worst) {
                    worst = ratio;
                    where = g.name() + " " + w.descriptor();
                }
            }
    }
    return {worst <= 1 + 1e-9, "max ratio " + fmt("%.6f", worst) + " (" + where + "), 4800 pairs"};
}

Verdict product_oracle() {
    std::mt19937_64 rng(3);
    const GroupDual g = GroupDual::su2();
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const auto u = random_field(g, 4, rng), v = random_field(g, 4, rng);
        const OperatorField direct = multiply(u, v);
        QuadratureOptions opt;
        opt.fn_degree = 8;
        const OperatorField quad = quadrature_coeffs([&](const PointData& p) { return evaluate(u, p) * evaluate(v, p); }, g, 8, opt);
        worst = std::max(worst, direct.max_abs_diff(quad));
    }
    return {worst <= 1e-8, "max deviation " + fmt("%.2e", worst) + " over 50 pairs"};
}

Verdict growth_rates() {
    double dev = 0;
    for (const auto& g : {GroupDual::torus(1), GroupDual::su2(), GroupDual::semidirect()}) {
        const Weight w = weights::exponential(g, 2);
        const GrowthCertificate c = growth_rate(w, g.default_generators().front(), 64);
        for (const auto& r : c.rows) dev = std::max(dev, std::abs(r.root - 2));
    }
    const GroupDual g = GroupDual::su2();
    const GrowthCertificate c = growth_rate(weights::polynomial(g, 1), IrrepLabel::su2(1), 512);
    bool monotone = true;
    for (std::size_t i = 1; i < c.rows.size(); ++i) monotone = monotone && c.rows[i].running_inf <= c.rows[i - 1].running_inf;
    const double last = c.rows.back().root;
    const bool pass = dev <= 1e-12 && last > 1 && last <= 1.02 && monotone;
    return {pass, "exp deviation " + fmt("%.1e", dev) + ", poly root at 512 = " + fmt("%.6f", last) +
                      (monotone ? ", running inf nonincreasing" : ", running inf increases")};
}

Verdict spectrum() {
    std::ostringstream os;
    bool pass = true;
    const GroupDual t1 = GroupDual::torus(1);
    const SpectrumDescription a = spectrum_bounds(weights::exponential(t1, 2), 64);
    const double inner = 1 / a.radius(IrrepLabel::torus({-1})), outer = a.radius(IrrepLabel::torus({1}));
    pass = pass && std::abs(inner - 0.5) <= 1e-9 && std::abs(outer - 2) <= 1e-9;
    os << "T1 [" << inner << ", " << outer << "]";
    const SpectrumDescription s = spectrum_bounds(weights::exponential(GroupDual::semidirect(), 2), 64);
    pass = pass && std::abs(1 / s.rho - 0.5) <= 1e-9 && std::abs(s.rho - 2) <= 1e-9;
    os << ", semidirect [" << 1 / s.rho << ", " << s.rho << "]";
    const GroupDual g = GroupDual::su2();
    for (double alpha : {0.5, 1.0, 2.0}) {
        const bool eq = spectrum_bounds(weights::polynomial(g, alpha), 512).equals_g;
        pass = pass && eq;
        if (!eq) os << ", poly " << alpha << " not G";
    }
    os << ", su2 poly = G";
    Matrix2 d = Matrix2::Zero();
    d(0, 0) = 1.5;
    d(1, 1) = 1 / 1.5;
    const auto theta = SpectrumPoint::sl2(d);
    const Weight w = weights::exponential(g, 2);
    if (!membership(theta, w, 64).member) return {false, os.str() + ", diag(1.5, 1/1.5) outside G_omega"};
    std::mt19937_64 rng(5);
    double res = 0;
    for (int k = 0; k < 100; ++k) {
        const auto u = random_field(g, 3, rng), v = random_field(g, 3, rng);
        res = std::max(res, std::abs(char_eval(theta, multiply(u, v)) - char_eval(theta, u) * char_eval(theta, v)));
    }
    pass = pass && res <= 1e-8;
    os << ", multiplicativity " << fmt("%.1e", res);
    return {pass, os.str()};
}

Verdict factorization() {
    std::mt19937_64 rng(6);
    double recon = 0, slack = -1e300, single = 0;
    int count = 0;
    for (const auto& g : {GroupDual::torus(2), GroupDual::su2(), GroupDual::semidirect(), GroupDual::so3()}) {
        const Weight w1 = weights::polynomial(g, 1), w2 = weights::exponential(g, 2);
        const Weight w = weights::power(weights::product(w1, w2), 0.5);
        for (int k = 0; k < 25; ++k, ++count) {
            const auto u = random_field(g, depth_for(g), rng);
            const Factorization f = factorize(u, w1, w2);
            const OperatorField back = convolve(f.f, f.g);
            double scale = 0;
            for (const auto& [l, m] : u.terms()) scale = std::max(scale, linalg::max_abs(m));
            recon = std::max(recon, back.max_abs_diff(u) / scale);
            const double lhs = norm_a_omega(u, w), rhs = norm_l2_omega(f.f, w2) * norm_l2_omega(f.g, w1);
            slack = std::max(slack, lhs - rhs);
            OperatorField one(g);
            one.set(u.terms().rbegin()->first, u.terms().rbegin()->second);
            const Factorization f1 = factorize(one, w1, w2);
            single = std::max(single, std::abs(norm_a_omega(one, w) - norm_l2_omega(f1.f, w2) * norm_l2_omega(f1.g, w1)));
        }
    }
    const bool pass = recon <= 1e-12 && slack <= 1e-9 && single <= 1e-9;
    return {pass, std::to_string(count) + " elements, reconstruction " + fmt("%.1e", recon) + ", max(lhs-rhs) " +
                      fmt("%.1e", slack) + ", single-coefficient gap " + fmt("%.1e", single)};
}

Verdict jacobi_anger() {
    const GroupDual g = GroupDual::torus(1);
    const OperatorField u = OperatorField::character(g, IrrepLabel::torus({1})) + OperatorField::character(g, IrrepLabel::torus({-1}));
    double worst = 0;
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const OperatorField e = exp_itu(u, t).field;
        for (int k = -20; k <= 20; ++k) {
            const cplx want = std::pow(cplx(0, 1), k) * oracle::bessel_j(k, 2 * t);
            worst = std::max(worst, std::abs(e.at(IrrepLabel::torus({k}))(0, 0) - want));
        }
    }
    return {worst <= 1e-8, "max deviation " + fmt("%.1e", worst)};
}

Verdict exp_growth() {
    const GroupDual g = GroupDual::su2();
    const OperatorField u = OperatorField::character(g, IrrepLabel::su2(1));
    ExpOptions opt;
    opt.max_cutoff = 120;
    try {
        const GrowthCurve c = growth_curve(u, weights::polynomial(g, 1), 1.0, {1, 2, 4, 8, 16, 32, 64}, opt);
        double defect = 0;
        bool finite = true;
        for (const auto& r : c.rows) {
            defect = std::max(defect, r.tail);
            finite = finite && std::isfinite(r.norm);
        }
        return {finite && defect <= 1e-6 && c.pass,
                "slope " + fmt("%.4f", c.slope) + " (bound " + fmt("%.1f", c.exponent + 0.5) + "), max defect " + fmt("%.1e", defect)};
    } catch (const InsufficientCutoff& e) {
        // what the uncapped run needs, for the record
        const GrowthCurve c = growth_curve(u, weights::polynomial(g, 1), 1.0, {1, 2, 4, 8, 16, 32, 64});
        int need = 0;
        for (const auto& r : c.rows) need = std::max(need, r.cutoff);
        return {false, std::string(e.what()) + "; uncapped: cutoff " + std::to_string(need) + ", slope " + fmt("%.4f", c.slope)};
    }
}

Verdict nu_identities() {
    std::mt19937_64 rng(9);
    double mass = 0, recon = 0, pairing = 0;
    const std::vector<GroupDual> gs = {GroupDual::su2(), GroupDual::torus(2), GroupDual::semidirect()};
    for (int k = 0; k < 50; ++k) {
        const GroupDual& g = gs[k % gs.size()];
        const Weight w = weights::polynomial(g, 1);
        const auto u = random_field(g, depth_for(g), rng), t = random_field(g, depth_for(g), rng);
        const NuDecomposition nu = nu_decompose(u, w);
        mass = std::max({mass, std::abs(nu.phi_mass - nu.a_norm), std::abs(nu.psi_mass - nu.a_norm)});
        const Grid grid = quadrature_grid(g, 2);
        for (std::size_t i = 0; i < grid.points.size(); i += 1 + grid.points.size() / 8)
            for (std::size_t j = 0; j < grid.points.size(); j += 1 + grid.points.size() / 8) {
                const PointData& s = grid.points[i];
                const PointData& r = grid.points[j];
                recon = std::max(recon, std::abs(nu_eval(nu, s, r) - evaluate(u, s.compose(r.inverse()))));
            }
        pairing = std::max(pairing, pairing_identity_check(t, u, w).residual);
    }
    return {mass <= 1e-9 && recon <= 1e-9 && pairing <= 1e-9,
            "mass " + fmt("%.1e", mass) + ", reconstruction " + fmt("%.1e", recon) + ", pairing " + fmt("%.1e", pairing)};
}

Verdict derivations() {
    const GroupDual g = GroupDual::su2();
    const LieElement x = LieElement::su2(su2_casimir_basis()[2]);
    const auto one = derivation_bound_scan(x, weights::polynomial(g, 1), 500);
    double inc = 0;
    int at = 0;
    for (int n = 101; n <= 500; ++n)
        if (one[n].sup - one[n - 1].sup > inc) {
            inc = one[n].sup - one[n - 1].sup;
            at = n;
        }
    const auto half = derivation_bound_scan(x, weights::polynomial(g, 0.5), 500);
    const double growth = half[500].sup / half[10].sup;
    std::mt19937_64 rng(10);
    double leibniz = 0;
    const PointData e = GroupPoint::su2(Matrix2::Identity()).data();
    for (int k = 0; k < 50; ++k) {
        const auto u = random_field(g, 3, rng), v = random_field(g, 3, rng);
        const cplx lhs = point_derivation(x, multiply(u, v));
        const cplx rhs = point_derivation(x, u) * evaluate(v, e) + evaluate(u, e) * point_derivation(x, v);
        leibniz = std::max(leibniz, std::abs(lhs - rhs));
    }
    const bool pass = inc < 1e-6 && growth > 10 && leibniz <= 1e-9;
    return {pass, "alpha=1 max increment beyond 100: " + fmt("%.2e", inc) + " at n=" + std::to_string(at) +
                      "; alpha=0.5 sup(500)/sup(10) = " + fmt("%.3f", growth) + "; Leibniz " + fmt("%.1e", leibniz)};
}

Verdict separating() {
    const GroupDual g = GroupDual::su2();
    const OperatorField u0 = OperatorField::one(g) * cplx(0.5) + OperatorField::character(g, IrrepLabel::su2(1)) * cplx(0.25);
    const SeparatingResult r = separating_function(u0, Bump{});
    double low = 0, high = 0;
    int n_low = 0, n_high = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b)
            for (int c = 0; c < 10; ++c) {
                const PointData p = GroupPoint::su2_euler(2 * pi * a / 10, pi * (b + 0.5) / 10, 2 * pi * c / 10).data();
                const double x = evaluate(u0, p).real();
                const cplx v = evaluate(r.v, p);
                if (std::abs(x) < 0.1) {
                    low = std::max(low, std::abs(v));
                    ++n_low;
                }
                if (x > 0.9) {
                    high = std::max(high, std::abs(v - 1.0));
                    ++n_high;
                }
            }
    const bool pass = n_low > 0 && n_high > 0 && low <= 0.05 && high <= 0.05;
    return {pass, "|v| <= " + fmt("%.1e", low) + " on " + std::to_string(n_low) + " points, |v-1| <= " + fmt("%.1e", high) +
                      " on " + std::to_string(n_high) + " points"};
}

Verdict casimir() {
    const GroupDual g = GroupDual::su2();
    const double c0 = casimir_eigenvalue(g, IrrepLabel::su2(0)), c1 = casimir_eigenvalue(g, IrrepLabel::su2(1));
    double res = 0, lo = 1e300, hi = -1e300;
    for (int n = 0; n <= 200; ++n) res = std::max(res, casimir_scalar_residual(g, IrrepLabel::su2(n)));
    // c(pi_0) = 0 forces the ratio scan to start at n = 1
    for (int n = 1; n <= 200; ++n) {
        const double ratio = casimir_eigenvalue(g, IrrepLabel::su2(n)) / (1.0 + double(n) * n);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    const bool pass = c0 == 0 && std::abs(c1 - 0.375) <= 1e-12 && res <= 1e-10 && lo >= 0.05 && hi <= 0.5;
    return {pass, "c0 = " + fmt("%g", c0) + ", c1 = " + fmt("%.15f", c1) + ", residual " + fmt("%.1e", res) + ", ratio in [" +
                      fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget;  // seconds
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> all = {
        {"fusion dimension consistency", 5, fusion_dimensions},
        {"norm submultiplicativity", 60, submultiplicativity},
        {"product vs quadrature oracle", 120, product_oracle},
        {"growth rates", 10, growth_rates},
        {"spectrum radii and characters", 1e9, spectrum},
        {"factorization", 1e9, factorization},
        {"Jacobi-Anger", 1e9, jacobi_anger},
        {"exp(itu) growth, cutoff <= 120", 300, exp_growth},
        {"N-decomposition identities", 1e9, nu_identities},
        {"derivation dichotomy", 30, derivations},
        {"separating function", 300, separating},
        {"Casimir", 1e9, casimir},
    };
    int failures = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = all[i].run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > all[i].budget) {
            v.pass = false;
            v.detail += "; over time budget";
        }
        failures += !v.pass;
        std::printf("%s %2zu %s: %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", i + 1, all[i].name, v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria pass\n", int(all.size()) - failures, all.size());
    return failures;
}
