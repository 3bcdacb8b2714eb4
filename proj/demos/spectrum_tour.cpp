// Spectrum radii for a few weights, and where a family of diagonal points leaves G_omega.

#include "bfw/bfw.hpp"

#include <cstdio>

int main() {
    using namespace bfw;
    const GroupDual t1 = GroupDual::torus(1), su2 = GroupDual::su2();
    for (const char* spec : {"exp:lambda=2", "exp:lambda=3;lambda_neg=1.5", "poly:alpha=2"}) {
        const auto d = spectrum_bounds(weights::parse(t1, spec), 64);
        std::printf("torus:1 %-28s annulus %s\n", spec, d.to_json()["annulus"].dump().c_str());
    }
    for (const char* spec : {"poly:alpha=1", "exp:lambda=2", "prod(dim,exp:lambda=1.5)"}) {
        const auto d = spectrum_bounds(weights::parse(su2, spec), 256);
        std::printf("su2     %-28s rho %.6f  equals G: %s\n", spec, d.rho, d.equals_g ? "yes" : "no");
    }
    // diag(l, 1/l) under exp:lambda=2 is a member exactly when l <= 2
    const Weight w = weights::exponential(su2, 2);
    for (double l : {1.0, 1.5, 1.99, 2.0, 2.01, 3.0}) {
        Matrix2 m = Matrix2::Zero();
        m(0, 0) = l;
        m(1, 1) = 1 / l;
        const auto r = membership(SpectrumPoint::sl2(m), w, 48);
        std::printf("diag(%.2f) margin %.6f  %s\n", l, r.margin, r.member ? "member" : "outside");
    }
}
