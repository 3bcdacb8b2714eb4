// ||exp(itu)|| on SU(2) for u = chi_1 under poly weights, against (1+t)^(3/2 + alpha).

#include "bfw/bfw.hpp"

#include <cstdio>

int main() {
    using namespace bfw;
    const GroupDual g = GroupDual::su2();
    const OperatorField u = OperatorField::character(g, IrrepLabel::su2(1));
    for (double alpha : {0.5, 1.0, 2.0}) {
        const GrowthCurve c = growth_curve(u, weights::polynomial(g, alpha), alpha, {1, 2, 4, 8, 16, 32, 64});
        std::printf("alpha %.1f  slope %.4f  exponent %.1f  C %.4f\n", alpha, c.slope, c.exponent, c.constant);
        for (const auto& r : c.rows) std::printf("  t %5.1f  norm %.6e  cutoff %d\n", r.t, r.norm, r.cutoff);
    }
}
