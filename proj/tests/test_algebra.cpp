#include "bfw/algebra.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bfw;

namespace {

std::vector<GroupDual> all_duals() {
    return {GroupDual::torus(1), GroupDual::torus(2), GroupDual::su2(), GroupDual::so3(), GroupDual::semidirect(),
            GroupDual::product(GroupDual::su2(), GroupDual::torus(1))};
}

OperatorField random_field(const GroupDual& g, int depth, std::mt19937_64& rng, double density = 0.7) {
    OperatorField u(g);
    std::uniform_real_distribution<double> coin(0, 1);
    for (const auto& l : g.labels_up_to(depth))
        if (coin(rng) < density) u.set(l, oracle::random_matrix(rng, g.dim(l), 0.5));
    if (u.empty()) u.set(g.trivial(), Matrix::Identity(1, 1));
    return u;
}

PointData random_point(const GroupDual& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0, 2 * pi);
    switch (g.family()) {
        case Family::torus: {
            std::vector<double> a(g.rank());
            for (auto& v : a) v = ang(rng);
            return GroupPoint::torus(a).data();
        }
        case Family::su2: return GroupPoint::su2(oracle::random_su2(rng)).data();
        case Family::so3: return GroupPoint::so3(oracle::random_su2(rng)).data();
        case Family::semidirect: return GroupPoint::semidirect(ang(rng), rng() % 2 ? 1 : -1).data();
        case Family::product: return PointData::make_product(random_point(g.left(), rng), random_point(g.right(), rng));
    }
    return {};
}

// u(s) summed directly from the symmetric-power oracle.
cplx su2_oracle_eval(const OperatorField& u, const Matrix2& s) {
    cplx v = 0;
    for (const auto& [l, m] : u.terms()) v += double(l.index() + 1) * (m * oracle::symmetric_power(l.index(), s)).trace();
    return v;
}

}  // namespace

TEST(Field, DimensionCheckAndPruning) {
    const auto g = GroupDual::su2();
    OperatorField u(g);
    EXPECT_THROW(u.set(IrrepLabel::su2(1), Matrix::Identity(3, 3)), Error);
    u.set(IrrepLabel::su2(1), Matrix::Constant(2, 2, 1e-16));
    EXPECT_TRUE(u.empty());
}

TEST(Norms, Examples) {
    const auto g = GroupDual::su2();
    Matrix e11 = Matrix::Zero(2, 2);
    e11(0, 0) = 1;
    OperatorField u(g);
    u.set(IrrepLabel::su2(1), e11);
    EXPECT_NEAR(norm_a_omega(u, make_weight(g, "dim")), 4.0, 1e-14);
    EXPECT_EQ(norm_a_omega(OperatorField(g), make_weight(g, "dim")), 0.0);
    OperatorField f(g);
    f.set(IrrepLabel::su2(1), Matrix::Identity(2, 2));
    EXPECT_NEAR(norm_l2_omega(f, make_weight(g, "const:1")), 2.0, 1e-14);
    const auto t = GroupDual::torus(1);
    OperatorField h(t);
    for (int k = -1; k <= 1; ++k) h.set(IrrepLabel::torus({k}), Matrix::Identity(1, 1));
    EXPECT_NEAR(norm_l2_omega(h, make_weight(t, "poly:alpha=1")), std::sqrt(5.0), 1e-14);
}

TEST(Norms, SingleCoefficient) {
    std::mt19937_64 rng(1);
    const auto g = GroupDual::su2();
    const Weight w = make_weight(g, "poly:alpha=1");
    for (int n = 0; n <= 6; ++n) {
        const Vector xi = Vector::Random(n + 1), eta = Vector::Random(n + 1);
        const auto u = OperatorField::matrix_coefficient(g, IrrepLabel::su2(n), xi, eta);
        EXPECT_NEAR(norm_a_omega(u, w), xi.norm() * eta.norm() * (1 + n), 1e-12);
        const Matrix2 s = oracle::random_su2(rng);
        EXPECT_NEAR(std::abs(evaluate(u, GroupPoint::su2(s)) - xi.dot(oracle::symmetric_power(n, s) * eta)), 0.0, 1e-12);
    }
}

TEST(DualNorm, Examples) {
    const auto g = GroupDual::su2();
    OperatorField t(g);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3;
    t.set(IrrepLabel::su2(1), d);
    EXPECT_NEAR(dual_norm(t, make_weight(g, "dim")).value, 1.5, 1e-14);
    EXPECT_EQ(dual_norm(OperatorField(g), make_weight(g, "dim")).value, 0.0);
    std::mt19937_64 rng(2);
    const DualNorm dn = dual_norm(GroupPoint::su2(oracle::random_su2(rng)), make_weight(g, "poly:alpha=1"), 20);
    EXPECT_NEAR(dn.value, 1.0, 1e-12);
    EXPECT_EQ(*dn.argmax, IrrepLabel::su2(0));
    EXPECT_EQ(dn.cutoff, 20);
}

TEST(Multiply, CharacterFusion) {
    const auto g = GroupDual::su2();
    const auto c1 = OperatorField::character(g, IrrepLabel::su2(1));
    const auto prod = multiply(c1, c1);
    const auto expect = OperatorField::character(g, IrrepLabel::su2(0)) + OperatorField::character(g, IrrepLabel::su2(2));
    EXPECT_LE(prod.max_abs_diff(expect), 1e-14);
}

TEST(Multiply, LaurentProductOnTorus) {
    std::mt19937_64 rng(3);
    const auto t = GroupDual::torus(1);
    const auto u = random_field(t, 4, rng), v = random_field(t, 4, rng);
    const auto w = multiply(u, v);
    for (int k = -8; k <= 8; ++k) {
        cplx s = 0;
        for (int i = -4; i <= 4; ++i) s += u.at(IrrepLabel::torus({i}))(0, 0) * v.at(IrrepLabel::torus({k - i}))(0, 0);
        EXPECT_NEAR(std::abs(w.at(IrrepLabel::torus({k}))(0, 0) - s), 0.0, 1e-13);
    }
}

TEST(Multiply, OneIsUnitAndPointwise) {
    std::mt19937_64 rng(4);
    for (const auto& g : all_duals()) {
        const int depth = g.family() == Family::torus ? 2 : 3;
        for (int trial = 0; trial < 5; ++trial) {
            const auto u = random_field(g, depth, rng), v = random_field(g, depth, rng);
            EXPECT_LE(multiply(u, OperatorField::one(g)).max_abs_diff(u), 1e-14);
            const auto uv = multiply(u, v);
            for (int k = 0; k < 4; ++k) {
                const PointData p = random_point(g, rng);
                const cplx lhs = evaluate(uv, p), rhs = evaluate(u, p) * evaluate(v, p);
                EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-11 * (1 + std::abs(rhs))) << g.name();
            }
        }
    }
}

TEST(Multiply, MatchesSymmetricPowerOracleOnSu2) {
    std::mt19937_64 rng(5);
    const auto g = GroupDual::su2();
    const auto u = random_field(g, 3, rng), v = random_field(g, 3, rng);
    const auto uv = multiply(u, v);
    for (int k = 0; k < 10; ++k) {
        const Matrix2 s = oracle::random_su2(rng);
        EXPECT_NEAR(std::abs(su2_oracle_eval(uv, s) - su2_oracle_eval(u, s) * su2_oracle_eval(v, s)), 0.0, 1e-11);
    }
}

TEST(Multiply, Submultiplicative) {
    std::mt19937_64 rng(6);
    for (const auto& g : all_duals())
        for (const char* spec : {"const:1", "dim", "poly:alpha=1", "exp:lambda=2"}) {
            const Weight w = make_weight(g, spec);
            for (int trial = 0; trial < 10; ++trial) {
                const auto u = random_field(g, 3, rng, 0.5), v = random_field(g, 3, rng, 0.5);
                EXPECT_LE(norm_a_omega(multiply(u, v), w), norm_a_omega(u, w) * norm_a_omega(v, w) * (1 + 1e-9));
            }
        }
}

TEST(Quadrature, Examples) {
    const auto g = GroupDual::su2();
    const auto c = quadrature_coeffs([&](const PointData& p) { return g.character(IrrepLabel::su2(1), p); }, g, 4,
                                     {.fn_degree = 1});
    EXPECT_LE(c.max_abs_diff(OperatorField::character(g, IrrepLabel::su2(1))), 1e-13);
    for (const auto& h : all_duals()) {
        const auto one = quadrature_coeffs([](const PointData&) { return cplx(1.0); }, h, 2, {.fn_degree = 0});
        EXPECT_LE(one.max_abs_diff(OperatorField::one(h)), 1e-13) << h.name();
    }
}

TEST(Quadrature, ProductOracleAndInversion) {
    std::mt19937_64 rng(8);
    for (const auto& g : all_duals()) {
        const int depth = g.family() == Family::torus && g.rank() == 2 ? 1 : 2;
        const auto u = random_field(g, depth, rng), v = random_field(g, depth, rng);
        const auto uv = multiply(u, v);
        const auto q = quadrature_coeffs([&](const PointData& p) { return evaluate(u, p) * evaluate(v, p); }, g,
                                         2 * depth, {.fn_degree = 2 * depth});
        EXPECT_LE(q.max_abs_diff(uv), 1e-10) << g.name();
        for (int k = 0; k < 4; ++k) {
            const PointData p = random_point(g, rng);
            EXPECT_NEAR(std::abs(evaluate(q, p) - evaluate(u, p) * evaluate(v, p)), 0.0, 1e-10);
        }
    }
}

TEST(Quadrature, RefinementDetectsNonPolynomial) {
    const auto t = GroupDual::torus(1);
    auto rough = [](const PointData& p) { return cplx(std::abs(std::arg(p.z[0]))); };
    EXPECT_THROW(quadrature_coeffs(rough, t, 3, {.fn_degree = 1}), QuadratureError);
}

TEST(Evaluate, Examples) {
    const auto g = GroupDual::su2();
    EXPECT_NEAR(std::abs(evaluate(OperatorField::character(g, IrrepLabel::su2(1)), GroupPoint::su2(Matrix2::Identity())) - 2.0), 0, 1e-15);
    std::mt19937_64 rng(9);
    for (const auto& h : all_duals())
        EXPECT_NEAR(std::abs(evaluate(OperatorField::one(h), random_point(h, rng)) - 1.0), 0, 1e-15);
    const auto sd = GroupDual::semidirect();
    for (int n = 1; n <= 5; ++n)
        EXPECT_NEAR(std::abs(evaluate(OperatorField::character(sd, IrrepLabel::semidirect_twodim(n)),
                                      GroupPoint::semidirect(0.7, -1))),
                    0.0, 1e-15);
}

TEST(Pair, Examples) {
    const auto g = GroupDual::su2();
    Vector e1 = Vector::Zero(2);
    e1(0) = 1;
    const auto u = OperatorField::matrix_coefficient(g, IrrepLabel::su2(1), e1, e1);
    OperatorField t(g);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 5;
    t.set(IrrepLabel::su2(1), d);
    EXPECT_NEAR(std::abs(pair(t, u) - 5.0), 0, 1e-14);
    OperatorField other(g);
    other.set(IrrepLabel::su2(3), Matrix::Identity(4, 4));
    EXPECT_EQ(pair(other, u), cplx(0.0));
}

TEST(Pair, GroupPointPairingIsEvaluation) {
    std::mt19937_64 rng(10);
    for (const auto& g : all_duals()) {
        const auto u = random_field(g, 3, rng);
        const PointData p = random_point(g, rng);
        OperatorField t(g);
        for (const auto& l : g.labels_up_to(3)) t.set(l, g.rep(l, p));
        EXPECT_NEAR(std::abs(pair(t, u) - evaluate(u, p)), 0.0, 1e-12) << g.name();
    }
}

TEST(Translate, IsometryAndAction) {
    std::mt19937_64 rng(11);
    for (const auto& g : all_duals()) {
        const Weight w = make_weight(g, "poly:alpha=1");
        const auto u = random_field(g, 3, rng);
        const GroupPoint t = GroupPoint::from_data(random_point(g, rng));
        const GroupPoint s = GroupPoint::from_data(random_point(g, rng));
        const auto r = translate(u, t, Side::right), l = translate(u, t, Side::left);
        EXPECT_NEAR(norm_a_omega(r, w), norm_a_omega(u, w), 1e-12 * norm_a_omega(u, w));
        EXPECT_NEAR(norm_a_omega(l, w), norm_a_omega(u, w), 1e-12 * norm_a_omega(u, w));
        EXPECT_NEAR(std::abs(evaluate(r, s) - evaluate(u, s * t)), 0.0, 1e-11);
        EXPECT_NEAR(std::abs(evaluate(l, s) - evaluate(u, t.inverse() * s)), 0.0, 1e-11);
    }
    const auto tor = GroupDual::torus(1);
    OperatorField c(tor);
    c.set(IrrepLabel::torus({3}), Matrix::Identity(1, 1));
    const auto moved = translate(c, GroupPoint::torus({0.4}), Side::right);
    EXPECT_NEAR(std::abs(moved.at(IrrepLabel::torus({3}))(0, 0) - std::polar(1.0, 1.2)), 0.0, 1e-15);
}

TEST(Involution, ConjugatesPointwise) {
    std::mt19937_64 rng(12);
    for (const auto& g : all_duals()) {
        const Weight w = make_weight(g, "poly:alpha=1");
        const auto u = random_field(g, 3, rng);
        const auto ub = involution(u);
        EXPECT_NEAR(norm_a_omega(ub, w), norm_a_omega(u, w), 1e-12 * norm_a_omega(u, w));
        EXPECT_LE(involution(ub).max_abs_diff(u), 1e-13);
        for (int k = 0; k < 3; ++k) {
            const PointData p = random_point(g, rng);
            EXPECT_NEAR(std::abs(evaluate(ub, p) - std::conj(evaluate(u, p))), 0.0, 1e-11) << g.name();
        }
    }
    const auto g = GroupDual::su2();
    const auto c1 = OperatorField::character(g, IrrepLabel::su2(1));
    EXPECT_LE(involution(c1).max_abs_diff(c1), 1e-15);
    const auto t = GroupDual::torus(1);
    OperatorField a(t);
    a.set(IrrepLabel::torus({1}), Matrix::Constant(1, 1, cplx(2, 3)));
    EXPECT_EQ(involution(a).at(IrrepLabel::torus({-1}))(0, 0), cplx(2, -3));
}

TEST(Factorize, Examples) {
    const auto g = GroupDual::su2();
    OperatorField u(g);
    u.set(IrrepLabel::su2(1), Matrix::Identity(2, 2));
    const auto one = make_weight(g, "const:1");
    const auto fg = factorize(u, one, one);
    EXPECT_LE(linalg::max_abs(fg.g.at(IrrepLabel::su2(1)) - Matrix::Identity(2, 2)), 1e-14);
    EXPECT_LE(linalg::max_abs(fg.f.at(IrrepLabel::su2(1)) - Matrix::Identity(2, 2)), 1e-14);
    std::mt19937_64 rng(13);
    const auto r = random_field(g, 3, rng);
    const auto fg2 = factorize(r, make_weight(g, "const:4"), one);
    for (const auto& [l, m] : r.terms()) {
        const auto p = linalg::polar(m);
        EXPECT_LE(linalg::max_abs(fg2.g.at(l) - std::sqrt(2.0) * p.unitary * p.sqrt_modulus), 1e-12);
        EXPECT_LE(linalg::max_abs(fg2.f.at(l) - p.sqrt_modulus / std::sqrt(2.0)), 1e-12);
    }
    EXPECT_LE(convolve(fg2.f, fg2.g).max_abs_diff(r), 1e-12);
}

TEST(Factorize, NormBoundAndEquality) {
    std::mt19937_64 rng(14);
    const auto g = GroupDual::su2();
    const Weight w1 = make_weight(g, "poly:alpha=2"), w2 = make_weight(g, "dim");
    const Weight w = make_weight(g, "prod(pow(poly:alpha=2,0.5),pow(dim,0.5))");
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_field(g, 4, rng);
        const auto fg = factorize(u, w1, w2);
        EXPECT_LE(convolve(fg.f, fg.g).max_abs_diff(u), 1e-12 * norm_a(u));
        EXPECT_LE(norm_a_omega(u, w), norm_l2_omega(fg.f, w2) * norm_l2_omega(fg.g, w1) + 1e-9);
        const auto single = OperatorField::matrix_coefficient(g, IrrepLabel::su2(trial % 5), Vector::Random(trial % 5 + 1),
                                                              Vector::Random(trial % 5 + 1));
        const auto fs = factorize(single, w1, w2);
        EXPECT_NEAR(norm_a_omega(single, w), norm_l2_omega(fs.f, w2) * norm_l2_omega(fs.g, w1), 1e-9);
    }
}

TEST(Convolve, Order) {
    const auto g = GroupDual::su2();
    Matrix a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    OperatorField f(g), h(g);
    f.set(IrrepLabel::su2(1), a);
    h.set(IrrepLabel::su2(1), b);
    EXPECT_LE(linalg::max_abs(convolve(f, h).at(IrrepLabel::su2(1)) - b * a), 0.0);
}

TEST(ScaleDiag, RoundTripAndNorm) {
    std::mt19937_64 rng(15);
    const auto g = GroupDual::su2();
    const Weight dim = make_weight(g, "dim");
    OperatorField xi(g);
    xi.set(IrrepLabel::su2(1), Matrix::Identity(2, 2));
    EXPECT_LE(linalg::max_abs(scale_diag(xi, dim, Scale::q).at(IrrepLabel::su2(1)) - std::sqrt(2.0) * Matrix::Identity(2, 2)), 1e-15);
    EXPECT_LE(scale_diag(xi, make_weight(g, "const:1"), Scale::q).max_abs_diff(xi), 0.0);
    for (int k = 0; k < 10; ++k) {
        const auto r = random_field(g, 5, rng);
        EXPECT_LE(scale_diag(scale_diag(r, dim, Scale::q), dim, Scale::r).max_abs_diff(r), 1e-14);
        EXPECT_NEAR(norm_l2_omega(r, dim), norm_l2(scale_diag(r, dim, Scale::q)), 1e-12);
    }
}

TEST(Inclusion, AOmegaInA) {
    std::mt19937_64 rng(16);
    const auto g = GroupDual::semidirect();
    const Weight w = make_weight(g, "prod(const:2,dim)");
    const double c = validate(w, 8).infimum;
    for (int k = 0; k < 10; ++k) {
        const auto u = random_field(g, 8, rng);
        EXPECT_LE(norm_a(u), norm_a_omega(u, w) / c + 1e-12);
    }
}
