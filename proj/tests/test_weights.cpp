#include "bfw/weights.hpp"

#include <gtest/gtest.h>

using namespace bfw;

namespace {

std::vector<GroupDual> all_duals() {
    return {GroupDual::torus(1), GroupDual::torus(2), GroupDual::su2(), GroupDual::so3(), GroupDual::semidirect(),
            GroupDual::product(GroupDual::su2(), GroupDual::torus(1))};
}

}  // namespace

TEST(MakeWeight, Examples) {
    const auto g = GroupDual::su2();
    const Weight poly = make_weight(g, "poly:alpha=1");
    for (int n = 0; n <= 20; ++n) EXPECT_NEAR(poly(IrrepLabel::su2(n)), 1.0 + n, 1e-12);
    const Weight e = make_weight(g, "exp:lambda=2");
    for (int n = 0; n <= 20; ++n) {
        Matrix2 d = Matrix2::Zero();
        d(0, 0) = 2.0;
        d(1, 1) = 0.5;
        EXPECT_NEAR(e(IrrepLabel::su2(n)) / linalg::op_norm(g.rep(IrrepLabel::su2(n), SpectrumPoint::sl2(d))), 1.0, 1e-12);
    }
    const auto sd = GroupDual::semidirect();
    const Weight dim = make_weight(sd, "dim");
    EXPECT_EQ(dim(IrrepLabel::semidirect_twodim(5)), 2.0);
    EXPECT_EQ(dim(IrrepLabel::semidirect_trivial()), 1.0);
    EXPECT_EQ(dim(IrrepLabel::semidirect_sign()), 1.0);
}

TEST(MakeWeight, GrammarAndErrors) {
    const auto g = GroupDual::su2();
    EXPECT_NEAR(make_weight(g, "prod(poly:alpha=1,dim)")(IrrepLabel::su2(3)), 16.0, 1e-12);
    EXPECT_NEAR(make_weight(g, "pow(dim,2)")(IrrepLabel::su2(3)), 16.0, 1e-12);
    EXPECT_NEAR(make_weight(g, "const:3")(IrrepLabel::su2(7)), 3.0, 1e-12);
    EXPECT_NEAR(make_weight(g, "poly:alpha=1;S=pi:2")(IrrepLabel::su2(4)), 3.0, 1e-12);
    EXPECT_THROW(make_weight(g, "const:0.5"), WeightSpecError);
    EXPECT_THROW(make_weight(g, "poly:alpha=0"), WeightSpecError);
    EXPECT_THROW(make_weight(g, "exp:lambda=0.5"), WeightSpecError);
    EXPECT_THROW(make_weight(g, "poly:beta=1"), ParseError);
    EXPECT_THROW(make_weight(g, "wobble"), ParseError);
    const auto t = GroupDual::torus(1);
    const Weight asym = make_weight(t, "exp:lambda=2;lambda_neg=3");
    EXPECT_NEAR(asym(IrrepLabel::torus({2})), 4.0, 1e-12);
    EXPECT_NEAR(asym(IrrepLabel::torus({-2})), 9.0, 1e-12);
    EXPECT_FALSE(asym.claimed_symmetric());
    EXPECT_TRUE(make_weight(t, "exp:lambda=2").claimed_symmetric());
}

TEST(MakeWeight, JsonMirrorsGrammar) {
    const auto g = GroupDual::su2();
    const auto j = nlohmann::json::parse(R"({"type":"prod","args":[{"type":"poly","alpha":1},"dim"]})");
    EXPECT_NEAR(weights::from_json(g, j)(IrrepLabel::su2(3)), 16.0, 1e-12);
    const auto tj = nlohmann::json::parse(R"({"type":"table","values":{"pi:0":1,"pi:1":0.5},"default":2})");
    const Weight tw = weights::from_json(g, tj);
    EXPECT_EQ(tw(IrrepLabel::su2(1)), 0.5);
    EXPECT_EQ(tw(IrrepLabel::su2(9)), 2.0);
}

TEST(Validate, BuiltinsPassAtDepth12) {
    for (const auto& g : all_duals())
        for (const char* spec : {"const:1", "const:2", "dim", "poly:alpha=1", "poly:alpha=2.5", "exp:lambda=2",
                                 "prod(poly:alpha=1,dim)", "pow(dim,2)", "pow(poly:alpha=1,0.5)"}) {
            const WeightReport r = validate(make_weight(g, spec), g.family() == Family::product ? 8 : 12);
            EXPECT_TRUE(r.pass) << g.name() << " " << spec << " violation " << r.violation;
            EXPECT_GE(r.infimum, 1.0);
        }
}

TEST(Validate, InverseWeightFailsWithWitness) {
    const auto g = GroupDual::su2();
    std::map<std::string, double> values;
    for (int n = 0; n <= 12; ++n) values["pi:" + std::to_string(n)] = 1.0 / (1 + n);
    const WeightReport r = validate(weights::table(g, values, std::nullopt), 5);
    EXPECT_FALSE(r.pass);
    ASSERT_TRUE(r.witness.has_value());
    const Weight w = weights::table(g, values, std::nullopt);
    EXPECT_GT(w(IrrepLabel::su2(2)), w(IrrepLabel::su2(1)) * w(IrrepLabel::su2(1)));
}

TEST(Validate, DocumentedWitness) {
    const auto g = GroupDual::su2();
    std::map<std::string, double> values{{"pi:0", 1.0}, {"pi:1", 0.5}, {"pi:2", 1.0 / 3}};
    const WeightReport r = validate(weights::table(g, values, std::nullopt), 1);
    ASSERT_TRUE(r.witness.has_value());
    // the worst triple is pi_0 in pi_1 (x) pi_1 (1 > 1/4); pi_2 in pi_1 (x) pi_1 (1/3 > 1/4) is listed too
    EXPECT_EQ((*r.witness)[0], IrrepLabel::su2(0));
    EXPECT_NEAR(r.violation, 3.0, 1e-12);
    bool found = false;
    for (const auto& [t, excess] : r.failures)
        if (t[0] == IrrepLabel::su2(2) && t[1] == IrrepLabel::su2(1) && t[2] == IrrepLabel::su2(1)) {
            found = true;
            EXPECT_NEAR(excess, (1.0 / 3) / 0.25 - 1, 1e-12);
        }
    EXPECT_TRUE(found);
}

TEST(Growth, ExponentialIsConstant) {
    const auto sd = GroupDual::semidirect();
    const auto c = growth_rate(make_weight(sd, "exp:lambda=2"), IrrepLabel::semidirect_twodim(1), 64);
    for (const auto& row : c.rows) EXPECT_NEAR(row.root, 2.0, 1e-12);
    EXPECT_NEAR(c.rho_hat, 2.0, 1e-12);
    EXPECT_TRUE(c.exponential);
}

TEST(Growth, PolyDecreasesTowardOne) {
    const auto g = GroupDual::su2();
    const auto c = growth_rate(make_weight(g, "poly:alpha=1"), IrrepLabel::su2(1), 64);
    EXPECT_NEAR(c.rho_hat, std::pow(65.0, 1.0 / 64), 1e-12);
    for (std::size_t i = 1; i < c.rows.size(); ++i) EXPECT_LE(c.rows[i].running_inf, c.rows[i - 1].running_inf);
    EXPECT_FALSE(c.exponential);
    const auto one = growth_rate(make_weight(g, "const:1"), IrrepLabel::su2(1), 16);
    EXPECT_EQ(one.rho_hat, 1.0);
}

TEST(Growth, Classification) {
    const auto g = GroupDual::su2();
    for (const char* spec : {"poly:alpha=1", "poly:alpha=3", "dim", "prod(dim,poly:alpha=2)"})
        EXPECT_FALSE(classify_growth(make_weight(g, spec), 128).exponential) << spec;
    const auto e = classify_growth(make_weight(g, "exp:lambda=2"), 64);
    EXPECT_TRUE(e.exponential);
    EXPECT_EQ(*e.witness, IrrepLabel::su2(1));
    EXPECT_NEAR(e.rho_hat, 2.0, 1e-12);
}

TEST(Restrict, Examples) {
    const auto g = GroupDual::su2();
    const Weight p = restrict_weight(make_weight(g, "poly:alpha=1"), 200);
    const Weight d = restrict_weight(make_weight(g, "dim"), 200);
    for (int k = -10; k <= 10; ++k) {
        EXPECT_NEAR(p(IrrepLabel::torus({k})), 1.0 + std::abs(k), 1e-12);
        EXPECT_NEAR(d(IrrepLabel::torus({k})), 1.0 + std::abs(k), 1e-12);
    }
    EXPECT_TRUE(p.warnings().empty());
    EXPECT_TRUE(validate(p, 12).pass);
}

TEST(Restrict, TruncatedInfimumWarns) {
    const auto g = GroupDual::su2();
    const Weight t = weights::table(g, {{"pi:0", 1}, {"pi:1", 5}, {"pi:3", 2}}, 4.0);
    const Weight r = restrict_weight(t, 11);
    EXPECT_FALSE(r.warnings().empty());
    EXPECT_EQ(r(IrrepLabel::torus({1})), 2.0);
    EXPECT_EQ(r(IrrepLabel::torus({-1})), 2.0);
}

TEST(Quotient, Examples) {
    const auto g = GroupDual::su2();
    const Weight d = quotient_weight(make_weight(g, "dim"));
    const Weight p = quotient_weight(make_weight(g, "poly:alpha=1"));
    for (int m = 0; m <= 8; ++m) {
        EXPECT_NEAR(d(IrrepLabel::so3(m)), 2.0 * m + 1, 1e-12);
        EXPECT_NEAR(p(IrrepLabel::so3(m)), 2.0 * m + 1, 1e-12);
    }
    EXPECT_TRUE(validate(d, 10).pass);
}
