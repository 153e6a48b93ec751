#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "multalpha/studies.hpp"

using namespace multalpha;

TEST(DrugStudy, BoundaryAndVariants) {
    MolnupiravirParams p;
    EXPECT_DOUBLE_EQ(p.boundary(), -0.017675);
    p.round_boundary = true;
    EXPECT_DOUBLE_EQ(p.boundary(), -0.018);
    EXPECT_EQ(p.model().design().n_total(), 2000);
}

TEST(DrugStudy, Table1Layout) {
    const auto t = table1(MolnupiravirParams{}, table1_risk_differences(), table1_prevalences(), drug_study_ladder());
    ASSERT_EQ(t.rows.size(), 4u);
    ASSERT_EQ(t.columns.size(), 5u);
    EXPECT_EQ(t.rows[0].group, "RD = -0.025");
    EXPECT_EQ(t.rows[1].label, "P = 0.1");
    EXPECT_NEAR(t.cell(0, 1).value, 143.45, 0.01);
    EXPECT_TRUE(t.cell(0, 1).bold);
    EXPECT_TRUE(t.cell(1, 2).bold);
    EXPECT_TRUE(t.cell(2, 4).alpha.has_value());
}

TEST(DrugStudy, Table1MultiIsSurprisalWeightedSum) {
    const auto t = table1(MolnupiravirParams{}, table1_risk_differences(), table1_prevalences(), drug_study_ladder());
    const auto w = surprisal_weights(drug_study_ladder());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        double sum = 0.0;
        for (std::size_t m = 0; m < 3; ++m) sum += w[m] * t.cell(r, m).value;
        EXPECT_NEAR(t.cell(r, 3).value, sum, 1e-9 * sum);
    }
}

TEST(DrugStudy, Table2MultiIsSurprisalWeightedSum) {
    const auto t = table2(MolnupiravirParams{}, {{0.0, 0.025}}, drug_study_ladder());
    const auto w = surprisal_weights(drug_study_ladder());
    double sum = 0.0;
    for (std::size_t m = 0; m < 3; ++m) sum += w[m] * t.cell(0, m).value;
    EXPECT_NEAR(t.cell(0, 3).value, sum, 1e-9 * sum);
}

TEST(DrugStudy, StricterAlphaRaisesTypeTwoOnlyCells) {
    // P = 1 isolates the Type II term, which grows as alpha shrinks.
    const auto t = table1(MolnupiravirParams{}, {-0.05}, {1.0}, drug_study_ladder());
    EXPECT_LT(t.cell(0, 0).value, t.cell(0, 1).value);
    EXPECT_LT(t.cell(0, 1).value, t.cell(0, 2).value);
}

TEST(Anticipated, SampleSizeAtAnticipatedMean) {
    const AnticipatedScenario s;
    EXPECT_EQ(required_group_size(s.anticipated_offset, s.design_alpha, s.design_power), 99);
    EXPECT_NEAR(s.total_n(0.4), 2.0 * 98.1, 0.1);
}

TEST(Anticipated, MultiCellIsWeightedSum) {
    AnticipatedScenario s;
    s.cost_ratio = 4.0;
    const AlphaLadder l{0.25, 0.025};
    const double multi = anticipated_multi_cost(s, l);
    const auto w = surprisal_weights(l);
    const double sum = w[0] * anticipated_cost(s, 0.25) + w[1] * anticipated_cost(s, 0.025);
    EXPECT_NEAR(multi, sum, 1e-9);
}

TEST(Anticipated, FrozenCells) {
    AnticipatedScenario s;
    s.true_mean = s.boundary + 0.4;
    s.cost_ratio = 1.0;
    EXPECT_NEAR(anticipated_cost(s, 0.025), 0.24, 0.03);
    s.true_mean = s.boundary - 0.1;
    s.cost_ratio = 10.0;
    EXPECT_NEAR(anticipated_cost(s, 0.25), 0.44, 0.05);
}

TEST(Anticipated, InvalidScenario) {
    AnticipatedScenario s;
    s.anticipated_sd = 0.0;
    EXPECT_THROW(anticipated_cost(s, 0.05), DomainError);
}

TEST(Fig1, SampleSizeDecreasesInAnticipatedEffect) {
    const auto f = fig1_data(AnticipatedScenario{});
    for (std::size_t i = 1; i < f.group_size.size(); ++i) EXPECT_LE(f.group_size[i], f.group_size[i - 1]);
    EXPECT_GT(f.group_size.front(), f.group_size.back());
}

TEST(Fig1, SampleSizeDensityConservesMass) {
    const AnticipatedScenario s;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double mass = GK::integrate(
        [&](double u) {
            const double n = std::exp(u);
            return sample_size_density(s, n) * n;
        },
        std::log(1e-3), std::log(1e9), 15, 1e-12);
    const double above = 1.0 - normal_cdf((s.boundary - s.anticipated_mean()) / s.anticipated_sd);
    EXPECT_NEAR(mass, above, 1e-6);
}

TEST(Simulate, DeterministicAndThreadIndependent) {
    SimConfig cfg;
    cfg.runs = 300;
    cfg.seed = 11;
    cfg.prevalence = DichotomousPrevalence{0.5, 0.5, std::nullopt};
    cfg.threads = 1;
    const auto a = simulate(cfg);
    cfg.threads = 4;
    const auto b = simulate(cfg);
    EXPECT_EQ(a.multi.mean, b.multi.mean);
    EXPECT_EQ(a.optimal.sd, b.optimal.sd);
    EXPECT_EQ(a.single[1].mean, b.single[1].mean);
    cfg.seed = 12;
    EXPECT_NE(simulate(cfg).multi.mean, a.multi.mean);
}

TEST(Simulate, SingleRunHasZeroSd) {
    SimConfig cfg;
    cfg.runs = 1;
    cfg.prevalence = DichotomousPrevalence{0.1, 0.5, std::nullopt};
    const auto s = simulate(cfg);
    EXPECT_EQ(s.multi.sd, 0.0);
    EXPECT_EQ(s.single[0].sd, 0.0);
}

TEST(Simulate, StructuralInvariants) {
    SimConfig cfg;
    cfg.runs = 500;
    cfg.seed = 5;
    cfg.boundary = 0.64;
    cfg.prevalence = ContinuousPrevalence{0.0, 1.0, 0.64, Direction::Above};
    cfg.n_total = 192;
    const auto s = simulate(cfg);
    double lo = 1e300, hi = 0.0;
    for (const auto& st : s.single) {
        lo = std::min(lo, st.mean);
        hi = std::max(hi, st.mean);
    }
    EXPECT_LE(s.optimal.mean, lo);
    const double band = 2.0 * s.multi.sd / std::sqrt(double(s.runs));
    EXPECT_GE(s.multi.mean, lo - band);
    EXPECT_LE(s.multi.mean, hi + band);
}

TEST(Simulate, PaperCellWithinTolerance) {
    SimConfig cfg;
    cfg.seed = 42;
    cfg.prevalence = DichotomousPrevalence{0.1, 0.5, std::nullopt};
    cfg.n_total = 192;
    const auto s = simulate(cfg);
    EXPECT_NEAR(s.single[1].mean, 0.9, 0.1);
    EXPECT_NEAR(s.single[1].sd, 0.3, 0.1);
}

TEST(Simulate, RejectsMismatchedBoundary) {
    SimConfig cfg;
    cfg.prevalence = ContinuousPrevalence{0.0, 1.0, 0.5, Direction::Above};
    EXPECT_THROW(simulate(cfg), ContractError);
    cfg.runs = 0;
    EXPECT_THROW(simulate(cfg), ContractError);
}
