#include <gtest/gtest.h>

#include <cmath>

#include "nlslab/inflation.hpp"

using namespace nlslab;

namespace {

SpaceSpec fl(double p, double s) { return {SpaceKind::FL, p, s}; }
SpaceSpec mod(double q, double s) { return {SpaceKind::MOD, q, s}; }

ARuleSpec linear16() {
    ARuleSpec r;
    r.rule = ARule::Linear;
    r.divisor = 16.0;
    return r;
}

}  // namespace

TEST(Regime, CriticalIndexReducesToSobolevValue) {
    for (int d = 1; d <= 3; ++d)
        for (int sigma = 1; sigma <= 3; ++sigma)
            EXPECT_DOUBLE_EQ(critical_index_fl(d, 2.0, sigma), 0.5 * d - 1.0 / sigma);
    EXPECT_DOUBLE_EQ(critical_index_fl(1, 2.0, 1), -0.5);
    EXPECT_DOUBLE_EQ(inflation_threshold(mod(1.0, -0.75), 1, 1), -0.5);
    EXPECT_DOUBLE_EQ(inflation_threshold(mod(4.0, -0.75), 1, 1), -0.25);
}

TEST(Regime, RhoEqualsInverseLogByConstruction) {
    for (ARuleSpec rule : {ARuleSpec{}, linear16()})
        for (SpaceSpec sp : {fl(2.0, -0.75), fl(1.0, -1.5), mod(1.0, -0.75), mod(4.0, -0.5)})
            for (double N = 64; N <= 4096; N *= 2) {
                RegimeParams rp = regime_params(N, 1, 1, sp, rule);
                EXPECT_NEAR(rp.rho, 1.0 / std::log(N), 1e-12);
                EXPECT_DOUBLE_EQ(rp.R, 1.0 / std::log(N));
            }
    EXPECT_NEAR(regime_params(1024, 1, 1, fl(2.0, -0.75)).R, 0.14426950408889634, 1e-15);
}

TEST(Regime, ARulesAndWarnings) {
    RegimeParams lp = regime_params(1024, 1, 1, fl(2.0, -0.75));
    EXPECT_DOUBLE_EQ(lp.A_formula, std::pow(std::log(1024.0), -4.0 / 0.75) * 1024.0);
    EXPECT_DOUBLE_EQ(lp.A, dyadic_floor(lp.A_formula));
    EXPECT_FALSE(lp.warnings.empty());  // A < 1 at this N
    RegimeParams lin = regime_params(1024, 1, 1, fl(2.0, -0.75), linear16());
    EXPECT_EQ(lin.A, 64.0);
    EXPECT_TRUE(lin.warnings.empty());
    EXPECT_EQ(lin.branch, "fl");
    EXPECT_EQ(regime_params(256, 1, 1, mod(1.0, -0.75)).branch, "mod-q<=2");
    EXPECT_EQ(regime_params(256, 1, 1, mod(3.0, -0.5)).branch, "mod-q>=2");
    // T (N) N^2 decreases along the sweep
    double prev = kInf;
    for (double N = 64; N <= 1024; N *= 2) {
        double tn2 = regime_params(N, 1, 1, fl(2.0, -0.75), linear16()).TN2;
        EXPECT_LT(tn2, prev);
        prev = tn2;
    }
}

TEST(Regime, RejectsBadHypotheses) {
    EXPECT_THROW(regime_params(1000, 1, 1, fl(2.0, -0.75)), std::invalid_argument);
    EXPECT_THROW(regime_params(32, 1, 1, fl(2.0, -0.75)), std::invalid_argument);
    try {
        regime_params(64, 1, 1, fl(2.0, -0.4));
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("s < -0.5"), std::string::npos);
    }
    EXPECT_THROW(regime_params(64, 1, 1, mod(1.0, -0.5)), std::invalid_argument);
}

TEST(Data, HeightsSupportAndClosedFormNorm) {
    InflationDataSpec spec;
    spec.N = 64;
    spec.A = 4;
    spec.R = 0.25;
    spec.space = fl(2.0, -0.75);
    FrequencyGrid g = grid_with_spacing(1, 0.5, 140.0);
    SpectralField f = make_inflation_data(spec, g);
    const double h = 0.25 * std::pow(4.0, -0.5) * std::pow(64.0, 0.75);
    EXPECT_DOUBLE_EQ(spec.height(), h);
    EXPECT_DOUBLE_EQ(support_measure(f), 3.0 * 4.0);
    double sum = 0.0;
    for (double c : {64.0, -64.0, 128.0})
        for (int k = 0; k < 8; ++k) {
            double xi = c - 2.0 + 0.5 * k;
            sum += std::pow(1.0 + xi * xi, -0.75);
        }
    EXPECT_NEAR(fourier_lebesgue_norm(f, 2.0, -0.75), h * std::sqrt(sum * 0.5), 1e-14);
    // half-open cubes: left edge in, right edge out
    EXPECT_EQ(f.values[g.half() + g.offset_of(62.0)], cplx(h));
    EXPECT_EQ(f.values[g.half() + g.offset_of(66.0)], cplx(0.0));

    spec.space = mod(1.0, -0.75);
    EXPECT_DOUBLE_EQ(spec.height(), 0.25 * std::pow(4.0, -0.5) * std::pow(64.0, 0.75));
    spec.space = mod(4.0, -0.5);
    EXPECT_DOUBLE_EQ(spec.height(), 0.25 * std::pow(4.0, -0.25) * std::pow(64.0, 0.5));
}

TEST(Data, RejectsBadLayouts) {
    InflationDataSpec spec;
    spec.N = 64;
    spec.A = 4;
    spec.R = 0.25;
    FrequencyGrid coarse = grid_with_spacing(1, 1.0, 140.0);
    EXPECT_THROW(make_inflation_data(spec, coarse), GridError);
    FrequencyGrid g = grid_with_spacing(1, 0.5, 140.0);
    spec.centers = {{10.0, 0, 0}, {12.0, 0, 0}};
    EXPECT_THROW(make_inflation_data(spec, g), std::invalid_argument);
    spec.centers = {{10.25, 0, 0}};
    EXPECT_THROW(make_inflation_data(spec, g), GridError);
}

TEST(Data, InitialNormOverRIsBoundedAcrossN) {
    double lo = kInf, hi = 0.0;
    for (double N = 64; N <= 1024; N *= 2) {
        RegimeParams rp = regime_params(N, 1, 1, fl(2.0, -0.75), linear16());
        InflationDataSpec spec;
        spec.N = N;
        spec.A = rp.A;
        spec.R = rp.R;
        spec.space = fl(2.0, -0.75);
        FrequencyGrid g = grid_with_spacing(1, spec.A / 8, 2.5 * N);
        double r = fourier_lebesgue_norm(make_inflation_data(spec, g), 2.0, -0.75) / rp.R;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_LT(hi / lo, 2.0);
}

TEST(Sweep, ResolutionDoublingChangesNormsBelowOnePercent) {
    SweepConfig a;
    a.arule = linear16();
    SweepConfig b = a;
    b.resolution = 2.0;
    for (SpaceSpec sp : {fl(2.0, -0.75), mod(1.0, -0.75)}) {
        ExperimentRecord ra = run_inflation_row(64, 1, 1, sp, a), rb = run_inflation_row(64, 1, 1, sp, b);
        EXPECT_EQ(rb.dxi, 0.5 * ra.dxi);
        for (auto [x, y] : {std::pair{ra.norm0, rb.norm0}, std::pair{ra.normU1, rb.normU1},
                            std::pair{ra.normU2s1, rb.normU2s1}, std::pair{ra.normT, rb.normT}})
            EXPECT_NEAR(x / y, 1.0, 0.01) << sp.name();
    }
}

TEST(Sweep, RecordsAndAudit) {
    SweepConfig cfg;
    cfg.arule = linear16();
    ExperimentRecord r = run_inflation_row(64, 1, 1, fl(2.0, -0.75), cfg);
    EXPECT_FALSE(r.skipped);
    EXPECT_NEAR(r.rho, 1.0 / std::log(64.0), 1e-12);
    EXPECT_DOUBLE_EQ(r.ratio_dom, r.normU2s1 / r.normU1);
    EXPECT_GE(r.tail, 0.0);
    ASSERT_EQ(r.audit.size(), 3u);
    EXPECT_EQ(r.audit[1].k, 3);
    for (const auto& e : r.audit) {
        EXPECT_GT(e.lemma_rhs, 0.0);
        EXPECT_DOUBLE_EQ(e.ratio, e.measured / e.lemma_rhs);
    }
    auto j = audit_to_json(r.audit);
    EXPECT_EQ(j.size(), 3u);
    cfg.grid_budget = 100;
    EXPECT_TRUE(run_inflation_row(64, 1, 1, fl(2.0, -0.75), cfg).skipped);
}

TEST(Sweep, DyadicFloor) {
    EXPECT_EQ(dyadic_floor(5.0), 4.0);
    EXPECT_EQ(dyadic_floor(4.0), 4.0);
    EXPECT_EQ(dyadic_floor(0.3), 0.25);
    EXPECT_THROW(dyadic_floor(0.0), std::invalid_argument);
}
