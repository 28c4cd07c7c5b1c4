#include <gtest/gtest.h>

#include <cmath>

#include "nlslab/norms.hpp"
#include "nlslab/picard.hpp"
#include "nlslab/splitstep.hpp"

using namespace nlslab;

namespace {

SpectralField smooth_data(const FrequencyGrid& g, double amp, double width, double shift) {
    SpectralField f(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        double xi = f.xi(n, 0) - shift;
        f.values[n] = amp * std::exp(-xi * xi / (2.0 * width * width)) * cplx(1.0, 0.2 * xi);
    }
    truncate_below(f, 1e-16);
    return f;
}

// U_3(t, xi) by direct frequency convolution and composite Simpson in tau.
cplx u3_oracle(const SpectralField& psi0, double t, int mu, int node) {
    const auto& g = psi0.grid;
    std::vector<int> nz;
    for (int i = 0; i < g.M; ++i)
        if (psi0.values[i] != cplx(0.0)) nz.push_back(i);
    const double xi = g.node(node);
    auto u1 = [&](int i, double tau) {
        double e = g.node(i);
        return std::exp(cplx(0.0, -0.5 * tau * e * e)) * psi0.values[i];
    };
    auto integrand = [&](double tau) {
        cplx acc = 0.0;
        for (int a : nz)
            for (int b : nz) {
                int c = node - a + b;  // offsets satisfy o_a - o_b + o_c = o_node
                if (c < 0 || c >= g.M || psi0.values[c] == cplx(0.0)) continue;
                acc += u1(a, tau) * std::conj(u1(b, tau)) * u1(c, tau);
            }
        acc *= g.dxi() * g.dxi();
        return std::exp(cplx(0.0, -0.5 * (t - tau) * xi * xi)) * acc;
    };
    const int n = 400;
    const double h = t / n;
    cplx sum = integrand(0.0) + integrand(t);
    for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * integrand(k * h);
    return cplx(0.0, -static_cast<double>(mu)) * sum * (h / 3.0);
}

}  // namespace

TEST(Compositions, CountsAndOrder) {
    EXPECT_EQ(compositions(3, 1).size(), 1u);
    EXPECT_EQ(compositions(5, 1).size(), 3u);
    EXPECT_EQ(compositions(7, 1).size(), 6u);
    EXPECT_EQ(compositions(9, 2).size(), 5u);
    EXPECT_TRUE(compositions(4, 1).empty());
    const auto& c = compositions(7, 1);
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
    for (const auto& t : c) {
        int s = 0;
        for (int k : t) {
            EXPECT_TRUE(admissible_index(k, 1));
            s += k;
        }
        EXPECT_EQ(s, 7);
    }
}

TEST(MuSigma, PointwiseDefinition) {
    std::vector<cplx> a = {cplx(1, 2)}, b = {cplx(-0.5, 1)}, c = {cplx(0.3, -0.7)}, d = {cplx(2, 0.1)},
                      e = {cplx(-1, -1)};
    auto r = mu_sigma({&a, &b, &c, &d, &e}, 2);
    cplx ref = a[0] * b[0] * c[0] * std::conj(d[0]) * std::conj(e[0]);
    EXPECT_NEAR(std::abs(r[0] - ref), 0.0, 1e-15);
    EXPECT_THROW(mu_sigma({&a, &b}, 1), std::invalid_argument);
}

TEST(Picard, FirstIterateIsFreeFlow) {
    FrequencyGrid g = make_grid(1, 32.0, 256);
    SpectralField psi0 = smooth_data(g, 0.2, 0.7, 0.5);
    PicardConfig pc;
    pc.t = 0.3;
    PicardSolver s(psi0, pc);
    SpectralField ref = free_propagate(psi0, 0.3);
    const auto& u1 = s.iterate(1, 0.3);
    for (std::size_t n = 0; n < ref.values.size(); ++n) EXPECT_EQ(u1.values[n], ref.values[n]);
}

TEST(Picard, ThirdIterateMatchesNestedQuadrature) {
    FrequencyGrid g = make_grid(1, 32.0, 256);
    SpectralField psi0 = smooth_data(g, 0.3, 0.5, 0.4);
    for (int mu : {1, -1}) {
        PicardConfig pc;
        pc.t = 0.4;
        pc.mu = mu;
        PicardSolver s(psi0, pc);
        const auto& u3 = s.iterate(3, pc.t);
        for (int node : {g.half() - 5, g.half(), g.half() + 9}) {
            cplx ref = u3_oracle(psi0, pc.t, mu, node);
            EXPECT_NEAR(std::abs(u3.values[node] - ref), 0.0, 1e-9 * std::abs(ref)) << node;
        }
    }
}

TEST(Picard, DuhamelNodeConvergence) {
    FrequencyGrid g = make_grid(1, 32.0, 256);
    SpectralField psi0 = smooth_data(g, 0.3, 0.5, 0.0);
    PicardConfig a, b;
    a.t = b.t = 0.5;
    b.duhamel_nodes = 34;
    PicardSolver sa(psi0, a), sb(psi0, b);
    SpectralField d = sa.iterate(3, 0.5);
    for (std::size_t n = 0; n < d.values.size(); ++n) d.values[n] -= sb.iterate(3, 0.5).values[n];
    EXPECT_LT(fourier_lebesgue_norm(d, 2.0, 0.0) / fourier_lebesgue_norm(sb.iterate(3, 0.5), 2.0, 0.0), 1e-8);
}

TEST(Picard, PredictedSupportIsExact) {
    FrequencyGrid g = make_grid(1, 32.0, 256);
    SpectralField psi0(g);
    for (int o = 3; o <= 6; ++o) psi0.values[g.half() + o] = 0.1;
    PicardConfig pc;
    pc.t = 0.2;
    PicardSolver s(psi0, pc);
    for (int k : {1, 3, 5}) {
        SupportBox p = s.predicted_support(k), a = support_box(s.iterate(k, pc.t));
        EXPECT_EQ(p.lo[0], a.lo[0]) << k;
        EXPECT_EQ(p.hi[0], a.hi[0]) << k;
    }
    // (k+1)/2 plain and (k-1)/2 conjugated factors
    EXPECT_EQ(s.predicted_support(3).lo[0], 2 * 3 - 6);
    EXPECT_EQ(s.predicted_support(3).hi[0], 2 * 6 - 3);
    FrequencyGrid small = make_grid(1, 2.0, 16);
    SpectralField wide(small);
    wide.values[9] = 1.0;
    wide.values[14] = 1.0;
    EXPECT_THROW(PicardSolver(wide, pc), GridError);
}

TEST(Picard, SeriesAdmissionAndTail) {
    FrequencyGrid g = make_grid(1, 32.0, 256);
    SpectralField psi0 = smooth_data(g, 0.05, 0.5, 0.0);
    PicardConfig pc;
    pc.t = 0.05;
    PicardSum ps = picard_sum(psi0, pc);
    EXPECT_LT(ps.rho, pc.rho_cap);
    EXPECT_EQ(ps.terms.size(), 3u);
    EXPECT_NEAR(ps.c_tail, 2.0 * ps.c_empirical, 1e-15);
    EXPECT_GE(ps.tail, 0.0);
    if (ps.q < 1.0) {
        EXPECT_NEAR(ps.tail, ps.data_ma * std::pow(ps.q, 3) / (1.0 - ps.q), 1e-15 * ps.data_ma);
    }
    EXPECT_THROW(picard_sum(psi0, pc, 0.6), std::domain_error);
    PicardConfig bad = pc;
    bad.L_max = 1;
    EXPECT_THROW(PicardSolver(psi0, bad), std::invalid_argument);
}

TEST(Picard, SeriesAgreesWithSplitStepForSmallData) {
    FrequencyGrid g = make_grid(1, 48.0, 768);
    SpectralField psi0 = smooth_data(g, 0.1, 1.0, 0.0);
    PicardConfig pc;
    pc.t = 0.1;
    PicardSum ps = picard_sum(psi0, pc);
    SplitStepConfig sc;
    sc.dt = 1e-4;
    SpectralField u = split_step(psi0, 0.1, sc);
    for (std::size_t n = 0; n < u.values.size(); ++n) u.values[n] -= ps.sum.values[n];
    EXPECT_LT(fourier_lebesgue_norm(u, 2.0, 0.0), 1e-8);
}

TEST(PhaseCondition, SincBounds) {
    EXPECT_EQ(phase_condition_ratio(0.0, 5.0), 1.0);
    double prev = 1.0;
    for (double x = 0.1; x < 20.0; x += 0.1) {
        double r = phase_condition_ratio(1.0, x);
        EXPECT_LE(r, prev + 1e-15);
        EXPECT_GT(r, -0.2173);
        prev = r;
    }
    EXPECT_NEAR(phase_condition_ratio(2.0, 1.0), std::sin(1.0), 1e-15);
}

TEST(Support, MeasureCountsNodes) {
    FrequencyGrid g = make_grid(2, 2.0, 16);
    SpectralField f(g);
    f.values[3] = 1.0;
    f.values[40] = cplx(0.0, 1.0);
    EXPECT_DOUBLE_EQ(support_measure(f), 2.0 * 0.0625);
}
