#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "nlslab/field_io.hpp"
#include "nlslab/grid.hpp"

using namespace nlslab;

namespace {

SpectralField random_field(const FrequencyGrid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    SpectralField f(g);
    for (auto& v : f.values) v = cplx(n(rng), n(rng));
    return f;
}

// Random values confined to the lattice offsets [-r, r]^d.
SpectralField random_compact(const FrequencyGrid& g, int r, unsigned seed) {
    SpectralField f = random_field(g, seed);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        Offset idx = g.unravel(n);
        for (int a = 0; a < g.d; ++a)
            if (std::abs(idx[a] - g.half()) > r) f.values[n] = 0.0;
    }
    return f;
}

// Direct evaluation of sum_i f^(xi_i) e^{i x xi_i} dxi^d.
cplx direct_physical(const SpectralField& f, const std::array<double, 3>& x) {
    cplx acc = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        double ph = 0.0;
        for (int a = 0; a < f.grid.d; ++a) ph += x[a] * f.xi(n, a);
        acc += f.values[n] * std::exp(cplx(0.0, ph));
    }
    return acc * f.grid.cell();
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n) m = std::max(m, std::abs(a.values[n] - b.values[n]));
    return m;
}

}  // namespace

TEST(Grid, LatticeGeometry) {
    FrequencyGrid g = make_grid(2, 4.0, 16);
    EXPECT_DOUBLE_EQ(g.dxi(), 0.5);
    EXPECT_DOUBLE_EQ(g.dx(), M_PI / 4.0);
    EXPECT_EQ(g.size(), 256u);
    EXPECT_DOUBLE_EQ(g.node(0), -4.0);
    EXPECT_DOUBLE_EQ(g.node(8), 0.0);
    EXPECT_TRUE(g.on_lattice(1.5));
    EXPECT_FALSE(g.on_lattice(1.25));
    for (std::size_t n = 0; n < g.size(); ++n) EXPECT_EQ(g.ravel(g.unravel(n)), n);
    EXPECT_THROW(make_grid(1, 1.0, 7), std::invalid_argument);
}

TEST(Grid, GoodFftSize) {
    EXPECT_EQ(good_fft_size(1), 8);
    EXPECT_EQ(good_fft_size(97), 100);
    EXPECT_EQ(good_fft_size(127), 128);
    for (int n = 8; n < 400; ++n) {
        int m = good_fft_size(n);
        EXPECT_GE(m, n);
        EXPECT_EQ(m % 2, 0);
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0) r /= p;
        EXPECT_EQ(r, 1);
    }
}

TEST(Transform, MatchesDirectSum) {
    FrequencyGrid g = make_grid(2, 3.0, 12);
    SpectralField f = random_field(g, 1);
    auto phys = to_physical(f);
    for (int j0 : {0, 3, 11})
        for (int j1 : {1, 6}) {
            std::array<double, 3> x{physical_coordinate(g, j0), physical_coordinate(g, j1), 0.0};
            cplx ref = direct_physical(f, x);
            EXPECT_NEAR(std::abs(phys[static_cast<std::size_t>(j0) * 12 + j1] - ref), 0.0, 1e-12 * std::abs(ref) + 1e-13);
        }
}

TEST(Transform, RoundTripAndParsevalProperty) {
    for (unsigned seed = 0; seed < 12; ++seed) {
        int d = 1 + seed % 3;
        int M = d == 3 ? 12 : 8 * (1 + seed % 4);
        FrequencyGrid g = make_grid(d, 0.5 * M * (0.25 + 0.125 * (seed % 3)), M);
        SpectralField f = random_field(g, seed);
        auto phys = to_physical(f);
        SpectralField back = to_frequency(g, phys);
        double scale = 0.0, lhs = 0.0, rhs = 0.0;
        for (const auto& v : f.values) {
            scale = std::max(scale, std::abs(v));
            rhs += std::norm(v);
        }
        for (const auto& v : phys) lhs += std::norm(v);
        EXPECT_LT(max_abs_diff(back, f) / scale, 1e-13);
        lhs *= std::pow(g.dx(), d);
        rhs *= std::pow(2.0 * M_PI, d) * g.cell();
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-12);
    }
}

TEST(Multiply, MatchesDirectConvolution) {
    FrequencyGrid g = make_grid(2, 5.0, 20);
    SpectralField f = random_compact(g, 3, 2), h = random_compact(g, 4, 3);
    SpectralField p = multiply_fields(f, h);
    SpectralField ref(g);
    for (std::size_t a = 0; a < g.size(); ++a) {
        if (f.values[a] == cplx(0.0)) continue;
        Offset ia = g.unravel(a);
        for (std::size_t b = 0; b < g.size(); ++b) {
            if (h.values[b] == cplx(0.0)) continue;
            Offset ib = g.unravel(b), ic{0, 0, 0};
            for (int k = 0; k < 2; ++k) ic[k] = ia[k] + ib[k] - g.half();
            ref.values[g.ravel(ic)] += f.values[a] * h.values[b] * g.cell();
        }
    }
    double scale = 0.0;
    for (const auto& v : ref.values) scale = std::max(scale, std::abs(v));
    EXPECT_LT(max_abs_diff(p, ref) / scale, 1e-12);
    SupportBox b = support_box(p);
    EXPECT_EQ(b.lo[0], -7);
    EXPECT_EQ(b.hi[1], 7);
}

TEST(Multiply, RefusesWrapAround) {
    FrequencyGrid g = make_grid(1, 4.0, 16);
    SpectralField f = random_compact(g, 5, 4);
    EXPECT_THROW(multiply_fields(f, f), GridError);
}

TEST(Propagator, IsometryPerNodeAndGroupLaw) {
    FrequencyGrid g = make_grid(2, 4.0, 16);
    SpectralField f = random_field(g, 5);
    SpectralField a = free_propagate(free_propagate(f, 0.3, 1.5), 0.2, 1.5);
    SpectralField b = free_propagate(f, 0.5, 1.5);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        EXPECT_NEAR(std::abs(b.values[n]), std::abs(f.values[n]), 4e-16 * std::abs(f.values[n]));
        EXPECT_NEAR(std::abs(a.values[n] - b.values[n]), 0.0, 1e-14);
    }
}

TEST(Symmetry, GalileanMatchesPhysicalFormula) {
    // psi_v(t, x) = e^{i v.x - i |v|^2 t / 2} psi(x - v t)
    FrequencyGrid g = make_grid(1, 8.0, 64);
    SpectralField f(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) f.values[n] = std::exp(-f.xi2(n)) * cplx(1.0, 0.3 * f.xi(n, 0));
    truncate_below(f, 1e-15);
    const double v = 1.25, t = 0.4;
    SpectralField h = apply_symmetry(f, Galilean{{v, 0.0, 0.0}, t});
    auto phys = to_physical(h);
    for (int j : {5, 20, 32, 41}) {
        double x = physical_coordinate(g, j);
        cplx ref = std::exp(cplx(0.0, v * x - v * v * t / 2.0)) * direct_physical(f, {x - v * t, 0.0, 0.0});
        EXPECT_NEAR(std::abs(phys[j] - ref), 0.0, 1e-12);
    }
    EXPECT_THROW(apply_symmetry(f, Galilean{{0.3, 0.0, 0.0}, t}), GridError);
}

TEST(Symmetry, ScalingExactOnIntegerInverse) {
    // lambda^{1/sigma} f(lambda x) has transform lambda^{1/sigma - d} f^(xi / lambda)
    FrequencyGrid g = make_grid(1, 8.0, 64);
    SpectralField f(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) f.values[n] = std::exp(-f.xi2(n));
    SpectralField h = apply_symmetry(f, Scaling{0.5, 1.0});
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        double xi = f.xi(n, 0);
        double ref = std::pow(0.5, 1.0 / 1.0 - 1.0) * std::exp(-(xi / 0.5) * (xi / 0.5));
        EXPECT_NEAR(std::abs(h.values[n] - ref), 0.0, 1e-15);
    }
    EXPECT_THROW(apply_symmetry(f, Scaling{0.7, 1.0}), GridError);
    SymmetryOptions opt;
    opt.allow_resampling = true;
    EXPECT_NO_THROW(apply_symmetry(f, Scaling{0.7, 1.0}, opt));
}

TEST(Symmetry, TwistAndTranslate) {
    FrequencyGrid g = make_grid(1, 8.0, 64);
    SpectralField f = random_compact(g, 6, 9);
    SpectralField t = apply_symmetry(f, PlaneWaveTwist{{1.5, 0.0, 0.0}});
    EXPECT_EQ(t.values[g.half() + 6], f.values[g.half()]);
    EXPECT_THROW(apply_symmetry(f, PlaneWaveTwist{{0.1, 0.0, 0.0}}), GridError);
    SpectralField tr = apply_symmetry(f, Translate{{0.7, 0.0, 0.0}});
    for (std::size_t n = 0; n < f.values.size(); ++n)
        EXPECT_NEAR(std::abs(tr.values[n]), std::abs(f.values[n]), 1e-15);
}

TEST(Grid, ResizeKeepsSpacing) {
    FrequencyGrid g = make_grid(2, 2.0, 8);
    SpectralField f = random_compact(g, 2, 4);
    SpectralField big = resize_grid(f, 16);
    EXPECT_DOUBLE_EQ(big.grid.dxi(), g.dxi());
    SpectralField back = resize_grid(big, 8);
    EXPECT_EQ(max_abs_diff(back, f), 0.0);
}

TEST(FieldIo, BinaryAndJsonRoundTrip) {
    FrequencyGrid g = make_grid(2, 2.0, 8);
    SpectralField f = random_field(g, 8);
    std::stringstream ss;
    write_field(ss, f);
    SpectralField r = read_field(ss);
    EXPECT_EQ(r.grid, g);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        EXPECT_EQ(r.values[n].real(), static_cast<float>(f.values[n].real()));
        EXPECT_EQ(r.values[n].imag(), static_cast<float>(f.values[n].imag()));
    }
    SpectralField j = field_from_json(field_to_json(f));
    EXPECT_EQ(max_abs_diff(j, f), 0.0);
    std::stringstream bad("NOPE");
    EXPECT_THROW(read_field(bad), std::runtime_error);
}
