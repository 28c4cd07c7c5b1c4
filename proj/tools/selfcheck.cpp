#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "app.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/picard.hpp"
#include "nlslab/resonance.hpp"

namespace nlslab::app {

namespace {

struct Check {
    std::string name;
    bool pass = false;
    json measured;
    json tolerance;
};

SpectralField random_field(const FrequencyGrid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    SpectralField f(g);
    for (auto& v : f.values) v = cplx(n(rng), n(rng));
    return f;
}

SpectralField gaussian(const FrequencyGrid& g, double amp, double width, int power) {
    SpectralField f(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        double x = f.xi(n, 0);
        f.values[n] = amp * std::pow(x, power) * std::exp(-f.xi2(n) / (2.0 * width * width));
    }
    truncate_below(f, 1e-16);
    return f;
}

// max |f(xi) - sign f(-xi)| / max |f| over nodes whose mirror image is on the grid
double parity_defect(const SpectralField& f, double sign) {
    const auto& g = f.grid;
    double worst = 0.0, scale = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        scale = std::max(scale, std::abs(f.values[n]));
        Offset idx = g.unravel(n);
        bool ok = true;
        for (int a = 0; a < g.d; ++a) {
            if (idx[a] == 0) ok = false;
            idx[a] = g.M - idx[a];
        }
        if (!ok) continue;
        worst = std::max(worst, std::abs(f.values[n] - sign * f.values[g.ravel(idx)]));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

Check partition_check(const SelfcheckOptions& opt) {
    Check c;
    c.name = "partition_of_unity";
    double worst = 0.0;
    for (int d : {1, 2}) {
        FrequencyGrid g = make_grid(d, 6.0, d == 1 ? 96 : 48);
        Partition part(g, {-7, -7, -7}, {6, 6, 6});
        if (opt.inject == "partition") part.table(0)[2 * (g.M / 2 + 1)] *= 1.01;
        worst = std::max(worst, part.unity_error());
    }
    c.measured = worst;
    c.tolerance = 1e-12;
    c.pass = worst < 1e-12;
    return c;
}

Check unitarity_check(const SelfcheckOptions& opt) {
    Check c;
    c.name = "transform_unitarity";
    FrequencyGrid g = make_grid(2, 4.0, 32);
    SpectralField f = random_field(g, 7);
    auto phys = to_physical(f);
    if (opt.inject == "transform") phys[3] *= 1.001;
    SpectralField back = to_frequency(g, phys);
    double err = 0.0, scale = 0.0, lhs = 0.0, rhs = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        err = std::max(err, std::abs(back.values[n] - f.values[n]));
        scale = std::max(scale, std::abs(f.values[n]));
        rhs += std::norm(f.values[n]);
    }
    for (const auto& v : phys) lhs += std::norm(v);
    const double dx = g.dx();
    lhs *= dx * dx;
    rhs *= std::pow(2.0 * M_PI, 2) * g.cell();
    double parseval = std::abs(lhs - rhs) / rhs;
    c.measured = {{"round_trip", err / scale}, {"parseval", parseval}};
    c.tolerance = 1e-12;
    c.pass = err / scale < 1e-12 && parseval < 1e-12;
    return c;
}

Check propagator_check() {
    Check c;
    c.name = "free_propagator_isometry";
    FrequencyGrid g = make_grid(2, 4.0, 32);
    SpectralField f = random_field(g, 11);
    SpectralField h = free_propagate(f, 0.37, 1.0);
    double worst = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n)
        worst = std::max(worst, std::abs(std::abs(h.values[n]) - std::abs(f.values[n])) / std::abs(f.values[n]));
    c.measured = worst;
    c.tolerance = 4 * std::numeric_limits<double>::epsilon();
    c.pass = worst <= 4 * std::numeric_limits<double>::epsilon();
    return c;
}

Check parity_check() {
    Check c;
    c.name = "parity";
    FrequencyGrid g = make_grid(1, 32.0, 512);
    PicardConfig pc;
    pc.t = 0.1;
    pc.duhamel_nodes = 9;
    double even = 0.0, odd = 0.0;
    {
        PicardSolver s(gaussian(g, 0.1, 0.5, 0), pc);
        even = parity_defect(s.iterate(3, pc.t), 1.0);
    }
    {
        PicardSolver s(gaussian(g, 0.1, 0.5, 1), pc);
        odd = parity_defect(s.iterate(3, pc.t), -1.0);
    }
    c.measured = {{"even", even}, {"odd", odd}};
    c.tolerance = 1e-13;
    c.pass = even < 1e-13 && odd < 1e-13;
    return c;
}

Check galilean_check() {
    Check c;
    c.name = "galilean_l2";
    FrequencyGrid g = make_grid(2, 8.0, 64);
    SpectralField f = gaussian(g, 1.0, 0.5, 0);
    SpectralField h = apply_symmetry(f, Galilean{{1.0, -0.5, 0.0}, 0.3});
    double a = fourier_lebesgue_norm(f, 2.0, 0.0), b = fourier_lebesgue_norm(h, 2.0, 0.0);
    double rel = std::abs(a - b) / a;
    c.measured = rel;
    c.tolerance = 1e-14;
    c.pass = rel < 1e-14;
    return c;
}

Check twist_check() {
    Check c;
    c.name = "twist_norm_bound";
    const double s = -0.5;
    const double bound = std::pow(2.0, std::abs(s) / 2.0);  // Peetre constant for |j| = 1
    json rows = json::array();
    bool ok = true;
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k) {
        double eps = std::exp2(-k);
        FrequencyGrid g = grid_with_spacing(1, 0.25, 1.0 / eps + 4.0);
        SpectralField f(g);
        for (std::size_t n = 0; n < f.values.size(); ++n) f.values[n] = bump(f.xi(n, 0) / 2.0);
        SpectralField h = apply_symmetry(f, PlaneWaveTwist{{1.0 / eps, 0.0, 0.0}});
        SpectralField h0 = apply_symmetry(f, PlaneWaveTwist{{0.0, 0.0, 0.0}});
        json row = {{"eps", eps}};
        for (double p : {1.0, 2.0, kInf}) {
            double C = fourier_lebesgue_norm(h, p, s) /
                       (std::pow(eps, std::abs(s)) * fourier_lebesgue_norm(f, p, std::abs(s)));
            worst = std::max(worst, C);
            row[std::isinf(p) ? "C_inf" : "C_" + std::to_string(static_cast<int>(p))] = C;
            if (fourier_lebesgue_norm(h0, p, s) != fourier_lebesgue_norm(f, p, s)) ok = false;
        }
        rows.push_back(row);
    }
    c.measured = {{"max_C", worst}, {"rows", rows}, {"zero_twist_exact", ok}};
    c.tolerance = {{"C_max", bound}};
    c.pass = ok && worst <= bound;
    return c;
}

Check resonance_check() {
    Check c;
    c.name = "resonance_oracle";
    std::size_t compared = 0;
    bool ok = true;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
            Vec j{a, b, 0};
            auto brute = resonance_set(j, 2, 1, 2);
            auto oracle = resonance_cubic_oracle(j, 2, 2);
            std::set<ResonanceTuple> x(brute.begin(), brute.end()), y(oracle.begin(), oracle.end());
            ok = ok && x == y;
            compared += x.size();
        }
    c.measured = {{"tuples", compared}, {"equal", ok}};
    c.tolerance = "exact set equality";
    c.pass = ok;
    return c;
}

}  // namespace

json selfcheck(const SelfcheckOptions& opt) {
    std::vector<std::function<Check()>> checks = {
        [&] { return partition_check(opt); }, [&] { return unitarity_check(opt); }, propagator_check,
        parity_check,                         galilean_check,                       twist_check,
        resonance_check};
    json list = json::array();
    bool all = true;
    for (const auto& fn : checks) {
        auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.pass = false;
            c.measured = {{"exception", e.what()}};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all = all && c.pass;
        list.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"tolerance", c.tolerance},
                        {"seconds", secs}});
    }
    return {{"pass", all}, {"checks", list}, {"version", kVersion}};
}

}  // namespace nlslab::app
