// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select criteria by number.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "nlslab/inflation.hpp"
#include "nlslab/picard.hpp"
#include "nlslab/splitstep.hpp"
#include "nlslab/wnlgo.hpp"

using namespace nlslab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

SpectralField conj_field(const SpectralField& f) {
    SpectralField r(f.grid);
    const auto& g = f.grid;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        Offset idx = g.unravel(n), mirror{0, 0, 0};
        bool inside = true;
        for (int a = 0; a < g.d; ++a) {
            mirror[a] = 2 * g.half() - idx[a];
            inside = inside && mirror[a] < g.M;
        }
        if (inside) r.values[n] = std::conj(f.values[g.ravel(mirror)]);
    }
    return r;
}

double l2_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    for (std::size_t n = 0; n < d.values.size(); ++n) d.values[n] -= b.values[n];
    return fourier_lebesgue_norm(d, 2.0, 0.0);
}

Outcome crit1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    int checked = 0;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            Vec j{a, b, 0};
            auto brute = resonance_set(j, 2, 1, 3);
            auto rect = resonance_cubic_oracle(j, 2, 3);
            ok = ok && std::set<ResonanceTuple>(brute.begin(), brute.end()) ==
                           std::set<ResonanceTuple>(rect.begin(), rect.end());
            ++checked;
        }
    for (int j = -3; j <= 3; ++j) {
        Vec jv{j, 0, 0};
        std::set<ResonanceTuple> expected;
        for (int l = -3; l <= 3; ++l) {
            Vec lv{l, 0, 0};
            expected.insert({{jv, lv, lv}, jv});
            expected.insert({{lv, lv, jv}, jv});
        }
        auto brute = resonance_set(jv, 1, 1, 3);
        ok = ok && std::set<ResonanceTuple>(brute.begin(), brute.end()) == expected;
        ++checked;
    }
    double secs = seconds_since(t0);
    return {ok && secs < 10.0, std::to_string(checked) + " targets, sets equal=" + (ok ? "yes" : "no") +
                                   ", " + fmt("%.2f s", secs) + " (< 10 s)"};
}

// Finite-difference d/dt a_0 at t = 0 against -i mu eps^{J-1} c0 (alpha conj(alpha) alpha ...)^.
std::pair<double, int> creation_error(int d, int sigma, const std::vector<Vec>& modes) {
    const double eps = 0.125, J = 1.3, h = 1e-4;
    FrequencyGrid pg = make_grid(d, 8.0, 32);
    SpectralField alpha = bump_profile(pg, 0.25, 1.5);
    std::map<Vec, SpectralField> init;
    for (const auto& k : modes) init.emplace(k, alpha);
    ProfileSet ps = make_profile_set(d, sigma, 1, eps, J, pg, init);
    const Vec zero{0, 0, 0};
    int c0 = 0;
    for (const auto& t : resonant_tuples_among(modes, d, sigma)) c0 += t.j == zero;
    SpectralField prod = alpha, ca = conj_field(alpha);
    for (int l = 1; l < 2 * sigma + 1; ++l) prod = multiply_fields(prod, l % 2 ? ca : alpha);
    for (auto& v : prod.values) v *= cplx(0.0, -1.0) * std::pow(eps, J - 1.0) * static_cast<double>(c0);
    ProfileSet out = evolve_profiles(ps, h);
    SpectralField rate = out.a.at(zero);
    for (auto& v : rate.values) v /= h;
    return {l2_diff(rate, prod) / fourier_lebesgue_norm(prod, 2.0, 0.0), c0};
}

Outcome crit2() {
    std::ostringstream os;
    bool ok = true;
    struct Case {
        const char* name;
        int d, sigma;
        std::vector<Vec> modes;
    };
    std::vector<Case> cases = {
        {"cubic d=2", 2, 1, {{1, 0, 0}, {1, 1, 0}, {0, 1, 0}}},
        {"quintic d=1", 1, 2, {{2, 0, 0}, {-1, 0, 0}, {-2, 0, 0}, {4, 0, 0}, {3, 0, 0}}},
    };
    for (const auto& c : cases) {
        auto t0 = std::chrono::steady_clock::now();
        auto [err, c0] = creation_error(c.d, c.sigma, c.modes);
        double secs = seconds_since(t0);
        ok = ok && err < 0.01 && secs < 60.0;
        os << c.name << ": c0=" << c0 << " rel.err=" << fmt("%.2e", err) << " " << fmt("%.1f s", secs) << "; ";
    }
    os << "tol 1%";
    return {ok, os.str()};
}

Outcome crit3() {
    auto t0 = std::chrono::steady_clock::now();
    WnlgoSetup setup;
    auto reports = wnlgo_error(app::parse_eps_list("2^-3..2^-7"), setup, {XVariant::FL1_FLinf, XVariant::FL1_M11});
    double secs = seconds_since(t0);
    bool ok = secs < 1800.0;
    std::ostringstream os;
    for (const auto& r : reports) {
        bool good = r.monotone && r.fit.slope >= 0.8 && r.fit.slope <= 1.2 && r.fit.r2 > 0.98;
        ok = ok && good;
        os << r.x_name << ": slope=" << fmt("%.3f", r.fit.slope) << " R2=" << fmt("%.4f", r.fit.r2)
           << " monotone=" << (r.monotone ? "yes" : "no") << "; ";
    }
    os << "M at eps=2^-7: " << reports.front().rows.back().M << ", " << fmt("%.0f s", secs) << " (< 1800 s)";
    return {ok, os.str()};
}

Outcome crit4() {
    WnlgoSetup setup;
    setup.amp = 0.2;
    LossReport rep = run_loss_experiment(-0.4, app::parse_eps_list("2^-3..2^-6"), setup, 0.5, false);
    double s0 = rep.fits0.at("FL2_s").slope, sT = rep.fitsTau.at("FL2_0").slope;
    double sTm1 = rep.fitsTau.at("FL2_-1").slope;
    bool ok0 = std::abs(s0 - 0.05) <= 0.03, okT = std::abs(sT + 0.05) <= 0.03;
    std::ostringstream os;
    os << "psi(0) FL2_s slope=" << fmt("%.4f", s0) << " (0.05 +- 0.03) " << (ok0 ? "ok" : "out")
       << "; psi(eps tau) FL2 slope=" << fmt("%.4f", sT) << " (-0.05 +- 0.03) " << (okT ? "ok" : "out")
       << "; FL2_-1 slope=" << fmt("%.4f", sTm1);
    return {ok0 && okT, os.str()};
}

struct SweepCheck {
    Outcome monotone;
    double audit_spread = 0;
};

SweepCheck sweep(const SpaceSpec& space) {
    auto t0 = std::chrono::steady_clock::now();
    SweepConfig cfg;
    cfg.arule.rule = ARule::Linear;
    cfg.arule.divisor = 16.0;
    SweepResult res = run_inflation_sweep(space, 1, 1, app::dyadic_range(64, 1024), cfg);
    double secs = seconds_since(t0);
    bool ok = secs < 1200.0;
    double prev_g = 0.0, prev_tn2 = kInf, rho_err = 0.0, lo = kInf, hi = 0.0;
    std::ostringstream os;
    os << "growth";
    for (const auto& r : res.rows) {
        ok = ok && !r.skipped && r.growth > prev_g && r.TN2 < prev_tn2;
        prev_g = r.growth;
        prev_tn2 = r.TN2;
        rho_err = std::max(rho_err, std::abs(r.rho - 1.0 / std::log(r.N)));
        os << " " << fmt("%.3f", r.growth);
        for (const auto& e : r.audit)
            if (e.k == 3) {
                lo = std::min(lo, e.ratio);
                hi = std::max(hi, e.ratio);
            }
    }
    ok = ok && prev_g > 1.0 && rho_err <= 1e-12;
    os << "; |rho - 1/ln N| max " << fmt("%.1e", rho_err) << "; T N^2 " << fmt("%.3f", res.rows.front().TN2) << " -> "
       << fmt("%.3f", res.rows.back().TN2) << "; dominance U3/U1";
    for (const auto& r : res.rows) os << " " << fmt("%.2f", r.ratio_dom);
    os << " (info); " << fmt("%.1f s", secs);
    return {{ok, os.str()}, hi / lo};
}

SweepCheck fl_sweep, mod_sweep;
bool have_fl = false, have_mod = false;

Outcome crit5() {
    fl_sweep = sweep({SpaceKind::FL, 2.0, -0.75});
    have_fl = true;
    return fl_sweep.monotone;
}

Outcome crit6() {
    mod_sweep = sweep({SpaceKind::MOD, 1.0, -0.75});
    have_mod = true;
    return mod_sweep.monotone;
}

Outcome crit7() {
    if (!have_fl) fl_sweep = sweep({SpaceKind::FL, 2.0, -0.75});
    if (!have_mod) mod_sweep = sweep({SpaceKind::MOD, 1.0, -0.75});
    bool ok = fl_sweep.audit_spread < 10.0 && mod_sweep.audit_spread < 10.0;
    return {ok, "C/c for ||U_3(T)|| / lower-bound rhs: FL " + fmt("%.2f", fl_sweep.audit_spread) + ", MOD " +
                    fmt("%.2f", mod_sweep.audit_spread) + " (< 10)"};
}

Outcome crit8() {
    auto t0 = std::chrono::steady_clock::now();
    FrequencyGrid g = make_grid(1, 48.0, 768);
    SpectralField psi0(g);
    for (std::size_t n = 0; n < psi0.values.size(); ++n) psi0.values[n] = 0.1 * std::exp(-0.5 * psi0.xi2(n));
    truncate_below(psi0, 1e-16);
    PicardConfig pc;
    pc.t = 0.1;
    PicardSum ps = picard_sum(psi0, pc);
    SplitStepConfig sc;
    sc.dt = 1e-4;
    SpectralField u = split_step(psi0, 0.1, sc);
    double diff = l2_diff(ps.sum, u), secs = seconds_since(t0);
    bool ok = diff <= ps.tail + 1e-6 && secs < 60.0;
    return {ok, "||sum - splitstep||_L2=" + fmt("%.3e", diff) + " tail=" + fmt("%.3e", ps.tail) + " " +
                    fmt("%.1f s", secs)};
}

Outcome crit9() {
    auto t0 = std::chrono::steady_clock::now();
    auto report = app::selfcheck();
    double secs = seconds_since(t0);
    std::ostringstream os;
    for (const auto& c : report.at("checks"))
        if (!c.at("pass").get<bool>()) os << c.at("name").get<std::string>() << " failed; ";
    os << report.at("checks").size() << " checks, " << fmt("%.2f s", secs) << " (< 60 s)";
    return {report.at("pass").get<bool>() && secs < 60.0, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"resonance oracle equivalence", crit1}, {"zero-mode creation", crit2},
        {"wnlgo error slope", crit3},            {"loss-of-regularity scalings", crit4},
        {"inflation sweep FL", crit5},           {"inflation sweep modulation", crit6},
        {"lower-bound audit", crit7},            {"picard vs split-step", crit8},
        {"invariant suite", crit9},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
