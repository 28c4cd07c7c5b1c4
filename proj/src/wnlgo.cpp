#include "nlslab/wnlgo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <mutex>
#include <sstream>
#include <tuple>
#include <stdexcept>

#include "nlslab/splitstep.hpp"

namespace nlslab {

double ProfileSet::coupling() const { return mu * std::pow(eps, J - 1.0); }

std::vector<Vec> ProfileSet::modes() const {
    std::vector<Vec> m;
    for (const auto& [j, f] : a) m.push_back(j);
    return m;
}

std::vector<Vec> first_generation_closure(const std::vector<Vec>& initial, int d, int sigma) {
    std::set<Vec> all(initial.begin(), initial.end());
    for (const auto& t : resonant_tuples_among(initial, d, sigma)) all.insert(t.j);
    return {all.begin(), all.end()};
}

bool closed_under_resonance(const std::vector<Vec>& modes, int d, int sigma) {
    std::set<Vec> s(modes.begin(), modes.end());
    for (const auto& t : resonant_tuples_among(modes, d, sigma))
        if (!s.count(t.j)) return false;
    return true;
}

ProfileSet make_profile_set(int d, int sigma, int mu, double eps, double J, const FrequencyGrid& grid,
                            const std::map<Vec, SpectralField>& initial) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (grid.d != d) throw std::invalid_argument("profile grid dimension mismatch");
    ProfileSet ps;
    ps.d = d;
    ps.sigma = sigma;
    ps.mu = mu;
    ps.eps = eps;
    ps.J = J;
    ps.grid = grid;
    std::vector<Vec> init;
    for (const auto& [j, f] : initial) {
        if (f.grid != grid) throw std::invalid_argument("initial profile grid mismatch");
        init.push_back(j);
    }
    for (const auto& j : first_generation_closure(init, d, sigma)) {
        auto it = initial.find(j);
        ps.a.emplace(j, it != initial.end() ? it->second : SpectralField(grid));
    }
    return ps;
}

namespace {

struct Interactions {
    std::vector<Vec> modes;
    // per target mode: tuples of mode indices
    std::vector<std::vector<std::vector<int>>> tuples;
};

Interactions build_interactions(const ProfileSet& ps) {
    Interactions in;
    in.modes = ps.modes();
    std::map<Vec, int> index;
    for (std::size_t i = 0; i < in.modes.size(); ++i) index[in.modes[i]] = static_cast<int>(i);
    in.tuples.resize(in.modes.size());
    for (const auto& t : resonant_tuples_among(in.modes, ps.d, ps.sigma)) {
        auto it = index.find(t.j);
        if (it == index.end()) continue;  // outside the tracked set
        std::vector<int> ids;
        for (const auto& k : t.k) ids.push_back(index.at(k));
        in.tuples[it->second].push_back(std::move(ids));
    }
    return in;
}

// -i mu eps^{J-1} sum over tuples, from frequency-side profiles in the lab frame.
std::vector<SpectralField> forcing(const ProfileSet& ps, const Interactions& in, const std::vector<SpectralField>& a) {
    const auto& g = ps.grid;
    const int parts = 2 * ps.sigma + 1;
    int M_pad = good_fft_size((ps.sigma + 1) * g.M);
    std::vector<std::vector<cplx>> phys(a.size());
    std::vector<char> needed(a.size(), 0), nonzero(a.size(), 0);
    for (const auto& list : in.tuples)
        for (const auto& t : list)
            for (int id : t) needed[id] = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!needed[i]) continue;
        nonzero[i] = std::any_of(a[i].values.begin(), a[i].values.end(),
                                 [](const cplx& v) { return v != cplx(0.0, 0.0); });
        if (nonzero[i]) phys[i] = to_physical(resize_grid(a[i], M_pad));
    }
    FrequencyGrid pad = make_grid(g.d, 0.5 * M_pad * g.dxi(), M_pad);
    const cplx factor = cplx(0.0, -1.0) * ps.coupling();
    std::vector<SpectralField> out;
    out.reserve(a.size());
    for (std::size_t jt = 0; jt < in.tuples.size(); ++jt) {
        std::vector<cplx> acc(pad.size(), cplx(0.0, 0.0));
        bool any = false;
        for (const auto& t : in.tuples[jt]) {
            bool zero = false;
            for (int id : t) zero = zero || !nonzero[id];
            if (zero) continue;
            any = true;
            std::vector<cplx> prod(phys[t[0]]);
            for (int l = 1; l < parts; ++l) physical_multiply_inplace(prod, phys[t[l]], l % 2 == 1);
            for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += prod[n];
        }
        if (!any) {
            out.emplace_back(g);
            continue;
        }
        SpectralField f = resize_grid(to_frequency(pad, acc), g.M);
        for (auto& v : f.values) v *= factor;
        out.push_back(std::move(f));
    }
    return out;
}

// multiplies a^ by exp(-i sign j.xi t): sign +1 maps the moving frame to the lab frame
void frame_shift(SpectralField& f, const Vec& j, double t, double sign) {
    if (t == 0.0) return;
    const auto& g = f.grid;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        if (f.values[n] == cplx(0.0, 0.0)) continue;
        Offset idx = g.unravel(n);
        double dotp = 0.0;
        for (int a = 0; a < g.d; ++a) dotp += j[a] * g.node(idx[a]);
        double ph = -sign * dotp * t;
        f.values[n] *= cplx(std::cos(ph), std::sin(ph));
    }
}

double fl1(const SpectralField& f) { return fourier_lebesgue_norm(f, 1.0, 0.0); }

struct Collocation {
    std::vector<double> c, w;
    std::vector<std::vector<double>> A;
};

const Collocation& collocation(int s) {
    static std::map<int, Collocation> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    const auto& rule = gauss_legendre(s);
    Collocation col;
    col.c = rule.nodes;
    col.w = rule.weights;
    col.A.assign(s, std::vector<double>(s, 0.0));
    const auto& fine = gauss_legendre(s + 2);
    for (int i = 0; i < s; ++i)
        for (int l = 0; l < s; ++l) {
            double acc = 0.0;
            for (std::size_t q = 0; q < fine.nodes.size(); ++q) {
                double x = col.c[i] * fine.nodes[q];
                double lag = 1.0;
                for (int m = 0; m < s; ++m)
                    if (m != l) lag *= (x - col.c[m]) / (col.c[l] - col.c[m]);
                acc += fine.weights[q] * lag;
            }
            col.A[i][l] = acc * col.c[i];
        }
    return cache.emplace(s, std::move(col)).first->second;
}

}  // namespace

std::map<Vec, SpectralField> resonant_forcing(const ProfileSet& ps) {
    Interactions in = build_interactions(ps);
    std::vector<SpectralField> a;
    for (const auto& j : in.modes) a.push_back(ps.a.at(j));
    auto f = forcing(ps, in, a);
    std::map<Vec, SpectralField> out;
    for (std::size_t i = 0; i < in.modes.size(); ++i) out.emplace(in.modes[i], std::move(f[i]));
    return out;
}

std::vector<ProfileSet> evolve_profiles(const ProfileSet& ps, const std::vector<double>& times,
                                        const ProfileConfig& cfg) {
    if (cfg.gauss_nodes < 1 || !(cfg.panel > 0.0)) throw std::invalid_argument("invalid profile integrator settings");
    Interactions in = build_interactions(ps);
    const std::size_t nm = in.modes.size();
    const auto& col = collocation(cfg.gauss_nodes);
    const int S = cfg.gauss_nodes;

    // moving-frame unknowns b_j(t) = exp(i j.xi t) a_j^(t)
    std::vector<SpectralField> b;
    for (const auto& j : in.modes) {
        SpectralField f = ps.a.at(j);
        frame_shift(f, j, ps.t, -1.0);
        b.push_back(std::move(f));
    }
    auto lab = [&](const std::vector<SpectralField>& bb, double t) {
        std::vector<SpectralField> a(bb);
        for (std::size_t m = 0; m < nm; ++m) frame_shift(a[m], in.modes[m], t, 1.0);
        return a;
    };
    auto rhs = [&](const std::vector<SpectralField>& bb, double t) {
        auto G = forcing(ps, in, lab(bb, t));
        for (std::size_t m = 0; m < nm; ++m) frame_shift(G[m], in.modes[m], t, -1.0);
        return G;
    };

    std::vector<ProfileSet> out;
    double now = ps.t;
    for (double target : times) {
        if (target < now - 1e-15) throw std::invalid_argument("profile sample times must be ascending");
        double span = target - now;
        int panels = static_cast<int>(std::ceil(span / cfg.panel - 1e-9));
        for (int p = 0; p < panels; ++p) {
            double h = span / panels;
            double t0 = now + p * h;
            std::vector<std::vector<SpectralField>> B(S, b), G(S);
            double prev = kInf;
            int iter = 0;
            for (;; ++iter) {
                for (int l = 0; l < S; ++l) G[l] = rhs(B[l], t0 + col.c[l] * h);
                double diff = 0.0;
                for (int i = 0; i < S; ++i) {
                    double stage_diff = 0.0;
                    for (std::size_t m = 0; m < nm; ++m) {
                        SpectralField nb = b[m];
                        for (int l = 0; l < S; ++l) {
                            const double c = h * col.A[i][l];
                            for (std::size_t n = 0; n < nb.values.size(); ++n) nb.values[n] += c * G[l][m].values[n];
                        }
                        SpectralField delta = nb;
                        for (std::size_t n = 0; n < nb.values.size(); ++n) delta.values[n] -= B[i][m].values[n];
                        stage_diff += fl1(delta);
                        B[i][m] = std::move(nb);
                    }
                    diff = std::max(diff, stage_diff);
                }
                if (diff < cfg.tol) break;
                if (iter >= 2 && diff > prev)
                    throw std::runtime_error("profile fixed-point iteration does not contract; shorten the time interval");
                if (iter + 1 >= cfg.max_iter)
                    throw std::runtime_error("profile fixed-point iteration did not converge within the iteration cap");
                prev = diff;
            }
            for (int l = 0; l < S; ++l) G[l] = rhs(B[l], t0 + col.c[l] * h);
            for (std::size_t m = 0; m < nm; ++m)
                for (int l = 0; l < S; ++l) {
                    const double c = h * col.w[l];
                    for (std::size_t n = 0; n < b[m].values.size(); ++n) b[m].values[n] += c * G[l][m].values[n];
                }
        }
        now = target;
        ProfileSet snap = ps;
        snap.t = now;
        auto a = lab(b, now);
        for (std::size_t m = 0; m < nm; ++m) snap.a[in.modes[m]] = std::move(a[m]);
        out.push_back(std::move(snap));
    }
    return out;
}

ProfileSet evolve_profiles(const ProfileSet& ps, double T, const ProfileConfig& cfg) {
    return evolve_profiles(ps, std::vector<double>{T}, cfg).front();
}

SpectralField assemble_uapp(const ProfileSet& ps, const FrequencyGrid& target, const AssembleOptions& opt) {
    const auto& pg = ps.grid;
    if (target.d != pg.d || std::abs(target.dxi() - pg.dxi()) > 1e-14 * pg.dxi())
        throw std::invalid_argument("profile and target grids need the same spacing");
    SpectralField u(target);
    std::vector<char> used(opt.allow_overlap ? 0 : target.size(), 0);
    for (const auto& [j, f] : ps.a) {
        Offset shift{0, 0, 0};
        double j2 = 0.0;
        for (int a = 0; a < pg.d; ++a) {
            double k = j[a] / ps.eps;
            if (!target.on_lattice(k)) throw GridError("j / eps is not on the lattice");
            shift[a] = target.offset_of(k);
            j2 += static_cast<double>(j[a]) * j[a];
        }
        double ph = -ps.t * j2 / (2.0 * ps.eps);
        const cplx phase(std::cos(ph), std::sin(ph));
        for (std::size_t n = 0; n < f.values.size(); ++n) {
            if (f.values[n] == cplx(0.0, 0.0)) continue;
            Offset idx = pg.unravel(n);
            for (int a = 0; a < pg.d; ++a) {
                idx[a] += shift[a] + target.half() - pg.half();
                if (idx[a] < 0 || idx[a] >= target.M) throw GridError("shifted profile leaves the target grid");
            }
            std::size_t flat = target.ravel(idx);
            if (!opt.allow_overlap) {
                if (used[flat]) throw GridError("shifted profile supports overlap");
                used[flat] = 1;
            }
            u.values[flat] += phase * f.values[n];
        }
    }
    return u;
}

SpectralField psi_from_u(const SpectralField& u, double eps, double J, int sigma) {
    SpectralField r = u;
    double c = std::pow(eps, (J - 2.0) / (2.0 * sigma));
    for (auto& v : r.values) v *= c;
    return r;
}

SpectralField u_from_psi(const SpectralField& psi, double eps, double J, int sigma) {
    SpectralField r = psi;
    double c = std::pow(eps, (2.0 - J) / (2.0 * sigma));
    for (auto& v : r.values) v *= c;
    return r;
}

SpectralField bump_profile(const FrequencyGrid& g, double amp, double radius) {
    SpectralField f(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        double b = bump(std::sqrt(f.xi2(n)) / radius);
        if (b != 0.0) f.values[n] = amp * b;
    }
    return f;
}

std::vector<Vec> WnlgoSetup::initial_modes() const {
    if (!modes.empty()) return modes;
    return {Vec{1, 0, 0}, Vec{1, 1, 0}, Vec{0, 1, 0}};
}

namespace {

struct EpsRun {
    FrequencyGrid full;
    ProfileSet ps0;
    std::vector<double> times;
    std::vector<ProfileSet> profiles;  // at times
};

EpsRun prepare(double eps, const WnlgoSetup& setup, const std::vector<double>& times) {
    EpsRun run;
    int Mp = static_cast<int>(std::lround(2.0 * setup.profile_halfwidth / setup.dxi));
    FrequencyGrid pg = make_grid(setup.d, setup.profile_halfwidth, Mp);
    std::map<Vec, SpectralField> init;
    int jmax = 0;
    for (const auto& j : setup.initial_modes()) {
        init.emplace(j, bump_profile(pg, setup.amp, setup.radius));
        for (int a = 0; a < setup.d; ++a) jmax = std::max(jmax, std::abs(j[a]));
    }
    run.ps0 = make_profile_set(setup.d, setup.sigma, setup.mu, eps, setup.J, pg, init);
    for (const auto& j : run.ps0.modes())
        for (int a = 0; a < setup.d; ++a) jmax = std::max(jmax, std::abs(j[a]));
    double half = std::max(2.0 * jmax / eps + setup.margin, jmax / eps + setup.profile_halfwidth + 2 * setup.dxi);
    run.full = grid_with_spacing(setup.d, setup.dxi, half);
    run.times = times;
    run.profiles = evolve_profiles(run.ps0, times, setup.profile);
    return run;
}

std::vector<double> sample_times(const WnlgoSetup& setup) {
    std::vector<double> t;
    for (int i = 1; i <= setup.samples; ++i) t.push_back(setup.T * i / setup.samples);
    return t;
}

SplitStepConfig solver_for(double eps, const WnlgoSetup& setup) {
    SplitStepConfig sc;
    sc.alpha = eps;
    sc.beta = setup.mu * std::pow(eps, setup.J - 1.0);
    sc.sigma = setup.sigma;
    sc.dt = setup.dt_factor * eps;
    return sc;
}

std::string x_name(XVariant v) { return v == XVariant::FL1_FLinf ? "FL1nFLinf" : "FL1nM11"; }

}  // namespace

std::vector<WnlgoErrorReport> wnlgo_error(const std::vector<double>& eps_list, const WnlgoSetup& setup,
                                          const std::vector<XVariant>& norms) {
    std::vector<WnlgoErrorReport> reports(norms.size());
    for (std::size_t v = 0; v < norms.size(); ++v) reports[v].x_name = x_name(norms[v]);
    std::vector<double> eps_sorted(eps_list);
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());
    auto times = sample_times(setup);
    for (double eps : eps_sorted) {
        auto start = std::chrono::steady_clock::now();
        EpsRun run = prepare(eps, setup, times);
        AssembleOptions ao;
        ao.allow_overlap = true;
        SpectralField u0 = assemble_uapp(run.ps0, run.full, ao);
        auto states = split_step(u0, times, solver_for(eps, setup));
        std::vector<WnlgoErrorRow> rows(norms.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            SpectralField diff = states[i];
            SpectralField ua = assemble_uapp(run.profiles[i], run.full, ao);
            for (std::size_t n = 0; n < diff.values.size(); ++n) diff.values[n] -= ua.values[n];
            for (std::size_t v = 0; v < norms.size(); ++v) {
                double e;
                if (norms[v] == XVariant::FL1_FLinf) {
                    e = xnorm(diff, norms[v]);
                } else {
                    double a = fourier_lebesgue_norm(diff, 1.0, 0.0);
                    double b = modulation_norm_ud(diff, 1.0, 1.0, 0.0, setup.ud);
                    e = std::max(a, b);
                }
                rows[v].per_time.push_back(e);
                rows[v].error = std::max(rows[v].error, e);
            }
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (std::size_t v = 0; v < norms.size(); ++v) {
            rows[v].eps = eps;
            rows[v].M = run.full.M;
            rows[v].seconds = secs;
            reports[v].rows.push_back(rows[v]);
        }
    }
    for (auto& rep : reports) {
        std::vector<double> x, y;
        for (const auto& r : rep.rows) {
            x.push_back(r.eps);
            y.push_back(r.error);
        }
        for (std::size_t i = 1; i < rep.rows.size(); ++i)
            if (!(rep.rows[i].error < rep.rows[i - 1].error)) rep.monotone = false;
        if (x.size() >= 2) rep.fit = fit_loglog(x, y);
    }
    return reports;
}

std::pair<double, double> j_window(int sigma, double s) {
    double lo = std::max(1.0, 2.0 - 2.0 * sigma * std::abs(s));
    double hi = std::min(2.0, (2.0 * sigma + 2.0) / (2.0 * sigma + 1.0));
    if (!(lo < hi)) {
        std::ostringstream os;
        os << "empty J window: |s| > (2 - J)/(2 sigma) needs J > " << 2.0 - 2.0 * sigma * std::abs(s)
           << " but J < (2 sigma + 2)/(2 sigma + 1) = " << hi;
        throw std::invalid_argument(os.str());
    }
    return {lo, hi};
}

LossReport run_loss_experiment(double s, const std::vector<double>& eps_list, const WnlgoSetup& setup, double tau,
                               bool include_modulation) {
    if (!(s < -1.0 / (2.0 * setup.sigma + 1.0))) throw std::invalid_argument("need s < -1/(2 sigma + 1)");
    if (setup.d * setup.sigma < 2) throw std::invalid_argument("need d sigma >= 2");
    LossReport rep;
    std::tie(rep.j_lo, rep.j_hi) = j_window(setup.sigma, s);
    if (!(setup.J > rep.j_lo && setup.J < rep.j_hi)) throw std::invalid_argument("J outside the admissible window");
    const double sig2 = 2.0 * setup.sigma;
    rep.predicted0 = (setup.J - 2.0) / sig2 + std::abs(s);
    rep.predictedTau = (setup.J - 2.0) / sig2 + setup.J - 1.0;

    const std::vector<double> ps_exp = {1.0, 2.0, kInf};
    auto pname = [](double p) { return std::isinf(p) ? std::string("inf") : std::to_string(static_cast<int>(p)); };
    std::vector<double> eps_sorted(eps_list);
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());
    for (double eps : eps_sorted) {
        LossRow row;
        row.eps = eps;
        EpsRun run = prepare(eps, setup, {tau});
        const Vec zero{0, 0, 0};
        if (run.profiles[0].a.count(zero)) row.a0_tau = fourier_lebesgue_norm(run.profiles[0].a.at(zero), 2.0, 0.0);
        if (!(row.a0_tau > 0.0)) throw std::runtime_error("zero mode vanishes at the evaluation time");
        AssembleOptions ao;
        ao.allow_overlap = true;
        SpectralField u0 = assemble_uapp(run.ps0, run.full, ao);
        SpectralField psi0 = psi_from_u(u0, eps, setup.J, setup.sigma);
        for (double p : ps_exp) row.norms0["FL" + pname(p) + "_s"] = fourier_lebesgue_norm(psi0, p, s);
        if (include_modulation)
            for (double p : ps_exp)
                for (double q : ps_exp)
                    row.norms0["M" + pname(p) + "," + pname(q) + "_s"] = modulation_norm_ud(psi0, p, q, s, setup.ud);
        SpectralField uT = split_step(u0, tau, solver_for(eps, setup));
        SpectralField psiT = psi_from_u(uT, eps, setup.J, setup.sigma);
        for (double p : ps_exp)
            for (int k : {-1, 0}) row.normsTau["FL" + pname(p) + "_" + std::to_string(k)] = fourier_lebesgue_norm(psiT, p, k);
        rep.rows.push_back(std::move(row));
    }
    if (rep.rows.size() >= 2) {
        std::vector<double> x;
        for (const auto& r : rep.rows) x.push_back(r.eps);
        for (const auto& [key, v] : rep.rows[0].norms0) {
            std::vector<double> y;
            for (const auto& r : rep.rows) y.push_back(r.norms0.at(key));
            rep.fits0[key] = fit_loglog(x, y);
        }
        for (const auto& [key, v] : rep.rows[0].normsTau) {
            std::vector<double> y;
            for (const auto& r : rep.rows) y.push_back(r.normsTau.at(key));
            rep.fitsTau[key] = fit_loglog(x, y);
        }
    }
    return rep;
}

}  // namespace nlslab
