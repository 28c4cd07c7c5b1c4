#include "nlslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlslab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_exponent(double p, const char* name) {
    if (!(p >= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [1, inf]");
}

// Accumulates an L^p or l^q norm; p = inf takes the max.
class PowerSum {
public:
    explicit PowerSum(double p) : p_(p) {}
    void add(double v, double weight = 1.0) {
        if (std::isinf(p_))
            acc_ = std::max(acc_, v);
        else if (p_ == 1.0)
            acc_ += v * weight;
        else if (p_ == 2.0)
            acc_ += v * v * weight;
        else
            acc_ += std::pow(v, p_) * weight;
    }
    double result() const {
        if (std::isinf(p_) || p_ == 1.0) return acc_;
        if (p_ == 2.0) return std::sqrt(acc_);
        return std::pow(acc_, 1.0 / p_);
    }

private:
    double p_;
    double acc_ = 0.0;
};

double smooth_step(double t) {
    auto h = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    double a = h(t), b = h(1.0 - t);
    return a / (a + b);
}

double parse_exponent(const nlohmann::json& v) {
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        throw std::invalid_argument("exponent must be a number or \"inf\"");
    }
    return v.get<double>();
}

nlohmann::json exponent_json(double p) {
    if (std::isinf(p)) return "inf";
    return p;
}

}  // namespace

double bracket(double xi2) { return std::sqrt(1.0 + xi2); }

double bump(double x) {
    double a = std::abs(x);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    return smooth_step(2.0 * (1.0 - a));
}

NormSpec norm_spec_from_json(const nlohmann::json& j) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "fl") return FourierLebesgue{parse_exponent(j.at("p")), j.value("s", 0.0)};
    if (kind == "mod") {
        Modulation m{parse_exponent(j.at("p")), parse_exponent(j.at("q")), j.value("s", 0.0), ModMethod::UD};
        if (j.contains("method")) {
            auto meth = j["method"].get<std::string>();
            if (meth == "stft")
                m.method = ModMethod::STFT;
            else if (meth != "ud")
                throw std::invalid_argument("method must be ud or stft");
        }
        return m;
    }
    if (kind == "sobolev") return Sobolev{j.value("s", 0.0)};
    if (kind == "ma") return MA{j.at("A").get<double>()};
    if (kind == "x") {
        auto v = j.value("variant", std::string("fl1-flinf"));
        if (v == "fl1-flinf") return XNorm{XVariant::FL1_FLinf};
        if (v == "fl1-m11") return XNorm{XVariant::FL1_M11};
        throw std::invalid_argument("variant must be fl1-flinf or fl1-m11");
    }
    throw std::invalid_argument("unknown norm kind: " + kind);
}

nlohmann::json norm_spec_to_json(const NormSpec& spec) {
    nlohmann::json j;
    if (const auto* f = std::get_if<FourierLebesgue>(&spec)) {
        j = {{"kind", "fl"}, {"p", exponent_json(f->p)}, {"s", f->s}};
    } else if (const auto* m = std::get_if<Modulation>(&spec)) {
        j = {{"kind", "mod"},
             {"p", exponent_json(m->p)},
             {"q", exponent_json(m->q)},
             {"s", m->s},
             {"method", m->method == ModMethod::UD ? "ud" : "stft"}};
    } else if (const auto* so = std::get_if<Sobolev>(&spec)) {
        j = {{"kind", "sobolev"}, {"s", so->s}};
    } else if (const auto* ma = std::get_if<MA>(&spec)) {
        j = {{"kind", "ma"}, {"A", ma->A}};
    } else {
        const auto& x = std::get<XNorm>(spec);
        j = {{"kind", "x"}, {"variant", x.variant == XVariant::FL1_FLinf ? "fl1-flinf" : "fl1-m11"}};
    }
    return j;
}

std::string describe(const NormSpec& spec) { return norm_spec_to_json(spec).dump(); }

double fourier_lebesgue_norm(const SpectralField& f, double p, double s) {
    check_exponent(p, "p");
    PowerSum acc(p);
    const double w = f.grid.cell();
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        double a = std::abs(f.values[n]);
        if (a == 0.0) continue;
        if (s != 0.0) a *= std::pow(bracket(f.xi2(n)), s);
        acc.add(a, w);
    }
    return acc.result();
}

double sobolev_norm(const SpectralField& f, double s) { return fourier_lebesgue_norm(f, 2.0, s); }

Partition::Partition(const FrequencyGrid& g, const Offset& lo, const Offset& hi) : grid_(g), lo_(lo), hi_(hi) {
    // Nodes with |xi - n| < 1 lie within width_ lattice steps of n.
    width_ = static_cast<int>(std::ceil(1.0 / g.dxi())) + 1;
    for (int a = 0; a < g.d; ++a) {
        if (hi[a] < lo[a]) throw std::invalid_argument("empty partition window");
        // Each node meets at most the windows floor(xi) and floor(xi) + 1.
        table_[a].assign(2 * static_cast<std::size_t>(g.M), 0.0);
        for (int i = 0; i < g.M; ++i) {
            double xi = g.node(i);
            double fl = std::floor(xi);
            double v0 = bump(xi - fl), v1 = bump(xi - fl - 1.0);
            double total = v0 + v1;
            table_[a][2 * i] = v0 / total;
            table_[a][2 * i + 1] = v1 / total;
        }
    }
}

Partition Partition::covering(const SpectralField& f) {
    SupportBox b = support_box(f);
    const auto& g = f.grid;
    Offset lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < g.d; ++a) {
        if (b.empty) {
            lo[a] = hi[a] = 0;
            continue;
        }
        lo[a] = static_cast<int>(std::floor(b.lo[a] * g.dxi())) - 1;
        hi[a] = static_cast<int>(std::ceil(b.hi[a] * g.dxi())) + 1;
    }
    return Partition(g, lo, hi);
}

double Partition::factor(int axis, int n, int i) const {
    if (n < lo_[axis] || n > hi_[axis]) return 0.0;
    int fl = static_cast<int>(std::floor(grid_.node(i)));
    if (n == fl) return table_[axis][2 * static_cast<std::size_t>(i)];
    if (n == fl + 1) return table_[axis][2 * static_cast<std::size_t>(i) + 1];
    return 0.0;
}

double Partition::value(const Offset& n, const Offset& idx) const {
    double v = 1.0;
    for (int a = 0; a < grid_.d && v != 0.0; ++a) v *= factor(a, n[a], idx[a]);
    return v;
}

std::pair<int, int> Partition::reach(int axis, int n) const {
    (void)axis;
    int centre = grid_.half() + static_cast<int>(std::lround(n / grid_.dxi()));
    return {std::max(0, centre - width_), std::min(grid_.M - 1, centre + width_)};
}

bool Partition::covers(int axis, int i) const {
    int fl = static_cast<int>(std::floor(grid_.node(i)));
    if (fl < lo_[axis] || fl > hi_[axis]) return false;
    if (bump(grid_.node(i) - fl - 1.0) != 0.0 && fl + 1 > hi_[axis]) return false;
    return true;
}

bool Partition::covers_node(const Offset& idx) const {
    for (int a = 0; a < grid_.d; ++a)
        if (!covers(a, idx[a])) return false;
    return true;
}

double Partition::unity_error() const {
    double worst = 0.0;
    const auto& g = grid_;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        Offset idx = g.unravel(flat);
        if (!covers_node(idx)) continue;
        double prod = 1.0;
        for (int a = 0; a < g.d; ++a) {
            int fl = static_cast<int>(std::floor(g.node(idx[a])));
            prod *= factor(a, fl, idx[a]) + factor(a, fl + 1, idx[a]);
        }
        worst = std::max(worst, std::abs(prod - 1.0));
    }
    return worst;
}

namespace {

// Visits every window n of the partition whose support meets the nonzero set of f.
template <class Fn>
void for_each_active_window(const SpectralField& f, const Partition& part, Fn&& fn) {
    const auto& g = f.grid;
    // Per-axis list of windows touching some nonzero node.
    std::vector<std::vector<char>> touched(g.d);
    for (int a = 0; a < g.d; ++a) touched[a].assign(part.hi()[a] - part.lo()[a] + 1, 0);
    for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
        if (f.values[flat] == cplx(0.0, 0.0)) continue;
        Offset idx = g.unravel(flat);
        if (!part.covers_node(idx)) throw GridError("partition window does not cover the field support");
        for (int a = 0; a < g.d; ++a) {
            double xi = g.node(idx[a]);
            for (int n = static_cast<int>(std::floor(xi)) - 1; n <= static_cast<int>(std::floor(xi)) + 2; ++n)
                if (n >= part.lo()[a] && n <= part.hi()[a] && part.factor(a, n, idx[a]) != 0.0)
                    touched[a][n - part.lo()[a]] = 1;
        }
    }
    Offset n = part.lo();
    std::vector<std::vector<int>> lists(g.d);
    for (int a = 0; a < g.d; ++a)
        for (int k = 0; k < static_cast<int>(touched[a].size()); ++k)
            if (touched[a][k]) lists[a].push_back(part.lo()[a] + k);
    for (int a = 0; a < g.d; ++a)
        if (lists[a].empty()) return;
    std::array<std::size_t, 3> pos{0, 0, 0};
    while (true) {
        for (int a = 0; a < g.d; ++a) n[a] = lists[a][pos[a]];
        fn(n);
        int a = g.d - 1;
        while (a >= 0) {
            if (++pos[a] < lists[a].size()) break;
            pos[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
}

}  // namespace

double modulation_norm_ud(const SpectralField& f, double p, double q, double s, const UDOptions& opt) {
    return modulation_norm_ud(f, p, q, s, Partition::covering(f), opt);
}

double modulation_norm_ud(const SpectralField& f, double p, double q, double s, const Partition& part,
                          const UDOptions& opt) {
    check_exponent(p, "p");
    check_exponent(q, "q");
    const auto& g = f.grid;
    if (part.grid() != g) throw std::invalid_argument("partition grid differs from field grid");
    PowerSum outer(q);
    const double cell = g.cell();
    for_each_active_window(f, part, [&](const Offset& n) {
        // Local box of nodes where sigma_n can be nonzero.
        Offset first{0, 0, 0}, count{1, 1, 1};
        int K = 1;
        for (int a = 0; a < g.d; ++a) {
            auto [i0, i1] = part.reach(a, n[a]);
            first[a] = i0;
            count[a] = i1 - i0 + 1;
            K = std::max(K, count[a]);
        }
        double local = 0.0;
        if (p == 2.0) {
            double sum = 0.0;
            Offset idx{0, 0, 0};
            for (int i = 0; i < count[0]; ++i)
                for (int j = 0; j < (g.d > 1 ? count[1] : 1); ++j)
                    for (int k = 0; k < (g.d > 2 ? count[2] : 1); ++k) {
                        idx = {first[0] + i, first[1] + j, first[2] + k};
                        cplx v = f.values[g.ravel(idx)];
                        if (v == cplx(0.0, 0.0)) continue;
                        double w = part.value(n, idx);
                        sum += std::norm(w * v);
                    }
            // Parseval on the physical box
            local = std::pow(2.0 * kPi, 0.5 * g.d) * std::sqrt(sum * cell);
        } else {
            int P = opt.full_grid ? g.M : good_fft_size(opt.oversample * K);
            FrequencyGrid lg = make_grid(g.d, 0.5 * P * g.dxi(), P);
            SpectralField loc(lg);
            for (int i = 0; i < count[0]; ++i)
                for (int j = 0; j < (g.d > 1 ? count[1] : 1); ++j)
                    for (int k = 0; k < (g.d > 2 ? count[2] : 1); ++k) {
                        Offset idx{first[0] + i, first[1] + j, first[2] + k};
                        cplx v = f.values[g.ravel(idx)];
                        if (v == cplx(0.0, 0.0)) continue;
                        Offset li{i, j, k};
                        loc.values[lg.ravel(li)] = part.value(n, idx) * v;
                    }
            // Modulus of the local trigonometric polynomial is invariant under the frequency shift,
            // so the coarse box of the same period samples |box_n f| at P points per axis.
            auto phys = to_physical(loc);
            PowerSum inner(p);
            double dxl = std::pow(lg.dx(), g.d);
            for (const auto& v : phys) inner.add(std::abs(v), dxl);
            local = inner.result();
        }
        double nn = 0.0;
        for (int a = 0; a < g.d; ++a) nn += static_cast<double>(n[a]) * n[a];
        outer.add(local * std::pow(1.0 + std::sqrt(nn), s));
    });
    return outer.result();
}

double modulation_norm_stft(const SpectralField& f, double p, double q, double s, double width) {
    check_exponent(p, "p");
    check_exponent(q, "q");
    const auto& g = f.grid;
    const double cell = g.cell();
    const double dxd = std::pow(g.dx(), g.d);
    // Unit-mass Gaussian window: g^(xi) = (2pi)^-d exp(-width^2 |xi|^2 / 2).
    const double ghat0 = std::pow(2.0 * kPi, -g.d);
    std::vector<double> yv(g.size());
    double peak = 0.0, boundary = 0.0;
    for (std::size_t ny = 0; ny < g.size(); ++ny) {
        Offset iy = g.unravel(ny);
        SpectralField h(g);
        bool any = false;
        for (std::size_t n = 0; n < g.size(); ++n) {
            if (f.values[n] == cplx(0.0, 0.0)) continue;
            Offset idx = g.unravel(n);
            double d2 = 0.0;
            for (int a = 0; a < g.d; ++a) {
                double diff = g.node(idx[a]) - g.node(iy[a]);
                d2 += diff * diff;
            }
            double gv = ghat0 * std::exp(-0.5 * width * width * d2);
            if (gv == 0.0) continue;
            h.values[n] = f.values[n] * gv;
            any = true;
        }
        double inner_norm = 0.0;
        if (any) {
            auto phys = to_physical(h);
            PowerSum inner(p);
            for (const auto& v : phys) inner.add(std::pow(2.0 * kPi, g.d) * std::abs(v), dxd);
            inner_norm = inner.result();
        }
        yv[ny] = inner_norm;
        peak = std::max(peak, inner_norm);
        bool edge = false;
        for (int a = 0; a < g.d; ++a) edge = edge || iy[a] == 0 || iy[a] == g.M - 1;
        if (edge) boundary = std::max(boundary, inner_norm);
    }
    if (peak > 0.0 && boundary > 1e-10 * peak) throw GridError("STFT does not decay at the lattice boundary");
    PowerSum outer(q);
    for (std::size_t ny = 0; ny < g.size(); ++ny)
        outer.add(yv[ny] * std::pow(bracket(f.xi2(ny)), s), cell);
    return outer.result();
}

std::map<Offset, double> ma_cube_norms(const SpectralField& f, double A) {
    const auto& g = f.grid;
    double ratio = A / g.dxi();
    long K = std::lround(ratio);
    if (!(A > 0.0) || K < 1 || std::abs(ratio - static_cast<double>(K)) > 1e-9)
        throw std::invalid_argument("cube side A must be a positive multiple of the lattice spacing");
    std::map<Offset, double> sums;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        if (f.values[n] == cplx(0.0, 0.0)) continue;
        Offset idx = f.grid.unravel(n);
        Offset c{0, 0, 0};
        for (int a = 0; a < g.d; ++a) {
            // xi in [cA - A/2, cA + A/2)  <=>  c = floor((2 o + K) / (2K))
            long o = idx[a] - g.half();
            long num = 2 * o + K, den = 2 * K;
            long q = num / den;
            if (num % den != 0 && (num < 0)) --q;
            c[a] = static_cast<int>(q);
        }
        sums[c] += std::norm(f.values[n]);
    }
    for (auto& [c, v] : sums) v = std::sqrt(v * g.cell());
    return sums;
}

double ma_norm(const SpectralField& f, double A) {
    double total = 0.0;
    for (const auto& [c, v] : ma_cube_norms(f, A)) total += v;
    return total;
}

double xnorm(const SpectralField& f, XVariant v) {
    double fl1 = fourier_lebesgue_norm(f, 1.0, 0.0);
    if (v == XVariant::FL1_FLinf) return std::max(fl1, fourier_lebesgue_norm(f, kInf, 0.0));
    return std::max(fl1, modulation_norm_ud(f, 1.0, 1.0, 0.0));
}

double compute_norm(const SpectralField& f, const NormSpec& spec) {
    if (const auto* fl = std::get_if<FourierLebesgue>(&spec)) return fourier_lebesgue_norm(f, fl->p, fl->s);
    if (const auto* m = std::get_if<Modulation>(&spec)) {
        if (m->method == ModMethod::STFT) return modulation_norm_stft(f, m->p, m->q, m->s);
        return modulation_norm_ud(f, m->p, m->q, m->s);
    }
    if (const auto* so = std::get_if<Sobolev>(&spec)) return sobolev_norm(f, so->s);
    if (const auto* ma = std::get_if<MA>(&spec)) return ma_norm(f, ma->A);
    return xnorm(f, std::get<XNorm>(spec).variant);
}

double weight_profile_fl(double A, double p, double s, int d) {
    check_exponent(p, "p");
    if (std::isinf(p)) return 1.0;
    double crit = -d / p;
    if (std::abs(s - crit) < 1e-12) return std::pow(std::log(A), 1.0 / p);
    if (s < crit) return 1.0;
    return std::pow(A, d / p + s);
}

double weight_profile_fl_numeric(double A, double p, double s, int d, int per_unit) {
    check_exponent(p, "p");
    int n = std::max(2, static_cast<int>(std::ceil(A * per_unit)));
    double h = A / n;
    PowerSum acc(p);
    std::array<int, 3> i{0, 0, 0};
    double w = std::pow(h, d);
    while (true) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            double x = -0.5 * A + (i[a] + 0.5) * h;
            r2 += x * x;
        }
        acc.add(std::pow(bracket(r2), s), w);
        int a = d - 1;
        while (a >= 0) {
            if (++i[a] < n) break;
            i[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return acc.result();
}

double weight_profile_mod(double A, double q, double s, int d) {
    check_exponent(q, "q");
    if (std::isinf(q)) return 1.0;
    double lhs = -s * q;
    if (std::abs(lhs - d) < 1e-12) return std::pow(std::log(A), 1.0 / q);
    if (lhs > d) return 1.0;
    return std::pow(A, d / q + s);
}

double lattice_weight_sum(double A, double q, double s, int d) {
    check_exponent(q, "q");
    int R = static_cast<int>(std::floor(A));
    PowerSum acc(q);
    std::array<int, 3> i{-R, -R, -R};
    for (int a = d; a < 3; ++a) i[a] = 0;
    while (true) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += static_cast<double>(i[a]) * i[a];
        if (r2 <= A * A) acc.add(std::pow(1.0 + std::sqrt(r2), s));
        int a = d - 1;
        while (a >= 0) {
            if (++i[a] <= R) break;
            i[a] = -R;
            --a;
        }
        if (a < 0) break;
    }
    return acc.result();
}

}  // namespace nlslab
