#include "nlslab/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlslab {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Exponent e in the height R A^{-d e} N^{-s}.
double height_exponent(const SpaceSpec& space) {
    if (space.kind == SpaceKind::FL) return inv(space.exponent);
    return space.exponent <= 2.0 ? 0.5 : inv(space.exponent);
}

}  // namespace

NormSpec SpaceSpec::norm() const {
    if (kind == SpaceKind::FL) return FourierLebesgue{exponent, s};
    return Modulation{2.0, exponent, s, ModMethod::UD};
}

std::string SpaceSpec::name() const { return describe(norm()); }

std::vector<std::array<double, 3>> InflationDataSpec::effective_centers() const {
    if (!centers.empty()) return centers;
    std::vector<std::array<double, 3>> c(3, {0.0, 0.0, 0.0});
    c[0][d - 1] = N;
    c[1][d - 1] = -N;
    c[2][d - 1] = 2.0 * N;
    return c;
}

double InflationDataSpec::height() const {
    return R * std::pow(A, -d * height_exponent(space)) * std::pow(N, -space.s);
}

double critical_index_fl(int d, double p, int sigma) { return d * (1.0 - inv(p)) - 1.0 / sigma; }

double inflation_threshold(const SpaceSpec& space, int d, int sigma) {
    if (space.kind == SpaceKind::FL) return std::min(0.0, critical_index_fl(d, space.exponent, sigma));
    if (space.exponent <= 2.0) return std::min(0.5 * d - 1.0 / sigma, 0.0);
    return std::min(d * (1.0 - inv(space.exponent)) - 1.0 / sigma, 0.0);
}

SpectralField make_inflation_data(const InflationDataSpec& spec, const FrequencyGrid& grid) {
    if (grid.d != spec.d) throw std::invalid_argument("grid dimension differs from data dimension");
    const double dxi = grid.dxi();
    double per_side = spec.A / dxi;
    long K = std::lround(per_side);
    if (std::abs(per_side - K) > 1e-9 || K < 8)
        throw GridError("grid must resolve each A-cube with at least 8 nodes per axis");
    auto centers = spec.effective_centers();
    if (centers.size() > 3) throw std::invalid_argument("at most three cube centres");
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j) {
            bool apart = false;
            for (int a = 0; a < spec.d; ++a) apart = apart || std::abs(centers[i][a] - centers[j][a]) >= spec.A;
            if (!apart) throw std::invalid_argument("cubes overlap");
        }
    SpectralField f(grid);
    const double h = spec.height();
    for (const auto& c : centers) {
        Offset lo{0, 0, 0};
        for (int a = 0; a < spec.d; ++a) {
            double start = c[a] - 0.5 * spec.A;
            if (!grid.on_lattice(c[a]) || !grid.on_lattice(start)) throw GridError("cube centre is off the lattice");
            lo[a] = grid.offset_of(start) + grid.half();
            if (lo[a] < 0 || lo[a] + K > grid.M) throw GridError("cube does not fit on the grid");
        }
        Offset idx{0, 0, 0};
        std::array<long, 3> cnt{0, 0, 0};
        while (true) {
            for (int a = 0; a < spec.d; ++a) idx[a] = lo[a] + static_cast<int>(cnt[a]);
            f.values[grid.ravel(idx)] = h;
            int a = spec.d - 1;
            while (a >= 0) {
                if (++cnt[a] < K) break;
                cnt[a] = 0;
                --a;
            }
            if (a < 0) break;
        }
    }
    return f;
}

double dyadic_floor(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("dyadic_floor needs a positive argument");
    return std::exp2(std::floor(std::log2(x) + 1e-12));
}

RegimeParams regime_params(double N, int d, int sigma, const SpaceSpec& space, const ARuleSpec& arule) {
    if (N < 64 || std::exp2(std::round(std::log2(N))) != N) throw std::invalid_argument("N must be dyadic and >= 64");
    if (!(space.s < 0.0)) throw std::invalid_argument("s must be negative");
    double thr = inflation_threshold(space, d, sigma);
    if (!(space.s < thr)) {
        std::ostringstream os;
        os << "s = " << space.s << " violates the hypothesis s < " << thr;
        throw std::invalid_argument(os.str());
    }
    RegimeParams rp;
    rp.N = N;
    const double L = std::log(N);
    rp.R = 1.0 / L;
    if (arule.rule == ARule::LogPower)
        rp.A_formula = std::pow(L, -(2.0 * sigma + 2.0) / std::abs(space.s)) * N;
    else
        rp.A_formula = N / arule.divisor;
    rp.A = dyadic_floor(rp.A_formula);
    if (rp.A < 1.0) rp.warnings.push_back("A < 1: outside the regime 1 <= A << N");
    if (rp.A * 4.0 > N) rp.warnings.push_back("A is not small compared with N");

    double e;  // T = (A^{d e} N^{s})^{2 sigma}
    if (space.kind == SpaceKind::FL) {
        e = inv(space.exponent) - 1.0;
        rp.branch = "fl";
    } else if (space.exponent <= 2.0) {
        e = -0.5;
        rp.branch = "mod-q<=2";
    } else {
        e = inv(space.exponent) - 1.0;
        rp.branch = "mod-q>=2";
    }
    rp.T = std::pow(std::pow(rp.A, d * e) * std::pow(N, space.s), 2.0 * sigma);
    // rho = R N^{-s} A^{-d e} T^{1/(2 sigma)}, equal to R by construction
    rp.rho = rp.R * std::pow(N, -space.s) * std::pow(rp.A, -d * e) * std::pow(rp.T, 1.0 / (2.0 * sigma));
    rp.TN2 = rp.T * N * N;
    return rp;
}

FrequencyGrid inflation_grid(const InflationDataSpec& spec, const SweepConfig& cfg) {
    double dxi = std::min(spec.A / cfg.nodes_per_cube, cfg.max_dxi) / cfg.resolution;
    dxi = dyadic_floor(dxi);
    auto centers = spec.effective_centers();
    double hi = 0.0, lo = 0.0;
    for (const auto& c : centers)
        for (int a = 0; a < spec.d; ++a) {
            hi = std::max(hi, c[a] + 0.5 * spec.A);
            lo = std::min(lo, c[a] - 0.5 * spec.A);
        }
    // U_k has (k+1)/2 plain and (k-1)/2 conjugated factors
    int k = 2 * spec.sigma * cfg.L_max + 1;
    double P = 0.5 * (k + 1), C = 0.5 * (k - 1);
    double top = P * hi - C * lo, bottom = P * lo - C * hi;
    double half = std::max(top, -bottom) + 2.0 * dxi;
    return grid_with_spacing(spec.d, dxi, half);
}

nlohmann::json audit_to_json(const std::vector<AuditEntry>& entries) {
    auto arr = nlohmann::json::array();
    for (const auto& e : entries)
        arr.push_back({{"k", e.k},
                       {"norm_spec", nlohmann::json::parse(e.norm_spec)},
                       {"measured", e.measured},
                       {"lemma_rhs", e.lemma_rhs},
                       {"ratio", e.ratio}});
    return arr;
}

namespace {

double weight_factor(const SpaceSpec& space, int d, double A, bool lower) {
    if (space.kind == SpaceKind::FL) return weight_profile_fl_numeric(A, space.exponent, space.s, d);
    // the lower bound sums over |n| <= A/2, the upper bound over |n| <= A
    if (space.exponent <= 2.0 && lower) return lattice_weight_sum(std::floor(A / 2.0), space.exponent, space.s, d);
    return lattice_weight_sum(A, space.exponent, space.s, d);
}

}  // namespace

double lemma_rhs_lower(const SpaceSpec& space, int d, int sigma, const RegimeParams& rp) {
    double base = rp.R * std::pow(rp.A, -d * height_exponent(space)) * std::pow(rp.N, -space.s);
    return base * std::pow(rp.rho, 2.0 * sigma) * weight_factor(space, d, rp.A, true);
}

double lemma_rhs_upper(const SpaceSpec& space, int d, int sigma, const RegimeParams& rp, int k) {
    (void)sigma;
    if (k == 1) return rp.R;
    double base = rp.R * std::pow(rp.A, -d * height_exponent(space)) * std::pow(rp.N, -space.s);
    return base * std::pow(rp.rho, k - 1) * weight_factor(space, d, rp.A, false);
}

std::vector<AuditEntry> bound_audit(PicardSolver& solver, const SpaceSpec& space, int sigma, const RegimeParams& rp) {
    const auto& cfg = solver.config();
    const int d = solver.data().grid.d;
    const NormSpec ns = space.norm();
    const std::string tag = describe(ns);
    std::vector<AuditEntry> out;
    for (int l = 0; l <= cfg.L_max; ++l) {
        int k = 2 * sigma * l + 1;
        AuditEntry e;
        e.k = k;
        e.norm_spec = tag;
        e.measured = compute_norm(solver.iterate(k, rp.T), ns);
        e.lemma_rhs = (l == 1) ? lemma_rhs_lower(space, d, sigma, rp) : lemma_rhs_upper(space, d, sigma, rp, k);
        e.ratio = e.measured / e.lemma_rhs;
        out.push_back(e);
    }
    return out;
}

ExperimentRecord run_inflation_row(double N, int d, int sigma, const SpaceSpec& space, const SweepConfig& cfg) {
    RegimeParams rp = regime_params(N, d, sigma, space, cfg.arule);
    ExperimentRecord rec;
    rec.N = N;
    rec.R = rp.R;
    rec.A = rp.A;
    rec.T = rp.T;
    rec.rho = rp.rho;
    rec.TN2 = rp.TN2;
    for (const auto& w : rp.warnings) rec.note += (rec.note.empty() ? "" : "; ") + w;

    InflationDataSpec spec;
    spec.d = d;
    spec.sigma = sigma;
    spec.space = space;
    spec.N = N;
    spec.A = rp.A;
    spec.R = rp.R;
    FrequencyGrid grid = inflation_grid(spec, cfg);
    rec.M = grid.M;
    rec.dxi = grid.dxi();
    rec.Xi = grid.Xi;
    if (grid.size() > cfg.grid_budget) {
        rec.skipped = true;
        rec.note += (rec.note.empty() ? "" : "; ") + std::string("skipped: grid budget");
        return rec;
    }
    SpectralField psi0 = make_inflation_data(spec, grid);

    PicardConfig pc;
    pc.sigma = sigma;
    pc.mu = cfg.mu;
    pc.L_max = cfg.L_max;
    pc.duhamel_nodes = cfg.duhamel_nodes;
    pc.t = rp.T;
    pc.A = rp.A;
    PicardSolver solver(psi0, pc);
    PicardSum ps = picard_sum(solver, rp.rho);

    const NormSpec ns = space.norm();
    rec.norm0 = compute_norm(psi0, ns);
    rec.normU1 = compute_norm(ps.terms[0].second, ns);
    rec.normU2s1 = compute_norm(ps.terms[1].second, ns);
    rec.normU4s1 = compute_norm(ps.terms[2].second, ns);
    rec.normT = compute_norm(ps.sum, ns);
    rec.tail = ps.tail;
    rec.c_empirical = ps.c_empirical;
    rec.ratio_dom = rec.normU2s1 / rec.normU1;
    rec.growth = rec.normT / rec.norm0;

    // |Phi| <= |xi|^2 + sum_j |xi_j|^2 with every frequency inside the data or output box
    SupportBox b0 = solver.predicted_support(1), b3 = solver.predicted_support(2 * sigma + 1);
    auto radius2 = [&](const SupportBox& b) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            double m = std::max(std::abs(b.lo[a]), std::abs(b.hi[a])) * grid.dxi();
            r2 += m * m;
        }
        return r2;
    };
    rec.phase_ratio = phase_condition_ratio(rp.T, radius2(b3) + (2 * sigma + 1) * radius2(b0));
    rec.audit = bound_audit(solver, space, sigma, rp);
    return rec;
}

SweepResult run_inflation_sweep(const SpaceSpec& space, int d, int sigma, const std::vector<double>& N_list,
                                const SweepConfig& cfg) {
    std::vector<double> Ns(N_list);
    std::sort(Ns.begin(), Ns.end());
    SweepResult res;
    for (double N : Ns) res.rows.push_back(run_inflation_row(N, d, sigma, space, cfg));
    return res;
}

}  // namespace nlslab
