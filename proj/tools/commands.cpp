#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "app.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/inflation.hpp"
#include "nlslab/resonance.hpp"
#include "nlslab/wnlgo.hpp"

namespace nlslab::app {

namespace fs = std::filesystem;

json default_config(const std::string& experiment) {
    if (experiment == "inflate")
        return {{"space", "fl"},      {"p", 2.0},         {"q", 1.0},
                {"s", -0.75},         {"d", 1},           {"sigma", 1},
                {"mu", 1},            {"nmin", 64},       {"nmax", 1024},
                {"arule", "linear"},  {"a_divisor", 16.0}, {"L", 2},
                {"duhamel_nodes", 17}, {"nodes_per_cube", 8}, {"resolution", 1.0},
                {"grid_budget", 1 << 22}, {"out", "inflate.csv"}};
    if (experiment == "wnlgo-error")
        return {{"d", 2},           {"sigma", 1},         {"mu", 1},         {"J", 1.3},
                {"eps", "2^-3..2^-7"}, {"x", "both"},      {"T", 1.0},        {"samples", 4},
                {"dxi", 0.5},       {"profile_halfwidth", 8.0}, {"amp", 0.05}, {"radius", 2.0},
                {"margin", 24.0},   {"dt_factor", 0.05},  {"ud_oversample", 8}, {"grid_budget", 1 << 22},
                {"out", "wnlgo_error.csv"}};
    if (experiment == "loss-reg")
        return {{"d", 2},           {"sigma", 1},         {"mu", 1},         {"s", -0.4},
                {"J", 1.3},         {"eps", "2^-3..2^-6"}, {"tau", 0.5},     {"dxi", 0.5},
                {"profile_halfwidth", 8.0}, {"amp", 0.2}, {"radius", 2.0},   {"margin", 24.0},
                {"dt_factor", 0.05}, {"ud_oversample", 8}, {"modulation", true}, {"grid_budget", 1 << 22},
                {"out", "loss_reg.csv"}};
    if (experiment == "resonance")
        return {{"d", 1}, {"sigma", 1}, {"j", "0"}, {"window", 2}, {"oracle", false}, {"out", "resonance.csv"}};
    if (experiment == "norm") return {{"in", ""}, {"spec", R"({"kind":"fl","p":2,"s":0})"}, {"out", ""}};
    throw AppError(kConfigError, "unknown experiment: " + experiment);
}

json merge_config(const std::string& experiment, const json& file, const json& flags) {
    json cfg = default_config(experiment);
    for (const json* layer : {&file, &flags}) {
        if (layer->is_null()) continue;
        if (!layer->is_object()) throw AppError(kConfigError, "config must be a JSON object");
        for (const auto& [k, v] : layer->items()) {
            if (k == "experiment") {
                if (v != experiment) throw AppError(kConfigError, "config is for experiment " + v.dump());
                continue;
            }
            if (!cfg.contains(k)) throw AppError(kConfigError, "unknown config key: " + k);
            cfg[k] = v;
        }
    }
    cfg["experiment"] = experiment;
    return cfg;
}

std::vector<double> dyadic_range(double lo, double hi) {
    std::vector<double> out;
    for (double n = lo; n <= hi * (1 + 1e-12); n *= 2) out.push_back(n);
    return out;
}

std::vector<double> parse_eps_list(const json& v) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(e.get<double>());
    } else if (v.is_number()) {
        out.push_back(v.get<double>());
    } else {
        std::string s = v.get<std::string>();
        std::smatch m;
        static const std::regex range(R"(^\s*2\^(-?\d+)\s*\.\.\s*2\^(-?\d+)\s*$)");
        if (std::regex_match(s, m, range)) {
            int a = std::stoi(m[1]), b = std::stoi(m[2]);
            int step = a <= b ? 1 : -1;
            for (int k = a;; k += step) {
                out.push_back(std::exp2(k));
                if (k == b) break;
            }
        } else {
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) {
                static const std::regex pow2(R"(^\s*2\^(-?\d+)\s*$)");
                if (std::regex_match(item, m, pow2))
                    out.push_back(std::exp2(std::stoi(m[1])));
                else
                    out.push_back(std::stod(item));
            }
        }
    }
    if (out.empty()) throw AppError(kConfigError, "empty eps list");
    for (double e : out)
        if (!(e > 0.0 && e < 1.0)) throw AppError(kConfigError, "eps values must lie in (0, 1)");
    return out;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string Csv::str() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
}

std::string plot_data(const std::vector<double>& x, const std::vector<double>& y, const std::string& title) {
    std::ostringstream os;
    os << "# " << title << "\n# log(x) log(y)\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << format_double(std::log(x[i])) << ' ' << format_double(std::log(y[i])) << '\n';
    return os.str();
}

void write_manifest(const std::string& path, const json& cfg, const json& grids, double wall_seconds) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
    json m = {{"config", cfg},
              {"config_hash", hash},
              {"grids", grids},
              {"version", kVersion},
              {"wall_seconds", wall_seconds}};
    write_atomic(path, m.dump(2) + "\n");
}

namespace {

std::string stem_of(const std::string& out) {
    fs::path p(out);
    return (p.parent_path() / p.stem()).string();
}

SpaceSpec space_of(const json& cfg) {
    SpaceSpec sp;
    auto kind = cfg.at("space").get<std::string>();
    if (kind == "fl") {
        sp.kind = SpaceKind::FL;
        sp.exponent = cfg.at("p").get<double>();
    } else if (kind == "mod") {
        sp.kind = SpaceKind::MOD;
        sp.exponent = cfg.at("q").get<double>();
    } else {
        throw AppError(kConfigError, "space must be fl or mod");
    }
    sp.s = cfg.at("s").get<double>();
    return sp;
}

SweepConfig sweep_of(const json& cfg) {
    SweepConfig sc;
    auto rule = cfg.at("arule").get<std::string>();
    if (rule == "log-power")
        sc.arule.rule = ARule::LogPower;
    else if (rule == "linear")
        sc.arule.rule = ARule::Linear;
    else
        throw AppError(kConfigError, "arule must be log-power or linear");
    sc.arule.divisor = cfg.at("a_divisor").get<double>();
    sc.L_max = cfg.at("L").get<int>();
    sc.duhamel_nodes = cfg.at("duhamel_nodes").get<int>();
    sc.nodes_per_cube = cfg.at("nodes_per_cube").get<int>();
    sc.resolution = cfg.at("resolution").get<double>();
    sc.grid_budget = cfg.at("grid_budget").get<std::size_t>();
    sc.mu = cfg.at("mu").get<int>();
    return sc;
}

WnlgoSetup setup_of(const json& cfg) {
    WnlgoSetup s;
    s.d = cfg.at("d").get<int>();
    s.sigma = cfg.at("sigma").get<int>();
    s.mu = cfg.at("mu").get<int>();
    s.J = cfg.at("J").get<double>();
    if (cfg.contains("T")) s.T = cfg.at("T").get<double>();
    if (cfg.contains("samples")) s.samples = cfg.at("samples").get<int>();
    s.dxi = cfg.at("dxi").get<double>();
    s.profile_halfwidth = cfg.at("profile_halfwidth").get<double>();
    s.amp = cfg.at("amp").get<double>();
    s.radius = cfg.at("radius").get<double>();
    s.margin = cfg.at("margin").get<double>();
    s.dt_factor = cfg.at("dt_factor").get<double>();
    s.ud.oversample = cfg.at("ud_oversample").get<int>();
    if (s.d == 1) s.modes = {Vec{1, 0, 0}, Vec{-1, 0, 0}};
    return s;
}

std::vector<XVariant> x_of(const json& cfg) {
    auto x = cfg.at("x").get<std::string>();
    if (x == "fl") return {XVariant::FL1_FLinf};
    if (x == "mod") return {XVariant::FL1_M11};
    if (x == "both") return {XVariant::FL1_FLinf, XVariant::FL1_M11};
    throw AppError(kConfigError, "x must be fl, mod or both");
}

Vec parse_vec(const std::string& s, int d) {
    Vec v{0, 0, 0};
    std::stringstream ss(s);
    std::string item;
    int n = 0;
    while (std::getline(ss, item, ',')) {
        if (n >= d) throw AppError(kConfigError, "j has more entries than d");
        v[n++] = std::stoi(item);
    }
    if (n != d) throw AppError(kConfigError, "j needs d comma-separated integers");
    return v;
}

std::string vec_str(const Vec& v, int d) {
    if (d == 1) return std::to_string(v[0]);
    std::string s = "(";
    for (int a = 0; a < d; ++a) s += (a ? ";" : "") + std::to_string(v[a]);
    return s + ")";
}

// Full-grid size the split-step run needs at the smallest eps.
std::size_t wnlgo_grid_size(const WnlgoSetup& s, const std::vector<double>& eps) {
    double e = *std::min_element(eps.begin(), eps.end());
    int jmax = 1;
    for (const auto& j : s.initial_modes())
        for (int a = 0; a < s.d; ++a) jmax = std::max(jmax, std::abs(j[a]));
    double half = std::max(2.0 * jmax / e + s.margin, jmax / e + s.profile_halfwidth + 2 * s.dxi);
    int M = good_fft_size(static_cast<int>(std::ceil(2.0 * half / s.dxi)));
    return static_cast<std::size_t>(std::pow(static_cast<double>(M), s.d));
}

void check_positive_int(const json& cfg, const char* key) {
    if (!cfg.at(key).is_number_integer() || cfg.at(key).get<int>() < 1)
        throw AppError(kConfigError, std::string(key) + " must be a positive integer");
}

int run_inflate(const json& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SpaceSpec sp = space_of(cfg);
    SweepConfig sc = sweep_of(cfg);
    int d = cfg.at("d"), sigma = cfg.at("sigma");
    auto Ns = dyadic_range(cfg.at("nmin").get<double>(), cfg.at("nmax").get<double>());
    SweepResult res = run_inflation_sweep(sp, d, sigma, Ns, sc);

    Csv csv;
    csv.header = {"N",   "R",    "A",         "T",   "norm0", "normU1",   "normU2s1", "tail",
                  "normT", "ratio_dom", "rho", "TN2", "normU4s1", "growth", "phase_ratio", "c_empirical",
                  "M",   "dxi",  "skipped"};
    json rows = json::array(), grids = json::array();
    std::vector<double> xs, growth, dom;
    for (const auto& r : res.rows) {
        csv.rows.push_back({format_double(r.N), format_double(r.R), format_double(r.A), format_double(r.T),
                            format_double(r.norm0), format_double(r.normU1), format_double(r.normU2s1),
                            format_double(r.tail), format_double(r.normT), format_double(r.ratio_dom),
                            format_double(r.rho), format_double(r.TN2), format_double(r.normU4s1),
                            format_double(r.growth), format_double(r.phase_ratio), format_double(r.c_empirical),
                            std::to_string(r.M), format_double(r.dxi), r.skipped ? "1" : "0"});
        rows.push_back({{"N", r.N}, {"R", r.R}, {"A", r.A}, {"T", r.T}, {"norm0", r.norm0}, {"normU1", r.normU1},
                        {"normU2s1", r.normU2s1}, {"normU4s1", r.normU4s1}, {"tail", format_double(r.tail)},
                        {"normT", r.normT}, {"ratio_dom", r.ratio_dom}, {"rho", r.rho}, {"TN2", r.TN2},
                        {"growth", r.growth}, {"phase_ratio", r.phase_ratio}, {"c_empirical", r.c_empirical},
                        {"skipped", r.skipped}, {"note", r.note}, {"audit", audit_to_json(r.audit)}});
        grids.push_back({{"N", r.N}, {"M", r.M}, {"dxi", r.dxi}, {"Xi", r.Xi}});
        if (!r.skipped) {
            xs.push_back(r.N);
            growth.push_back(r.growth);
            dom.push_back(r.ratio_dom);
        }
    }
    const std::string out = cfg.at("out"), stem = stem_of(out);
    write_atomic(out, csv.str());
    write_atomic(stem + ".json", json{{"config", cfg}, {"rows", rows}}.dump(2) + "\n");
    write_atomic(stem + "_growth.dat", plot_data(xs, growth, "N vs norm(psi(T)) / norm(psi0)"));
    write_atomic(stem + "_dominance.dat", plot_data(xs, dom, "N vs norm(U_{2 sigma + 1}) / norm(U_1)"));
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(stem + ".manifest.json", cfg, grids, wall);
    return kOk;
}

int run_wnlgo_error(const json& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    WnlgoSetup s = setup_of(cfg);
    auto eps = parse_eps_list(cfg.at("eps"));
    auto xs = x_of(cfg);
    if (wnlgo_grid_size(s, eps) > cfg.at("grid_budget").get<std::size_t>())
        throw AppError(kBudgetExceeded, "full grid for the smallest eps exceeds grid_budget");
    auto reports = wnlgo_error(eps, s, xs);

    Csv csv;
    csv.header = {"x", "eps", "error", "M"};
    for (int i = 1; i <= s.samples; ++i) csv.header.push_back("err_t" + std::to_string(i));
    json out_json = {{"config", cfg}, {"reports", json::array()}};
    json grids = json::array();
    const std::string out = cfg.at("out"), stem = stem_of(out);
    for (const auto& rep : reports) {
        std::vector<double> x, y;
        for (const auto& r : rep.rows) {
            std::vector<std::string> row = {rep.x_name, format_double(r.eps), format_double(r.error),
                                            std::to_string(r.M)};
            for (double e : r.per_time) row.push_back(format_double(e));
            csv.rows.push_back(row);
            x.push_back(r.eps);
            y.push_back(r.error);
            if (&rep == &reports.front()) grids.push_back({{"eps", r.eps}, {"M", r.M}, {"dxi", s.dxi}});
        }
        json rj = {{"x", rep.x_name}, {"monotone", rep.monotone}, {"eps", x}, {"error", y}};
        if (rep.monotone) rj["fit"] = {{"slope", rep.fit.slope}, {"intercept", rep.fit.intercept}, {"r2", rep.fit.r2}};
        out_json["reports"].push_back(rj);
        write_atomic(stem + "_" + rep.x_name + ".dat", plot_data(x, y, "eps vs error in " + rep.x_name));
    }
    write_atomic(out, csv.str());
    write_atomic(stem + ".json", out_json.dump(2) + "\n");
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(stem + ".manifest.json", cfg, grids, wall);
    for (const auto& rep : reports)
        if (!rep.monotone) std::cerr << "warning: error is not monotone in eps for " << rep.x_name << "; no slope\n";
    return kOk;
}

int run_loss_reg(const json& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    WnlgoSetup s = setup_of(cfg);
    auto eps = parse_eps_list(cfg.at("eps"));
    if (wnlgo_grid_size(s, eps) > cfg.at("grid_budget").get<std::size_t>())
        throw AppError(kBudgetExceeded, "full grid for the smallest eps exceeds grid_budget");
    LossReport rep = run_loss_experiment(cfg.at("s").get<double>(), eps, s, cfg.at("tau").get<double>(),
                                         cfg.at("modulation").get<bool>());
    Csv csv;
    csv.header = {"eps", "a0_tau"};
    for (const auto& [k, v] : rep.rows.front().norms0) csv.header.push_back("psi0:" + k);
    for (const auto& [k, v] : rep.rows.front().normsTau) csv.header.push_back("psitau:" + k);
    for (const auto& r : rep.rows) {
        std::vector<std::string> row = {format_double(r.eps), format_double(r.a0_tau)};
        for (const auto& [k, v] : r.norms0) row.push_back(format_double(v));
        for (const auto& [k, v] : r.normsTau) row.push_back(format_double(v));
        csv.rows.push_back(row);
    }
    auto fits = [](const std::map<std::string, LineFit>& m) {
        json j = json::object();
        for (const auto& [k, f] : m) j[k] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
        return j;
    };
    json out_json = {{"config", cfg},
                     {"J_window", {rep.j_lo, rep.j_hi}},
                     {"predicted_slope_psi0", rep.predicted0},
                     {"predicted_slope_psitau", rep.predictedTau},
                     {"fits_psi0", fits(rep.fits0)},
                     {"fits_psitau", fits(rep.fitsTau)}};
    const std::string out = cfg.at("out"), stem = stem_of(out);
    std::ostringstream plot;
    std::vector<double> x;
    for (const auto& r : rep.rows) x.push_back(r.eps);
    for (const auto& [k, v] : rep.rows.front().norms0) {
        std::vector<double> y;
        for (const auto& r : rep.rows) y.push_back(r.norms0.at(k));
        plot << plot_data(x, y, "eps vs psi0 " + k) << "\n\n";
    }
    for (const auto& [k, v] : rep.rows.front().normsTau) {
        std::vector<double> y;
        for (const auto& r : rep.rows) y.push_back(r.normsTau.at(k));
        plot << plot_data(x, y, "eps vs psitau " + k) << "\n\n";
    }
    write_atomic(out, csv.str());
    write_atomic(stem + ".json", out_json.dump(2) + "\n");
    write_atomic(stem + ".dat", plot.str());
    json grids = json::array();
    for (double e : eps) grids.push_back({{"eps", e}, {"dxi", s.dxi}});
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(stem + ".manifest.json", cfg, grids, wall);
    return kOk;
}

int run_resonance(const json& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    int d = cfg.at("d"), sigma = cfg.at("sigma"), window = cfg.at("window");
    Vec j = parse_vec(cfg.at("j").get<std::string>(), d);
    auto set = cfg.at("oracle").get<bool>() ? resonance_cubic_oracle(j, d, window) : resonance_set(j, d, sigma, window);
    Csv csv;
    for (int l = 1; l <= 2 * sigma + 1; ++l) csv.header.push_back("k" + std::to_string(l));
    csv.header.push_back("j");
    for (const auto& t : set) {
        std::vector<std::string> row;
        for (const auto& k : t.k) row.push_back(vec_str(k, d));
        row.push_back(vec_str(t.j, d));
        csv.rows.push_back(row);
    }
    const std::string out = cfg.at("out");
    write_atomic(out, csv.str());
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(stem_of(out) + ".manifest.json", cfg, json::array(), wall);
    return kOk;
}

int run_norm(const json& cfg) {
    const std::string in = cfg.at("in");
    if (in.empty()) throw AppError(kConfigError, "norm needs --in");
    if (!fs::exists(in)) throw AppError(kConfigError, "input field not found: " + in);
    SpectralField f;
    if (fs::path(in).extension() == ".json") {
        std::ifstream is(in);
        f = field_from_json(json::parse(is));
    } else {
        f = load_field(in);
    }
    const json& spec_j = cfg.at("spec");
    NormSpec spec = norm_spec_from_json(spec_j.is_string() ? json::parse(spec_j.get<std::string>()) : spec_j);
    double v = compute_norm(f, spec);
    std::cout << format_double(v) << "\n";
    const std::string out = cfg.at("out");
    if (!out.empty())
        write_atomic(out, json{{"spec", norm_spec_to_json(spec)}, {"value", format_double(v)}, {"M", f.grid.M},
                               {"d", f.grid.d}, {"Xi", f.grid.Xi}}
                              .dump(2) +
                              "\n");
    return kOk;
}

}  // namespace

void validate_config(const std::string& experiment, const json& cfg) {
    try {
        if (experiment == "inflate") {
            check_positive_int(cfg, "d");
            check_positive_int(cfg, "sigma");
            SpaceSpec sp = space_of(cfg);
            SweepConfig sc = sweep_of(cfg);
            if (!(sc.arule.divisor > 1.0)) throw AppError(kConfigError, "a_divisor must exceed 1");
            double lo = cfg.at("nmin"), hi = cfg.at("nmax");
            if (lo > hi) throw AppError(kConfigError, "nmin must not exceed nmax");
            for (double N : dyadic_range(lo, hi)) regime_params(N, cfg.at("d"), cfg.at("sigma"), sp, sc.arule);
        } else if (experiment == "wnlgo-error" || experiment == "loss-reg") {
            check_positive_int(cfg, "d");
            check_positive_int(cfg, "sigma");
            WnlgoSetup s = setup_of(cfg);
            if (!(s.J > 1.0 && s.J < 2.0)) throw AppError(kConfigError, "J must lie in (1, 2)");
            if (!(s.dxi > 0.0)) throw AppError(kConfigError, "dxi must be positive");
            for (double e : parse_eps_list(cfg.at("eps"))) {
                double m = 1.0 / (e * s.dxi);
                if (std::abs(m - std::round(m)) > 1e-9)
                    throw AppError(kConfigError, "1/(eps dxi) must be an integer so that j/eps is on the lattice");
            }
            if (experiment == "wnlgo-error") {
                x_of(cfg);
                if (!(s.T > 0.0) || s.samples < 1) throw AppError(kConfigError, "T and samples must be positive");
            } else {
                double sv = cfg.at("s");
                if (!(sv < -1.0 / (2.0 * s.sigma + 1.0))) throw AppError(kConfigError, "need s < -1/(2 sigma + 1)");
                if (s.d * s.sigma < 2) throw AppError(kConfigError, "need d sigma >= 2");
                auto [lo, hi] = j_window(s.sigma, sv);
                if (!(s.J > lo && s.J < hi))
                    throw AppError(kConfigError, "J outside the admissible window (" + format_double(lo) + ", " +
                                                     format_double(hi) + ")");
            }
        } else if (experiment == "resonance") {
            check_positive_int(cfg, "d");
            check_positive_int(cfg, "sigma");
            if (cfg.at("d").get<int>() > 3) throw AppError(kConfigError, "d must be at most 3");
            if (!cfg.at("window").is_number_integer() || cfg.at("window").get<int>() < 0)
                throw AppError(kConfigError, "window must be a nonnegative integer");
            parse_vec(cfg.at("j").get<std::string>(), cfg.at("d"));
            if (cfg.at("oracle").get<bool>() && (cfg.at("sigma") != 1 || cfg.at("d").get<int>() < 2))
                throw AppError(kConfigError, "the rectangle oracle needs d >= 2 and sigma = 1");
        } else if (experiment == "norm") {
            const json& spec_j = cfg.at("spec");
            norm_spec_from_json(spec_j.is_string() ? json::parse(spec_j.get<std::string>()) : spec_j);
        }
    } catch (const AppError&) {
        throw;
    } catch (const std::exception& e) {
        throw AppError(kConfigError, e.what());
    }
}

int run_experiment(const std::string& experiment, const json& cfg) {
    validate_config(experiment, cfg);
    if (experiment == "inflate") return run_inflate(cfg);
    if (experiment == "wnlgo-error") return run_wnlgo_error(cfg);
    if (experiment == "loss-reg") return run_loss_reg(cfg);
    if (experiment == "resonance") return run_resonance(cfg);
    if (experiment == "norm") return run_norm(cfg);
    throw AppError(kConfigError, "unknown experiment: " + experiment);
}

}  // namespace nlslab::app
