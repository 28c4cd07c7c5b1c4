#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/grid.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/picard.hpp"

namespace nlslab {

enum class SpaceKind { FL, MOD };

// FL{p, s} or MOD{q, s}; for MOD the norm is M^{2,q}_s.
struct SpaceSpec {
    SpaceKind kind = SpaceKind::FL;
    double exponent = 2.0;
    double s = -0.75;

    NormSpec norm() const;
    std::string name() const;
};

// How the cube side A is tied to N.
//   LogPower: largest dyadic <= (log N)^{-(2 sigma + 2)/|s|} N
//   Linear:   largest dyadic <= N / divisor
enum class ARule { LogPower, Linear };
struct ARuleSpec {
    ARule rule = ARule::LogPower;
    double divisor = 16.0;
};

struct InflationDataSpec {
    int d = 1;
    int sigma = 1;
    SpaceSpec space;
    double N = 64;
    double A = 4;
    double R = 0.25;
    std::vector<std::array<double, 3>> centers;  // empty: {N e_d, -N e_d, 2N e_d}

    std::vector<std::array<double, 3>> effective_centers() const;
    double height() const;
};

// s_c(p) = d(1 - 1/p) - 1/sigma.
double critical_index_fl(int d, double p, int sigma);
// Upper bound on s for the inflation theorems (strict).
double inflation_threshold(const SpaceSpec& space, int d, int sigma);

// Field R A^{-d/p} N^{-s} chi_Omega (FL) or the two modulation heights, Omega a union of half-open A-cubes.
SpectralField make_inflation_data(const InflationDataSpec& spec, const FrequencyGrid& grid);

struct RegimeParams {
    double N = 0, R = 0, A = 0, T = 0;
    double A_formula = 0;  // value before dyadic rounding
    double rho = 0;        // rho_1, rho or rho_2 depending on the branch
    double TN2 = 0;
    std::string branch;
    std::vector<std::string> warnings;
};

double dyadic_floor(double x);
RegimeParams regime_params(double N, int d, int sigma, const SpaceSpec& space, const ARuleSpec& arule = {});

struct SweepConfig {
    ARuleSpec arule;
    int L_max = 2;
    int duhamel_nodes = 17;
    int nodes_per_cube = 8;      // lattice nodes per cube side
    double max_dxi = 0.125;      // spacing cap (unit windows need several nodes)
    double resolution = 1.0;     // extra refinement factor applied to dxi
    std::size_t grid_budget = std::size_t(1) << 22;  // max M^d
    int mu = 1;
};

// Grid resolving the A-cubes and holding the support of U_{2 sigma L + 1}.
FrequencyGrid inflation_grid(const InflationDataSpec& spec, const SweepConfig& cfg);

struct AuditEntry {
    int k = 0;
    std::string norm_spec;
    double measured = 0;
    double lemma_rhs = 0;
    double ratio = 0;
};
nlohmann::json audit_to_json(const std::vector<AuditEntry>& entries);

struct ExperimentRecord {
    double N = 0, R = 0, A = 0, T = 0;
    double norm0 = 0, normU1 = 0, normU2s1 = 0, normU4s1 = 0;
    double tail = 0, normT = 0, ratio_dom = 0, rho = 0, TN2 = 0;
    double growth = 0;       // normT / norm0
    double phase_ratio = 0;  // lower bound of Re int e^{i t Phi/2} / T on the support
    double c_empirical = 0;
    int M = 0;
    double dxi = 0, Xi = 0;
    bool skipped = false;
    std::string note;
    std::vector<AuditEntry> audit;
};

struct SweepResult {
    std::vector<ExperimentRecord> rows;
};

ExperimentRecord run_inflation_row(double N, int d, int sigma, const SpaceSpec& space, const SweepConfig& cfg);
SweepResult run_inflation_sweep(const SpaceSpec& space, int d, int sigma, const std::vector<double>& N_list,
                                const SweepConfig& cfg);

// Lemma right-hand sides with unit constants.
double lemma_rhs_lower(const SpaceSpec& space, int d, int sigma, const RegimeParams& rp);
double lemma_rhs_upper(const SpaceSpec& space, int d, int sigma, const RegimeParams& rp, int k);

// Audit of measured iterate norms against the lemma right-hand sides for one row.
std::vector<AuditEntry> bound_audit(PicardSolver& solver, const SpaceSpec& space, int sigma, const RegimeParams& rp);

}  // namespace nlslab
