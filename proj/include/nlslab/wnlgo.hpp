#pragma once

#include <map>
#include <string>
#include <vector>

#include "nlslab/grid.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/quadrature.hpp"
#include "nlslab/resonance.hpp"

namespace nlslab {

// Profiles a_j(t, .) of the ansatz sum_j a_j exp(i phi_j / eps), phi_j = j.x - |j|^2 t / 2.
// All profiles share one small frequency grid whose spacing matches the full simulation grid.
struct ProfileSet {
    int d = 2;
    int sigma = 1;
    int mu = 1;
    double eps = 0.125;
    double J = 1.3;
    double t = 0.0;
    FrequencyGrid grid;
    std::map<Vec, SpectralField> a;

    double coupling() const;  // mu eps^{J-1}
    std::vector<Vec> modes() const;
};

struct ProfileConfig {
    double panel = 0.05;     // max panel length in profile time
    int gauss_nodes = 4;     // collocation nodes per panel
    double tol = 1e-10;      // successive-difference tolerance (FL^1 summed over modes)
    int max_iter = 50;
    int window = 4;          // resonance window for the closure of the mode set
};

// Initial modes plus every target reachable by one resonant interaction among them.
std::vector<Vec> first_generation_closure(const std::vector<Vec>& initial, int d, int sigma);
// Whether the mode list is closed under resonant interactions.
bool closed_under_resonance(const std::vector<Vec>& modes, int d, int sigma);

// Profile set with prescribed initial profiles and zero profiles on the closure modes.
ProfileSet make_profile_set(int d, int sigma, int mu, double eps, double J, const FrequencyGrid& grid,
                            const std::map<Vec, SpectralField>& initial);

// Right-hand side -i mu eps^{J-1} sum_{R_j} a_{k1} conj(a_{k2}) a_{k3}... on the profile grid (dealiased).
std::map<Vec, SpectralField> resonant_forcing(const ProfileSet& ps);

// Duhamel form in the moving frames, solved panel by panel with Gauss collocation and
// fixed-point iteration. Returns the profiles at each requested time (ascending).
std::vector<ProfileSet> evolve_profiles(const ProfileSet& ps, const std::vector<double>& times,
                                        const ProfileConfig& cfg = {});
ProfileSet evolve_profiles(const ProfileSet& ps, double T, const ProfileConfig& cfg = {});

struct AssembleOptions {
    bool allow_overlap = false;  // shifted profile supports may overlap (superposition)
};

// u_app^(t, xi) = sum_j exp(-i t |j|^2 / (2 eps)) a_j^(t, xi - j/eps) on the target grid.
SpectralField assemble_uapp(const ProfileSet& ps, const FrequencyGrid& target, const AssembleOptions& opt = {});

// eps-dependent rescaling psi(eps t, x) = eps^{(J-2)/(2 sigma)} u(t, x) and its inverse.
SpectralField psi_from_u(const SpectralField& u, double eps, double J, int sigma);
SpectralField u_from_psi(const SpectralField& psi, double eps, double J, int sigma);

// Compactly supported smooth bump profile: amp * bump(|xi| / radius) on the frequency side.
SpectralField bump_profile(const FrequencyGrid& g, double amp, double radius);

struct WnlgoSetup {
    int d = 2;
    int sigma = 1;
    int mu = 1;
    double J = 1.3;
    double T = 1.0;
    int samples = 4;          // sample times T/samples, ..., T
    double dxi = 0.5;
    double profile_halfwidth = 8.0;
    double amp = 0.05;
    double radius = 2.0;
    double margin = 24.0;     // extra half-width beyond 2/eps on the full grid
    double dt_factor = 0.05;  // split-step dt = dt_factor * eps
    std::vector<Vec> modes;   // initial modes; default (1,0), (1,1), (0,1)
    ProfileConfig profile;
    UDOptions ud;

    std::vector<Vec> initial_modes() const;
};

struct WnlgoErrorRow {
    double eps = 0;
    double error = 0;      // max over sample times
    std::vector<double> per_time;
    int M = 0;
    double seconds = 0;
};

struct WnlgoErrorReport {
    std::vector<WnlgoErrorRow> rows;
    LineFit fit;
    bool monotone = true;
    std::string x_name;
};

// Error of u_app against the split-step solution in the given X norms (one report per norm).
std::vector<WnlgoErrorReport> wnlgo_error(const std::vector<double>& eps_list, const WnlgoSetup& setup,
                                          const std::vector<XVariant>& norms);

struct LossRow {
    double eps = 0;
    std::map<std::string, double> norms0;   // psi(0) norms keyed by spec
    std::map<std::string, double> normsTau; // psi(eps tau) norms keyed by spec
    double a0_tau = 0;                       // ||a_0(tau)||_{FL^2}
};

struct LossReport {
    std::vector<LossRow> rows;
    std::map<std::string, LineFit> fits0;
    std::map<std::string, LineFit> fitsTau;
    double j_lo = 0, j_hi = 0;  // admissible J window
    double predicted0 = 0, predictedTau = 0;
};

// J window (2 - 2 sigma |s|, (2 sigma + 2)/(2 sigma + 1)) intersected with (1, 2); throws when empty.
std::pair<double, double> j_window(int sigma, double s);

LossReport run_loss_experiment(double s, const std::vector<double>& eps_list, const WnlgoSetup& setup, double tau = 0.5,
                               bool include_modulation = true);

}  // namespace nlslab
