#pragma once

#include <limits>
#include <map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nlslab/grid.hpp"

namespace nlslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct FourierLebesgue {
    double p = 2.0;
    double s = 0.0;
};
enum class ModMethod { UD, STFT };
struct Modulation {
    double p = 2.0;
    double q = 2.0;
    double s = 0.0;
    ModMethod method = ModMethod::UD;
};
struct Sobolev {
    double s = 0.0;
};
struct MA {
    double A = 1.0;
};
enum class XVariant { FL1_FLinf, FL1_M11 };
struct XNorm {
    XVariant variant = XVariant::FL1_FLinf;
};
using NormSpec = std::variant<FourierLebesgue, Modulation, Sobolev, MA, XNorm>;

NormSpec norm_spec_from_json(const nlohmann::json& j);
nlohmann::json norm_spec_to_json(const NormSpec& spec);
std::string describe(const NormSpec& spec);

// Japanese bracket <xi> = sqrt(1 + |xi|^2).
double bracket(double xi2);

double fourier_lebesgue_norm(const SpectralField& f, double p, double s);
double sobolev_norm(const SpectralField& f, double s);

// Smooth bump: 1 on [-1/2, 1/2], zero outside (-1, 1).
double bump(double x);

// Uniform decomposition sigma_n = rho(. - n) / sum_l rho(. - l), rho a tensor bump,
// sampled on a grid for windows n in [lo, hi] per axis.
class Partition {
public:
    Partition(const FrequencyGrid& g, const Offset& lo, const Offset& hi);
    // Window covering the support of f with one cube of margin.
    static Partition covering(const SpectralField& f);

    const FrequencyGrid& grid() const { return grid_; }
    const Offset& lo() const { return lo_; }
    const Offset& hi() const { return hi_; }

    // Per-axis factor of sigma_n at lattice index i; zero when |xi_i - n| >= 1.
    double factor(int axis, int n, int i) const;
    double value(const Offset& n, const Offset& idx) const;
    // Lattice index range [first, last] where the axis factor for n can be nonzero.
    std::pair<int, int> reach(int axis, int n) const;
    // Whether every n touching lattice index i on this axis lies inside the window.
    bool covers(int axis, int i) const;
    bool covers_node(const Offset& idx) const;

    // Max deviation of sum_n sigma_n from 1 over covered nodes.
    double unity_error() const;

    // Raw table access; exposed for fault-injection tests.
    std::vector<double>& table(int axis) { return table_[axis]; }

private:
    FrequencyGrid grid_;
    Offset lo_, hi_;
    int width_ = 0;  // lattice nodes per unit window (one-sided reach)
    std::vector<double> table_[3];
};

struct UDOptions {
    int oversample = 8;       // local FFT size is at least oversample * window nodes
    bool full_grid = false;   // use the full physical grid for every window
};

double modulation_norm_ud(const SpectralField& f, double p, double q, double s, const UDOptions& opt = {});
double modulation_norm_ud(const SpectralField& f, double p, double q, double s, const Partition& part,
                          const UDOptions& opt = {});

// STFT with the unit-mass Gaussian window of the given width.
double modulation_norm_stft(const SpectralField& f, double p, double q, double s, double window_width = 1.0);

// Sum over half-open cubes xi + [-A/2, A/2)^d, xi in A Z^d, of the local L2 norm of f^.
double ma_norm(const SpectralField& f, double A);
// Per-cube local L2 norms keyed by cube index.
std::map<Offset, double> ma_cube_norms(const SpectralField& f, double A);

double xnorm(const SpectralField& f, XVariant v);

double compute_norm(const SpectralField& f, const NormSpec& spec);

// Branch value f^p_s(A): 1 if s < -d/p, (log A)^{1/p} if s = -d/p, A^{d/p + s} otherwise.
double weight_profile_fl(double A, double p, double s, int d);
// ||<.>^s||_{L^p(Q_A)} by midpoint quadrature.
double weight_profile_fl_numeric(double A, double p, double s, int d, int per_unit = 8);
// Branch value g^q_s(A): 1 if -sq > d, (log A)^{1/q} if -sq = d, A^{1/q + s} otherwise.
double weight_profile_mod(double A, double q, double s, int d);
// ||(1+|n|)^s||_{l^q(0 <= |n| <= A)} by exact enumeration.
double lattice_weight_sum(double A, double q, double s, int d);

}  // namespace nlslab
