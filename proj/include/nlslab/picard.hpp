#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

struct PicardConfig {
    int sigma = 1;
    int mu = 1;             // +1 defocusing, -1 focusing
    int L_max = 2;          // keep U_{2 sigma l + 1} for l <= L_max
    int duhamel_nodes = 17;
    double t = 0.0;
    double A = 1.0;         // cube side of the M_A space used for the tail bound
    double rho_cap = 0.5;
    std::size_t max_compositions = 200000;

    void validate() const;
};

bool admissible_index(int k, int sigma);
// Ordered tuples (k_1..k_{2 sigma + 1}) of admissible indices with sum k, lexicographic order.
const std::vector<std::vector<int>>& compositions(int k, int sigma);

// mu_sigma(z_1..z_{2 sigma + 1}) = prod_{l <= sigma+1} z_l prod_{m > sigma+1} conj(z_m), pointwise.
std::vector<cplx> mu_sigma(const std::vector<const std::vector<cplx>*>& z, int sigma);

class PicardSolver {
public:
    PicardSolver(const SpectralField& psi0, const PicardConfig& cfg);

    // U_k(t); k must be admissible. Results are memoized on (k, t).
    const SpectralField& iterate(int k, double t);
    // Predicted support box of U_k from Minkowski sums of the data support.
    SupportBox predicted_support(int k) const;
    const PicardConfig& config() const { return cfg_; }
    const SpectralField& data() const { return psi0_; }

private:
    SpectralField nonlinear_term(int k, double tau);

    SpectralField psi0_;
    PicardConfig cfg_;
    std::map<int, SupportBox> boxes_;
    std::map<std::pair<int, double>, std::unique_ptr<SpectralField>> memo_;
    std::recursive_mutex mutex_;
};

struct PicardSum {
    SpectralField sum;
    std::vector<std::pair<int, SpectralField>> terms;
    double data_ma = 0.0;    // M = ||psi0||_{M_A}
    double rho = 0.0;        // smallness parameter used for admission
    double c_empirical = 0.0;
    double c_tail = 0.0;     // 2 * c_empirical
    double q = 0.0;          // geometric ratio t (C A^{d/2} M)^{2 sigma}
    double tail = 0.0;       // M_A bound on the neglected terms (inf when q >= 1)
};

// Truncated series sum_{l <= L_max} U_{2 sigma l + 1}(t) with the geometric M_A tail bound.
// rho_override replaces the generic A^{d/2} M t^{1/(2 sigma)} admission parameter.
PicardSum picard_sum(const SpectralField& psi0, const PicardConfig& cfg, std::optional<double> rho_override = {});
PicardSum picard_sum(PicardSolver& solver, std::optional<double> rho_override = {});

// Lattice measure of the nonzero set: node count times dxi^d.
double support_measure(const SpectralField& f);

// Lower bound of Re int_0^T exp(i t Phi / 2) dt / T over |Phi| <= phi_max.
double phase_condition_ratio(double T, double phi_max);

}  // namespace nlslab
