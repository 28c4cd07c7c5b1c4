#pragma once

#include <functional>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

// Strang splitting for u_t = i (alpha/2) Delta u - i beta |u|^{2 sigma} u on the periodic dual box.
// Both sub-flows are solved exactly; the error is the splitting error O(dt^2).
struct SplitStepConfig {
    double alpha = 1.0;
    double beta = 1.0;
    int sigma = 1;
    double dt = 1e-3;  // upper bound; steps are shortened to land on every sample time
};

// Evolves u0 to each requested time (ascending, >= 0) and returns the states in order.
std::vector<SpectralField> split_step(const SpectralField& u0, const std::vector<double>& times,
                                      const SplitStepConfig& cfg);
SpectralField split_step(const SpectralField& u0, double t, const SplitStepConfig& cfg);

}  // namespace nlslab
