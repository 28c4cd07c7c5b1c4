#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nlslab {

// Gauss-Legendre rule mapped to [0, 1]; weights sum to 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least-squares fit of log(y) against log(x).
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Worker count from NLSLAB_THREADS (default: hardware concurrency, at least 1).
int thread_count();
// Runs body(i) for i in [0, n). Results must be written to per-index slots so order does not matter.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nlslab
