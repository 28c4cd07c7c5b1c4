#include "nlslab/splitstep.hpp"

#include <cmath>
#include <stdexcept>

namespace nlslab {

namespace {

std::vector<cplx> half_step_multiplier(const FrequencyGrid& g, double alpha, double h) {
    SpectralField probe(g);
    std::vector<cplx> m(g.size());
    for (std::size_t n = 0; n < m.size(); ++n) {
        double ph = -0.25 * alpha * h * probe.xi2(n);
        m[n] = cplx(std::cos(ph), std::sin(ph));
    }
    return m;
}

}  // namespace

std::vector<SpectralField> split_step(const SpectralField& u0, const std::vector<double>& times,
                                      const SplitStepConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (cfg.sigma < 1) throw std::invalid_argument("sigma must be positive");
    const auto& g = u0.grid;
    std::vector<SpectralField> out;
    SpectralField u = u0;
    double now = 0.0;
    for (double target : times) {
        if (target < now - 1e-15) throw std::invalid_argument("sample times must be ascending and non-negative");
        double span = target - now;
        int steps = static_cast<int>(std::ceil(span / cfg.dt - 1e-9));
        if (steps > 0) {
            double h = span / steps;
            auto half = half_step_multiplier(g, cfg.alpha, h);
            for (int s = 0; s < steps; ++s) {
                for (std::size_t n = 0; n < u.values.size(); ++n) u.values[n] *= half[n];
                auto phys = to_physical(u);
                for (auto& z : phys) {
                    double ph = -cfg.beta * std::pow(std::norm(z), cfg.sigma) * h;
                    z *= cplx(std::cos(ph), std::sin(ph));
                }
                u = to_frequency(g, phys);
                for (std::size_t n = 0; n < u.values.size(); ++n) u.values[n] *= half[n];
            }
        }
        now = target;
        out.push_back(u);
    }
    return out;
}

SpectralField split_step(const SpectralField& u0, double t, const SplitStepConfig& cfg) {
    return split_step(u0, std::vector<double>{t}, cfg).front();
}

}  // namespace nlslab
