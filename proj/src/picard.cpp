#include "nlslab/picard.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include "nlslab/norms.hpp"
#include "nlslab/quadrature.hpp"

namespace nlslab {

void PicardConfig::validate() const {
    if (sigma < 1) throw std::invalid_argument("sigma must be a positive integer");
    if (mu != 1 && mu != -1) throw std::invalid_argument("mu must be +1 or -1");
    if (L_max < 2) throw std::invalid_argument("L_max must be at least 2");
    if (duhamel_nodes < 9) throw std::invalid_argument("duhamel_nodes must be at least 9");
    if (!(t >= 0.0)) throw std::invalid_argument("evaluation time must be non-negative");
    if (!(A > 0.0)) throw std::invalid_argument("cube side A must be positive");
}

bool admissible_index(int k, int sigma) { return k >= 1 && (k - 1) % (2 * sigma) == 0; }

const std::vector<std::vector<int>>& compositions(int k, int sigma) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(k, sigma);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    const int parts = 2 * sigma + 1;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int remaining) {
        if (static_cast<int>(cur.size()) == parts) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        int left = parts - static_cast<int>(cur.size()) - 1;
        for (int kj = 1; kj <= remaining - left; kj += 2 * sigma) {
            cur.push_back(kj);
            rec(remaining - kj);
            cur.pop_back();
        }
    };
    if (admissible_index(k, sigma) && k > 1) rec(k);
    return cache.emplace(key, std::move(out)).first->second;
}

std::vector<cplx> mu_sigma(const std::vector<const std::vector<cplx>*>& z, int sigma) {
    if (static_cast<int>(z.size()) != 2 * sigma + 1) throw std::invalid_argument("mu_sigma needs 2 sigma + 1 inputs");
    for (const auto* zi : z)
        if (zi->size() != z[0]->size()) throw std::invalid_argument("mu_sigma: grid mismatch");
    std::vector<cplx> out(*z[0]);
    for (int l = 1; l < 2 * sigma + 1; ++l) physical_multiply_inplace(out, *z[l], l >= sigma + 1);
    return out;
}

namespace {

SupportBox box_union(const SupportBox& a, const SupportBox& b) {
    if (a.empty) return b;
    if (b.empty) return a;
    SupportBox r = a;
    for (int k = 0; k < 3; ++k) {
        r.lo[k] = std::min(a.lo[k], b.lo[k]);
        r.hi[k] = std::max(a.hi[k], b.hi[k]);
    }
    return r;
}

}  // namespace

PicardSolver::PicardSolver(const SpectralField& psi0, const PicardConfig& cfg) : psi0_(psi0), cfg_(cfg) {
    cfg_.validate();
    const int sigma = cfg_.sigma;
    const int kmax = 2 * sigma * cfg_.L_max + 1;
    boxes_[1] = support_box(psi0_);
    for (int k = 2 * sigma + 1; k <= kmax; k += 2 * sigma) {
        const auto& comps = compositions(k, sigma);
        if (comps.size() > cfg_.max_compositions) throw GridError("composition count exceeds the configured budget");
        SupportBox total;
        for (const auto& c : comps) {
            SupportBox b = boxes_.at(c[0]);
            for (int l = 1; l < 2 * sigma + 1; ++l) {
                const SupportBox& bl = boxes_.at(c[l]);
                b = box_sum(b, l >= sigma + 1 ? box_reflect(bl) : bl);
            }
            total = box_union(total, b);
        }
        if (!box_fits(psi0_.grid, total))
            throw GridError("grid too small for the support of U_" + std::to_string(k));
        boxes_[k] = total;
    }
}

SupportBox PicardSolver::predicted_support(int k) const {
    auto it = boxes_.find(k);
    if (it == boxes_.end()) throw std::invalid_argument("iterate index not provisioned");
    return it->second;
}

SpectralField PicardSolver::nonlinear_term(int k, double tau) {
    const int sigma = cfg_.sigma;
    const auto& comps = compositions(k, sigma);
    std::map<int, std::vector<cplx>> phys;
    for (const auto& c : comps)
        for (int kj : c)
            if (!phys.count(kj)) phys.emplace(kj, to_physical(iterate(kj, tau)));
    const std::size_t n = psi0_.grid.size();
    std::vector<cplx> acc(n, cplx(0.0, 0.0));
    std::vector<const std::vector<cplx>*> z(2 * sigma + 1);
    for (const auto& c : comps) {
        for (int l = 0; l < 2 * sigma + 1; ++l) z[l] = &phys.at(c[l]);
        auto prod = mu_sigma(z, sigma);
        for (std::size_t i = 0; i < n; ++i) acc[i] += prod[i];
    }
    SpectralField r = to_frequency(psi0_.grid, acc);
    zero_outside(r, boxes_.at(k));
    return r;
}

const SpectralField& PicardSolver::iterate(int k, double t) {
    if (!admissible_index(k, cfg_.sigma))
        throw std::invalid_argument("U_k vanishes identically unless k = 1 mod 2 sigma");
    if (!boxes_.count(k)) throw GridError("iterate beyond the provisioned truncation");
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    auto key = std::make_pair(k, t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;

    auto result = std::make_unique<SpectralField>(psi0_.grid);
    if (k == 1) {
        *result = free_propagate(psi0_, t);
    } else if (t > 0.0) {
        const auto& rule = gauss_legendre(cfg_.duhamel_nodes);
        const cplx factor(0.0, -static_cast<double>(cfg_.mu));
        for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
            double tau = t * rule.nodes[m];
            SpectralField term = nonlinear_term(k, tau);
            free_propagate_inplace(term, t - tau);
            const cplx w = factor * (t * rule.weights[m]);
            for (std::size_t i = 0; i < term.values.size(); ++i) result->values[i] += w * term.values[i];
        }
        zero_outside(*result, boxes_.at(k));
    }
    return *memo_.emplace(key, std::move(result)).first->second;
}

PicardSum picard_sum(const SpectralField& psi0, const PicardConfig& cfg, std::optional<double> rho_override) {
    PicardSolver solver(psi0, cfg);
    return picard_sum(solver, rho_override);
}

PicardSum picard_sum(PicardSolver& solver, std::optional<double> rho_override) {
    const auto& cfg = solver.config();
    const auto& psi0 = solver.data();
    const int d = psi0.grid.d;
    const int sigma = cfg.sigma;
    const double t = cfg.t;
    PicardSum out;
    out.sum = SpectralField(psi0.grid);
    out.data_ma = ma_norm(psi0, cfg.A);
    const double scale = std::pow(cfg.A, 0.5 * d) * out.data_ma;
    out.rho = rho_override ? *rho_override : scale * std::pow(t, 1.0 / (2.0 * sigma));
    if (!(out.rho < cfg.rho_cap))
        throw std::domain_error("smallness parameter " + std::to_string(out.rho) + " is not below the cap " +
                                std::to_string(cfg.rho_cap) + "; the series is not provably summable");
    if (out.data_ma == 0.0) {
        for (int l = 0; l <= cfg.L_max; ++l) out.terms.emplace_back(2 * sigma * l + 1, SpectralField(psi0.grid));
        return out;
    }
    for (int l = 0; l <= cfg.L_max; ++l) {
        int k = 2 * sigma * l + 1;
        const auto& u = solver.iterate(k, t);
        out.terms.emplace_back(k, u);
        for (std::size_t i = 0; i < u.values.size(); ++i) out.sum.values[i] += u.values[i];
    }
    // Fit C in ||U_{2 sigma + 1}||_{M_A} <= t (C A^{d/2} M)^{2 sigma} M, then double it.
    double u3 = ma_norm(out.terms[1].second, cfg.A);
    if (t > 0.0) {
        out.c_empirical = std::pow(u3 / (t * out.data_ma), 1.0 / (2.0 * sigma)) / scale;
    }
    out.c_tail = 2.0 * out.c_empirical;
    out.q = t * std::pow(out.c_tail * scale, 2.0 * sigma);
    if (out.q < 1.0)
        out.tail = out.data_ma * std::pow(out.q, cfg.L_max + 1) / (1.0 - out.q);
    else
        out.tail = kInf;
    return out;
}

double support_measure(const SpectralField& f) { return static_cast<double>(support_count(f)) * f.grid.cell(); }

double phase_condition_ratio(double T, double phi_max) {
    double x = 0.5 * T * phi_max;
    if (x == 0.0) return 1.0;
    // sin(x)/x decreases on [0, x*] where x* ~ 4.4934 is its global minimiser
    constexpr double kArgMin = 4.493409457909064;
    return std::sin(std::min(x, kArgMin)) / std::min(x, kArgMin);
}

}  // namespace nlslab
