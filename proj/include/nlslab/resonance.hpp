#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nlslab {

using Vec = std::array<int, 3>;

// (k_1..k_{2 sigma + 1}) with sum (-1)^{l+1} k_l = j and sum (-1)^{l+1} |k_l|^2 = |j|^2.
struct ResonanceTuple {
    std::vector<Vec> k;
    Vec j{0, 0, 0};

    bool operator<(const ResonanceTuple& o) const { return k < o.k || (k == o.k && j < o.j); }
    bool operator==(const ResonanceTuple& o) const { return k == o.k && j == o.j; }
};

int dot(const Vec& a, const Vec& b, int d);
bool is_resonant(const std::vector<Vec>& k, const Vec& j, int d);

// Exhaustive enumeration over |k_l|_inf <= window, lexicographic order.
std::vector<ResonanceTuple> resonance_set(const Vec& j, int d, int sigma, int window,
                                          std::size_t cap = std::size_t(1) << 26);

// Cubic case from the rectangle picture: k_1, k_3 are the remaining corners of a rectangle with
// k_2 and j opposite, or one of the degenerate pairs k_1 = k_2 (k_3 = j) and k_3 = k_2 (k_1 = j).
std::vector<ResonanceTuple> resonance_cubic_oracle(const Vec& j, int d, int window);

// Resonant tuples with every entry drawn from the given mode list (any target).
std::vector<ResonanceTuple> resonant_tuples_among(const std::vector<Vec>& modes, int d, int sigma);

}  // namespace nlslab
