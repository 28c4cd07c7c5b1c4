#include "nlslab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace nlslab {

int dot(const Vec& a, const Vec& b, int d) {
    int s = 0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

bool is_resonant(const std::vector<Vec>& k, const Vec& j, int d) {
    Vec lin{0, 0, 0};
    int quad = 0;
    for (std::size_t l = 0; l < k.size(); ++l) {
        int sgn = (l % 2 == 0) ? 1 : -1;
        for (int a = 0; a < d; ++a) lin[a] += sgn * k[l][a];
        quad += sgn * dot(k[l], k[l], d);
    }
    for (int a = 0; a < d; ++a)
        if (lin[a] != j[a]) return false;
    return quad == dot(j, j, d);
}

namespace {

void check_dims(int d, int sigma, int window) {
    if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
    if (sigma < 1) throw std::invalid_argument("sigma must be positive");
    if (window < 0) throw std::invalid_argument("window must be non-negative");
}

bool in_window(const Vec& v, int d, int window) {
    for (int a = 0; a < d; ++a)
        if (std::abs(v[a]) > window) return false;
    return true;
}

// All lattice points of the cube [-window, window]^d.
std::vector<Vec> cube_points(int d, int window) {
    std::vector<Vec> pts;
    Vec v{0, 0, 0};
    for (int a = 0; a < d; ++a) v[a] = -window;
    while (true) {
        pts.push_back(v);
        int a = d - 1;
        while (a >= 0) {
            if (++v[a] <= window) break;
            v[a] = -window;
            --a;
        }
        if (a < 0) break;
    }
    return pts;
}

}  // namespace

std::vector<ResonanceTuple> resonance_set(const Vec& j, int d, int sigma, int window, std::size_t cap) {
    check_dims(d, sigma, window);
    const int parts = 2 * sigma + 1;
    auto pts = cube_points(d, window);
    // the last entry is fixed by the linear identity, so (2 sigma) free entries are enumerated
    double work = std::pow(static_cast<double>(pts.size()), parts - 1);
    if (work > static_cast<double>(cap)) throw std::length_error("resonance window exceeds the enumeration budget");
    std::vector<ResonanceTuple> out;
    std::vector<std::size_t> idx(parts - 1, 0);
    std::vector<Vec> k(parts);
    while (true) {
        Vec last = j;
        for (int l = 0; l < parts - 1; ++l) {
            k[l] = pts[idx[l]];
            int sgn = (l % 2 == 0) ? 1 : -1;
            for (int a = 0; a < d; ++a) last[a] -= sgn * k[l][a];
        }
        // last entry has sign +1 (parts is odd)
        k[parts - 1] = last;
        if (in_window(last, d, window) && is_resonant(k, j, d)) out.push_back({k, j});
        int l = parts - 2;
        while (l >= 0) {
            if (++idx[l] < pts.size()) break;
            idx[l] = 0;
            --l;
        }
        if (l < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ResonanceTuple> resonance_cubic_oracle(const Vec& j, int d, int window) {
    if (d < 2) throw std::invalid_argument("cubic rectangle oracle needs d >= 2");
    check_dims(d, 1, window);
    auto pts = cube_points(d, window);
    std::set<ResonanceTuple> found;
    for (const auto& k2 : pts) {
        // degenerate families
        if (in_window(j, d, window)) {
            found.insert({{k2, k2, j}, j});
            found.insert({{j, k2, k2}, j});
        }
        // non-degenerate rectangles: k1 on the sphere with diameter [k2, j], k3 the opposite corner
        for (const auto& k1 : pts) {
            Vec u{0, 0, 0}, w{0, 0, 0}, k3{0, 0, 0};
            for (int a = 0; a < d; ++a) {
                u[a] = k1[a] - k2[a];
                w[a] = j[a] - k1[a];
                k3[a] = j[a] - k1[a] + k2[a];
            }
            if (dot(u, u, d) == 0 || dot(w, w, d) == 0) continue;
            if (dot(u, w, d) != 0) continue;
            if (!in_window(k3, d, window)) continue;
            found.insert({{k1, k2, k3}, j});
        }
    }
    return {found.begin(), found.end()};
}

std::vector<ResonanceTuple> resonant_tuples_among(const std::vector<Vec>& modes, int d, int sigma) {
    const int parts = 2 * sigma + 1;
    std::vector<ResonanceTuple> out;
    if (modes.empty()) return out;
    std::vector<std::size_t> idx(parts, 0);
    std::vector<Vec> k(parts);
    while (true) {
        Vec j{0, 0, 0};
        for (int l = 0; l < parts; ++l) {
            k[l] = modes[idx[l]];
            int sgn = (l % 2 == 0) ? 1 : -1;
            for (int a = 0; a < d; ++a) j[a] += sgn * k[l][a];
        }
        if (is_resonant(k, j, d)) out.push_back({k, j});
        int l = parts - 1;
        while (l >= 0) {
            if (++idx[l] < modes.size()) break;
            idx[l] = 0;
            --l;
        }
        if (l < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace nlslab
