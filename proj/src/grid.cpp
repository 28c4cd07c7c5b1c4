#include "nlslab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace nlslab {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution on fresh arrays is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int d, int M, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(d, M, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<int> dims(d, M);
        std::size_t n = 1;
        for (int a = 0; a < d; ++a) n *= static_cast<std::size_t>(M);
        auto* buf = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft(d, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans_.emplace(key, p);
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const FrequencyGrid& g, std::vector<cplx>& data, int sign) {
    fftw_plan p = PlanCache::instance().get(g.d, g.M, sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, ptr, ptr);
}

// (-1)^{i_0 + ... + i_{d-1}} for a flat index.
inline double parity_sign(const FrequencyGrid& g, std::size_t flat) {
    int s = 0;
    for (int a = g.d - 1; a >= 0; --a) {
        s += static_cast<int>(flat % static_cast<std::size_t>(g.M));
        flat /= static_cast<std::size_t>(g.M);
    }
    return (s & 1) ? -1.0 : 1.0;
}

}  // namespace

double FrequencyGrid::dx() const { return kPi / Xi; }
double FrequencyGrid::period() const { return 2.0 * kPi / dxi(); }
double FrequencyGrid::cell() const { return std::pow(dxi(), d); }

std::size_t FrequencyGrid::size() const {
    std::size_t n = 1;
    for (int a = 0; a < d; ++a) n *= static_cast<std::size_t>(M);
    return n;
}

Offset FrequencyGrid::unravel(std::size_t flat) const {
    Offset idx{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % static_cast<std::size_t>(M));
        flat /= static_cast<std::size_t>(M);
    }
    return idx;
}

std::size_t FrequencyGrid::ravel(const Offset& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * static_cast<std::size_t>(M) + static_cast<std::size_t>(idx[a]);
    return flat;
}

int FrequencyGrid::offset_of(double xi) const { return static_cast<int>(std::lround(xi / dxi())); }

bool FrequencyGrid::on_lattice(double xi, double tol) const {
    double q = xi / dxi();
    return std::abs(q - std::round(q)) <= tol;
}

FrequencyGrid make_grid(int d, double Xi, int M) {
    if (d < 1 || d > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (!(Xi > 0.0) || !std::isfinite(Xi)) throw std::invalid_argument("grid half-width must be positive");
    if (M < 8 || M % 2 != 0) throw std::invalid_argument("points per axis must be even and >= 8");
    return FrequencyGrid{d, Xi, M};
}

int good_fft_size(int n) {
    if (n < 8) n = 8;
    for (int m = n + (n & 1);; m += 2) {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

FrequencyGrid grid_with_spacing(int d, double dxi, double min_halfwidth) {
    if (!(dxi > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    int need = static_cast<int>(std::ceil(2.0 * min_halfwidth / dxi - 1e-9)) + 2;
    int M = good_fft_size(need);
    return make_grid(d, 0.5 * M * dxi, M);
}

double SpectralField::xi(std::size_t flat, int axis) const {
    Offset idx = grid.unravel(flat);
    return grid.node(idx[axis]);
}

double SpectralField::xi2(std::size_t flat) const {
    Offset idx = grid.unravel(flat);
    double s = 0.0;
    for (int a = 0; a < grid.d; ++a) {
        double x = grid.node(idx[a]);
        s += x * x;
    }
    return s;
}

SupportBox support_box(const SpectralField& f) {
    SupportBox b;
    const auto& g = f.grid;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        if (f.values[n] == cplx(0.0, 0.0)) continue;
        Offset idx = g.unravel(n);
        for (int a = 0; a < g.d; ++a) {
            int o = idx[a] - g.half();
            if (b.empty) {
                b.lo[a] = b.hi[a] = o;
            } else {
                b.lo[a] = std::min(b.lo[a], o);
                b.hi[a] = std::max(b.hi[a], o);
            }
        }
        b.empty = false;
    }
    return b;
}

SupportBox box_sum(const SupportBox& a, const SupportBox& b) {
    SupportBox r;
    if (a.empty || b.empty) return r;
    r.empty = false;
    for (int k = 0; k < 3; ++k) {
        r.lo[k] = a.lo[k] + b.lo[k];
        r.hi[k] = a.hi[k] + b.hi[k];
    }
    return r;
}

SupportBox box_reflect(const SupportBox& a) {
    SupportBox r = a;
    for (int k = 0; k < 3; ++k) {
        r.lo[k] = -a.hi[k];
        r.hi[k] = -a.lo[k];
    }
    return r;
}

bool box_fits(const FrequencyGrid& g, const SupportBox& b) {
    if (b.empty) return true;
    for (int a = 0; a < g.d; ++a)
        if (b.lo[a] < -g.half() || b.hi[a] > g.half() - 1) return false;
    return true;
}

void zero_outside(SpectralField& f, const SupportBox& b) {
    const auto& g = f.grid;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        if (b.empty) {
            f.values[n] = 0.0;
            continue;
        }
        Offset idx = g.unravel(n);
        for (int a = 0; a < g.d; ++a) {
            int o = idx[a] - g.half();
            if (o < b.lo[a] || o > b.hi[a]) {
                f.values[n] = 0.0;
                break;
            }
        }
    }
}

std::size_t support_count(const SpectralField& f) {
    return static_cast<std::size_t>(
        std::count_if(f.values.begin(), f.values.end(), [](const cplx& v) { return v != cplx(0.0, 0.0); }));
}

void truncate_below(SpectralField& f, double tol) {
    double mx = 0.0;
    for (const auto& v : f.values) mx = std::max(mx, std::abs(v));
    double cut = tol * mx;
    for (auto& v : f.values)
        if (std::abs(v) <= cut) v = 0.0;
}

double physical_coordinate(const FrequencyGrid& g, int j) { return (j - g.half()) * g.dx(); }

std::vector<cplx> to_physical(const SpectralField& f) {
    const auto& g = f.grid;
    std::vector<cplx> out(f.values);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= parity_sign(g, n);
    execute(g, out, FFTW_BACKWARD);
    double scale = g.cell() * (((g.d * g.half()) & 1) ? -1.0 : 1.0);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= scale * parity_sign(g, n);
    return out;
}

SpectralField to_frequency(const FrequencyGrid& g, const std::vector<cplx>& phys) {
    if (phys.size() != g.size()) throw std::invalid_argument("physical sample count does not match grid");
    SpectralField f(g);
    f.values = phys;
    for (std::size_t n = 0; n < f.values.size(); ++n) f.values[n] *= parity_sign(g, n);
    execute(g, f.values, FFTW_FORWARD);
    double scale = std::pow(g.dx() / (2.0 * kPi), g.d) * (((g.d * g.half()) & 1) ? -1.0 : 1.0);
    for (std::size_t n = 0; n < f.values.size(); ++n) f.values[n] *= scale * parity_sign(g, n);
    return f;
}

void free_propagate_inplace(SpectralField& f, double t, double alpha) {
    if (t == 0.0 || alpha == 0.0) return;
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        if (f.values[n] == cplx(0.0, 0.0)) continue;
        double ph = -0.5 * t * alpha * f.xi2(n);
        f.values[n] *= cplx(std::cos(ph), std::sin(ph));
    }
}

SpectralField free_propagate(const SpectralField& f, double t, double alpha) {
    SpectralField r = f;
    free_propagate_inplace(r, t, alpha);
    return r;
}

SpectralField shift_frequency(const SpectralField& f, const Offset& shift) {
    const auto& g = f.grid;
    SpectralField r(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        if (f.values[n] == cplx(0.0, 0.0)) continue;
        Offset idx = g.unravel(n);
        for (int a = 0; a < g.d; ++a) {
            idx[a] += shift[a];
            if (idx[a] < 0 || idx[a] >= g.M) throw GridError("frequency shift moves support off the lattice");
        }
        r.values[g.ravel(idx)] = f.values[n];
    }
    return r;
}

SpectralField resize_grid(const SpectralField& f, int M_new) {
    const auto& g = f.grid;
    FrequencyGrid ng = make_grid(g.d, 0.5 * M_new * g.dxi(), M_new);
    SpectralField r(ng);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        if (f.values[n] == cplx(0.0, 0.0)) continue;
        Offset idx = g.unravel(n);
        bool inside = true;
        for (int a = 0; a < g.d; ++a) {
            idx[a] += ng.half() - g.half();
            if (idx[a] < 0 || idx[a] >= ng.M) inside = false;
        }
        if (inside) r.values[ng.ravel(idx)] = f.values[n];
    }
    return r;
}

namespace {

Offset lattice_offset(const FrequencyGrid& g, const std::array<double, 3>& v, const char* what) {
    Offset o{0, 0, 0};
    for (int a = 0; a < g.d; ++a) {
        if (!g.on_lattice(v[a])) throw GridError(std::string(what) + " is not a multiple of the lattice spacing");
        o[a] = g.offset_of(v[a]);
    }
    return o;
}

// f^ evaluated at arbitrary frequencies, separably, from the physical samples.
SpectralField resample_frequency(const SpectralField& f, double inv_lambda) {
    const auto& g = f.grid;
    std::vector<cplx> work = to_physical(f);
    const double w = g.dx() / (2.0 * kPi);
    for (int axis = 0; axis < g.d; ++axis) {
        std::vector<cplx> next(work.size());
        std::vector<cplx> kernel(static_cast<std::size_t>(g.M) * g.M);
        for (int i = 0; i < g.M; ++i) {
            double xi = g.node(i) * inv_lambda;
            for (int j = 0; j < g.M; ++j) {
                double ph = -physical_coordinate(g, j) * xi;
                kernel[static_cast<std::size_t>(i) * g.M + j] = w * cplx(std::cos(ph), std::sin(ph));
            }
        }
        for (std::size_t n = 0; n < work.size(); ++n) {
            Offset idx = g.unravel(n);
            cplx acc = 0.0;
            Offset src = idx;
            for (int j = 0; j < g.M; ++j) {
                src[axis] = j;
                acc += kernel[static_cast<std::size_t>(idx[axis]) * g.M + j] * work[g.ravel(src)];
            }
            next[n] = acc;
        }
        work.swap(next);
    }
    SpectralField r(g);
    r.values = std::move(work);
    return r;
}

}  // namespace

SpectralField apply_symmetry(const SpectralField& f, const Symmetry& s, const SymmetryOptions& opt) {
    const auto& g = f.grid;
    if (const auto* sc = std::get_if<Scaling>(&s)) {
        if (!(sc->lambda > 0.0) || !(sc->sigma > 0.0)) throw std::invalid_argument("scaling needs lambda > 0 and sigma > 0");
        // (lambda^{1/sigma} f(lambda x))^ = lambda^{1/sigma - d} f^(xi / lambda)
        double amp = std::pow(sc->lambda, 1.0 / sc->sigma - g.d);
        double inv = 1.0 / sc->lambda;
        double ri = std::round(inv);
        if (std::abs(inv - ri) < 1e-12 && ri >= 1.0) {
            int m = static_cast<int>(ri);
            SpectralField r(g);
            for (std::size_t n = 0; n < r.values.size(); ++n) {
                Offset idx = g.unravel(n);
                Offset src = idx;
                bool inside = true;
                for (int a = 0; a < g.d; ++a) {
                    src[a] = (idx[a] - g.half()) * m + g.half();
                    if (src[a] < 0 || src[a] >= g.M) inside = false;
                }
                if (inside) r.values[n] = amp * f.values[g.ravel(src)];
            }
            return r;
        }
        if (!opt.allow_resampling) throw GridError("scaling maps lattice nodes off the lattice; enable resampling");
        SpectralField r = resample_frequency(f, inv);
        for (auto& v : r.values) v *= amp;
        return r;
    }
    if (const auto* gal = std::get_if<Galilean>(&s)) {
        Offset o = lattice_offset(g, gal->v, "Galilean velocity");
        SpectralField r = shift_frequency(f, o);
        double v2 = 0.0;
        for (int a = 0; a < g.d; ++a) v2 += gal->v[a] * gal->v[a];
        for (std::size_t n = 0; n < r.values.size(); ++n) {
            if (r.values[n] == cplx(0.0, 0.0)) continue;
            Offset idx = g.unravel(n);
            double dot = 0.0;
            for (int a = 0; a < g.d; ++a) dot += (g.node(idx[a]) - gal->v[a]) * gal->v[a];
            double ph = -0.5 * v2 * gal->t - dot * gal->t;
            r.values[n] *= cplx(std::cos(ph), std::sin(ph));
        }
        return r;
    }
    if (const auto* tw = std::get_if<PlaneWaveTwist>(&s)) {
        if (opt.allow_resampling) {
            bool aligned = true;
            for (int a = 0; a < g.d; ++a) aligned = aligned && g.on_lattice(tw->k[a]);
            if (!aligned) {
                // multiply the physical samples by e^{ik.x}
                std::vector<cplx> phys = to_physical(f);
                for (std::size_t n = 0; n < phys.size(); ++n) {
                    Offset idx = g.unravel(n);
                    double ph = 0.0;
                    for (int a = 0; a < g.d; ++a) ph += tw->k[a] * physical_coordinate(g, idx[a]);
                    phys[n] *= cplx(std::cos(ph), std::sin(ph));
                }
                return to_frequency(g, phys);
            }
        }
        return shift_frequency(f, lattice_offset(g, tw->k, "twist wave vector"));
    }
    const auto& tr = std::get<Translate>(s);
    SpectralField r = f;
    for (std::size_t n = 0; n < r.values.size(); ++n) {
        Offset idx = g.unravel(n);
        double ph = 0.0;
        for (int a = 0; a < g.d; ++a) ph -= g.node(idx[a]) * tr.k[a];
        r.values[n] *= cplx(std::cos(ph), std::sin(ph));
    }
    return r;
}

void physical_multiply_inplace(std::vector<cplx>& acc, const std::vector<cplx>& z, bool conjugate) {
    if (conjugate)
        for (std::size_t n = 0; n < acc.size(); ++n) acc[n] *= std::conj(z[n]);
    else
        for (std::size_t n = 0; n < acc.size(); ++n) acc[n] *= z[n];
}

SpectralField multiply_fields(const SpectralField& f, const SpectralField& g) {
    if (f.grid != g.grid) throw std::invalid_argument("multiply_fields: grid mismatch");
    SupportBox target = box_sum(support_box(f), support_box(g));
    if (!box_fits(f.grid, target)) throw GridError("product support exceeds the lattice; enlarge the grid");
    std::vector<cplx> a = to_physical(f);
    physical_multiply_inplace(a, to_physical(g), false);
    SpectralField r = to_frequency(f.grid, a);
    zero_outside(r, target);
    return r;
}

}  // namespace nlslab
