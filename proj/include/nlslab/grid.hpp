#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;
using Offset = std::array<int, 3>;

// Thrown when a computation would need more grid than was provisioned.
struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform frequency lattice xi_i = -Xi + i*dxi, i in {0..M-1}^d.
// The physical side is the periodic box of length 2*pi/dxi with M points per axis.
struct FrequencyGrid {
    int d = 1;
    double Xi = 1.0;
    int M = 8;

    double dxi() const { return 2.0 * Xi / M; }
    double dx() const;
    double period() const;
    double cell() const;  // dxi^d
    std::size_t size() const;
    int half() const { return M / 2; }

    // Frequency of lattice index i along one axis (offset i - M/2 times dxi).
    double node(int i) const { return (i - M / 2) * dxi(); }
    Offset unravel(std::size_t flat) const;
    std::size_t ravel(const Offset& idx) const;
    // Lattice offset (index - M/2) of the node closest to xi; exact when xi is on-lattice.
    int offset_of(double xi) const;
    bool on_lattice(double xi, double tol = 1e-9) const;

    bool operator==(const FrequencyGrid& o) const { return d == o.d && M == o.M && Xi == o.Xi; }
    bool operator!=(const FrequencyGrid& o) const { return !(*this == o); }
};

FrequencyGrid make_grid(int d, double Xi, int M);
// Grid with the given spacing and at least the given half-width; M is an FFT-friendly even size.
FrequencyGrid grid_with_spacing(int d, double dxi, double min_halfwidth);
// Smallest even integer >= n of the form 2^a 3^b 5^c.
int good_fft_size(int n);

struct SpectralField {
    FrequencyGrid grid;
    std::vector<cplx> values;

    SpectralField() = default;
    explicit SpectralField(const FrequencyGrid& g) : grid(g), values(g.size()) {}

    double xi(std::size_t flat, int axis) const;
    double xi2(std::size_t flat) const;  // |xi|^2
};

// Axis-aligned box of lattice offsets (index - M/2), inclusive on both ends.
struct SupportBox {
    bool empty = true;
    Offset lo{0, 0, 0};
    Offset hi{0, 0, 0};
};

SupportBox support_box(const SpectralField& f);
SupportBox box_sum(const SupportBox& a, const SupportBox& b);
SupportBox box_reflect(const SupportBox& a);  // support of conj in physical space
bool box_fits(const FrequencyGrid& g, const SupportBox& b);
void zero_outside(SpectralField& f, const SupportBox& b);
std::size_t support_count(const SpectralField& f);

// Sets values with |v| <= tol * max|v| to zero (finite support for rapidly decaying data).
void truncate_below(SpectralField& f, double tol);

// Discrete transform pair consistent with f^(xi) = (2pi)^-d int e^{-ix.xi} f(x) dx.
// Physical samples sit at x_j = (j - M/2) dx.
std::vector<cplx> to_physical(const SpectralField& f);
SpectralField to_frequency(const FrequencyGrid& g, const std::vector<cplx>& phys);
double physical_coordinate(const FrequencyGrid& g, int j);

// e^{i t alpha/2 Delta}: multiplies by exp(-i t alpha |xi|^2 / 2).
SpectralField free_propagate(const SpectralField& f, double t, double alpha = 1.0);
void free_propagate_inplace(SpectralField& f, double t, double alpha = 1.0);

// Exact lattice translation of the frequency side: g(xi) = f(xi - shift*dxi).
SpectralField shift_frequency(const SpectralField& f, const Offset& shift);

// Zero-pads or crops around the centre, keeping dxi fixed.
SpectralField resize_grid(const SpectralField& f, int M_new);

struct Scaling {
    double lambda = 1.0;
    double sigma = 1.0;
};
struct Galilean {
    std::array<double, 3> v{0, 0, 0};
    double t = 0.0;
};
struct PlaneWaveTwist {
    std::array<double, 3> k{0, 0, 0};
};
struct Translate {
    std::array<double, 3> k{0, 0, 0};
};
using Symmetry = std::variant<Scaling, Galilean, PlaneWaveTwist, Translate>;

struct SymmetryOptions {
    bool allow_resampling = false;
};

SpectralField apply_symmetry(const SpectralField& f, const Symmetry& s, const SymmetryOptions& opt = {});

// Frequency side of the physical product f*g (discrete convolution with weight dxi^d).
// Refuses when the summed support would wrap around the lattice.
SpectralField multiply_fields(const SpectralField& f, const SpectralField& g);

// Pointwise physical-side helpers used by the Picard and split-step code.
void physical_multiply_inplace(std::vector<cplx>& acc, const std::vector<cplx>& z, bool conjugate);

}  // namespace nlslab
