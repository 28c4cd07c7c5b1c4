#include "nlslab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace nlslab {

namespace {

constexpr char kMagic[4] = {'N', 'L', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "field I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("truncated field file");
    return v;
}

}  // namespace

void write_field(std::ostream& os, const SpectralField& f) {
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.d));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.M));
    put<double>(os, f.grid.Xi);
    for (const auto& v : f.values) {
        put<float>(os, static_cast<float>(v.real()));
        put<float>(os, static_cast<float>(v.imag()));
    }
}

SpectralField read_field(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not an NLSF field file");
    auto version = get<std::uint32_t>(is);
    if (version != kVersion) throw std::runtime_error("unsupported NLSF version");
    int d = static_cast<int>(get<std::uint32_t>(is));
    int M = static_cast<int>(get<std::uint32_t>(is));
    double Xi = get<double>(is);
    SpectralField f(make_grid(d, Xi, M));
    for (auto& v : f.values) {
        float re = get<float>(is);
        float im = get<float>(is);
        v = cplx(re, im);
    }
    return f;
}

void save_field(const std::string& path, const SpectralField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_field(os, f);
}

SpectralField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_field(is);
}

nlohmann::json field_to_json(const SpectralField& f) {
    nlohmann::json j;
    j["d"] = f.grid.d;
    j["M"] = f.grid.M;
    j["Xi"] = f.grid.Xi;
    auto nodes = nlohmann::json::array();
    auto values = nlohmann::json::array();
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        Offset idx = f.grid.unravel(n);
        nodes.push_back(std::vector<int>(idx.begin(), idx.begin() + f.grid.d));
        values.push_back({f.values[n].real(), f.values[n].imag()});
    }
    j["nodes"] = std::move(nodes);
    j["values"] = std::move(values);
    return j;
}

SpectralField field_from_json(const nlohmann::json& j) {
    SpectralField f(make_grid(j.at("d").get<int>(), j.at("Xi").get<double>(), j.at("M").get<int>()));
    const auto& nodes = j.at("nodes");
    const auto& values = j.at("values");
    if (nodes.size() != values.size()) throw std::runtime_error("node/value count mismatch");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        Offset idx{0, 0, 0};
        for (int a = 0; a < f.grid.d; ++a) idx[a] = nodes[k].at(a).get<int>();
        f.values.at(f.grid.ravel(idx)) = cplx(values[k].at(0).get<double>(), values[k].at(1).get<double>());
    }
    return f;
}

}  // namespace nlslab
