#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nlslab/grid.hpp"

namespace nlslab {

// Binary layout (little-endian): "NLSF", u32 version, u32 d, u32 M, f64 Xi, then M^d pairs of f32 (re, im).
void write_field(std::ostream& os, const SpectralField& f);
SpectralField read_field(std::istream& is);
void save_field(const std::string& path, const SpectralField& f);
SpectralField load_field(const std::string& path);

// Debug form for small grids: {"d", "M", "Xi", "nodes": [[i0,..], ...], "values": [[re, im], ...]}.
nlohmann::json field_to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);

}  // namespace nlslab
