#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "lhd/core.hpp"

namespace lhd {

struct DesignIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// On-disk design: {"k", "n", "coords" as n rows of k ints, "dmin_sq"},
/// plus an optional "meta" object recording how the design was produced.
inline void save_design(const std::filesystem::path& path, const Configuration& config,
                        std::int64_t dmin_sq, const nlohmann::json& meta = nullptr) {
  nlohmann::json doc;
  doc["k"] = config.dims();
  doc["n"] = config.points();
  auto& rows = doc["coords"] = nlohmann::json::array();
  for (std::int32_t p = 0; p < config.points(); ++p) {
    nlohmann::json row = nlohmann::json::array();
    for (std::int32_t d = 0; d < config.dims(); ++d) row.push_back(config.coord(p, d));
    rows.push_back(std::move(row));
  }
  doc["dmin_sq"] = dmin_sq;
  if (!meta.is_null()) doc["meta"] = meta;

  std::ofstream out(path);
  if (!out) throw DesignIoError("cannot write design file: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw DesignIoError("short write on design file: " + path.string());
}

struct LoadedDesign {
  Configuration config;
  std::int64_t dmin_sq = 0;
  nlohmann::json meta;
};

/// Loads and re-validates: shape, Latin constraint, and the claimed minimum
/// distance all have to hold, so a loaded design needs no further trust.
inline LoadedDesign load_design(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DesignIoError("cannot read design file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DesignIoError("design file is not valid JSON: " + std::string(e.what()));
  }

  try {
    const int k = doc.at("k").get<int>();
    const int n = doc.at("n").get<int>();
    if (!InstanceSpec{k, n}.valid()) throw DesignIoError("design file has invalid k or n");
    const auto& rows = doc.at("coords");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
      throw DesignIoError("design file needs n coordinate rows");
    std::vector<std::int32_t> coords;
    coords.reserve(static_cast<std::size_t>(n) * k);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(k))
        throw DesignIoError("design file rows need k coordinates");
      for (const auto& value : row) coords.push_back(value.get<std::int32_t>());
    }

    LoadedDesign design{Configuration({k, n}, std::move(coords)),
                        doc.at("dmin_sq").get<std::int64_t>(),
                        doc.value("meta", nlohmann::json(nullptr))};
    const LatinReport latin = validate_latin(design.config);
    if (!latin.ok)
      throw DesignIoError("design is not Latin: dimension " + std::to_string(latin.dim) +
                          " repeats or exceeds value " + std::to_string(latin.value));
    if (build_distance_state(design.config).dmin_sq() != design.dmin_sq)
      throw DesignIoError("claimed dmin_sq does not match the coordinates");
    return design;
  } catch (const nlohmann::json::exception& e) {
    throw DesignIoError("design file is malformed: " + std::string(e.what()));
  }
}

}  // namespace lhd
