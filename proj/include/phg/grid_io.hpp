#pragma once

#include "phg/transform.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phg {

using json = nlohmann::ordered_json;

/// Self-describing grid container: one JSON header line followed by M^n
/// IEEE-754 binary64 little-endian values, row-major, last axis fastest.
struct GridFile {
  GridFunction grid;
  json header;
};

/// Header is {"format":"phg-grid","version":1,"n":..,"M":..,"L":..,
/// "kind":..,"seed":..,"meta":{..}}; pass L <= 0 or kind empty to omit.
void write_grid(const std::string& path, const GridFunction& g, const std::string& kind,
                std::optional<std::uint64_t> seed, int L, const json& meta);

GridFile read_grid(const std::string& path);

/// 16-bit binary PGM heatmap (n <= 2) with the value range recorded in a
/// comment line.
void write_pgm(const std::string& path, const GridFunction& g);

/// Minimal RFC 4180 writer: header row first, fields quoted when needed.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void row(const std::vector<std::string>& fields);

 private:
  struct Impl;
  Impl* impl_;
};

std::string csv_escape(const std::string& field);

}  // namespace phg
