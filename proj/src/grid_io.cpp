#include "phg/grid_io.hpp"

#include "phg/budget.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "grid files are little-endian; byte swapping is not implemented");

namespace phg {

void write_grid(const std::string& path, const GridFunction& g, const std::string& kind,
                std::optional<std::uint64_t> seed, int L, const json& meta) {
  json header;
  header["format"] = "phg-grid";
  header["version"] = 1;
  header["n"] = g.n;
  header["M"] = g.side;
  if (L > 0) header["L"] = L;
  if (!kind.empty()) header["kind"] = kind;
  if (seed) header["seed"] = *seed;
  header["meta"] = meta.is_null() ? json::object() : meta;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(g.values.data()),
            static_cast<std::streamsize>(g.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

GridFile read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing header line: " + path);
  GridFile f;
  f.header = json::parse(line);
  if (f.header.value("format", "") != "phg-grid")
    throw std::runtime_error("not a phg-grid file: " + path);
  const int n = f.header.at("n").get<int>();
  const int M = f.header.at("M").get<int>();
  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) total *= static_cast<std::uint64_t>(M);
  ensure_budget(total * sizeof(double));
  f.grid.n = n;
  f.grid.side = M;
  f.grid.values.resize(static_cast<Eigen::Index>(total));
  in.read(reinterpret_cast<char*>(f.grid.values.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (static_cast<std::uint64_t>(in.gcount()) != total * sizeof(double))
    throw std::runtime_error("truncated grid payload: " + path);
  return f;
}

void write_pgm(const std::string& path, const GridFunction& g) {
  if (g.n > 2) throw std::invalid_argument("write_pgm: heatmaps support n <= 2");
  const int w = g.side;
  const int h = g.n == 2 ? g.side : 1;
  const double lo = g.values.minCoeff();
  const double hi = g.values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P5\n# min=" << lo << " max=" << hi << "\n" << w << " " << h << "\n65535\n";
  for (Eigen::Index i = 0; i < g.values.size(); ++i) {
    const double t = (g.values[i] - lo) / span;
    const auto v = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    const unsigned char bytes[2] = {static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v & 0xFF)};
    out.write(reinterpret_cast<const char*>(bytes), 2);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl{std::ofstream(path)}) {
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open for writing: " + path);
  }
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << csv_escape(fields[i]);
  }
  impl_->out << "\r\n";
}

}  // namespace phg
