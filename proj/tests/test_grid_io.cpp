#include "doctest.h"

#include "phg/grid_io.hpp"
#include "phg/noise.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

using namespace phg;

namespace {
std::string temp_path(const char* name) {
  return std::string("/tmp/phg_test_") + name;
}
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}
}  // namespace

TEST_SUITE("grid_io") {
  TEST_CASE("grid round trip is bit exact") {
    GridFunction g = make_grid(2, 5);
    for (Eigen::Index i = 0; i < g.values.size(); ++i)
      g.values[i] = gaussian_site(99, static_cast<std::uint64_t>(i));
    const std::string path = temp_path("roundtrip.grid");
    json meta;
    meta["note"] = "test";
    write_grid(path, g, "field:standard", 99, 5, meta);
    const GridFile f = read_grid(path);
    CHECK(f.grid.n == 2);
    CHECK(f.grid.side == 5);
    REQUIRE(f.grid.size() == g.size());
    for (Eigen::Index i = 0; i < g.values.size(); ++i) CHECK(f.grid.values[i] == g.values[i]);
    CHECK(f.header.at("format") == "phg-grid");
    CHECK(f.header.at("version") == 1);
    CHECK(f.header.at("n") == 2);
    CHECK(f.header.at("M") == 5);
    CHECK(f.header.at("L") == 5);
    CHECK(f.header.at("kind") == "field:standard");
    CHECK(f.header.at("seed") == 99);
    CHECK(f.header.at("meta").at("note") == "test");
    std::remove(path.c_str());
  }

  TEST_CASE("header is a single json line followed by binary payload") {
    GridFunction g = make_grid(1, 3);
    g.values << 1.0, 2.0, 3.0;
    const std::string path = temp_path("layout.grid");
    write_grid(path, g, "", std::nullopt, 0, json());
    const std::string raw = slurp(path);
    const auto newline = raw.find('\n');
    REQUIRE(newline != std::string::npos);
    CHECK(raw.size() == newline + 1 + 3 * sizeof(double));
    const json header = json::parse(raw.substr(0, newline));
    CHECK(header.at("format") == "phg-grid");
    CHECK_FALSE(header.contains("L"));
    CHECK_FALSE(header.contains("kind"));
    double first;
    std::memcpy(&first, raw.data() + newline + 1, sizeof(double));
    CHECK(first == 1.0);
    std::remove(path.c_str());
  }

  TEST_CASE("repeated writes are byte identical") {
    GridFunction g = make_grid(1, 9);
    for (Eigen::Index i = 0; i < 9; ++i) g.values[i] = gaussian_site(3, static_cast<std::uint64_t>(i));
    const std::string p1 = temp_path("det1.grid"), p2 = temp_path("det2.grid");
    write_grid(p1, g, "field:standard", 3, 9, json());
    write_grid(p2, g, "field:standard", 3, 9, json());
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
  }

  TEST_CASE("truncated payload is detected") {
    const std::string path = temp_path("trunc.grid");
    {
      std::ofstream out(path, std::ios::binary);
      out << R"({"format":"phg-grid","version":1,"n":1,"M":9})" << "\n";
      out << "short";
    }
    CHECK_THROWS(read_grid(path));
    std::remove(path.c_str());
  }

  TEST_CASE("pgm heatmap") {
    GridFunction g = make_grid(2, 3);
    g.values << 0, 1, 2, 3, 4, 5, 6, 7, 8;
    const std::string path = temp_path("map.pgm");
    write_pgm(path, g);
    const std::string raw = slurp(path);
    CHECK(raw.rfind("P5\n", 0) == 0);
    CHECK(raw.find("# min=0 max=8") != std::string::npos);
    CHECK(raw.find("\n3 3\n65535\n") != std::string::npos);
    // payload: 9 big-endian 16-bit samples
    CHECK(raw.size() == raw.find("65535\n") + 6 + 18);
    CHECK_THROWS(write_pgm(path, make_grid(3, 3)));
    std::remove(path.c_str());
  }

  TEST_CASE("csv escaping") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  }
}
