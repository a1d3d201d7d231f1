#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "topo/field.hpp"

using namespace topo;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path d = fs::temp_directory_path() / "topo_test_field";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("field constructor validates shape and finiteness") {
  Eigen::ArrayXXd one(1, 1);
  one(0, 0) = 5.0;
  ScalarField2D f(one);
  CHECK(f.nx() == 1);
  CHECK(f.ny() == 1);

  Eigen::ArrayXXd empty(0, 3);
  CHECK_THROWS_AS(ScalarField2D{empty}, std::invalid_argument);

  Eigen::ArrayXXd bad(2, 2);
  bad.setZero();
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ScalarField2D{bad}, std::invalid_argument);
  bad(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ScalarField2D{bad}, std::invalid_argument);
}

TEST_CASE("quantizer thresholds are uniform and end exactly at hi") {
  LevelQuantizer q(-1.0, 1.0, 4);
  auto t = q.thresholds();
  REQUIRE(t.size() == 4);
  CHECK(t[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(t[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(t[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t[3] == 1.0);  // exact

  LevelQuantizer q256(-1.0, 1.0, 256);
  auto t256 = q256.thresholds();
  REQUIRE(t256.size() == 256);
  CHECK(t256.back() == 1.0);
  for (std::size_t i = 1; i < t256.size(); ++i) CHECK(t256[i - 1] < t256[i]);

  CHECK_THROWS_AS(LevelQuantizer(1.0, -1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(LevelQuantizer(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("quantizer maps values to the smallest admissible threshold") {
  LevelQuantizer q(-1.0, 1.0, 4);
  auto t = q.thresholds();
  // Below and at lo: first bin.
  CHECK(q.apply(-2.0) == t[0]);
  CHECK(q.apply(-1.0) == t[0]);
  // Right-closed bins.
  CHECK(q.apply(-0.6) == t[0]);
  CHECK(q.apply(-0.5) == t[0]);
  CHECK(q.apply(-0.49) == t[1]);
  CHECK(q.apply(0.0) == t[1]);
  CHECK(q.apply(0.2) == t[2]);
  CHECK(q.apply(0.5) == t[2]);
  CHECK(q.apply(0.51) == t[3]);
  // Above hi clamps into the top bin.
  CHECK(q.apply(1.0) == t[3]);
  CHECK(q.apply(1.7) == t[3]);
  // Thresholds are fixed points.
  for (double a : t) CHECK(q.apply(a) == a);
}

TEST_CASE("quantizer is idempotent and monotone on random input") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  LevelQuantizer q(-1.0, 1.0, 17);
  for (int i = 0; i < 2000; ++i) {
    double v = dist(gen), w = dist(gen);
    double qv = q.apply(v), qw = q.apply(w);
    CHECK(q.apply(qv) == qv);
    CHECK(std::min(v, 1.0) <= qv);  // rounds up onto the threshold grid
    if (v <= w) CHECK(qv <= qw);
  }
}

TEST_CASE("quantize maps a field elementwise and mass is the mean") {
  Eigen::ArrayXXd v(2, 2);
  v << -1.0, -0.2, 0.3, 2.0;
  ScalarField2D f(v);
  CHECK(mass(f) == doctest::Approx((-1.0 - 0.2 + 0.3 + 2.0) / 4).epsilon(1e-15));
  LevelQuantizer q(-1.0, 1.0, 4);
  ScalarField2D g = quantize(f, q);
  CHECK(g.values(0, 0) == q.apply(-1.0));
  CHECK(g.values(0, 1) == q.apply(-0.2));
  CHECK(g.values(1, 0) == q.apply(0.3));
  CHECK(g.values(1, 1) == 1.0);
}

TEST_CASE("binary field io round-trips bitwise") {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> dist;
  Eigen::ArrayXXd v(5, 3);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 3; ++c) v(r, c) = dist(gen);
  ScalarField2D f(v);
  fs::path p = tmp_dir() / "roundtrip.field";
  write_field(f, p.string());
  ScalarField2D g = read_field(p.string());
  REQUIRE(g.nx() == 3);
  REQUIRE(g.ny() == 5);
  CHECK((g.values == f.values).all());
}

TEST_CASE("field io reports distinct errors") {
  fs::path d = tmp_dir();
  CHECK_THROWS_WITH_AS(read_field((d / "missing.field").string()),
                       doctest::Contains("cannot open field file"),
                       std::runtime_error);

  fs::path bad = d / "bad_magic.field";
  { std::ofstream os(bad, std::ios::binary); os << "NOTMAGIC01234567890"; }
  CHECK_THROWS_WITH_AS(read_field(bad.string()),
                       doctest::Contains("malformed field header"),
                       std::runtime_error);

  // Valid header claiming 2x2 but truncated payload.
  fs::path trunc = d / "trunc.field";
  {
    std::ofstream os(trunc, std::ios::binary);
    os.write("TPFLD001", 8);
    std::uint64_t n = 2;
    os.write(reinterpret_cast<const char*>(&n), 8);
    os.write(reinterpret_cast<const char*>(&n), 8);
    double x = 1.5;
    os.write(reinterpret_cast<const char*>(&x), 8);  // 1 of 4 doubles
  }
  CHECK_THROWS_WITH_AS(read_field(trunc.string()),
                       doctest::Contains("field size mismatch"),
                       std::runtime_error);
}

TEST_CASE("pgm output is golden for a 2x2 ramp") {
  Eigen::ArrayXXd v(2, 2);
  v << -1.0, 0.0, 0.0, 1.0;
  ScalarField2D f(v);
  fs::path p = tmp_dir() / "ramp.pgm";
  write_pgm(f, p.string(), -1.0, 1.0);
  std::string bytes = slurp(p);
  std::string expect = "P5\n2 2\n255\n";
  expect.push_back(static_cast<char>(0));
  expect.push_back(static_cast<char>(127));
  expect.push_back(static_cast<char>(127));
  expect.push_back(static_cast<char>(static_cast<unsigned char>(255)));
  CHECK(bytes == expect);
}

TEST_CASE("csv output lists rows of the grid") {
  Eigen::ArrayXXd v(2, 3);
  v << 1, 2, 3, 4, 5, 6;
  fs::path p = tmp_dir() / "grid.csv";
  write_csv(ScalarField2D(v), p.string());
  CHECK(slurp(p) == "1,2,3\n4,5,6\n");
}

TEST_CASE("atomic writes leave no temporaries behind") {
  fs::path d = tmp_dir() / "atomic";
  fs::create_directories(d);
  write_file_atomic((d / "out.txt").string(), "payload");
  CHECK(slurp(d / "out.txt") == "payload");
  int entries = 0;
  for (auto& e : fs::directory_iterator(d)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}
