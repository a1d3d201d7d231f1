#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "topo/cubical.hpp"

using namespace topo;

namespace {

ScalarField2D field_from(std::initializer_list<std::initializer_list<double>>
                             rows) {
  Eigen::ArrayXXd v(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double x : row) v(r, c++) = x;
    ++r;
  }
  return ScalarField2D(v);
}

using Pts = std::vector<std::pair<double, double>>;

Pts sorted_points(const PersistenceDiagram& d) {
  Pts p = d.points;
  std::sort(p.begin(), p.end());
  return p;
}

// The 5x5 golden field: four local minima (two at value 1, two at 2),
// bridges at 3 and 4, a loop closing at 5 that fills at 6.
ScalarField2D golden5x5() {
  return field_from({{6, 6, 6, 6, 6},
                     {6, 1, 3, 2, 6},
                     {6, 3, 6, 4, 6},
                     {6, 2, 5, 1, 6},
                     {6, 6, 6, 6, 6}});
}

}  // namespace

TEST_CASE("filtration of a single pixel") {
  CubicalFiltration f = build_filtration(field_from({{5.0}}));
  CHECK(f.nx == 1);
  CHECK(f.ny == 1);
  REQUIRE(f.width() == 3);
  REQUIRE(f.height() == 3);
  for (int cy = 0; cy < 3; ++cy)
    for (int cx = 0; cx < 3; ++cx) CHECK(f.cells(cy, cx) == 5.0);
  REQUIRE(f.levels.size() == 1);
  CHECK(f.levels[0] == 5.0);

  PersistenceResult pers = compute_persistence(f);
  REQUIRE(pers.dim0.points.size() == 1);
  CHECK(pers.dim0.points[0].first == 5.0);
  CHECK(std::isinf(pers.dim0.points[0].second));
  CHECK(pers.dim1.points.empty());
}

TEST_CASE("filtration takes minima over incident pixels") {
  // 2x2 field with distinct values; check every one of the 25 cells.
  ScalarField2D f = field_from({{1, 2}, {3, 4}});
  CubicalFiltration filt = build_filtration(f);
  auto pixel = [&](int px, int py) { return f.values(py, px); };
  for (int cy = 0; cy < filt.height(); ++cy)
    for (int cx = 0; cx < filt.width(); ++cx) {
      double expect = std::numeric_limits<double>::infinity();
      // 2-cells incident to (cx, cy): pixel (px, py) covers doubled square
      // [2px, 2px+2] x [2py, 2py+2], i.e. its center is (2px+1, 2py+1).
      for (int py = 0; py < 2; ++py)
        for (int px = 0; px < 2; ++px) {
          int ccx = 2 * px + 1, ccy = 2 * py + 1;
          if (std::abs(ccx - cx) <= 1 && std::abs(ccy - cy) <= 1)
            expect = std::min(expect, pixel(px, py));
        }
      CHECK(filt.cells(cy, cx) == expect);
    }
  std::vector<double> expect_levels{1, 2, 3, 4};
  CHECK(filt.levels == expect_levels);
}

TEST_CASE("two pixels in a row merge without a cycle") {
  PersistenceResult pers =
      compute_persistence(build_filtration(field_from({{1, 2}})));
  REQUIRE(pers.dim0.points.size() == 1);
  CHECK(pers.dim0.points[0].first == 1.0);
  CHECK(std::isinf(pers.dim0.points[0].second));
  CHECK(pers.dim1.points.empty());
}

TEST_CASE("equal-value neighbors produce no zero-persistence pairs") {
  PersistenceResult pers =
      compute_persistence(build_filtration(field_from({{1, 1}})));
  REQUIRE(pers.dim0.points.size() == 1);
  CHECK(std::isinf(pers.dim0.points[0].second));
  CHECK(pers.dim1.points.empty());
}

TEST_CASE("two minima merging over a saddle") {
  PersistenceResult pers =
      compute_persistence(build_filtration(field_from({{1, 2, 1}})));
  Pts d0 = sorted_points(pers.dim0);
  REQUIRE(d0.size() == 2);
  CHECK(d0[0] == std::pair<double, double>(1.0, 2.0));
  CHECK(d0[1].first == 1.0);
  CHECK(std::isinf(d0[1].second));
  CHECK(pers.dim1.points.empty());
}

TEST_CASE("a ring of low values around a high center creates one loop") {
  ScalarField2D f = field_from({{1, 1, 1}, {1, 2, 1}, {1, 1, 1}});
  PersistenceResult pers = compute_persistence(build_filtration(f));
  REQUIRE(pers.dim0.points.size() == 1);
  CHECK(pers.dim0.points[0].first == 1.0);
  REQUIRE(pers.dim1.points.size() == 1);
  CHECK(pers.dim1.points[0] == std::pair<double, double>(1.0, 2.0));
}

TEST_CASE("4x4 image with one delayed loop") {
  // The ring {<=3} around the 5 closes at level 3 and fills at 5.
  ScalarField2D f = field_from({{2, 1, 2, 4},
                                {3, 5, 3, 4},
                                {3, 3, 3, 4},
                                {4, 4, 4, 4}});
  PersistenceResult pers = compute_persistence(build_filtration(f));
  REQUIRE(pers.dim1.points.size() == 1);
  CHECK(pers.dim1.points[0] == std::pair<double, double>(3.0, 5.0));
  // Components: pixels at value <= 2 are {2,1,2} in the top row, already
  // connected through vertices; everything is connected from level 3 on.
  Pts d0 = sorted_points(pers.dim0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0].first == 1.0);
  CHECK(std::isinf(d0[0].second));
}

TEST_CASE("golden 5x5 diagrams are exact") {
  PersistenceResult pers = compute_persistence(build_filtration(golden5x5()));
  Pts d0 = sorted_points(pers.dim0);
  REQUIRE(d0.size() == 4);
  CHECK(d0[0] == std::pair<double, double>(1.0, 4.0));
  CHECK(d0[1].first == 1.0);
  CHECK(std::isinf(d0[1].second));
  CHECK(d0[2] == std::pair<double, double>(2.0, 3.0));
  CHECK(d0[3] == std::pair<double, double>(2.0, 3.0));
  Pts d1 = sorted_points(pers.dim1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0] == std::pair<double, double>(5.0, 6.0));
}

TEST_CASE("betti_at_level matches the diagrams and the oracle") {
  ScalarField2D f = golden5x5();
  CubicalFiltration filt = build_filtration(f);
  PersistenceResult pers = compute_persistence(filt);
  CHECK(betti_at_level(pers, 1.0) == std::pair<int, int>(2, 0));
  CHECK(betti_at_level(pers, 2.0) == std::pair<int, int>(4, 0));
  CHECK(betti_at_level(pers, 3.0) == std::pair<int, int>(2, 0));
  CHECK(betti_at_level(pers, 4.0) == std::pair<int, int>(1, 0));
  CHECK(betti_at_level(pers, 5.0) == std::pair<int, int>(1, 1));
  CHECK(betti_at_level(pers, 6.0) == std::pair<int, int>(1, 0));
  for (double a : filt.levels)
    CHECK(betti_at_level(pers, a) == oracle::betti_sublevel(filt, a));
}

TEST_CASE("exactly one essential class, in dimension zero") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> size(1, 9), level(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    int nx = size(gen), ny = size(gen);
    Eigen::ArrayXXd v(ny, nx);
    for (int r = 0; r < ny; ++r)
      for (int c = 0; c < nx; ++c) v(r, c) = level(gen);
    PersistenceResult pers =
        compute_persistence(build_filtration(ScalarField2D(v)));
    int essential0 = 0;
    for (auto& pt : pers.dim0.points) {
      CHECK(pt.first < pt.second);
      if (std::isinf(pt.second)) ++essential0;
    }
    CHECK(essential0 == 1);
    for (auto& pt : pers.dim1.points) {
      CHECK(pt.first < pt.second);
      CHECK(!std::isinf(pt.second));
    }
  }
}

TEST_CASE("random fields match the union-find/Euler oracle at every level") {
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<int> size(1, 12), nlevels(1, 8);
  for (int trial = 0; trial < 120; ++trial) {
    int nx = size(gen), ny = size(gen);
    std::uniform_int_distribution<int> level(0, nlevels(gen));
    Eigen::ArrayXXd v(ny, nx);
    for (int r = 0; r < ny; ++r)
      for (int c = 0; c < nx; ++c) v(r, c) = level(gen);
    CubicalFiltration filt = build_filtration(ScalarField2D(v));
    PersistenceResult pers = compute_persistence(filt);
    for (double a : filt.levels) {
      auto got = betti_at_level(pers, a);
      auto want = oracle::betti_sublevel(filt, a);
      REQUIRE_MESSAGE(got == want, "betti mismatch at level ", a, " on a ", nx,
                      "x", ny, " field");
    }
  }
}

TEST_CASE("total point count is bounded by cell count") {
  // Sanity: each pair consumes one creator and one destroyer cell.
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> level(0, 3);
  Eigen::ArrayXXd v(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) v(r, c) = level(gen);
  CubicalFiltration filt = build_filtration(ScalarField2D(v));
  PersistenceResult pers = compute_persistence(filt);
  std::size_t cells = static_cast<std::size_t>(filt.width()) *
                      static_cast<std::size_t>(filt.height());
  CHECK(2 * (pers.dim0.points.size() + pers.dim1.points.size()) <= cells + 1);
}
