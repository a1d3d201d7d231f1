#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "topo/process.hpp"

using namespace topo;
namespace fs = std::filesystem;

namespace {

PersistenceLandscape hat(double b, double d, int dim) {
  PersistenceDiagram dg;
  dg.dim = dim;
  dg.points.emplace_back(b, d);
  PersistenceLandscape l = landscape_from_diagram(dg, d);
  l.dim = dim;
  return l;
}

PersistenceLandscape zero_landscape(int dim) {
  PersistenceDiagram dg;
  dg.dim = dim;
  PersistenceLandscape l = landscape_from_diagram(dg, 1.0);
  l.dim = dim;
  return l;
}

TopologicalProcess one_snapshot(PersistenceLandscape l0,
                                PersistenceLandscape l1) {
  TopologicalProcess p;
  p.snapshots.push_back({std::move(l0), std::move(l1)});
  return p;
}

// A single-snapshot process whose L1 distances to a hat(0,2)/hat(0,2) query
// are exactly (1 + h0^2, 1 + h1^2): tents of integer height on supports
// disjoint from the query's.
TopologicalProcess gadget_classifier(int slot, double h0, double h1) {
  double b0 = 10.0 * (slot + 1);
  double b1 = 1000.0 + 10.0 * (slot + 1);
  return one_snapshot(hat(b0, b0 + 2.0 * h0, 0), hat(b1, b1 + 2.0 * h1, 1));
}

TopologicalProcess gadget_query() {
  return one_snapshot(hat(0.0, 2.0, 0), hat(0.0, 2.0, 1));
}

// Build a model whose distance ORDER in each dimension is prescribed:
// orders[k][j] = index of the class at rank j+1 in dimension k.  Heights are
// the rank positions, so all distances are distinct.
ClassifierModel model_with_orders(const std::vector<int>& order0,
                                  const std::vector<int>& order1, double p) {
  std::size_t nc = order0.size();
  std::vector<double> h0(nc), h1(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    h0[static_cast<std::size_t>(order0[j])] = static_cast<double>(j + 1);
    h1[static_cast<std::size_t>(order1[j])] = static_cast<double>(j + 1);
  }
  std::vector<std::vector<TopologicalProcess>> classes;
  std::vector<std::string> labels;
  for (std::size_t n = 0; n < nc; ++n) {
    classes.push_back({gadget_classifier(static_cast<int>(n), h0[n], h1[n])});
    labels.push_back("class" + std::to_string(n));
  }
  return train(classes, p, labels);
}

}  // namespace

TEST_CASE("process distance sums landscape distances over snapshots") {
  TopologicalProcess a, b;
  a.snapshots.push_back({hat(0, 2, 0), zero_landscape(1)});
  a.snapshots.push_back({hat(0, 4, 0), zero_landscape(1)});
  b.snapshots.push_back({hat(0, 4, 0), zero_landscape(1)});
  b.snapshots.push_back({hat(0, 4, 0), zero_landscape(1)});
  // L1(hat(0,2), hat(0,4)) = 3 by direct integration.
  CHECK(process_distance(a, b, 1.0, 0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(process_distance(a, b, 1.0, 1) == 0.0);
  CHECK_THROWS_AS(process_distance(a, b, 1.0, 2), std::invalid_argument);
  TopologicalProcess c;
  c.snapshots.push_back({hat(0, 2, 0), zero_landscape(1)});
  CHECK_THROWS_AS(process_distance(a, c, 1.0, 0), std::invalid_argument);
}

TEST_CASE("average_process averages per position and fixes dims") {
  TopologicalProcess a = one_snapshot(hat(0, 2, 0), zero_landscape(1));
  TopologicalProcess b = one_snapshot(hat(0, 4, 0), zero_landscape(1));
  TopologicalProcess avg = average_process({a, b});
  REQUIRE(avg.length() == 1);
  CHECK(avg.snapshots[0][0].dim == 0);
  CHECK(avg.snapshots[0][1].dim == 1);
  CHECK(evaluate(avg.snapshots[0][0], 1, 1.0) == 1.0);
  CHECK(evaluate(avg.snapshots[0][0], 1, 3.0) == 0.5);
  CHECK_THROWS_AS(average_process({}), std::invalid_argument);
  TopologicalProcess longer;
  longer.snapshots.push_back(a.snapshots[0]);
  longer.snapshots.push_back(a.snapshots[0]);
  CHECK_THROWS_AS(average_process({a, longer}), std::invalid_argument);
}

TEST_CASE("train averages classes and keeps labels and seeds") {
  TopologicalProcess a = one_snapshot(hat(0, 2, 0), zero_landscape(1));
  a.seed = 11;
  TopologicalProcess b = one_snapshot(hat(0, 4, 0), zero_landscape(1));
  b.seed = 12;
  TopologicalProcess c = one_snapshot(hat(0, 8, 0), zero_landscape(1));
  c.seed = 21;
  ClassifierModel m = train({{a, b}, {c}}, 2.0, {"lowmass", "highmass"});
  REQUIRE(m.classifiers.size() == 2);
  CHECK(m.class_labels == std::vector<std::string>{"lowmass", "highmass"});
  CHECK(m.p == 2.0);
  CHECK(m.training_runs == 2);
  CHECK(m.seeds == std::vector<std::uint64_t>{11, 12, 21});
  CHECK(evaluate(m.classifiers[0].snapshots[0][0], 1, 1.0) == 1.0);

  TopologicalProcess longer;
  longer.snapshots.push_back(a.snapshots[0]);
  longer.snapshots.push_back(a.snapshots[0]);
  CHECK_THROWS_AS(train({{a}, {longer}}, 1.0, {"x", "y"}),
                  std::invalid_argument);
  CHECK_THROWS_AS(train({{a}}, 1.0, {"x", "y"}), std::invalid_argument);
}

TEST_CASE("classify_ck picks the unique nearest classifier") {
  TopologicalProcess c0 = one_snapshot(hat(0, 2, 0), zero_landscape(1));
  TopologicalProcess c1 = one_snapshot(hat(0, 8, 0), zero_landscape(1));
  ClassifierModel m = train({{c0}, {c1}}, 1.0, {"a", "b"});
  TopologicalProcess q = one_snapshot(hat(0, 4, 0), zero_landscape(1));
  // L1 distances: 3 to hat(0,2), 12 to hat(0,8).
  auto r = classify_ck(m, q, 0);
  REQUIRE(r.has_value());
  CHECK(*r == 0);
  // Dimension 1 is identically zero on both: tied -> Failure.
  CHECK(!classify_ck(m, q, 1).has_value());
}

TEST_CASE("classify_ck fails on exactly tied distances") {
  TopologicalProcess c0 = gadget_classifier(0, 2.0, 1.0);
  TopologicalProcess c1 = gadget_classifier(1, 2.0, 2.0);
  ClassifierModel m = train({{c0}, {c1}}, 1.0, {"a", "b"});
  TopologicalProcess q = gadget_query();
  CHECK(!classify_ck(m, q, 0).has_value());  // both at distance 1 + 4
  auto r1 = classify_ck(m, q, 1);            // distances 2 vs 5
  REQUIRE(r1.has_value());
  CHECK(*r1 == 0);
}

TEST_CASE("classify_ca agrees at the first rank when dimensions agree") {
  ClassifierModel m = model_with_orders({0, 2, 1}, {0, 2, 1}, 1.0);
  auto r = classify_ca(m, gadget_query());
  REQUIRE(r.has_value());
  CHECK(*r == 0);
}

TEST_CASE("classify_ca resolves a disagreement at the second rank") {
  // dim0 order: class0, class2, class1; dim1 order: class1, class2, class0.
  // Prefixes of length 2 intersect exactly in class2.
  ClassifierModel m = model_with_orders({0, 2, 1}, {1, 2, 0}, 1.0);
  auto r = classify_ca(m, gadget_query());
  REQUIRE(r.has_value());
  CHECK(*r == 2);
}

TEST_CASE("classify_ca fails when the first intersection has two classes") {
  ClassifierModel m2 = model_with_orders({0, 1}, {1, 0}, 1.0);
  CHECK(!classify_ca(m2, gadget_query()).has_value());
  ClassifierModel m3 = model_with_orders({0, 2, 1}, {2, 0, 1}, 1.0);
  CHECK(!classify_ca(m3, gadget_query()).has_value());
}

TEST_CASE("classify_ca fails on a distance tie inside the prefix") {
  // dim0 distances tie between class0 and class1 (heights 1, 1, 2); dim1
  // orders the classes strictly as 0, 1, 2.
  std::vector<std::vector<TopologicalProcess>> classes;
  classes.push_back({gadget_classifier(0, 1.0, 1.0)});
  classes.push_back({gadget_classifier(1, 1.0, 2.0)});
  classes.push_back({gadget_classifier(2, 2.0, 3.0)});
  ClassifierModel m = train(classes, 1.0, {"a", "b", "c"});
  CHECK(!classify_ca(m, gadget_query()).has_value());
}

TEST_CASE("classification is invariant under rescaling all distances") {
  // Scaling every landscape by the same positive factor must not change the
  // predicted class for (C0)/(C1) or (CA).
  ClassifierModel m = model_with_orders({1, 0, 2}, {1, 2, 0}, 1.0);
  TopologicalProcess q = gadget_query();
  auto base_c0 = classify_ck(m, q, 0);
  auto base_ca = classify_ca(m, q);
  ClassifierModel scaled = m;
  for (auto& c : scaled.classifiers)
    for (auto& snap : c.snapshots)
      for (int k = 0; k < 2; ++k)
        for (auto& layer : snap[k].layers)
          for (auto& pt : layer) {
            pt.x *= 2.0;
            pt.y *= 2.0;
          }
  TopologicalProcess q2 = q;
  for (auto& snap : q2.snapshots)
    for (int k = 0; k < 2; ++k)
      for (auto& layer : snap[k].layers)
        for (auto& pt : layer) {
          pt.x *= 2.0;
          pt.y *= 2.0;
        }
  CHECK(classify_ck(scaled, q2, 0) == base_c0);
  CHECK(classify_ca(scaled, q2) == base_ca);
}

TEST_CASE("process file round-trips") {
  TopologicalProcess p;
  p.snapshots.push_back({hat(0, 2, 0), hat(1, 3, 1)});
  p.snapshots.push_back({hat(0.5, 4, 0), zero_landscape(1)});
  p.mass_label = "0.2";
  p.seed = 424242;
  p.times = {0.25, 0.5};
  fs::path f = fs::temp_directory_path() / "topo_test_process.process";
  write_process_file(p, f.string());
  TopologicalProcess back = read_process_file(f.string());
  CHECK(back.mass_label == "0.2");
  CHECK(back.seed == 424242);
  CHECK(back.times == p.times);
  REQUIRE(back.length() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      const auto& orig = p.snapshots[i][k];
      const auto& got = back.snapshots[i][k];
      CHECK(got.dim == k);
      REQUIRE(got.layers.size() == orig.layers.size());
      for (std::size_t l = 0; l < orig.layers.size(); ++l)
        for (std::size_t j = 0; j < orig.layers[l].size(); ++j) {
          CHECK(got.layers[l][j].x == orig.layers[l][j].x);
          CHECK(got.layers[l][j].y == orig.layers[l][j].y);
        }
    }

  TopologicalProcess unnamed;
  unnamed.snapshots.push_back({zero_landscape(0), zero_landscape(1)});
  write_process_file(unnamed, f.string());
  CHECK(read_process_file(f.string()).mass_label.empty());
}

TEST_CASE("model save/load round-trips distances bitwise") {
  TopologicalProcess a = one_snapshot(hat(0, 2, 0), hat(5, 9, 1));
  a.seed = 7;
  TopologicalProcess b = one_snapshot(hat(1, 4, 0), hat(5, 7, 1));
  b.seed = 8;
  ClassifierModel m = train({{a}, {b}}, 1.0, {"0", "0.2"});
  fs::path dir = fs::temp_directory_path() / "topo_test_model";
  fs::remove_all(dir);
  save_model(m, dir.string());
  ClassifierModel back = load_model(dir.string());
  CHECK(back.p == 1.0);
  CHECK(back.training_runs == 1);
  CHECK(back.class_labels == m.class_labels);
  CHECK(back.seeds == m.seeds);
  REQUIRE(back.classifiers.size() == 2);
  TopologicalProcess q = one_snapshot(hat(0.5, 3, 0), hat(5, 8, 1));
  for (int k = 0; k < 2; ++k)
    for (std::size_t n = 0; n < 2; ++n)
      CHECK(process_distance(q, back.classifiers[n], 1.0, k) ==
            process_distance(q, m.classifiers[n], 1.0, k));
  CHECK(classify_ca(back, q) == classify_ca(m, q));
}
