#include "topo/process.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "topo/field.hpp"  // write_file_atomic

namespace fs = std::filesystem;

namespace topo {

TopologicalProcess average_process(const std::vector<TopologicalProcess>& ps) {
  if (ps.empty())
    throw std::invalid_argument("average_process: empty process list");
  const std::size_t m = ps.front().length();
  for (const auto& p : ps)
    if (p.length() != m)
      throw std::invalid_argument("average_process: length mismatch");
  TopologicalProcess out;
  out.snapshots.resize(m);
  out.times = ps.front().times;
  for (std::size_t i = 0; i < m; ++i)
    for (int k = 0; k < 2; ++k) {
      std::vector<PersistenceLandscape> ls;
      ls.reserve(ps.size());
      for (const auto& p : ps) ls.push_back(p.snapshots[i][k]);
      out.snapshots[i][k] = average(ls);
      out.snapshots[i][k].dim = k;
    }
  return out;
}

double process_distance(const TopologicalProcess& a,
                        const TopologicalProcess& b, double p, int k) {
  if (k != 0 && k != 1)
    throw std::invalid_argument("process_distance: dimension must be 0 or 1");
  if (a.length() != b.length())
    throw std::invalid_argument("process_distance: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < a.length(); ++i)
    total += lp_distance(a.snapshots[i][k], b.snapshots[i][k], p);
  return total;
}

ClassifierModel train(
    const std::vector<std::vector<TopologicalProcess>>& classes, double p,
    const std::vector<std::string>& labels) {
  if (classes.empty()) throw std::invalid_argument("train: no classes");
  if (!labels.empty() && labels.size() != classes.size())
    throw std::invalid_argument("train: label count mismatch");
  ClassifierModel model;
  model.p = p;
  for (std::size_t n = 0; n < classes.size(); ++n) {
    if (classes[n].empty())
      throw std::invalid_argument("train: class without training processes");
    model.classifiers.push_back(average_process(classes[n]));
    model.classifiers.back().mass_label =
        labels.empty() ? std::to_string(n) : labels[n];
    for (const auto& proc : classes[n]) model.seeds.push_back(proc.seed);
  }
  for (const auto& c : model.classifiers)
    if (c.length() != model.classifiers.front().length())
      throw std::invalid_argument("train: classes disagree on process length");
  model.training_runs = static_cast<int>(classes.front().size());
  if (labels.empty()) {
    for (std::size_t n = 0; n < classes.size(); ++n)
      model.class_labels.push_back(std::to_string(n));
  } else {
    model.class_labels = labels;
  }
  return model;
}

namespace {

std::vector<double> distances_to_classes(const ClassifierModel& model,
                                         const TopologicalProcess& query,
                                         int k) {
  if (model.classifiers.empty())
    throw std::invalid_argument("classify: empty model");
  std::vector<double> d;
  d.reserve(model.classifiers.size());
  for (const auto& c : model.classifiers)
    d.push_back(process_distance(query, c, model.p, k));
  return d;
}

}  // namespace

std::optional<int> classify_ck(const ClassifierModel& model,
                               const TopologicalProcess& query, int k) {
  auto d = distances_to_classes(model, query, k);
  std::size_t best = 0;
  for (std::size_t n = 1; n < d.size(); ++n)
    if (d[n] < d[best]) best = n;
  // Failure on a tied minimum: the argmin must be unique (exact comparison).
  for (std::size_t n = 0; n < d.size(); ++n)
    if (n != best && d[n] == d[best]) return std::nullopt;
  return static_cast<int>(best);
}

std::optional<int> classify_ca(const ClassifierModel& model,
                               const TopologicalProcess& query) {
  const std::size_t nc = model.classifiers.size();
  std::array<std::vector<double>, 2> dist;
  std::array<std::vector<int>, 2> rank;  // rank[k][j] = class at position j
  for (int k = 0; k < 2; ++k) {
    dist[k] = distances_to_classes(model, query, k);
    rank[k].resize(nc);
    std::iota(rank[k].begin(), rank[k].end(), 0);
    std::stable_sort(rank[k].begin(), rank[k].end(), [&](int a, int b) {
      return dist[k][a] < dist[k][b];
    });
  }
  // Smallest prefix length ell whose per-dimension prefix sets intersect.
  std::array<std::vector<char>, 2> in_prefix;
  in_prefix[0].assign(nc, 0);
  in_prefix[1].assign(nc, 0);
  std::size_t ell = 0;
  std::vector<int> common;
  while (ell < nc) {
    for (int k = 0; k < 2; ++k) in_prefix[k][rank[k][ell]] = 1;
    ++ell;
    common.clear();
    for (std::size_t n = 0; n < nc; ++n)
      if (in_prefix[0][n] && in_prefix[1][n]) common.push_back(static_cast<int>(n));
    if (!common.empty()) break;
  }
  if (common.size() != 1) return std::nullopt;
  // Conservative tie handling: if any prefix set S_j with j <= ell has a
  // distance tie across its boundary, a different ordering could change the
  // outcome, so the classifier fails.
  for (int k = 0; k < 2; ++k)
    for (std::size_t j = 1; j <= ell && j < nc; ++j)
      if (dist[k][rank[k][j - 1]] == dist[k][rank[k][j]]) return std::nullopt;
  return common.front();
}

namespace {

void write_process_text(std::ostream& os, const TopologicalProcess& p) {
  os << "process topoprocess 1\n";
  os << "mass " << (p.mass_label.empty() ? "-" : p.mass_label) << '\n';
  os << "seed " << p.seed << '\n';
  os << "snapshots " << p.length() << '\n';
  os << "dims 0 1\n";
  os << std::setprecision(17);
  os << "times";
  for (double t : p.times) os << ' ' << t;
  os << '\n';
  for (const auto& snap : p.snapshots)
    for (int k = 0; k < 2; ++k) write_landscape(os, snap[k]);
}

}  // namespace

void write_process_file(const TopologicalProcess& p, const std::string& path) {
  std::ostringstream os;
  write_process_text(os, p);
  write_file_atomic(path, os.str());
}

TopologicalProcess read_process_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open process file: " + path);
  std::string line, word;
  if (!std::getline(is, line) || line != "process topoprocess 1")
    throw std::runtime_error("malformed process header: " + path);
  TopologicalProcess p;
  std::size_t m = 0;
  for (int field = 0; field < 5; ++field) {
    if (!std::getline(is, line))
      throw std::runtime_error("truncated process header: " + path);
    std::istringstream ls(line);
    ls >> word;
    if (word == "mass") {
      ls >> p.mass_label;
      if (p.mass_label == "-") p.mass_label.clear();
    } else if (word == "seed") {
      ls >> p.seed;
    } else if (word == "snapshots") {
      ls >> m;
    } else if (word == "dims") {
      int d0, d1;
      if (!(ls >> d0 >> d1) || d0 != 0 || d1 != 1)
        throw std::runtime_error("unsupported dims in process: " + path);
    } else if (word == "times") {
      double t;
      while (ls >> t) p.times.push_back(t);
    } else {
      throw std::runtime_error("unknown process header line: " + line);
    }
  }
  p.snapshots.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    for (int k = 0; k < 2; ++k) {
      p.snapshots[i][k] = read_landscape(is);
      if (p.snapshots[i][k].dim != k)
        throw std::runtime_error("process landscape dim out of order: " + path);
    }
  return p;
}

void save_model(const ClassifierModel& model, const std::string& dir) {
  fs::create_directories(dir);
  std::ostringstream mf;
  mf << std::setprecision(17);
  mf << "model topoprocess-classifier 1\n";
  mf << "N " << model.classifiers.size() << '\n';
  mf << "M " << (model.classifiers.empty() ? 0 : model.classifiers.front().length())
     << '\n';
  mf << "p " << model.p << '\n';
  mf << "dims 0 1\n";
  mf << "training_runs " << model.training_runs << '\n';
  mf << "seeds";
  for (auto s : model.seeds) mf << ' ' << s;
  mf << '\n';
  for (std::size_t n = 0; n < model.classifiers.size(); ++n)
    mf << "class " << n << ' '
       << (model.class_labels[n].empty() ? "-" : model.class_labels[n]) << '\n';
  for (std::size_t n = 0; n < model.classifiers.size(); ++n) {
    const auto& c = model.classifiers[n];
    for (std::size_t i = 0; i < c.length(); ++i)
      for (int k = 0; k < 2; ++k) {
        std::ostringstream name;
        name << "class" << std::setw(3) << std::setfill('0') << n << "_snap"
             << std::setw(3) << std::setfill('0') << i << "_dim" << k
             << ".landscape";
        std::ostringstream os;
        write_landscape(os, c.snapshots[i][k]);
        write_file_atomic((fs::path(dir) / name.str()).string(), os.str());
      }
  }
  write_file_atomic((fs::path(dir) / "manifest.txt").string(), mf.str());
}

ClassifierModel load_model(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "manifest.txt");
  if (!is)
    throw std::runtime_error("cannot open model manifest in: " + dir);
  std::string line, word;
  if (!std::getline(is, line) || line != "model topoprocess-classifier 1")
    throw std::runtime_error("malformed model manifest in: " + dir);
  ClassifierModel model;
  std::size_t n_classes = 0, m = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    ls >> word;
    if (word == "N")
      ls >> n_classes;
    else if (word == "M")
      ls >> m;
    else if (word == "p")
      ls >> model.p;
    else if (word == "dims") {
      // fixed to "0 1"
    } else if (word == "training_runs")
      ls >> model.training_runs;
    else if (word == "seeds") {
      std::uint64_t s;
      while (ls >> s) model.seeds.push_back(s);
    } else if (word == "class") {
      std::size_t idx;
      std::string label;
      ls >> idx >> label;
      if (label == "-") label.clear();
      model.class_labels.resize(std::max(model.class_labels.size(), idx + 1));
      model.class_labels[idx] = label;
    } else {
      throw std::runtime_error("unknown model manifest line: " + line);
    }
  }
  if (model.class_labels.size() != n_classes)
    throw std::runtime_error("model manifest class count mismatch in: " + dir);
  model.classifiers.resize(n_classes);
  for (std::size_t n = 0; n < n_classes; ++n) {
    auto& c = model.classifiers[n];
    c.mass_label = model.class_labels[n];
    c.snapshots.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      for (int k = 0; k < 2; ++k) {
        std::ostringstream name;
        name << "class" << std::setw(3) << std::setfill('0') << n << "_snap"
             << std::setw(3) << std::setfill('0') << i << "_dim" << k
             << ".landscape";
        c.snapshots[i][k] =
            read_landscape_file((fs::path(dir) / name.str()).string());
      }
  }
  return model;
}

}  // namespace topo
