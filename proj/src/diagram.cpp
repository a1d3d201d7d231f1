#include "topo/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "topo/field.hpp"  // write_file_atomic

namespace topo {

namespace {

double diag_dist(const std::pair<double, double>& pt) {
  return (pt.second - pt.first) / 2.0;
}

double sup_dist(const std::pair<double, double>& a,
                const std::pair<double, double>& b) {
  return std::max(std::abs(a.first - b.first), std::abs(a.second - b.second));
}

void require_finite(const PersistenceDiagram& d, const char* who) {
  for (const auto& pt : d.points)
    if (std::isinf(pt.second))
      throw std::invalid_argument(std::string(who) +
                                  ": diagram contains an untruncated "
                                  "infinite death; truncate essentials first");
}

// Augmenting-path step of Kuhn's maximum-matching algorithm on the
// diagonal-augmented bipartite graph.  adj(i,j) says whether left node i may
// be matched to right node j at the current radius.
bool try_augment(int i, const std::vector<std::vector<bool>>& adj,
                 std::vector<int>& match_right, std::vector<bool>& visited) {
  const int m = static_cast<int>(adj[i].size());
  for (int j = 0; j < m; ++j) {
    if (!adj[i][j] || visited[j]) continue;
    visited[j] = true;
    if (match_right[j] < 0 ||
        try_augment(match_right[j], adj, match_right, visited)) {
      match_right[j] = i;
      return true;
    }
  }
  return false;
}

bool feasible(const std::vector<std::vector<double>>& cost, double r) {
  const int n = static_cast<int>(cost.size());
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) adj[i][j] = cost[i][j] <= r;
  std::vector<int> match_right(n, -1);
  for (int i = 0; i < n; ++i) {
    std::vector<bool> visited(n, false);
    if (!try_augment(i, adj, match_right, visited)) return false;
  }
  return true;
}

// Diagonal-augmented square cost matrix: left = A points then diagonal
// copies for B's points; right = B points then diagonal copies for A's.
std::vector<std::vector<double>> augmented_costs(const PersistenceDiagram& a,
                                                 const PersistenceDiagram& b) {
  const int na = static_cast<int>(a.points.size());
  const int nb = static_cast<int>(b.points.size());
  const int n = na + nb;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < na && j < nb)
        cost[i][j] = sup_dist(a.points[i], b.points[j]);
      else if (i < na)
        cost[i][j] = diag_dist(a.points[i]);
      else if (j < nb)
        cost[i][j] = diag_dist(b.points[j]);
      else
        cost[i][j] = 0.0;
    }
  return cost;
}

// Exact minimum-cost perfect matching (Hungarian method with potentials).
double hungarian(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += a[p[j] - 1][j - 1];
  return total;
}

}  // namespace

PersistenceDiagram truncated(const PersistenceDiagram& d, double truncation) {
  if (!std::isfinite(truncation))
    throw std::invalid_argument("truncated: truncation must be finite");
  PersistenceDiagram out;
  out.dim = d.dim;
  for (const auto& pt : d.points) {
    if (pt.first > truncation)
      throw std::invalid_argument(
          "truncated: truncation lies below a birth value");
    double death = std::isinf(pt.second) ? truncation : pt.second;
    if (pt.first < death) out.points.emplace_back(pt.first, death);
  }
  return out;
}

double bottleneck_distance(const PersistenceDiagram& a,
                           const PersistenceDiagram& b) {
  require_finite(a, "bottleneck_distance");
  require_finite(b, "bottleneck_distance");
  if (a.points.empty() && b.points.empty()) return 0.0;
  auto cost = augmented_costs(a, b);
  // Candidate radii: every distinct finite cost entry.
  std::vector<double> cand;
  cand.reserve(cost.size() * cost.size());
  for (const auto& row : cost)
    for (double c : row) cand.push_back(c);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // Smallest candidate radius for which a perfect matching exists.
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible(cost, cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

double wasserstein_distance(const PersistenceDiagram& a,
                            const PersistenceDiagram& b, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("wasserstein_distance: p must be >= 1");
  if (std::isinf(p)) return bottleneck_distance(a, b);
  require_finite(a, "wasserstein_distance");
  require_finite(b, "wasserstein_distance");
  if (a.points.empty() && b.points.empty()) return 0.0;
  auto cost = augmented_costs(a, b);
  double scale = 0.0;
  for (const auto& row : cost)
    for (double c : row) scale = std::max(scale, c);
  if (scale == 0.0) return 0.0;
  for (auto& row : cost)
    for (double& c : row) c = std::pow(c / scale, p);
  double total = hungarian(cost);
  return scale * std::pow(total, 1.0 / p);
}

void write_diagram_csv(const std::vector<PersistenceDiagram>& dgms,
                       const std::string& path) {
  std::ostringstream os;
  os.precision(17);
  os << "dim,birth,death\n";
  for (const auto& d : dgms)
    for (const auto& pt : d.points) {
      os << d.dim << ',' << pt.first << ',';
      if (std::isinf(pt.second))
        os << "inf";
      else
        os << pt.second;
      os << '\n';
    }
  write_file_atomic(path, os.str());
}

std::vector<PersistenceDiagram> read_diagram_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open diagram file: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("dim,birth,death", 0) != 0)
    throw std::runtime_error("malformed diagram header: " + path);
  std::map<int, PersistenceDiagram> by_dim;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    int dim;
    double birth;
    std::string death_tok;
    if (!(ls >> dim >> birth >> death_tok))
      throw std::runtime_error("malformed diagram row: " + path);
    double death =
        death_tok == "inf" ? kInfDeath : std::stod(death_tok);
    auto& d = by_dim[dim];
    d.dim = dim;
    d.points.emplace_back(birth, death);
  }
  std::vector<PersistenceDiagram> out;
  for (auto& [k, d] : by_dim) out.push_back(std::move(d));
  return out;
}

}  // namespace topo
