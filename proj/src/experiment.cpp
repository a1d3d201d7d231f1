#include "topo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "topo/cubical.hpp"
#include "topo/landscape.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace topo {

namespace {

double parse_p(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfDeath;
    return std::stod(s);
  }
  return v.get<double>();
}

std::string p_to_string(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << std::setprecision(17) << p;
  return os.str();
}

std::optional<int> classify_with_scheme(const ClassifierModel& model,
                                        const TopologicalProcess& q,
                                        const std::string& scheme) {
  if (scheme == "c0") return classify_ck(model, q, 0);
  if (scheme == "c1") return classify_ck(model, q, 1);
  if (scheme == "ca") return classify_ca(model, q);
  throw std::invalid_argument("unknown classification scheme: " + scheme);
}

ScalarField2D matrix_field(const Eigen::ArrayXXd& m) {
  return ScalarField2D(m);
}

void write_matrix_csv(const Eigen::ArrayXXd& m, const std::string& path,
                      const std::string& comment) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (!comment.empty()) os << "# " << comment << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << m(r, c);
    }
    os << '\n';
  }
  write_file_atomic(path, os.str());
}

}  // namespace

ExperimentConfig load_config(const std::string& json_path) {
  std::ifstream is(json_path);
  if (!is) throw std::runtime_error("cannot open config file: " + json_path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("malformed config JSON in " + json_path + ": " +
                             e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("masses")) cfg.masses = j["masses"].get<std::vector<double>>();
  if (j.contains("runs_per_mass")) cfg.runs_per_mass = j["runs_per_mass"];
  if (j.contains("training_runs")) cfg.training_runs = j["training_runs"];
  if (j.contains("snapshots")) cfg.snapshots = j["snapshots"];
  if (j.contains("modes")) cfg.modes = j["modes"];
  if (j.contains("grid")) cfg.grid = j["grid"];
  if (j.contains("steps")) cfg.steps = j["steps"];
  if (j.contains("epsilon")) cfg.epsilon = j["epsilon"];
  if (j.contains("sigma")) cfg.sigma = j["sigma"];
  if (j.contains("levels")) cfg.levels = j["levels"];
  if (j.contains("lo")) cfg.lo = j["lo"];
  if (j.contains("hi")) cfg.hi = j["hi"];
  if (j.contains("p")) cfg.p = parse_p(j["p"]);
  if (j.contains("scheme")) cfg.scheme = j["scheme"];
  if (j.contains("base_seed")) cfg.base_seed = j["base_seed"];
  if (j.contains("wrong_threshold")) cfg.wrong_threshold = j["wrong_threshold"];
  validate_config(cfg);
  return cfg;
}

void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value) {
  auto as_json = [&]() {
    return json::parse(value, nullptr, true);
  };
  if (key == "masses")
    cfg.masses = as_json().get<std::vector<double>>();
  else if (key == "runs_per_mass")
    cfg.runs_per_mass = std::stoi(value);
  else if (key == "training_runs")
    cfg.training_runs = std::stoi(value);
  else if (key == "snapshots")
    cfg.snapshots = std::stoi(value);
  else if (key == "modes")
    cfg.modes = std::stoi(value);
  else if (key == "grid")
    cfg.grid = std::stoi(value);
  else if (key == "steps")
    cfg.steps = std::stol(value);
  else if (key == "epsilon")
    cfg.epsilon = std::stod(value);
  else if (key == "sigma")
    cfg.sigma = std::stod(value);
  else if (key == "levels")
    cfg.levels = std::stoi(value);
  else if (key == "lo")
    cfg.lo = std::stod(value);
  else if (key == "hi")
    cfg.hi = std::stod(value);
  else if (key == "p")
    cfg.p = (value == "inf" || value == "infinity") ? kInfDeath
                                                    : std::stod(value);
  else if (key == "scheme")
    cfg.scheme = value;
  else if (key == "base_seed")
    cfg.base_seed = std::stoull(value);
  else if (key == "wrong_threshold")
    cfg.wrong_threshold = std::stoi(value);
  else
    throw std::invalid_argument("unknown config key: " + key);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.masses.empty())
    throw std::invalid_argument("config: masses must be nonempty");
  if (cfg.runs_per_mass < 1)
    throw std::invalid_argument("config: runs_per_mass must be >= 1");
  if (cfg.training_runs < 1 || cfg.training_runs > cfg.runs_per_mass)
    throw std::invalid_argument(
        "config: training_runs must lie in [1, runs_per_mass]");
  if (cfg.snapshots < 1)
    throw std::invalid_argument("config: snapshots must be >= 1");
  if (cfg.modes < 1) throw std::invalid_argument("config: modes must be >= 1");
  if (cfg.grid < 2) throw std::invalid_argument("config: grid must be >= 2");
  if (cfg.steps < 1) throw std::invalid_argument("config: steps must be >= 1");
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("config: epsilon must be positive");
  if (!(cfg.sigma >= 0.0))
    throw std::invalid_argument("config: sigma must be nonnegative");
  if (cfg.levels < 1)
    throw std::invalid_argument("config: levels must be >= 1");
  if (!(cfg.lo < cfg.hi))
    throw std::invalid_argument("config: lo must be < hi");
  if (!(cfg.p == 1.0 || cfg.p == 2.0 || std::isinf(cfg.p)))
    throw std::invalid_argument("config: p must be 1, 2 or inf");
  if (cfg.scheme != "c0" && cfg.scheme != "c1" && cfg.scheme != "ca")
    throw std::invalid_argument("config: scheme must be c0, c1 or ca");
  if (cfg.wrong_threshold < 0)
    throw std::invalid_argument("config: wrong_threshold must be >= 0");
  for (double m : cfg.masses)
    if (potential_ddf(m) == 0.0)
      throw std::invalid_argument(
          "config: F''(mass) vanishes; no finite endtime");
}

std::string config_json(const ExperimentConfig& cfg) {
  json j;
  j["masses"] = cfg.masses;
  j["runs_per_mass"] = cfg.runs_per_mass;
  j["training_runs"] = cfg.training_runs;
  j["snapshots"] = cfg.snapshots;
  j["modes"] = cfg.modes;
  j["grid"] = cfg.grid;
  j["steps"] = cfg.steps;
  j["epsilon"] = cfg.epsilon;
  j["sigma"] = cfg.sigma;
  j["levels"] = cfg.levels;
  j["lo"] = cfg.lo;
  j["hi"] = cfg.hi;
  j["p"] = p_to_string(cfg.p);
  j["scheme"] = cfg.scheme;
  j["base_seed"] = cfg.base_seed;
  j["wrong_threshold"] = cfg.wrong_threshold;
  return j.dump();
}

LevelQuantizer config_quantizer(const ExperimentConfig& cfg) {
  return LevelQuantizer(cfg.lo, cfg.hi, cfg.levels);
}

std::string mass_label(double mass) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", mass);
  return buf;
}

std::uint64_t run_seed(std::uint64_t base_seed, int mass_index,
                       int run_index) {
  return base_seed + 100000ull * static_cast<std::uint64_t>(mass_index) +
         static_cast<std::uint64_t>(run_index);
}

void write_archive(const std::string& dir, const ChcParams& params, int grid,
                   const std::string& mass_label,
                   const std::vector<double>& times,
                   const std::vector<ScalarField2D>& fields) {
  if (times.size() != fields.size())
    throw std::invalid_argument("write_archive: time/field count mismatch");
  fs::create_directories(dir);
  std::ostringstream mf;
  mf << std::setprecision(17);
  mf << "archive chc 1\n";
  mf << "epsilon " << params.epsilon << '\n';
  mf << "sigma " << params.sigma << '\n';
  mf << "mu " << params.mu << '\n';
  mf << "modes " << params.modes << '\n';
  mf << "steps " << params.steps << '\n';
  mf << "seed " << params.seed << '\n';
  mf << "grid " << grid << '\n';
  mf << "mass " << (mass_label.empty() ? "-" : mass_label) << '\n';
  mf << "endtime " << endtime(params.mu, params.epsilon) << '\n';
  mf << "times";
  for (double t : times) mf << ' ' << t;
  mf << '\n';
  for (std::size_t i = 0; i < fields.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%03zu.field", i);
    write_field(fields[i], (fs::path(dir) / name).string());
    mf << "field " << i << ' ' << name << '\n';
  }
  write_file_atomic((fs::path(dir) / "manifest.txt").string(), mf.str());
}

SnapshotArchive read_archive(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "manifest.txt");
  if (!is)
    throw std::runtime_error("cannot open archive manifest in: " + dir);
  std::string line, word;
  if (!std::getline(is, line) || line != "archive chc 1")
    throw std::runtime_error("malformed archive manifest in: " + dir);
  SnapshotArchive a;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    ls >> word;
    if (word == "epsilon")
      ls >> a.params.epsilon;
    else if (word == "sigma")
      ls >> a.params.sigma;
    else if (word == "mu")
      ls >> a.params.mu;
    else if (word == "modes")
      ls >> a.params.modes;
    else if (word == "steps")
      ls >> a.params.steps;
    else if (word == "seed")
      ls >> a.params.seed;
    else if (word == "grid")
      ls >> a.grid;
    else if (word == "mass") {
      ls >> a.mass_label;
      if (a.mass_label == "-") a.mass_label.clear();
    } else if (word == "endtime") {
      double ignored;
      ls >> ignored;
    } else if (word == "times") {
      double t;
      while (ls >> t) a.times.push_back(t);
    } else if (word == "field") {
      std::size_t idx;
      std::string name;
      ls >> idx >> name;
      a.field_files.resize(std::max(a.field_files.size(), idx + 1));
      a.field_files[idx] = name;
    } else {
      throw std::runtime_error("unknown archive manifest line: " + line);
    }
  }
  if (a.field_files.size() != a.times.size())
    throw std::runtime_error("archive manifest time/field mismatch in: " + dir);
  for (const auto& n : a.field_files)
    if (n.empty())
      throw std::runtime_error("archive manifest missing a field entry in: " +
                               dir);
  return a;
}

ScalarField2D read_archive_field(const std::string& dir,
                                 const SnapshotArchive& a, std::size_t i) {
  if (i >= a.field_files.size())
    throw std::invalid_argument("read_archive_field: index out of range");
  return read_field((fs::path(dir) / a.field_files[i]).string());
}

void cmd_generate(const ExperimentConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  for (std::size_t mi = 0; mi < cfg.masses.size(); ++mi) {
    const double mu = cfg.masses[mi];
    const double t_end = endtime(mu, cfg.epsilon);
    std::vector<double> times(cfg.snapshots);
    for (int l = 1; l <= cfg.snapshots; ++l)
      times[l - 1] = t_end * l / cfg.snapshots;
    for (int r = 0; r < cfg.runs_per_mass; ++r) {
      ChcParams params;
      params.epsilon = cfg.epsilon;
      params.sigma = cfg.sigma;
      params.mu = mu;
      params.modes = cfg.modes;
      params.steps = cfg.steps;
      params.seed = run_seed(cfg.base_seed, static_cast<int>(mi), r);
      auto fields = simulate(params, times, cfg.grid);
      char rdir[32];
      std::snprintf(rdir, sizeof rdir, "run_%03d", r);
      fs::path dir = fs::path(out_dir) / ("mass_" + mass_label(mu)) / rdir;
      write_archive(dir.string(), params, cfg.grid, mass_label(mu), times,
                    fields);
    }
  }
}

TopologicalProcess process_from_archive(const std::string& archive_dir,
                                        const LevelQuantizer& q) {
  SnapshotArchive a = read_archive(archive_dir);
  const double truncation = q.thresholds().back();
  TopologicalProcess proc;
  proc.mass_label = a.mass_label;
  proc.seed = a.params.seed;
  proc.times = a.times;
  proc.snapshots.resize(a.field_files.size());
  for (std::size_t i = 0; i < a.field_files.size(); ++i) {
    ScalarField2D f = read_archive_field(archive_dir, a, i);
    ScalarField2D qf = quantize(f, q);
    CubicalFiltration filt = build_filtration(qf);
    PersistenceResult pers = compute_persistence(filt);
    proc.snapshots[i][0] = landscape_from_diagram(pers.dim0, truncation);
    proc.snapshots[i][1] = landscape_from_diagram(pers.dim1, truncation);
  }
  return proc;
}

void cmd_topology(const std::string& archive_dir, const std::string& out_file,
                  const LevelQuantizer& q) {
  write_process_file(process_from_archive(archive_dir, q), out_file);
}

int cmd_topology_root(const std::string& root, const std::string& out_dir,
                      const LevelQuantizer& q) {
  std::vector<fs::path> archives;
  for (const auto& mass_entry : fs::directory_iterator(root)) {
    if (!mass_entry.is_directory()) continue;
    for (const auto& run_entry : fs::directory_iterator(mass_entry.path())) {
      if (!run_entry.is_directory()) continue;
      if (fs::exists(run_entry.path() / "manifest.txt"))
        archives.push_back(run_entry.path());
    }
  }
  std::sort(archives.begin(), archives.end());
  fs::create_directories(out_dir);
  for (const auto& dir : archives) {
    std::string name = dir.parent_path().filename().string() + "_" +
                       dir.filename().string() + ".process";
    cmd_topology(dir.string(), (fs::path(out_dir) / name).string(), q);
  }
  return static_cast<int>(archives.size());
}

std::map<std::string, std::vector<std::string>> list_process_files(
    const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".process")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& f : files) {
    TopologicalProcess p = read_process_file(f.string());
    groups[p.mass_label].push_back(f.string());
  }
  return groups;
}

void cmd_train(const std::string& processes_dir, const ExperimentConfig& cfg,
               const std::string& model_dir) {
  auto groups = list_process_files(processes_dir);
  std::vector<std::vector<TopologicalProcess>> classes;
  std::vector<std::string> labels;
  for (double m : cfg.masses) {
    std::string label = mass_label(m);
    auto it = groups.find(label);
    if (it == groups.end())
      throw std::runtime_error("train: no processes for mass " + label);
    if (static_cast<int>(it->second.size()) < cfg.training_runs)
      throw std::runtime_error("train: fewer runs than training_runs for mass " +
                               label);
    std::vector<TopologicalProcess> cls;
    for (int r = 0; r < cfg.training_runs; ++r)
      cls.push_back(read_process_file(it->second[r]));
    classes.push_back(std::move(cls));
    labels.push_back(label);
  }
  ClassifierModel model = train(classes, cfg.p, labels);
  save_model(model, model_dir);
}

std::vector<ClassifyRow> cmd_classify(const std::string& model_dir,
                                      const std::vector<std::string>& files,
                                      const std::string& scheme,
                                      const std::string& out_csv) {
  ClassifierModel model = load_model(model_dir);
  std::vector<ClassifyRow> rows;
  for (const auto& f : files) {
    TopologicalProcess p = read_process_file(f);
    auto r = classify_with_scheme(model, p, scheme);
    ClassifyRow row;
    row.file = f;
    row.true_label = p.mass_label;
    row.predicted = r ? *r : -1;
    rows.push_back(std::move(row));
  }
  if (!out_csv.empty()) {
    std::ostringstream os;
    os << "file,true_label,predicted,predicted_label\n";
    for (const auto& r : rows) {
      os << r.file << ',' << r.true_label << ',';
      if (r.predicted < 0)
        os << "FAILURE,";
      else
        os << r.predicted << ','
           << model.class_labels[static_cast<std::size_t>(r.predicted)];
      os << '\n';
    }
    write_file_atomic(out_csv, os.str());
  }
  return rows;
}

EvalReport cmd_evaluate(const std::string& model_dir,
                        const std::string& processes_dir,
                        const ExperimentConfig& cfg,
                        const std::string& out_prefix) {
  ClassifierModel model = load_model(model_dir);
  auto groups = list_process_files(processes_dir);
  EvalReport rep;
  rep.missed_by.assign(static_cast<std::size_t>(cfg.wrong_threshold), 0);
  // Per true class bins for the report body.
  const int nclasses = static_cast<int>(cfg.masses.size());
  std::vector<std::vector<long>> class_bins(
      static_cast<std::size_t>(nclasses),
      std::vector<long>(static_cast<std::size_t>(cfg.wrong_threshold) + 3, 0));
  // columns: hits, missed_by_1.., wrong, failures
  for (int n = 0; n < nclasses; ++n) {
    std::string label = mass_label(cfg.masses[n]);
    auto it = groups.find(label);
    if (it == groups.end())
      throw std::runtime_error("evaluate: no processes for mass " + label);
    for (std::size_t r = static_cast<std::size_t>(cfg.training_runs);
         r < it->second.size(); ++r) {
      TopologicalProcess p = read_process_file(it->second[r]);
      auto pred = classify_with_scheme(model, p, cfg.scheme);
      ++rep.total;
      auto& bins = class_bins[static_cast<std::size_t>(n)];
      if (!pred) {
        ++rep.failures;
        ++rep.wrong;
        ++bins[static_cast<std::size_t>(cfg.wrong_threshold) + 1];
        ++bins[static_cast<std::size_t>(cfg.wrong_threshold) + 2];
        continue;
      }
      int diff = std::abs(*pred - n);
      if (diff == 0) {
        ++rep.hits;
        ++bins[0];
      } else if (diff <= cfg.wrong_threshold) {
        ++rep.missed_by[static_cast<std::size_t>(diff - 1)];
        ++bins[static_cast<std::size_t>(diff)];
      } else {
        ++rep.wrong;
        ++bins[static_cast<std::size_t>(cfg.wrong_threshold) + 1];
      }
    }
  }

  if (!out_prefix.empty()) {
    // CSV
    std::ostringstream csv;
    csv << "# config: " << config_json(cfg) << '\n';
    csv << "true_label,count,hits";
    for (int d = 1; d <= cfg.wrong_threshold; ++d) csv << ",missed_by_" << d;
    csv << ",wrong,failures\n";
    for (int n = 0; n < nclasses; ++n) {
      const auto& bins = class_bins[static_cast<std::size_t>(n)];
      long count = 0;
      for (std::size_t c = 0; c + 1 < bins.size(); ++c) count += bins[c];
      csv << mass_label(cfg.masses[n]) << ',' << count;
      for (std::size_t c = 0; c + 1 < bins.size(); ++c) csv << ',' << bins[c];
      csv << ',' << bins.back() << '\n';
    }
    csv << "total," << rep.total << ',' << rep.hits;
    for (long m : rep.missed_by) csv << ',' << m;
    csv << ',' << rep.wrong << ',' << rep.failures << '\n';
    write_file_atomic(out_prefix + ".csv", csv.str());

    // Aligned text
    std::ostringstream txt;
    txt << "classification report\n";
    txt << "config: " << config_json(cfg) << "\n\n";
    txt << std::left << std::setw(12) << "true_label" << std::right
        << std::setw(8) << "count" << std::setw(8) << "hits";
    for (int d = 1; d <= cfg.wrong_threshold; ++d)
      txt << std::setw(8) << ("miss" + std::to_string(d));
    txt << std::setw(8) << "wrong" << std::setw(10) << "failures" << '\n';
    for (int n = 0; n < nclasses; ++n) {
      const auto& bins = class_bins[static_cast<std::size_t>(n)];
      long count = 0;
      for (std::size_t c = 0; c + 1 < bins.size(); ++c) count += bins[c];
      txt << std::left << std::setw(12) << mass_label(cfg.masses[n])
          << std::right << std::setw(8) << count;
      for (std::size_t c = 0; c + 1 < bins.size(); ++c)
        txt << std::setw(8) << bins[c];
      txt << std::setw(10) << bins.back() << '\n';
    }
    txt << std::left << std::setw(12) << "total" << std::right << std::setw(8)
        << rep.total << std::setw(8) << rep.hits;
    for (long m : rep.missed_by) txt << std::setw(8) << m;
    txt << std::setw(8) << rep.wrong << std::setw(10) << rep.failures << '\n';
    txt << "\nhit rate: " << rep.hit_rate() << '\n';
    write_file_atomic(out_prefix + ".txt", txt.str());
  }
  return rep;
}

Eigen::ArrayXXd cmd_heatmap(const std::string& model_dir,
                            const std::string& out_prefix) {
  ClassifierModel model = load_model(model_dir);
  const int n = static_cast<int>(model.classifiers.size());
  Eigen::ArrayXXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < i) {
        d(i, j) = d(j, i);
        continue;
      }
      if (i == j) {
        d(i, j) = 0.0;
        continue;
      }
      d(i, j) = process_distance(model.classifiers[static_cast<std::size_t>(i)],
                                 model.classifiers[static_cast<std::size_t>(j)],
                                 model.p, 0) +
                process_distance(model.classifiers[static_cast<std::size_t>(i)],
                                 model.classifiers[static_cast<std::size_t>(j)],
                                 model.p, 1);
    }
  if (!out_prefix.empty()) {
    std::string labels;
    for (int i = 0; i < n; ++i) {
      if (i) labels += ' ';
      labels += model.class_labels[static_cast<std::size_t>(i)];
    }
    write_matrix_csv(d, out_prefix + ".csv", "labels: " + labels);
    double top = d.maxCoeff();
    write_pgm(matrix_field(d), out_prefix + ".pgm", 0.0,
              top > 0.0 ? top : 1.0);
  }
  return d;
}

TimeClassifyReport cmd_time_classify(const std::string& processes_dir,
                                     const ExperimentConfig& cfg,
                                     const std::string& out_prefix) {
  if (cfg.scheme != "c0" && cfg.scheme != "c1")
    throw std::invalid_argument(
        "time-classify: scheme must be c0 or c1 (single-dimension)");
  const int k = cfg.scheme == "c0" ? 0 : 1;
  auto groups = list_process_files(processes_dir);
  TimeClassifyReport rep;
  const int nm = static_cast<int>(cfg.masses.size());
  const int m = cfg.snapshots;
  rep.hit = Eigen::ArrayXXd::Zero(m, nm);
  rep.miss1 = Eigen::ArrayXXd::Zero(m, nm);
  rep.missge2 = Eigen::ArrayXXd::Zero(m, nm);
  for (int col = 0; col < nm; ++col) {
    std::string label = mass_label(cfg.masses[static_cast<std::size_t>(col)]);
    auto it = groups.find(label);
    if (it == groups.end())
      throw std::runtime_error("time-classify: no processes for mass " + label);
    const auto& files = it->second;
    if (static_cast<int>(files.size()) <= cfg.training_runs)
      throw std::runtime_error(
          "time-classify: no test runs left for mass " + label);
    std::vector<TopologicalProcess> procs;
    for (const auto& f : files) procs.push_back(read_process_file(f));
    for (const auto& p : procs)
      if (static_cast<int>(p.length()) != m)
        throw std::runtime_error(
            "time-classify: process length differs from configured snapshots");

    auto snapshot_process = [](const TopologicalProcess& p, int i) {
      TopologicalProcess q;
      q.snapshots.push_back(p.snapshots[static_cast<std::size_t>(i)]);
      if (static_cast<std::size_t>(i) < p.times.size())
        q.times.push_back(p.times[static_cast<std::size_t>(i)]);
      q.mass_label = p.mass_label;
      q.seed = p.seed;
      return q;
    };

    std::vector<std::vector<TopologicalProcess>> classes;
    std::vector<std::string> class_labels;
    for (int i = 0; i < m; ++i) {
      std::vector<TopologicalProcess> cls;
      for (int r = 0; r < cfg.training_runs; ++r)
        cls.push_back(snapshot_process(procs[static_cast<std::size_t>(r)], i));
      classes.push_back(std::move(cls));
      class_labels.push_back("t" + std::to_string(i + 1));
    }
    ClassifierModel model = train(classes, cfg.p, class_labels);

    const long ntest = static_cast<long>(procs.size()) - cfg.training_runs;
    for (std::size_t r = static_cast<std::size_t>(cfg.training_runs);
         r < procs.size(); ++r)
      for (int i = 0; i < m; ++i) {
        auto pred = classify_ck(model, snapshot_process(procs[r], i), k);
        ++rep.total_queries;
        int diff = pred ? std::abs(*pred - i) : m;  // Failure -> worst bin
        if (diff == 0)
          rep.hit(i, col) += 1.0;
        else if (diff == 1)
          rep.miss1(i, col) += 1.0;
        else
          rep.missge2(i, col) += 1.0;
      }
    rep.hit.col(col) /= static_cast<double>(ntest);
    rep.miss1.col(col) /= static_cast<double>(ntest);
    rep.missge2.col(col) /= static_cast<double>(ntest);
    rep.mass_labels.push_back(label);
  }

  if (!out_prefix.empty()) {
    std::string labels;
    for (std::size_t i = 0; i < rep.mass_labels.size(); ++i) {
      if (i) labels += ' ';
      labels += rep.mass_labels[i];
    }
    std::string comment =
        "rows: snapshot index 1..M; columns (masses): " + labels +
        "; config: " + config_json(cfg);
    write_matrix_csv(rep.hit, out_prefix + "_hit.csv", comment);
    write_matrix_csv(rep.miss1, out_prefix + "_miss1.csv", comment);
    write_matrix_csv(rep.missge2, out_prefix + "_missge2.csv", comment);
    write_pgm(matrix_field(rep.hit), out_prefix + "_hit.pgm", 0.0, 1.0);
    write_pgm(matrix_field(rep.miss1), out_prefix + "_miss1.pgm", 0.0, 1.0);
    write_pgm(matrix_field(rep.missge2), out_prefix + "_missge2.pgm", 0.0,
              1.0);
    std::ostringstream txt;
    txt << "snapshot-time classification report\n";
    txt << "config: " << config_json(cfg) << '\n';
    txt << "queries: " << rep.total_queries << '\n';
    txt << "rows = snapshot index, columns = masses (" << labels << ")\n\n";
    txt << std::setprecision(3);
    txt << "hit frequencies:\n" << rep.hit << "\n\n";
    txt << "missed-by-one frequencies:\n" << rep.miss1 << "\n\n";
    txt << "missed-by-two-or-more frequencies:\n" << rep.missge2 << '\n';
    write_file_atomic(out_prefix + ".txt", txt.str());
  }
  return rep;
}

}  // namespace topo
