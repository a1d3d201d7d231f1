#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "topo/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct ConfigArgs {
  std::string preset;
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--preset", args.preset,
                  "named preset (resolved as presets/<name>.json, or a path)");
  cmd->add_option("--config", args.config_path, "path to a config JSON file");
  cmd->add_option("--set", args.overrides,
                  "override a config key, as key=value (repeatable)");
}

std::string resolve_preset(const std::string& name, const char* argv0) {
  if (name.find('/') != std::string::npos) return name;
  std::string file = name + ".json";
  if (const char* env = std::getenv("TOPOPROCESS_PRESETS")) {
    fs::path p = fs::path(env) / file;
    if (fs::exists(p)) return p.string();
  }
  fs::path local = fs::path("presets") / file;
  if (fs::exists(local)) return local.string();
  std::error_code ec;
  fs::path exe = fs::canonical(argv0, ec);
  if (!ec) {
    fs::path near = exe.parent_path() / "presets" / file;
    if (fs::exists(near)) return near.string();
    fs::path up = exe.parent_path().parent_path() / "presets" / file;
    if (fs::exists(up)) return up.string();
  }
  throw std::runtime_error("preset not found: " + name);
}

topo::ExperimentConfig resolve_config(const ConfigArgs& args,
                                      const char* argv0) {
  topo::ExperimentConfig cfg;
  if (!args.preset.empty())
    cfg = topo::load_config(resolve_preset(args.preset, argv0));
  if (!args.config_path.empty()) cfg = topo::load_config(args.config_path);
  for (const auto& kv : args.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got: " + kv);
    topo::apply_config_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  topo::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "topoprocess: persistent homology of evolving 2D scalar fields and "
      "nearest-classifier experiments"};
  app.require_subcommand(1);

  ConfigArgs gen_cfg, topo_cfg, train_cfg, cls_cfg, ev_cfg, time_cfg;

  auto* gen = app.add_subcommand(
      "generate", "simulate trajectories and archive field snapshots");
  std::string gen_out;
  gen->add_option("--out", gen_out, "output directory for archives")
      ->required();
  add_config_options(gen, gen_cfg);

  auto* topol = app.add_subcommand(
      "topology", "turn archived snapshots into landscape process files");
  std::string topo_archive, topo_root, topo_out;
  topol->add_option("--archive", topo_archive,
                    "one archive directory (with manifest.txt)");
  topol->add_option("--root", topo_root,
                    "root directory holding mass_*/run_* archives");
  topol->add_option("--out", topo_out,
                    "output .process file (--archive) or directory (--root)")
      ->required();
  add_config_options(topol, topo_cfg);

  auto* tr = app.add_subcommand(
      "train", "build averaged classifiers from training processes");
  std::string tr_processes, tr_model;
  tr->add_option("--processes", tr_processes, "directory of .process files")
      ->required();
  tr->add_option("--model", tr_model, "output model directory")->required();
  add_config_options(tr, train_cfg);

  auto* cls = app.add_subcommand("classify",
                                 "classify individual process files");
  std::string cls_model, cls_out, cls_scheme;
  std::vector<std::string> cls_files;
  cls->add_option("--model", cls_model, "model directory")->required();
  cls->add_option("--scheme", cls_scheme, "classification scheme: c0, c1, ca");
  cls->add_option("--out", cls_out, "output CSV (optional)");
  cls->add_option("files", cls_files, "process files to classify")
      ->required();
  add_config_options(cls, cls_cfg);

  auto* ev = app.add_subcommand(
      "evaluate", "classify held-out runs and write a report");
  std::string ev_model, ev_processes, ev_out;
  ev->add_option("--model", ev_model, "model directory")->required();
  ev->add_option("--processes", ev_processes, "directory of .process files")
      ->required();
  ev->add_option("--out", ev_out, "output prefix for .csv/.txt")->required();
  add_config_options(ev, ev_cfg);

  auto* hm = app.add_subcommand(
      "heatmap", "pairwise distances between a model's classifiers");
  std::string hm_model, hm_out;
  hm->add_option("--model", hm_model, "model directory")->required();
  hm->add_option("--out", hm_out, "output prefix for .csv/.pgm")->required();

  auto* tc = app.add_subcommand(
      "time-classify", "guess the snapshot time of individual snapshots");
  std::string tc_processes, tc_out;
  tc->add_option("--processes", tc_processes, "directory of .process files")
      ->required();
  tc->add_option("--out", tc_out, "output prefix for report files")
      ->required();
  add_config_options(tc, time_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    nlohmann::json err;
    err["error"] = std::string("argument error: ") + e.what();
    std::cerr << err.dump() << '\n';
    return 2;
  }

  try {
    if (*gen) {
      auto cfg = resolve_config(gen_cfg, argv[0]);
      topo::cmd_generate(cfg, gen_out);
      std::cout << "generated " << cfg.masses.size() * cfg.runs_per_mass
                << " archives under " << gen_out << '\n';
    } else if (*topol) {
      auto cfg = resolve_config(topo_cfg, argv[0]);
      auto q = topo::config_quantizer(cfg);
      if (topo_archive.empty() == topo_root.empty())
        throw std::invalid_argument(
            "topology: exactly one of --archive/--root is required");
      if (!topo_archive.empty()) {
        topo::cmd_topology(topo_archive, topo_out, q);
        std::cout << "wrote " << topo_out << '\n';
      } else {
        int n = topo::cmd_topology_root(topo_root, topo_out, q);
        std::cout << "wrote " << n << " process files under " << topo_out
                  << '\n';
      }
    } else if (*tr) {
      auto cfg = resolve_config(train_cfg, argv[0]);
      topo::cmd_train(tr_processes, cfg, tr_model);
      std::cout << "saved model to " << tr_model << '\n';
    } else if (*cls) {
      auto cfg = resolve_config(cls_cfg, argv[0]);
      std::string scheme = cls_scheme.empty() ? cfg.scheme : cls_scheme;
      auto rows = topo::cmd_classify(cls_model, cls_files, scheme, cls_out);
      for (const auto& r : rows)
        std::cout << r.file << " -> "
                  << (r.predicted < 0 ? std::string("FAILURE")
                                      : std::to_string(r.predicted))
                  << '\n';
    } else if (*ev) {
      auto cfg = resolve_config(ev_cfg, argv[0]);
      auto rep = topo::cmd_evaluate(ev_model, ev_processes, cfg, ev_out);
      std::cout << "hits " << rep.hits << "/" << rep.total << " (rate "
                << rep.hit_rate() << "), wrong " << rep.wrong << ", failures "
                << rep.failures << '\n';
    } else if (*hm) {
      topo::cmd_heatmap(hm_model, hm_out);
      std::cout << "wrote " << hm_out << ".csv and " << hm_out << ".pgm\n";
    } else if (*tc) {
      auto cfg = resolve_config(time_cfg, argv[0]);
      auto rep = topo::cmd_time_classify(tc_processes, cfg, tc_out);
      std::cout << "time-classified " << rep.total_queries
                << " snapshots; reports at " << tc_out << "*\n";
    }
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 0;
}
