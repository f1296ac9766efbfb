// Experiment runner: binds a key=value config to one estimator pipeline and
// writes CSV/JSON artifacts plus a manifest that reproduces them.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "hyperwalk/config.hpp"
#include "hyperwalk/estimators.hpp"
#include "hyperwalk/output.hpp"
#include "hyperwalk/selftest.hpp"

namespace hw = hyperwalk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;
constexpr int kExitRuntime = 4;

struct Run {
  std::string subcommand;
  hw::ExperimentConfig config;
  std::string out_dir;
  bool svg = false;
  std::vector<std::string> outputs;

  void write(const std::string& name, const std::string& content) {
    hw::write_text_file((std::filesystem::path(out_dir) / name).string(), content);
    outputs.push_back(name);
  }
  void write_json(const std::string& name, const nlohmann::json& j) { write(name, j.dump(2) + "\n"); }
};

int run_speed(Run& run) {
  const auto backend = hw::make_backend(run.config.backend);
  const auto rep = std::visit([&](const auto& g) { return hw::estimate_speed(g, run.config.params); },
                              backend);
  run.write("speed.csv", hw::values_csv(rep));
  run.write("speed_checkpoints.csv", hw::checkpoints_csv(rep));
  run.write_json("speed.json", rep.to_json());
  if (run.svg) {
    hw::PlotSeries s{"speed", {}, {}, {}};
    for (const auto& c : rep.checkpoints) {
      s.x.push_back(std::log2(c.steps));
      s.y.push_back(c.estimate);
      s.err.push_back(c.stderr_);
    }
    run.write("speed_convergence.svg", hw::svg_plot("speed vs horizon", "log2 N", "l", {s}));
  }
  std::cout << "speed " << hw::format_double(rep.estimate) << " +- "
            << hw::format_double(rep.stderr_) << " (" << rep.metric << " metric)\n";
  return kExitOk;
}

int run_entropy(Run& run) {
  const auto backend = hw::make_backend(run.config.backend);
  const auto rep = std::visit(
      [&](const auto& g) { return hw::estimate_entropy(g, run.config.params); }, backend);
  run.write("entropy.csv", hw::values_csv(rep));
  run.write_json("entropy.json", rep.to_json());
  std::cout << "entropy " << hw::format_double(rep.estimate) << " +- "
            << hw::format_double(rep.stderr_) << " (" << rep.method << ", mean truncated mass "
            << hw::format_double(rep.diagnostics["mean_truncated_mass"].get<double>()) << ")\n";
  return kExitOk;
}

int run_dimension(Run& run) {
  const auto backend = hw::make_backend(run.config.backend);
  const auto rep = std::visit(
      [&](const auto& g) { return hw::estimate_local_dimension(g, run.config.params); }, backend);
  run.write("slopes.csv", hw::slopes_csv(rep));
  run.write("radii.csv", hw::radius_csv(rep));
  run.write_json("dimension.json", rep.to_json());
  if (run.svg) {
    hw::PlotSeries s{"mean ball mass", {}, {}, {}};
    const double norm = static_cast<double>(rep.samples - 1) * static_cast<double>(rep.probes);
    for (std::size_t c = 0; c < rep.grid.size(); ++c) {
      if (rep.column_pairs[c] <= 0) continue;
      s.x.push_back(-static_cast<double>(rep.grid[c]));
      s.y.push_back(std::log(rep.column_pairs[c] / norm));
    }
    run.write("ball_mass.svg", hw::svg_plot("log ball mass vs log r", "log r", "log mass", {s}));
  }
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "median slope " << hw::format_double(rep.median) << " +- "
            << hw::format_double(rep.median_stderr) << ", IQR " << hw::format_double(rep.iqr)
            << " over " << rep.usable_probes << " probes\n";
  const bool dropped = std::any_of(rep.radius_kept.begin(), rep.radius_kept.end(),
                                   [](bool kept) { return !kept; });
  return dropped || rep.usable_probes < 2 ? kExitPartial : kExitOk;
}

int run_shadows(Run& run) {
  const auto backend = hw::make_backend(run.config.backend);
  const auto rep = std::visit(
      [&](const auto& g) { return hw::verify_shadow_sandwich(g, run.config.params); }, backend);
  run.write("shadow_grid.csv", hw::shadow_grid_csv(rep));
  run.write_json("shadows.json", rep.to_json());
  std::cout << "shadow sandwich: " << (rep.fit_found ? "fit" : "no fit") << " log C = "
            << hw::format_double(rep.fitted_log_c) << ", R0 = " << hw::format_double(rep.fitted_r0)
            << ", pass rate " << hw::format_double(rep.pass_rate) << ", log-linear "
            << (rep.log_linear ? "exact" : "violated") << '\n';
  return kExitOk;
}

int run_stationarity(Run& run) {
  const auto backend = hw::make_backend(run.config.backend);
  const auto& p = run.config.params;
  const auto rep = std::visit(
      [&](const auto& g) { return hw::stationarity_test(g, p, p.stationarity_weighted); }, backend);
  run.write_json("stationarity.json", rep.to_json());
  std::cout << (rep.weighted ? "weighted" : "unweighted") << " shift test: chi2 "
            << hw::format_double(rep.statistic) << " on " << rep.degrees_of_freedom
            << " df, p-value " << hw::format_double(rep.p_value) << " -> "
            << (rep.passed ? "pass" : "reject") << (rep.vacuous ? " (vacuous)" : "") << '\n';
  return kExitOk;
}

int run_pq_sweep(Run& run) {
  const auto& c = run.config;
  const auto rep = hw::pq_sweep(c.params, c.sweep_sides, c.sweep_tiles);
  run.write("sweep.csv", hw::sweep_csv(rep.rows));
  run.write_json("sweep.json", rep.to_json());
  if (run.svg) {
    std::vector<hw::PlotSeries> series;
    for (const auto& r : rep.rows) {
      if (r.status != "ok") continue;
      const std::string name = "P = " + std::to_string(r.P);
      auto it = std::find_if(series.begin(), series.end(),
                             [&](const auto& s) { return s.name == name; });
      if (it == series.end()) it = series.insert(series.end(), {name, {}, {}, {}});
      it->x.push_back(std::log(r.Q));
      it->y.push_back(r.delta_hat);
      it->err.push_back(r.delta_se);
    }
    run.write("sweep.svg", hw::svg_plot("dimension drop", "log Q", "delta = h / l", series));
  }
  std::cout << hw::sweep_csv(rep.rows) << "max fitted c " << hw::format_double(rep.max_fitted_c)
            << ", delta decreasing " << (rep.delta_decreasing ? "yes" : "no")
            << ", h <= log Q " << (rep.entropy_bounded ? "yes" : "no") << '\n';
  for (const auto& r : rep.rows) {
    if (r.status != "ok") std::cerr << "cell P=" << r.P << " Q=" << r.Q << ": " << r.error << '\n';
  }
  return rep.partial ? kExitPartial : kExitOk;
}

int run_p_sweep(Run& run) {
  const auto& c = run.config;
  const auto backend = hw::make_backend(c.backend);
  const auto rep = hw::p_sweep(backend, c.params, c.sweep_p, c.jump_sigmas);
  run.write("p_sweep.csv", hw::sweep_csv(rep.rows));
  run.write_json("p_sweep.json", rep.to_json());
  if (run.svg) {
    hw::PlotSeries s{"delta", {}, {}, {}};
    for (const auto& r : rep.rows) {
      if (r.status != "ok") continue;
      s.x.push_back(r.p);
      s.y.push_back(r.delta_hat);
      s.err.push_back(r.delta_se);
    }
    run.write("p_sweep.svg", hw::svg_plot("delta vs p", "p", "delta = h / l", {s}));
  }
  std::cout << hw::sweep_csv(rep.rows);
  for (std::size_t i = 0; i < rep.jump_after.size(); ++i) {
    if (rep.jump_after[i]) {
      std::cerr << "jump between p = " << rep.rows[i].p << " and p = " << rep.rows[i + 1].p
                << ": inspect\n";
    }
  }
  return rep.partial ? kExitPartial : kExitOk;
}

int run_selftest(Run& run) {
  const auto backend = hw::make_backend(run.config.backend);
  int rank = 2;
  if (const auto* f = std::get_if<hw::FreeGroup>(&backend)) rank = f->rank();
  const auto gaps = hw::run_selftest(rank, run.config.params.seed, run.config.params.threads);
  run.write_json("selftest.json", hw::selftest_json(gaps));
  bool ok = true;
  for (const auto& g : gaps) {
    std::printf("%-4s %-50s gap %.3g (tol %.3g)\n", g.passed ? "ok" : "FAIL", g.name.c_str(),
                g.gap, g.tolerance);
    ok = ok && g.passed;
  }
  return ok ? kExitOk : kExitRuntime;
}

int dispatch(Run& run) {
  if (run.subcommand == "estimate-speed") return run_speed(run);
  if (run.subcommand == "estimate-entropy") return run_entropy(run);
  if (run.subcommand == "estimate-dimension") return run_dimension(run);
  if (run.subcommand == "verify-shadows") return run_shadows(run);
  if (run.subcommand == "stationarity-test") return run_stationarity(run);
  if (run.subcommand == "pq-sweep") return run_pq_sweep(run);
  if (run.subcommand == "p-sweep") return run_p_sweep(run);
  if (run.subcommand == "selftest") return run_selftest(run);
  throw hw::ConfigError({"unknown subcommand '" + run.subcommand + "'"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on percolation clusters of hyperbolic Cayley graphs"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "hyperwalk-out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> sets;
  bool svg = false;
  std::string manifest_path;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"estimate-speed", "speed l of the walk, with a convergence table"},
      {"estimate-entropy", "asymptotic entropy h by exact path-probability DP"},
      {"estimate-dimension", "local-dimension slopes of the harmonic measure"},
      {"verify-shadows", "shadow sandwich check with fitted constants"},
      {"stationarity-test", "degree-biased shift invariance, chi-square"},
      {"pq-sweep", "delta = h/l over {P,Q} tilings"},
      {"p-sweep", "delta over retention probabilities on one backend"},
      {"selftest", "estimators against closed-form oracles"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--set", sets, "override one key (key=value), repeatable");
    sub->add_flag("--svg", svg, "also write SVG plots");
  }
  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest");
  rerun->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
  rerun->add_option("--out", out_dir, "output directory");
  rerun->add_flag("--svg", svg, "also write SVG plots");

  CLI11_PARSE(app, argc, argv);

  Run run;
  try {
    hw::ConfigValues values;
    if (rerun->parsed()) {
      std::ifstream in(manifest_path);
      if (!in) throw hw::ConfigError({"cannot open manifest '" + manifest_path + "'"});
      values = hw::config_from_manifest(nlohmann::json::parse(in), &run.subcommand);
    } else {
      run.subcommand = app.get_subcommands().front()->get_name();
      if (!config_path.empty()) values = hw::load_config_file(config_path);
      hw::apply_environment_overrides(values);
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw hw::ConfigError({"--set expects key=value: " + kv});
        values[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      if (seed) values["seed"] = std::to_string(*seed);
      if (threads) values["threads"] = std::to_string(*threads);
    }
    run.config = hw::resolve_config(values);
  } catch (const hw::ConfigError& e) {
    for (const auto& p : e.problems()) std::cerr << "config error: " << p << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  run.out_dir = out_dir;
  run.svg = svg;

  int status = kExitRuntime;
  try {
    status = dispatch(run);
  } catch (const hw::ConfigError& e) {
    for (const auto& p : e.problems()) std::cerr << "config error: " << p << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kExitRuntime;
  }
  try {
    run.outputs.push_back("manifest.json");
    hw::write_text_file((std::filesystem::path(out_dir) / "manifest.json").string(),
                        hw::make_manifest(run.subcommand, run.config, run.outputs, status).dump(2) +
                            "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return status;
}
