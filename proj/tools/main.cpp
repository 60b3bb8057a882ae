// Command-line front end: simulate benchmark patterns, fit the samplers over
// an eta grid, run replicate studies, ingest shot CSVs, and render reports.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhppclust/grid.hpp"
#include "nhppclust/inference.hpp"
#include "nhppclust/ingest.hpp"
#include "nhppclust/io.hpp"
#include "nhppclust/mfm.hpp"
#include "nhppclust/sampler.hpp"
#include "nhppclust/simulate.hpp"
#include "nhppclust/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nhppclust;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Grid grid_20x20() {
  return build_grid(StudyRegion{0.0, 20.0, 0.0, 20.0}, 20, 20);
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out + ": " +
                             ec.message());
  }
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void check_eta_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw UsageError("eta grid must not be empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) {
      throw UsageError("eta grid values must be nonnegative");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw UsageError("eta grid must be strictly increasing");
    }
  }
}

// Dahl point-estimate surface of a fit: per box, the intensity of its cluster.
std::vector<double> dahl_surface(const FitReport& report) {
  std::vector<double> values(report.z_hat.size());
  for (std::size_t b = 0; b < values.size(); ++b) {
    values[b] = report.lambda_hat[static_cast<std::size_t>(report.z_hat[b])];
  }
  return values;
}

void write_surface_pair(const std::string& out, const std::string& stem,
                        const Grid& grid, const std::vector<double>& values) {
  write_matrix_csv(join_path(out, stem + ".csv"), grid, values);
  write_heatmap_svg(join_path(out, stem + ".svg"), grid, values);
}

std::string eta_tag(double eta) {
  // 0.5 -> "0.5", 2 -> "2": shortest decimal form, safe in file names.
  std::ostringstream tag;
  tag << eta;
  return tag.str();
}

struct CommonFitOptions {
  Hyperparams hyper;
  SamplerConfig chain;
  MfmConfig mfm;
  unsigned threads = 0;
  std::string init = "single";
};

void add_hyper_options(CLI::App* cmd, CommonFitOptions& opts) {
  cmd->add_option("-a,--shape-a", opts.hyper.a,
                  "Gamma base measure shape (default 1)");
  cmd->add_option("-b,--rate-b", opts.hyper.b,
                  "Gamma base measure rate (default 1)");
  cmd->add_option("--alpha", opts.hyper.alpha,
                  "Concentration parameter (default 1)");
  cmd->add_option("--gamma", opts.mfm.gamma,
                  "Dirichlet weight of the benchmark model (default 1)");
  cmd->add_option("--burn-in", opts.chain.burn_in,
                  "Discarded sweeps (default 2000)");
  cmd->add_option("--retained", opts.chain.retained,
                  "Post-burn-in sweeps (default 2000)");
  cmd->add_option("--thin", opts.chain.thin,
                  "Keep every thin-th post-burn-in sweep (default 10)");
  cmd->add_option("--threads", opts.threads,
                  "Worker threads for independent chains (0 = all cores)");
  cmd->add_option("--init", opts.init,
                  "Label initialization: single | random (default single)")
      ->check(CLI::IsMember({"single", "random"}));
  cmd->add_option("--init-clusters", opts.chain.init_clusters,
                  "Cluster count for random initialization (default 4)");
}

void apply_init(CommonFitOptions& opts) {
  opts.chain.init = opts.init == "random" ? InitPolicy::random_labels
                                          : InitPolicy::single_cluster;
}

int cmd_simulate(int setting, std::uint64_t seed, const std::string& out) {
  const Grid grid = grid_20x20();
  SimulationSetting sim = make_setting(setting, grid);
  const PointPattern pattern = simulate_nhpp(sim.surface(), seed);
  ensure_out_dir(out);
  write_pattern_json(join_path(out, "pattern.json"), pattern);
  write_truth_json(join_path(out, "truth.json"), sim);
  std::cout << "setting " << setting << ": " << pattern.size()
            << " points -> " << out << "\n";
  return kExitOk;
}

int cmd_fit(const std::string& pattern_path, const std::string& out,
            const std::string& model, int n_x, int n_y,
            const std::vector<double>& eta_grid, std::uint64_t seed,
            bool dump_chains, CommonFitOptions opts) {
  check_eta_grid(eta_grid);
  apply_init(opts);
  opts.chain.seed = seed;
  const PointPattern pattern = read_pattern_json(pattern_path);
  const Grid grid = build_grid(pattern.region, n_x, n_y);
  const BinnedPattern binned = bin_points(pattern, grid);
  const NeighborGraph graph = rook_neighbors(grid);
  ensure_out_dir(out);

  if (model == "mfm") {
    const FitOutcome outcome = fit_one(binned, graph, opts.hyper, 0.0,
                                       opts.chain, Model::mfm, opts.mfm);
    write_fit_report_json(join_path(out, "fit_mfm.json"), outcome.report);
    if (dump_chains) {
      write_chain_jsonl(join_path(out, "chain_mfm.jsonl"), outcome.chain);
    }
    write_surface_pair(out, "surface_mfm", grid, dahl_surface(outcome.report));
    std::cout << "mfm fit: k_hat=" << outcome.report.k_hat << " -> " << out
              << "\n";
    return kExitOk;
  }

  const auto sink = [&](std::size_t index, const FitOutcome& outcome) {
    write_fit_report_json(
        join_path(out, "fit_eta_" + eta_tag(eta_grid[index]) + ".json"),
        outcome.report);
    if (dump_chains) {
      write_chain_jsonl(
          join_path(out, "chain_eta_" + eta_tag(eta_grid[index]) + ".jsonl"),
          outcome.chain);
    }
  };
  const std::vector<FitReport> fits = fit_eta_grid(
      binned, graph, opts.hyper, eta_grid, opts.chain, opts.threads, sink);
  write_criteria_csv(join_path(out, "criteria.csv"), fits);

  json selection;
  for (const Criterion criterion :
       {Criterion::bic, Criterion::dic, Criterion::lpml}) {
    const FitReport& best = select_fit(fits, criterion);
    const char* name = criterion_name(criterion);
    selection[name] = {{"eta", best.eta},
                       {"k_hat", best.k_hat},
                       {"dic", best.dic},
                       {"lpml", best.lpml},
                       {"bic", best.bic}};
    write_surface_pair(out, std::string("surface_") + name, grid,
                       dahl_surface(best));
    std::cout << name << ": eta=" << best.eta << " k_hat=" << best.k_hat
              << "\n";
  }
  std::ofstream sel(join_path(out, "selection.json"), std::ios::binary);
  sel << selection.dump(2) << "\n";
  if (!sel) {
    throw std::runtime_error("write failed: " + join_path(out, "selection.json"));
  }
  return kExitOk;
}

int cmd_study(int setting, int reps, const std::vector<double>& eta_grid,
              std::uint64_t seed, bool with_mfm, const std::string& out,
              CommonFitOptions opts) {
  check_eta_grid(eta_grid);
  apply_init(opts);
  StudyConfig config;
  config.n_reps = reps;
  config.eta_grid = eta_grid;
  config.hyper = opts.hyper;
  config.chain = opts.chain;
  config.seed = seed;
  config.threads = opts.threads;
  config.run_mfm = with_mfm;
  config.mfm = opts.mfm;
  const SimulationSetting sim = make_setting(setting, grid_20x20());
  const StudyReport report = run_replicates(sim, config);
  ensure_out_dir(out);
  write_study_report_json(join_path(out, "study.json"), report);
  write_study_replicates_csv(join_path(out, "replicates.csv"), report);
  std::cout << "setting " << setting << ", " << reps
            << " replicates: k accuracy bic=" << report.bic.k_accuracy
            << " dic=" << report.dic.k_accuracy
            << " lpml=" << report.lpml.k_accuracy << " -> " << out << "\n";
  return kExitOk;
}

int cmd_ingest(const std::string& csv_path, const std::string& out, bool strict,
               const std::vector<double>& region_spec,
               const std::vector<std::string>& column_overrides) {
  ParseOptions options;
  options.strict = strict;
  for (const std::string& spec : column_overrides) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw UsageError("column mapping must look like field=header: " + spec);
    }
    const std::string field = spec.substr(0, eq);
    if (options.mapping.columns.find(field) == options.mapping.columns.end()) {
      throw UsageError("unknown record field in mapping: " + field);
    }
    options.mapping.columns[field] = spec.substr(eq + 1);
  }
  StudyRegion region = default_shot_region();
  if (!region_spec.empty()) {
    if (region_spec.size() != 4) {
      throw UsageError("--region needs x_min,x_max,y_min,y_max");
    }
    region = StudyRegion{region_spec[0], region_spec[1], region_spec[2],
                         region_spec[3]};
    validate_region(region);
  }
  const ShotParseResult parsed = parse_shot_csv_file(csv_path, options);
  const StudyPattern study = to_study_pattern(parsed.records, region);
  const ShotSummary summary = summarize_shots(parsed.records);
  ensure_out_dir(out);
  write_pattern_json(join_path(out, "pattern.json"), study.pattern,
                     study.dropped);
  json j{{"parsed", parsed.records.size()},
         {"skipped_rows", parsed.skipped.size()},
         {"retained", study.pattern.size()},
         {"dropped", study.dropped},
         {"pct_2pt", summary.pct_2pt},
         {"period_pct", summary.period_pct}};
  if (!parsed.skipped.empty()) {
    json issues = json::array();
    for (const ParseIssue& issue : parsed.skipped) {
      issues.push_back({{"line", issue.line}, {"message", issue.message}});
    }
    j["issues"] = std::move(issues);
  }
  std::ofstream sum(join_path(out, "summary.json"), std::ios::binary);
  sum << j.dump(2) << "\n";
  if (!sum) {
    throw std::runtime_error("write failed: " + join_path(out, "summary.json"));
  }
  for (const ParseIssue& issue : parsed.skipped) {
    std::cerr << "skipped line " << issue.line << ": " << issue.message << "\n";
  }
  std::cout << parsed.records.size() << " shots parsed, "
            << study.pattern.size() << " inside the study region -> " << out
            << "\n";
  return kExitOk;
}

int cmd_report(const std::string& fit_path, const std::string& out) {
  const FitReport report = read_fit_report_json(fit_path);
  ensure_out_dir(out);
  write_surface_pair(out, "surface", report.grid, dahl_surface(report));
  write_surface_pair(out, "mean_surface", report.grid,
                     report.posterior_mean_lambda);
  std::cout << "model=" << model_name(report.model) << " eta=" << report.eta
            << " k_hat=" << report.k_hat << " dic=" << report.dic
            << " lpml=" << report.lpml << " bic=" << report.bic
            << " representative_iteration=" << report.representative_iteration
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-constant intensity estimation for spatial point "
               "patterns via nonparametric Bayesian clustering"};
  app.set_version_flag("--version", "nhppclust 0.1.0");
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Generate a point pattern from a benchmark setting");
  int sim_setting = 1;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "sim_out";
  simulate->add_option("--setting", sim_setting, "Benchmark setting: 1, 2, or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  simulate->add_option("--seed", sim_seed, "RNG seed (default 1)");
  simulate->add_option("-o,--out", sim_out, "Output directory");

  // fit
  auto* fit = app.add_subcommand(
      "fit", "Fit chains to a point pattern over an eta grid");
  std::string fit_pattern;
  std::string fit_out = "fit_out";
  std::string fit_model = "mrf_dpm";
  int fit_nx = 20;
  int fit_ny = 20;
  std::vector<double> fit_eta_grid = default_eta_grid_simulation();
  std::uint64_t fit_seed = 1;
  bool fit_dump_chains = false;
  CommonFitOptions fit_opts;
  fit->add_option("--pattern", fit_pattern, "Pattern JSON produced by simulate/ingest")
      ->required();
  fit->add_option("-o,--out", fit_out, "Output directory");
  fit->add_option("--model", fit_model, "mrf_dpm (default) or mfm")
      ->check(CLI::IsMember({"mrf_dpm", "mfm"}));
  fit->add_option("--nx", fit_nx, "Grid boxes along x (default 20)");
  fit->add_option("--ny", fit_ny, "Grid boxes along y (default 20)");
  fit->add_option("--eta-grid", fit_eta_grid,
                  "Comma-separated eta values (default 0,0.5,...,8)")
      ->delimiter(',');
  fit->add_option("--seed", fit_seed, "RNG seed (default 1)");
  fit->add_flag("--dump-chains", fit_dump_chains,
                "Also write retained draws as JSON lines per chain");
  add_hyper_options(fit, fit_opts);

  // study
  auto* study = app.add_subcommand(
      "study", "Replicate simulation study with eta selection");
  int study_setting = 1;
  int study_reps = 20;
  std::vector<double> study_eta_grid = default_eta_grid_simulation();
  std::uint64_t study_seed = 0;
  bool study_mfm = false;
  std::string study_out = "study_out";
  CommonFitOptions study_opts;
  study->add_option("--setting", study_setting, "Benchmark setting: 1, 2, or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  study->add_option("--reps", study_reps, "Replicate count (default 20)")
      ->check(CLI::NonNegativeNumber);
  study->add_option("--eta-grid", study_eta_grid,
                    "Comma-separated eta values (default 0,0.5,...,8)")
      ->delimiter(',');
  study->add_option("--seed", study_seed, "Master RNG seed")->required();
  study->add_flag("--mfm", study_mfm, "Also fit the benchmark model per replicate");
  study->add_option("-o,--out", study_out, "Output directory");
  add_hyper_options(study, study_opts);

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "Parse a shot CSV into a point-pattern JSON");
  std::string ingest_csv;
  std::string ingest_out = "ingest_out";
  bool ingest_strict = false;
  std::vector<double> ingest_region;
  std::vector<std::string> ingest_map;
  ingest->add_option("--csv", ingest_csv, "Input CSV with a header row")
      ->required();
  ingest->add_option("-o,--out", ingest_out, "Output directory");
  ingest->add_flag("--strict", ingest_strict,
                   "Abort on the first malformed row instead of skipping");
  ingest->add_option("--region", ingest_region,
                     "Study region as x_min,x_max,y_min,y_max "
                     "(default -250,250,-50,300)")
      ->delimiter(',');
  ingest->add_option("--map", ingest_map,
                     "Column mapping overrides, e.g. --map x=LOC_X");

  // report
  auto* report = app.add_subcommand(
      "report", "Render surfaces and a summary from a fit report JSON");
  std::string report_fit;
  std::string report_out = "report_out";
  report->add_option("--fit", report_fit, "Fit report JSON")->required();
  report->add_option("-o,--out", report_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(sim_setting, sim_seed, sim_out);
    }
    if (fit->parsed()) {
      return cmd_fit(fit_pattern, fit_out, fit_model, fit_nx, fit_ny,
                     fit_eta_grid, fit_seed, fit_dump_chains, fit_opts);
    }
    if (study->parsed()) {
      return cmd_study(study_setting, study_reps, study_eta_grid, study_seed,
                       study_mfm, study_out, study_opts);
    }
    if (ingest->parsed()) {
      return cmd_ingest(ingest_csv, ingest_out, ingest_strict, ingest_region,
                        ingest_map);
    }
    if (report->parsed()) {
      return cmd_report(report_fit, report_out);
    }
    std::cerr << "no subcommand given\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
