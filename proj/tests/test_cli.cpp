#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "nhppclust/io.hpp"

using namespace nhppclust;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("nhppclust-cli-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd =
      std::string(CLI_BINARY_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

const std::string kTinyChain = " --burn-in 30 --retained 30 --thin 3";

}  // namespace

TEST_CASE("cli: version and help succeed") {
  CHECK(run("--version") == 0);
  CHECK(run("--help") == 0);
  CHECK(run("fit --help") == 0);
}

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("--no-such-flag") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("simulate") == 2);                    // --setting is required
  CHECK(run("simulate --setting 9 --seed 1") == 2);
  CHECK(run("study --setting 1 --reps 2") == 2);  // --seed is required
  CHECK(run("ingest") == 2);                      // --csv is required
}

TEST_CASE("cli: runtime failures exit with 1") {
  TempDir tmp;
  CHECK(run("fit --pattern /no/such/pattern.json -o " + tmp.path("out")) == 1);
  CHECK(run("ingest --csv /no/such/file.csv -o " + tmp.path("out")) == 1);
  CHECK(run("report --fit /no/such/fit.json -o " + tmp.path("out")) == 1);
}

TEST_CASE("cli: simulate writes a pattern and its ground truth") {
  TempDir tmp;
  REQUIRE(run("simulate --setting 1 --seed 11 -o " + tmp.path("sim")) == 0);
  const PointPattern pattern =
      read_pattern_json(tmp.path("sim") + "/pattern.json");
  CHECK(pattern.size() > 1800);
  CHECK(pattern.size() < 2300);
  const TruthData truth = read_truth_json(tmp.path("sim") + "/truth.json");
  CHECK(truth.z_true.size() == 400);
  CHECK(truth.lambda_true.size() == 3);

  // Same seed, same bytes.
  REQUIRE(run("simulate --setting 1 --seed 11 -o " + tmp.path("sim2")) == 0);
  CHECK(slurp(tmp.path("sim") + "/pattern.json") ==
        slurp(tmp.path("sim2") + "/pattern.json"));
}

TEST_CASE("cli: fit validates the smoothing grid") {
  TempDir tmp;
  REQUIRE(run("simulate --setting 1 --seed 3 -o " + tmp.path("sim")) == 0);
  const std::string pattern = " --pattern " + tmp.path("sim") + "/pattern.json";
  CHECK(run("fit" + pattern + " --eta-grid 1,0 -o " + tmp.path("bad")) == 2);
  CHECK(run("fit" + pattern + " --eta-grid 0,0 -o " + tmp.path("bad")) == 2);
  CHECK(run("fit" + pattern + " --eta-grid -1,0 -o " + tmp.path("bad")) == 2);
}

TEST_CASE("cli: fit produces reports, criteria, and surfaces per rule") {
  TempDir tmp;
  REQUIRE(run("simulate --setting 1 --seed 5 -o " + tmp.path("sim")) == 0);
  const std::string fit_cmd = "fit --pattern " + tmp.path("sim") +
                              "/pattern.json --eta-grid 0,1 --seed 2" +
                              kTinyChain + " -o " + tmp.path("fit");
  REQUIRE(run(fit_cmd) == 0);
  for (const char* name :
       {"fit_eta_0.json", "fit_eta_1.json", "criteria.csv", "selection.json",
        "surface_bic.csv", "surface_bic.svg", "surface_dic.csv",
        "surface_dic.svg", "surface_lpml.csv", "surface_lpml.svg"}) {
    CHECK(fs::exists(tmp.path("fit") + "/" + std::string(name)));
  }
  const FitReport report = read_fit_report_json(tmp.path("fit") + "/fit_eta_1.json");
  CHECK(report.eta == 1.0);
  CHECK(report.z_hat.size() == 400);
  const std::string criteria = slurp(tmp.path("fit") + "/criteria.csv");
  CHECK(criteria.find("eta,dic,lpml,bic,k_hat") == 0);

  // Re-running with the same seed reproduces the reports byte for byte.
  REQUIRE(run(fit_cmd + "2") == 0);
  CHECK(slurp(tmp.path("fit") + "/fit_eta_0.json") ==
        slurp(tmp.path("fit") + "2/fit_eta_0.json"));
  CHECK(slurp(tmp.path("fit") + "/criteria.csv") ==
        slurp(tmp.path("fit") + "2/criteria.csv"));
}

TEST_CASE("cli: benchmark-model fit and chain dumps") {
  TempDir tmp;
  REQUIRE(run("simulate --setting 1 --seed 6 -o " + tmp.path("sim")) == 0);
  REQUIRE(run("fit --pattern " + tmp.path("sim") +
              "/pattern.json --model mfm --seed 4 --dump-chains" + kTinyChain +
              " -o " + tmp.path("mfm")) == 0);
  CHECK(fs::exists(tmp.path("mfm") + "/fit_mfm.json"));
  CHECK(fs::exists(tmp.path("mfm") + "/chain_mfm.jsonl"));
  CHECK(fs::exists(tmp.path("mfm") + "/surface_mfm.csv"));
  const FitReport report = read_fit_report_json(tmp.path("mfm") + "/fit_mfm.json");
  CHECK(report.model == Model::mfm);
}

TEST_CASE("cli: study runs replicates, zero replicates included") {
  TempDir tmp;
  REQUIRE(run("study --setting 1 --reps 1 --seed 9 --eta-grid 0,1" +
              kTinyChain + " -o " + tmp.path("study")) == 0);
  CHECK(fs::exists(tmp.path("study") + "/study.json"));
  const std::string csv = slurp(tmp.path("study") + "/replicates.csv");
  CHECK(csv.find("replicate,criterion,") == 0);

  REQUIRE(run("study --setting 2 --reps 0 --seed 9 --eta-grid 0" + kTinyChain +
              " -o " + tmp.path("empty")) == 0);
  CHECK(fs::exists(tmp.path("empty") + "/study.json"));
}

TEST_CASE("cli: ingest filters to the study region and writes a summary") {
  TempDir tmp;
  const std::string fixture = std::string(TEST_DATA_DIR) + "/shots_sample.csv";
  REQUIRE(run("ingest --csv " + fixture + " -o " + tmp.path("ing")) == 0);
  std::size_t dropped = 0;
  const PointPattern pattern =
      read_pattern_json(tmp.path("ing") + "/pattern.json", &dropped);
  CHECK(pattern.size() == 28);
  CHECK(dropped == 2);
  const std::string summary = slurp(tmp.path("ing") + "/summary.json");
  CHECK(summary.find("\"pct_2pt\"") != std::string::npos);

  // Strict mode with a clean file behaves the same.
  REQUIRE(run("ingest --strict --csv " + fixture + " -o " + tmp.path("s")) == 0);
}

TEST_CASE("cli: report renders surfaces from a stored fit") {
  TempDir tmp;
  REQUIRE(run("simulate --setting 1 --seed 8 -o " + tmp.path("sim")) == 0);
  REQUIRE(run("fit --pattern " + tmp.path("sim") +
              "/pattern.json --eta-grid 0 --seed 1" + kTinyChain + " -o " +
              tmp.path("fit")) == 0);
  REQUIRE(run("report --fit " + tmp.path("fit") + "/fit_eta_0.json -o " +
              tmp.path("rep")) == 0);
  for (const char* name :
       {"surface.csv", "surface.svg", "mean_surface.csv", "mean_surface.svg"}) {
    CHECK(fs::exists(tmp.path("rep") + "/" + std::string(name)));
  }
}
