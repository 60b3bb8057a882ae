#include "nhppclust/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nhppclust {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form; deterministic for a given value.
std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

json region_to_json(const StudyRegion& region) {
  return json{{"x_min", region.x_min},
              {"x_max", region.x_max},
              {"y_min", region.y_min},
              {"y_max", region.y_max}};
}

StudyRegion region_from_json(const json& j) {
  return StudyRegion{j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                     j.at("y_min").get<double>(), j.at("y_max").get<double>()};
}

json grid_json(const Grid& grid) {
  return json{{"region", region_to_json(grid.region())},
              {"n_x", grid.nx()},
              {"n_y", grid.ny()}};
}

Grid grid_from(const json& j) {
  return Grid(region_from_json(j.at("region")), j.at("n_x").get<int>(),
              j.at("n_y").get<int>());
}

json selection_to_json(const SelectionResult& sel) {
  return json{{"eta", sel.eta},
              {"k_hat", sel.k_hat},
              {"ri_dahl", sel.ri_dahl},
              {"ri_mean", sel.ri_mean},
              {"mean_abs_rel_bias", sel.mean_abs_rel_bias},
              {"runtime_sec", sel.runtime_sec}};
}

json aggregate_to_json(const StudyAggregate& agg) {
  return json{{"k_accuracy", agg.k_accuracy},
              {"mean_ri", agg.mean_ri},
              {"mean_ri_dahl", agg.mean_ri_dahl},
              {"mean_abs_rel_bias", agg.mean_abs_rel_bias}};
}

}  // namespace

std::string grid_to_json(const Grid& grid) { return grid_json(grid).dump(2) + "\n"; }

Grid grid_from_json(const std::string& text) {
  try {
    return grid_from(json::parse(text));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad grid json: ") + e.what());
  }
}

void write_pattern_json(const std::string& path, const PointPattern& pattern,
                        std::size_t dropped) {
  json points = json::array();
  for (const Point& p : pattern.points) {
    points.push_back(json::array({p.x, p.y}));
  }
  const json j{{"region", region_to_json(pattern.region)},
               {"dropped", dropped},
               {"points", std::move(points)}};
  write_text(path, j.dump(2) + "\n");
}

PointPattern read_pattern_json(const std::string& path, std::size_t* dropped) {
  const json j = parse_json_file(path);
  PointPattern pattern;
  try {
    pattern.region = region_from_json(j.at("region"));
    for (const json& p : j.at("points")) {
      pattern.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (dropped) {
      *dropped = j.value("dropped", static_cast<std::size_t>(0));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return pattern;
}

void write_truth_json(const std::string& path, const SimulationSetting& setting) {
  const json j{{"name", setting.name},
               {"grid", grid_json(setting.grid)},
               {"component_values", setting.component_values},
               {"assignment", setting.assignment}};
  write_text(path, j.dump(2) + "\n");
}

TruthData read_truth_json(const std::string& path) {
  const json j = parse_json_file(path);
  try {
    TruthData truth{grid_from(j.at("grid")),
                    j.at("assignment").get<std::vector<int>>(),
                    j.at("component_values").get<std::vector<double>>()};
    return truth;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_chain_jsonl(const std::string& path, const Chain& chain) {
  std::ostringstream out;
  for (const ChainSample& sample : chain.samples) {
    const json j{{"iteration", sample.iteration},
                 {"k", sample.lambda.size()},
                 {"z", sample.z},
                 {"lambda", sample.lambda},
                 {"ri_prev", sample.ri_to_previous}};
    out << j.dump() << "\n";
  }
  write_text(path, out.str());
}

void write_fit_report_json(const std::string& path, const FitReport& report) {
  const json j{{"model", model_name(report.model)},
               {"eta", report.eta},
               {"grid", grid_json(report.grid)},
               {"representative_index", report.representative_index},
               {"representative_iteration", report.representative_iteration},
               {"k_hat", report.k_hat},
               {"z_hat", report.z_hat},
               {"lambda_hat", report.lambda_hat},
               {"posterior_mean_lambda", report.posterior_mean_lambda},
               {"dic", report.dic},
               {"lpml", report.lpml},
               {"bic", report.bic},
               {"ri_trace", report.ri_trace},
               {"k_trace", report.k_trace}};
  write_text(path, j.dump(2) + "\n");
}

FitReport read_fit_report_json(const std::string& path) {
  const json j = parse_json_file(path);
  try {
    FitReport report(grid_from(j.at("grid")));
    const std::string model = j.at("model").get<std::string>();
    if (model == "mrf_dpm") {
      report.model = Model::mrf_dpm;
    } else if (model == "mfm") {
      report.model = Model::mfm;
    } else {
      throw std::runtime_error(path + ": unknown model \"" + model + "\"");
    }
    report.eta = j.at("eta").get<double>();
    report.representative_index = j.at("representative_index").get<std::size_t>();
    report.representative_iteration =
        j.at("representative_iteration").get<long>();
    report.k_hat = j.at("k_hat").get<int>();
    report.z_hat = j.at("z_hat").get<std::vector<int>>();
    report.lambda_hat = j.at("lambda_hat").get<std::vector<double>>();
    report.posterior_mean_lambda =
        j.at("posterior_mean_lambda").get<std::vector<double>>();
    report.dic = j.at("dic").get<double>();
    report.lpml = j.at("lpml").get<double>();
    report.bic = j.at("bic").get<double>();
    report.ri_trace = j.at("ri_trace").get<std::vector<double>>();
    report.k_trace = j.at("k_trace").get<std::vector<int>>();
    return report;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_criteria_csv(const std::string& path, std::span<const FitReport> fits) {
  std::ostringstream out;
  out << "eta,dic,lpml,bic,k_hat\n";
  for (const FitReport& fit : fits) {
    out << format_double(fit.eta) << ',' << format_double(fit.dic) << ','
        << format_double(fit.lpml) << ',' << format_double(fit.bic) << ','
        << fit.k_hat << "\n";
  }
  write_text(path, out.str());
}

void write_study_report_json(const std::string& path, const StudyReport& report) {
  json replicates = json::array();
  for (const ReplicateResult& rep : report.replicates) {
    json j{{"replicate", rep.replicate},
           {"point_count", rep.point_count},
           {"bic", selection_to_json(rep.bic)},
           {"dic", selection_to_json(rep.dic)},
           {"lpml", selection_to_json(rep.lpml)},
           {"eta_zero", selection_to_json(rep.eta_zero)}};
    if (rep.mfm) j["mfm"] = selection_to_json(*rep.mfm);
    replicates.push_back(std::move(j));
  }
  json j{{"setting", report.setting_name},
         {"true_k", report.true_k},
         {"n_reps", report.n_reps},
         {"eta_grid", report.eta_grid},
         {"aggregates",
          json{{"bic", aggregate_to_json(report.bic)},
               {"dic", aggregate_to_json(report.dic)},
               {"lpml", aggregate_to_json(report.lpml)},
               {"eta_zero", aggregate_to_json(report.eta_zero)}}},
         {"replicates", std::move(replicates)}};
  if (report.mfm) j["aggregates"]["mfm"] = aggregate_to_json(*report.mfm);
  write_text(path, j.dump(2) + "\n");
}

void write_study_replicates_csv(const std::string& path,
                                const StudyReport& report) {
  std::ostringstream out;
  out << "replicate,criterion,eta,k_hat,ri_mean,ri_dahl,runtime_sec\n";
  const auto row = [&](int replicate, const char* criterion,
                       const SelectionResult& sel) {
    out << replicate << ',' << criterion << ',' << format_double(sel.eta) << ','
        << sel.k_hat << ',' << format_double(sel.ri_mean) << ','
        << format_double(sel.ri_dahl) << ',' << format_double(sel.runtime_sec)
        << "\n";
  };
  for (const ReplicateResult& rep : report.replicates) {
    row(rep.replicate, "bic", rep.bic);
    row(rep.replicate, "dic", rep.dic);
    row(rep.replicate, "lpml", rep.lpml);
    row(rep.replicate, "eta_zero", rep.eta_zero);
    if (rep.mfm) row(rep.replicate, "mfm", *rep.mfm);
  }
  write_text(path, out.str());
}

void write_matrix_csv(const std::string& path, const Grid& grid,
                      std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(grid.size())) {
    throw std::invalid_argument("matrix values do not match grid size");
  }
  std::ostringstream out;
  for (int row = grid.ny() - 1; row >= 0; --row) {
    for (int col = 0; col < grid.nx(); ++col) {
      if (col > 0) out << ',';
      out << format_double(values[static_cast<std::size_t>(grid.index_of(row, col))]);
    }
    out << "\n";
  }
  write_text(path, out.str());
}

MatrixData read_matrix_csv(const std::string& path) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": bad number \"" + field + "\"");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path + ": ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error(path + ": empty matrix");
  }
  MatrixData data;
  data.n_x = static_cast<int>(rows.front().size());
  data.n_y = static_cast<int>(rows.size());
  data.values.resize(static_cast<std::size_t>(data.n_x) *
                     static_cast<std::size_t>(data.n_y));
  // File rows run top-down; grid rows count up from the minimum corner.
  for (int file_row = 0; file_row < data.n_y; ++file_row) {
    const int grid_row = data.n_y - 1 - file_row;
    for (int col = 0; col < data.n_x; ++col) {
      data.values[static_cast<std::size_t>(grid_row * data.n_x + col)] =
          rows[static_cast<std::size_t>(file_row)][static_cast<std::size_t>(col)];
    }
  }
  return data;
}

namespace {

struct Rgb {
  double r, g, b;
};

// Monotone dark-purple-to-yellow ramp (perceptually ordered anchors).
constexpr Rgb kRampAnchors[] = {
    {68.0, 1.0, 84.0},
    {59.0, 82.0, 139.0},
    {33.0, 145.0, 140.0},
    {94.0, 201.0, 98.0},
    {253.0, 231.0, 37.0},
};

std::string ramp_color(double t) {
  constexpr int segments = 4;
  t = std::min(std::max(t, 0.0), 1.0);
  const double scaled = t * segments;
  int low = static_cast<int>(scaled);
  if (low >= segments) low = segments - 1;
  const double frac = scaled - low;
  const Rgb& a = kRampAnchors[low];
  const Rgb& b = kRampAnchors[low + 1];
  const auto mix = [&](double x, double y) {
    return static_cast<int>(std::lround(x + (y - x) * frac));
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(a.r, b.r), mix(a.g, b.g),
                mix(a.b, b.b));
  return std::string(buf);
}

}  // namespace

std::string render_heatmap_svg(const Grid& grid, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(grid.size())) {
    throw std::invalid_argument("heatmap values do not match grid size");
  }
  double lo = values[0];
  double hi = values[0];
  for (double value : values) {
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  const double span = hi - lo;
  constexpr int cell = 16;  // pixels per box
  const int width = cell * grid.nx();
  const int height = cell * grid.ny();
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << grid.nx() << ' '
      << grid.ny() << "\">\n";
  for (int row = 0; row < grid.ny(); ++row) {
    for (int col = 0; col < grid.nx(); ++col) {
      const double value =
          values[static_cast<std::size_t>(grid.index_of(row, col))];
      const double t = span > 0.0 ? (value - lo) / span : 0.5;
      // SVG y runs downward; grid rows run up from y_min.
      out << "<rect x=\"" << col << "\" y=\"" << (grid.ny() - 1 - row)
          << "\" width=\"1\" height=\"1\" fill=\"" << ramp_color(t) << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void write_heatmap_svg(const std::string& path, const Grid& grid,
                       std::span<const double> values) {
  write_text(path, render_heatmap_svg(grid, values));
}

}  // namespace nhppclust
