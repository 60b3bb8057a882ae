#include "nhppclust/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace nhppclust {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  std::size_t last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Single-line CSV split with double-quote escaping ("" inside quotes).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

// Integer prefix parse: "23" and "2PT Field Goal" both work, "abc" fails.
bool parse_int_prefix(const std::string& raw, int& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec != std::errc::result_out_of_range && ptr != begin;
}

bool parse_double_value(const std::string& raw, double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != s.c_str();
}

struct FieldIndices {
  // -1 = column absent.
  int game_date = -1;
  int opponent = -1;
  int period = -1;
  int minutes_left = -1;
  int seconds_left = -1;
  int made = -1;
  int action_type = -1;
  int shot_type = -1;
  int shot_distance = -1;
  int x = -1;
  int y = -1;
};

int find_column(const std::vector<std::string>& header,
                const ColumnMapping& mapping, const std::string& field) {
  const auto it = mapping.columns.find(field);
  if (it == mapping.columns.end()) return -1;
  const std::string wanted = lower(trim(it->second));
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (lower(trim(header[i])) == wanted) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

ShotParseResult parse_shot_csv(std::istream& in, const ParseOptions& options) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("shot csv is empty: no header row");
  }
  const std::vector<std::string> header = split_csv_line(line);
  FieldIndices at;
  at.game_date = find_column(header, options.mapping, "game_date");
  at.opponent = find_column(header, options.mapping, "opponent");
  at.period = find_column(header, options.mapping, "period");
  at.minutes_left = find_column(header, options.mapping, "minutes_left");
  at.seconds_left = find_column(header, options.mapping, "seconds_left");
  at.made = find_column(header, options.mapping, "made");
  at.action_type = find_column(header, options.mapping, "action_type");
  at.shot_type = find_column(header, options.mapping, "shot_type");
  at.shot_distance = find_column(header, options.mapping, "shot_distance");
  at.x = find_column(header, options.mapping, "x");
  at.y = find_column(header, options.mapping, "y");
  if (at.x < 0 || at.y < 0) {
    throw std::runtime_error(
        "shot csv is missing the required location columns");
  }

  ShotParseResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    std::string problem;
    ShotRecord record;
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << "expected " << header.size() << " fields, found " << fields.size();
      problem = msg.str();
    } else {
      const auto grab = [&](int index) -> const std::string& {
        return fields[static_cast<std::size_t>(index)];
      };
      const auto want_int = [&](int index, const char* name, int& out,
                                bool required) {
        if (!problem.empty() || index < 0) return;
        const std::string& raw = grab(index);
        if (trim(raw).empty() && !required) return;
        if (!parse_int_prefix(raw, out)) {
          problem = std::string("bad value for ") + name + ": \"" + trim(raw) + "\"";
        }
      };
      want_int(at.x, "x", record.x, true);
      want_int(at.y, "y", record.y, true);
      want_int(at.period, "period", record.period, false);
      want_int(at.minutes_left, "minutes left", record.minutes_left, false);
      want_int(at.seconds_left, "seconds left", record.seconds_left, false);
      want_int(at.made, "shot made flag", record.made, false);
      want_int(at.shot_type, "shot type", record.shot_type, false);
      if (problem.empty() && at.shot_distance >= 0) {
        const std::string& raw = grab(at.shot_distance);
        if (!trim(raw).empty() &&
            !parse_double_value(raw, record.shot_distance)) {
          problem = "bad value for shot distance: \"" + trim(raw) + "\"";
        }
      }
      if (at.game_date >= 0) record.game_date = trim(grab(at.game_date));
      if (at.opponent >= 0) record.opponent = trim(grab(at.opponent));
      if (at.action_type >= 0) record.action_type = trim(grab(at.action_type));
    }
    if (!problem.empty()) {
      if (options.strict) {
        std::ostringstream msg;
        msg << "line " << line_no << ": " << problem;
        throw std::runtime_error(msg.str());
      }
      result.skipped.push_back({line_no, problem});
      continue;
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

ShotParseResult parse_shot_csv_file(const std::string& path,
                                    const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open shot csv: " + path);
  }
  return parse_shot_csv(in, options);
}

StudyRegion default_shot_region() {
  return StudyRegion{-250.0, 250.0, -50.0, 300.0};
}

StudyPattern to_study_pattern(std::span<const ShotRecord> records,
                              const StudyRegion& region) {
  validate_region(region);
  StudyPattern out;
  out.pattern.region = region;
  for (const ShotRecord& record : records) {
    const double x = static_cast<double>(record.x);
    const double y = static_cast<double>(record.y);
    if (region.contains(x, y)) {
      out.pattern.points.push_back({x, y});
    } else {
      ++out.dropped;
    }
  }
  return out;
}

ShotSummary summarize_shots(std::span<const ShotRecord> records) {
  ShotSummary summary;
  summary.count = records.size();
  if (records.empty()) return summary;
  std::size_t two_pt = 0;
  std::array<std::size_t, 5> per_period = {};
  for (const ShotRecord& record : records) {
    if (record.shot_type == 2) ++two_pt;
    // Periods 1..4; anything later (overtimes) pools into the last slot.
    const int slot = std::clamp(record.period, 1, 5) - 1;
    per_period[static_cast<std::size_t>(slot)] += 1;
  }
  const double denom = static_cast<double>(records.size());
  summary.pct_2pt = 100.0 * static_cast<double>(two_pt) / denom;
  for (std::size_t p = 0; p < per_period.size(); ++p) {
    summary.period_pct[p] = 100.0 * static_cast<double>(per_period[p]) / denom;
  }
  return summary;
}

}  // namespace nhppclust
