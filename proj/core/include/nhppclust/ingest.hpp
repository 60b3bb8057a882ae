#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nhppclust/grid.hpp"

namespace nhppclust {

/// One shot-chart row. Coordinates are in 0.1-ft units on a half court
/// centered at the rim: x in [-250, 250], y in [-50, 420].
struct ShotRecord {
  std::string game_date;
  std::string opponent;
  int period = 0;  // 1..4 quarters, 5 = overtime
  int minutes_left = 0;
  int seconds_left = 0;
  int made = 0;  // 0 missed, 1 made
  std::string action_type;
  int shot_type = 2;  // 2 or 3
  double shot_distance = 0.0;
  int x = 0;
  int y = 0;
};

/// Maps record fields to CSV column names. Only x and y are required in the
/// input; all other columns are optional. Header matching is
/// case-insensitive.
struct ColumnMapping {
  std::map<std::string, std::string> columns = {
      {"game_date", "game_date"},
      {"opponent", "opponent"},
      {"period", "period"},
      {"minutes_left", "minutes_remaining"},
      {"seconds_left", "seconds_remaining"},
      {"made", "shot_made_flag"},
      {"action_type", "action_type"},
      {"shot_type", "shot_type"},
      {"shot_distance", "shot_distance"},
      {"x", "loc_x"},
      {"y", "loc_y"},
  };
};

struct ParseOptions {
  bool strict = false;  // abort on the first malformed row instead of skipping
  ColumnMapping mapping;
};

struct ParseIssue {
  std::size_t line = 0;  // 1-based line number in the input
  std::string message;
};

struct ShotParseResult {
  std::vector<ShotRecord> records;
  std::vector<ParseIssue> skipped;  // lenient mode only
};

/// Parses a shot CSV with a header row. Malformed rows are reported with
/// their line numbers; in strict mode the first one aborts the parse.
/// Throws std::runtime_error when required columns are missing or the file
/// cannot be read.
ShotParseResult parse_shot_csv(std::istream& in, const ParseOptions& options = {});
ShotParseResult parse_shot_csv_file(const std::string& path,
                                    const ParseOptions& options = {});

/// Study region used for shot analysis: the first 35 ft of the half court
/// measured from the baseline, in 0.1-ft units.
StudyRegion default_shot_region();

struct StudyPattern {
  PointPattern pattern;
  std::size_t dropped = 0;  // shots outside the study region
};

/// Keeps shots inside the (closed) region, counts the rest as dropped.
/// Coordinates are passed through unchanged.
StudyPattern to_study_pattern(std::span<const ShotRecord> records,
                              const StudyRegion& region = default_shot_region());

struct ShotSummary {
  std::size_t count = 0;
  double pct_2pt = 0.0;                    // percent of attempts that are 2PT
  std::array<double, 5> period_pct = {};   // percent per period 1..5
};

ShotSummary summarize_shots(std::span<const ShotRecord> records);

}  // namespace nhppclust
