// Copyright 2026 The ebmtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ebmtraj/app/trajectory_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <utility>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/common/log.hpp"
#include "ebmtraj/explain/export.hpp"

namespace ebmtraj {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

class RowReader {
 public:
  RowReader(const std::string& source, std::size_t row) : source_(source), row_(row) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_ + " row " + std::to_string(row_) + ": " + what);
  }

  double real(std::string_view cell, const char* column, bool allow_empty = false) const {
    if (cell.empty()) {
      if (allow_empty) return std::numeric_limits<double>::quiet_NaN();
      fail(std::string("empty ") + column);
    }
    double v = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || end != cell.data() + cell.size()) {
      fail(std::string("non-numeric ") + column + " '" + std::string(cell) + "'");
    }
    return v;
  }

  std::int64_t integer(std::string_view cell, const char* column) const {
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size()) {
      fail(std::string("non-integer ") + column + " '" + std::string(cell) + "'");
    }
    return v;
  }

  bool flag(std::string_view cell, const char* column) const {
    if (cell == "0") return false;
    if (cell == "1") return true;
    fail(std::string(column) + " must be 0 or 1, got '" + std::string(cell) + "'");
  }

 private:
  const std::string& source_;
  std::size_t row_;
};

}  // namespace

std::vector<TrajectoryRecord> parse_trajectory_csv(std::istream& in, const std::string& scene,
                                                   const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    warn(source + " is empty; no trajectories read");
    return {};
  }
  const std::vector<std::string_view> header = split_line(line);
  std::map<std::string, std::size_t, std::less<>> column;
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(std::string(header[i]), i);
  std::vector<std::size_t> idx;
  for (const char* name : kTrajectoryColumns) {
    auto it = column.find(name);
    if (it == column.end()) throw SchemaError(source + ": header is missing column '" + name + "'");
    idx.push_back(it->second);
  }
  const auto scene_col = column.find("scene");

  std::map<std::pair<std::string, std::int64_t>, TrajectoryRecord> tracks;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string_view> cells = split_line(line);
    const RowReader r(source, row);
    if (cells.size() != header.size()) {
      r.fail("expected " + std::to_string(header.size()) + " cells, found " +
             std::to_string(cells.size()));
    }
    TrackPoint p;
    p.frame = r.integer(cells[idx[0]], "frame");
    const std::int64_t track = r.integer(cells[idx[1]], "track_id");
    AgentClass agent_class{};
    try {
      agent_class = parse_agent_class(cells[idx[2]]);
    } catch (const DataError& e) {
      r.fail(e.what());
    }
    p.position = {r.real(cells[idx[3]], "x"), r.real(cells[idx[4]], "y")};
    if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y)) r.fail("non-finite position");
    p.heading = r.real(cells[idx[5]], "heading", true);
    p.width = r.real(cells[idx[6]], "width");
    p.length = r.real(cells[idx[7]], "length");
    p.flags = {r.flag(cells[idx[8]], "lost"), r.flag(cells[idx[9]], "occluded"),
               r.flag(cells[idx[10]], "generated")};

    std::string row_scene = scene_col != column.end() ? std::string(cells[scene_col->second]) : scene;
    TrajectoryRecord& rec = tracks[{row_scene, track}];
    if (rec.points.empty()) {
      rec.scene = std::move(row_scene);
      rec.track_id = track;
      rec.agent_class = agent_class;
    } else {
      if (p.frame <= rec.points.back().frame) {
        r.fail("frame " + std::to_string(p.frame) + " of track " + std::to_string(track) +
               " does not increase (previous " + std::to_string(rec.points.back().frame) + ")");
      }
      if (agent_class != rec.agent_class) {
        r.fail("track " + std::to_string(track) + " changes class");
      }
    }
    rec.points.push_back(p);
  }
  std::vector<TrajectoryRecord> out;
  for (auto& [key, rec] : tracks) out.push_back(std::move(rec));
  if (out.empty()) warn(source + " has a header but no rows");
  return out;
}

std::vector<TrajectoryRecord> parse_trajectory_csv(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<TrajectoryRecord> all;
    for (const fs::path& f : files) {
      auto part = parse_trajectory_csv(f);
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
  }
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return parse_trajectory_csv(in, path.stem().string(), path.string());
}

void write_trajectory_csv(std::span<const TrajectoryRecord> records, std::ostream& out) {
  out << "scene";
  for (const char* name : kTrajectoryColumns) out << ',' << name;
  out << '\n';
  for (const TrajectoryRecord& rec : records) {
    for (const TrackPoint& p : rec.points) {
      out << rec.scene << ',' << p.frame << ',' << rec.track_id << ',' << to_string(rec.agent_class)
          << ',' << format_number(p.position.x) << ',' << format_number(p.position.y) << ','
          << format_number(p.heading) << ',' << format_number(p.width) << ','
          << format_number(p.length) << ',' << p.flags.lost << ',' << p.flags.occluded << ','
          << p.flags.generated << '\n';
    }
  }
}

void write_trajectory_csv(std::span<const TrajectoryRecord> records,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_trajectory_csv(records, out);
}

}  // namespace ebmtraj
