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

#include "ebmtraj/features/drivable_grid.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "ebmtraj/common/error.hpp"
#include "json.hpp"

namespace ebmtraj {

DrivableGrid::DrivableGrid(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> cells,
                           double cell_size, GridPose pose)
    : rows_(rows), cols_(cols), cell_size_(cell_size), pose_(pose) {
  if (cells.size() != rows * cols) {
    throw DataError("drivable grid has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(rows * cols));
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw DataError("drivable grid cell size must be positive");
  }
  cells_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(cells));
}

Vec2 DrivableGrid::cell_center(std::size_t row, std::size_t col) const {
  const Vec2 local{(static_cast<double>(col) + 0.5) * cell_size_,
                   (static_cast<double>(row) + 0.5) * cell_size_};
  return pose_.origin + rotate(local, pose_.rotation);
}

Vec2 DrivableGrid::to_local(Vec2 p) const { return rotate(p - pose_.origin, -pose_.rotation); }

DrivableGrid DrivableGrid::reframed(const CanonicalFrame& frame) const {
  DrivableGrid out = *this;
  out.pose_.origin = frame.to_canonical(pose_.origin);
  out.pose_.rotation = pose_.rotation + frame.rotation();
  return out;
}

DrivableGrid DrivableGrid::moved(double rotation, Vec2 translation) const {
  DrivableGrid out = *this;
  out.pose_.origin = rotate(pose_.origin, rotation) + translation;
  out.pose_.rotation = pose_.rotation + rotation;
  return out;
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) break;
      continue;
    }
    tok += ch;
  }
  return tok;
}

}  // namespace

DrivableGrid load_drivable_grid(const std::filesystem::path& pgm,
                                const std::filesystem::path& sidecar) {
  std::ifstream in(pgm, std::ios::binary);
  if (!in) throw DataError("cannot open drivable raster " + pgm.string());
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") {
    throw DataError(pgm.string() + " is not a PGM raster (magic '" + magic + "')");
  }
  std::size_t cols = 0, rows = 0;
  int maxval = 0;
  try {
    cols = std::stoul(pgm_token(in));
    rows = std::stoul(pgm_token(in));
    maxval = std::stoi(pgm_token(in));
  } catch (const std::exception&) {
    throw DataError(pgm.string() + ": malformed PGM header");
  }
  if (maxval <= 0 || maxval > 65535) throw DataError(pgm.string() + ": bad PGM max value");

  std::vector<std::uint8_t> cells(rows * cols);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    int v = 0;
    if (magic == "P2") {
      const std::string tok = pgm_token(in);
      if (tok.empty()) throw DataError(pgm.string() + ": truncated pixel data");
      v = std::stoi(tok);
    } else if (maxval < 256) {
      char c;
      if (!in.get(c)) throw DataError(pgm.string() + ": truncated pixel data");
      v = static_cast<unsigned char>(c);
    } else {
      char hi, lo;
      if (!in.get(hi) || !in.get(lo)) throw DataError(pgm.string() + ": truncated pixel data");
      v = (static_cast<unsigned char>(hi) << 8) | static_cast<unsigned char>(lo);
    }
    cells[i] = 2 * v > maxval ? 1 : 0;
  }

  std::ifstream side(sidecar);
  if (!side) throw DataError("cannot open drivable grid sidecar " + sidecar.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(side);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(sidecar.string() + ": " + e.what());
  }
  GridPose pose;
  if (j.contains("origin")) {
    pose.origin = {j["origin"].at(0).get<double>(), j["origin"].at(1).get<double>()};
  }
  pose.rotation = j.value("rotation", 0.0);
  return DrivableGrid(rows, cols, std::move(cells), j.value("cell_size", 0.5), pose);
}

void save_drivable_grid(const DrivableGrid& grid, const std::filesystem::path& pgm,
                        const std::filesystem::path& sidecar) {
  std::ofstream out(pgm, std::ios::binary);
  if (!out) throw Error("cannot open " + pgm.string() + " for writing");
  out << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      out.put(static_cast<char>(grid.drivable(r, c) ? 255 : 0));
    }
  }
  std::ofstream side(sidecar);
  if (!side) throw Error("cannot open " + sidecar.string() + " for writing");
  nlohmann::json j{{"origin", {grid.pose().origin.x, grid.pose().origin.y}},
                   {"cell_size", grid.cell_size()},
                   {"rotation", grid.pose().rotation}};
  side << j.dump(2) << '\n';
}

}  // namespace ebmtraj
