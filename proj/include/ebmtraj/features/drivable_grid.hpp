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

#ifndef EBMTRAJ_FEATURES_DRIVABLE_GRID_HPP_
#define EBMTRAJ_FEATURES_DRIVABLE_GRID_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "ebmtraj/features/geometry.hpp"

namespace ebmtraj {

// Places grid-local metric coordinates into a target frame:
//   p = origin + rotate(local, rotation).
struct GridPose {
  Vec2 origin;
  double rotation = 0.0;
};

// Binary drivable-area raster. Cell (row, col) covers local coordinates
// [col, col + 1) x [row, row + 1) times the cell size.
class DrivableGrid {
 public:
  DrivableGrid(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> cells,
               double cell_size, GridPose pose = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double cell_size() const { return cell_size_; }
  const GridPose& pose() const { return pose_; }

  bool drivable(std::size_t row, std::size_t col) const { return (*cells_)[row * cols_ + col] != 0; }
  Vec2 cell_center(std::size_t row, std::size_t col) const;
  Vec2 to_local(Vec2 p) const;

  // Same raster with cell centers expressed in `frame`'s canonical
  // coordinates. Cell storage is shared, not copied.
  DrivableGrid reframed(const CanonicalFrame& frame) const;

  // Same raster posed by an extra rigid motion (rotation about the frame
  // origin, then translation).
  DrivableGrid moved(double rotation, Vec2 translation) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::shared_ptr<const std::vector<std::uint8_t>> cells_;
  double cell_size_;
  GridPose pose_;
};

// Reads a PGM raster (P2 or P5) plus a JSON sidecar holding
// {"origin": [x, y], "cell_size": s, "rotation": radians}. Pixels above half
// of the maximum grey value are drivable. Image row 0 is grid row 0.
DrivableGrid load_drivable_grid(const std::filesystem::path& pgm,
                                const std::filesystem::path& sidecar);

void save_drivable_grid(const DrivableGrid& grid, const std::filesystem::path& pgm,
                        const std::filesystem::path& sidecar);

}  // namespace ebmtraj

#endif  // EBMTRAJ_FEATURES_DRIVABLE_GRID_HPP_
