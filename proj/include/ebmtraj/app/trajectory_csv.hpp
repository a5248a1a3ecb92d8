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

#ifndef EBMTRAJ_APP_TRAJECTORY_CSV_HPP_
#define EBMTRAJ_APP_TRAJECTORY_CSV_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/features/trajectory.hpp"

namespace ebmtraj {

// Trajectory table, one row per observation:
//   frame,track_id,class,x,y,heading,width,length,lost,occluded,generated
// plus an optional scene column (defaults to the file stem). Column order is
// free, unknown columns are ignored, heading may be nan or empty.
inline constexpr const char* kTrajectoryColumns[] = {
    "frame", "track_id", "class", "x", "y", "heading", "width", "length", "lost", "occluded",
    "generated"};

// Reads one CSV file, or every *.csv file of a directory in name order.
std::vector<TrajectoryRecord> parse_trajectory_csv(const std::filesystem::path& path);

std::vector<TrajectoryRecord> parse_trajectory_csv(std::istream& in, const std::string& scene,
                                                   const std::string& source);

void write_trajectory_csv(std::span<const TrajectoryRecord> records, std::ostream& out);
void write_trajectory_csv(std::span<const TrajectoryRecord> records,
                          const std::filesystem::path& path);

}  // namespace ebmtraj

#endif  // EBMTRAJ_APP_TRAJECTORY_CSV_HPP_
