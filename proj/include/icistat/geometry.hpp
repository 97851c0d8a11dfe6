// Copyright 2026 The icistat Authors
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

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace icistat {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Frequency reuse pattern of the 19-cell network.
enum class Reuse { FR1, FR3 };

const char* to_string(Reuse reuse) noexcept;
Reuse parse_reuse(const char* text);

/// Polar position (r0 metres, theta radians) of the tagged user inside the
/// canonical symmetry sector: the triangle spanned by the serving AP, a cell
/// vertex at angle 0 and the midpoint of the adjacent edge at angle pi/6.
struct SectorPoint {
  double r0 = 0.0;
  double theta = 0.0;
};

Point2 to_cartesian(SectorPoint p) noexcept;

/// 19-cell hexagonal layout. AP 0 serves the tagged user and sits at the
/// origin; APs 1..6 form the first ring at sqrt(3) R, APs 7..18 the second ring
/// ordered by angle, alternating 3R (angles 0, 60, ...) and 2 sqrt(3) R
/// (angles 30, 90, ...). Cells are hexagons of circumradius R with vertices at
/// multiples of 60 degrees.
class NetworkLayout {
 public:
  static constexpr std::size_t kApCount = 19;

  static NetworkLayout hexagonal(double cell_radius);

  double cell_radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return positions_.size(); }
  std::span<const Point2> ap_positions() const noexcept { return positions_; }
  int ring(std::size_t ap) const;

  /// Interfering AP indices of a reuse pattern, in ascending index order.
  std::vector<std::size_t> interferers(Reuse reuse) const;

  /// Largest r0 of the sector at angle theta (the cell edge).
  double sector_boundary(double theta) const;
  bool in_sector(SectorPoint p, double tolerance = 1e-9) const;
  std::array<Point2, 3> sector_triangle() const noexcept;
  double sector_area() const noexcept;

  /// Distance from a sector point to an AP; validates both arguments.
  double distance(std::size_t ap, SectorPoint p) const;
  /// Distance from an arbitrary point; validates only the AP index.
  double distance_to(std::size_t ap, Point2 p) const;

 private:
  double radius_ = 0.0;
  std::vector<Point2> positions_;
  std::vector<int> rings_;
};

/// The 12 symmetries of the hexagonal lattice about the serving AP: rotations
/// by k*60 degrees (k = 0..5) and reflections across the axes at k*30 degrees
/// (indices 6..11). Their images of the canonical sector tile the cell.
inline constexpr std::size_t kSymmetryCount = 12;
Point2 apply_symmetry(std::size_t symmetry, Point2 p);
/// AP index permutation induced by a symmetry.
std::vector<std::size_t> symmetry_ap_map(const NetworkLayout& layout, std::size_t symmetry);

enum class SamplingScheme { grid, quasi_random };

struct WeightedPoint {
  SectorPoint point;
  double weight = 0.0;
};

/// Area-uniform quadrature nodes over the sector, weights summing to 1.
/// grid: centroids of the m*m congruent sub-triangles of a barycentric
/// subdivision, m = floor(sqrt(count)), so m*m nodes are returned.
/// quasi_random: `count` points of the Halton(2,3) sequence folded onto the
/// triangle.
std::vector<WeightedPoint> sector_samples(const NetworkLayout& layout, SamplingScheme scheme,
                                          std::size_t count);

/// Area-uniform point of the sector from two uniforms in [0, 1).
Point2 sector_point_from_unit(const NetworkLayout& layout, double u1, double u2) noexcept;

}  // namespace icistat
