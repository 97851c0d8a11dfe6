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

#include "icistat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <strings.h>
#include <numbers>
#include <string>

#include "icistat/error.hpp"

namespace icistat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;

Point2 polar(double r, double deg) {
  const double a = deg * kPi / 180.0;
  return {r * std::cos(a), r * std::sin(a)};
}

// Halton radical inverse.
double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

SectorPoint to_sector(Point2 p) { return {std::hypot(p.x, p.y), std::atan2(p.y, p.x)}; }

}  // namespace

const char* to_string(Reuse reuse) noexcept { return reuse == Reuse::FR1 ? "FR1" : "FR3"; }

Reuse parse_reuse(const char* text) {
  if (text != nullptr && strcasecmp(text, "FR1") == 0) return Reuse::FR1;
  if (text != nullptr && strcasecmp(text, "FR3") == 0) return Reuse::FR3;
  fail(Errc::invalid_argument,
       std::string("unknown reuse pattern '") + (text ? text : "") + "' (expected FR1 or FR3)");
}

Point2 to_cartesian(SectorPoint p) noexcept {
  return {p.r0 * std::cos(p.theta), p.r0 * std::sin(p.theta)};
}

NetworkLayout NetworkLayout::hexagonal(double cell_radius) {
  if (!(cell_radius > 0.0) || !std::isfinite(cell_radius)) {
    fail(Errc::invalid_argument, "cell radius must be positive and finite");
  }
  NetworkLayout layout;
  layout.radius_ = cell_radius;
  layout.positions_.reserve(kApCount);
  layout.rings_.reserve(kApCount);
  layout.positions_.push_back({0.0, 0.0});
  layout.rings_.push_back(0);
  for (int k = 0; k < 6; ++k) {
    layout.positions_.push_back(polar(kSqrt3 * cell_radius, 30.0 + 60.0 * k));
    layout.rings_.push_back(1);
  }
  for (int k = 0; k < 12; ++k) {
    const double r = (k % 2 == 0) ? 3.0 * cell_radius : 2.0 * kSqrt3 * cell_radius;
    layout.positions_.push_back(polar(r, 30.0 * k));
    layout.rings_.push_back(2);
  }
  return layout;
}

int NetworkLayout::ring(std::size_t ap) const {
  if (ap >= rings_.size()) fail(Errc::out_of_range, "AP index out of range");
  return rings_[ap];
}

std::vector<std::size_t> NetworkLayout::interferers(Reuse reuse) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (reuse == Reuse::FR1) {
      out.push_back(i);
    } else {
      // Co-channel cells of a reuse-3 plan sit at the reuse distance 3R.
      const double d = std::hypot(positions_[i].x, positions_[i].y);
      if (std::abs(d - 3.0 * radius_) <= 1e-9 * radius_) out.push_back(i);
    }
  }
  return out;
}

double NetworkLayout::sector_boundary(double theta) const {
  if (theta < -1e-12 || theta > kPi / 6.0 + 1e-12) {
    fail(Errc::out_of_range, "angle outside the symmetry sector [0, pi/6]");
  }
  return 0.5 * kSqrt3 * radius_ / std::cos(theta - kPi / 6.0);
}

bool NetworkLayout::in_sector(SectorPoint p, double tolerance) const {
  if (!std::isfinite(p.r0) || !std::isfinite(p.theta)) return false;
  if (p.r0 < 0.0) return false;
  if (p.r0 == 0.0) return true;
  if (p.theta < -tolerance || p.theta > kPi / 6.0 + tolerance) return false;
  const double theta = std::clamp(p.theta, 0.0, kPi / 6.0);
  return p.r0 <= sector_boundary(theta) * (1.0 + tolerance);
}

std::array<Point2, 3> NetworkLayout::sector_triangle() const noexcept {
  return {Point2{0.0, 0.0}, Point2{radius_, 0.0},
          Point2{0.75 * radius_, 0.25 * kSqrt3 * radius_}};
}

double NetworkLayout::sector_area() const noexcept {
  return kSqrt3 * radius_ * radius_ / 8.0;
}

double NetworkLayout::distance(std::size_t ap, SectorPoint p) const {
  if (!in_sector(p)) fail(Errc::out_of_range, "point outside the symmetry sector");
  return distance_to(ap, to_cartesian(p));
}

double NetworkLayout::distance_to(std::size_t ap, Point2 p) const {
  if (ap >= positions_.size()) fail(Errc::out_of_range, "AP index out of range");
  return std::hypot(p.x - positions_[ap].x, p.y - positions_[ap].y);
}

Point2 apply_symmetry(std::size_t symmetry, Point2 p) {
  if (symmetry >= kSymmetryCount) fail(Errc::out_of_range, "symmetry index out of range");
  double angle = 0.0;
  if (symmetry < 6) {
    angle = symmetry * kPi / 3.0;
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
  }
  angle = 2.0 * (symmetry - 6) * kPi / 6.0;  // reflection across axis at (k*30 deg)
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x + s * p.y, s * p.x - c * p.y};
}

std::vector<std::size_t> symmetry_ap_map(const NetworkLayout& layout, std::size_t symmetry) {
  const auto aps = layout.ap_positions();
  const double tol = 1e-9 * layout.cell_radius();
  std::vector<std::size_t> map(aps.size());
  for (std::size_t i = 0; i < aps.size(); ++i) {
    const Point2 image = apply_symmetry(symmetry, aps[i]);
    bool found = false;
    for (std::size_t j = 0; j < aps.size(); ++j) {
      if (std::hypot(image.x - aps[j].x, image.y - aps[j].y) <= tol) {
        map[i] = j;
        found = true;
        break;
      }
    }
    if (!found) fail(Errc::numerical_failure, "symmetry does not map the AP set to itself");
  }
  return map;
}

Point2 sector_point_from_unit(const NetworkLayout& layout, double u1, double u2) noexcept {
  const auto tri = layout.sector_triangle();
  const double s = std::sqrt(u1);
  const double b1 = s * (1.0 - u2);
  const double b2 = s * u2;
  return {b1 * tri[1].x + b2 * tri[2].x, b1 * tri[1].y + b2 * tri[2].y};
}

std::vector<WeightedPoint> sector_samples(const NetworkLayout& layout, SamplingScheme scheme,
                                          std::size_t count) {
  if (count == 0) fail(Errc::invalid_argument, "sample count must be at least 1");
  std::vector<WeightedPoint> out;
  const auto tri = layout.sector_triangle();
  if (scheme == SamplingScheme::grid) {
    const auto m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(count))));
    const double w = 1.0 / static_cast<double>(m * m);
    out.reserve(m * m);
    const Point2 e1{(tri[1].x - tri[0].x) / m, (tri[1].y - tri[0].y) / m};
    const Point2 e2{(tri[2].x - tri[0].x) / m, (tri[2].y - tri[0].y) / m};
    auto lattice = [&](double i, double j) {
      return Point2{tri[0].x + i * e1.x + j * e2.x, tri[0].y + i * e1.y + j * e2.y};
    };
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; i + j < m; ++j) {
        // Upward sub-triangle (i,j),(i+1,j),(i,j+1): centroid at +1/3, +1/3.
        out.push_back({to_sector(lattice(i + 1.0 / 3.0, j + 1.0 / 3.0)), w});
        if (i + j + 1 < m) {
          // Downward sub-triangle (i+1,j),(i,j+1),(i+1,j+1).
          out.push_back({to_sector(lattice(i + 2.0 / 3.0, j + 2.0 / 3.0)), w});
        }
      }
    }
  } else {
    const double w = 1.0 / static_cast<double>(count);
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const Point2 p =
          sector_point_from_unit(layout, radical_inverse(i + 1, 2), radical_inverse(i + 1, 3));
      out.push_back({to_sector(p), w});
    }
  }
  return out;
}

}  // namespace icistat
