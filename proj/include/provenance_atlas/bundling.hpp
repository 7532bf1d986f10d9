#pragma once

// Force-directed edge bundling of transfer segments in a planar scene.
//
// Each cycle resamples every polyline to a finer subdivision and then runs a
// number of synchronous iterations. An interior point moves by
//     step * (kp * (prev + next - 2 * self) + sum_q unit(q_i - self))
// where kp = K / (edge length * segment count) and q ranges over edges whose
// compatibility with this one is at least the threshold. Endpoints never move.
// Step size and iteration count shrink geometrically from cycle to cycle.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "provenance_atlas/error.hpp"
#include "provenance_atlas/model.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const LatLon&) const = default;
};

// Equirectangular projection (x follows lon, y follows lat) of a bounding box
// into the unit scene box, one scale for both axes so shapes are not skewed.
// The box centre maps to (0.5, 0.5).
class Projection {
 public:
  Projection() = default;
  Projection(double lat_center, double lon_center, double scale)
      : lat_center_(lat_center), lon_center_(lon_center), scale_(scale > 0.0 ? scale : 1.0) {}

  static Projection world() { return {0.0, 0.0, 360.0}; }

  static Projection fit(std::span<const GeoPoint> points) {
    if (points.empty()) return world();
    double lat_lo = points[0].lat, lat_hi = points[0].lat;
    double lon_lo = points[0].lon, lon_hi = points[0].lon;
    for (const auto& g : points) {
      lat_lo = std::min(lat_lo, g.lat);
      lat_hi = std::max(lat_hi, g.lat);
      lon_lo = std::min(lon_lo, g.lon);
      lon_hi = std::max(lon_hi, g.lon);
    }
    const double span = std::max(lat_hi - lat_lo, lon_hi - lon_lo);
    return {(lat_lo + lat_hi) / 2.0, (lon_lo + lon_hi) / 2.0, span > 0.0 ? span : 1.0};
  }

  Vec2 project(const GeoPoint& g) const { return project(LatLon{g.lat, g.lon}); }
  Vec2 project(LatLon g) const {
    return {0.5 + (g.lon - lon_center_) / scale_, 0.5 + (g.lat - lat_center_) / scale_};
  }
  LatLon unproject(Vec2 p) const {
    return {(p.y - 0.5) * scale_ + lat_center_, (p.x - 0.5) * scale_ + lon_center_};
  }

  double lat_center() const { return lat_center_; }
  double lon_center() const { return lon_center_; }
  double scale() const { return scale_; }

 private:
  double lat_center_ = 0.0;
  double lon_center_ = 0.0;
  double scale_ = 360.0;
};

struct EdgeId {
  MeiId copy_id;
  int j = 0;

  bool operator==(const EdgeId&) const = default;
};

struct Segment {
  EdgeId id;
  Vec2 a;
  Vec2 b;
};

struct BundleParams {
  int cycles = 6;
  int initial_subdivisions = 1;
  double subdivision_growth = 2.0;
  double initial_step = 6e-4;  // fraction of the scene diagonal
  int iterations_first_cycle = 50;
  double iteration_decay = 2.0 / 3.0;
  double step_decay = 0.5;
  double stiffness = 0.1;
  double compatibility_threshold = 0.6;

  bool operator==(const BundleParams&) const = default;

  // Interior point count used in the given 0-based cycle.
  int subdivisions_at(int cycle) const {
    int p = initial_subdivisions;
    for (int c = 0; c < cycle; ++c) p = std::max(1, static_cast<int>(std::lround(p * subdivision_growth)));
    return p;
  }

  int iterations_at(int cycle) const {
    return std::max(1, static_cast<int>(std::lround(iterations_first_cycle * std::pow(iteration_decay, cycle))));
  }
};

inline void validate(const BundleParams& p) {
  const bool ok = p.cycles >= 1 && p.initial_subdivisions >= 1 && p.subdivision_growth > 0.0 &&
                  p.initial_step > 0.0 && p.iterations_first_cycle >= 1 && p.iteration_decay > 0.0 &&
                  p.step_decay > 0.0 && p.stiffness > 0.0 && p.compatibility_threshold >= 0.0 &&
                  p.compatibility_threshold <= 1.0;
  if (!ok) throw Error(ErrorCode::InvalidParams, "bundle parameters out of range");
}

struct Straight {
  bool operator==(const Straight&) const = default;
};

using BundlePreset = std::variant<Straight, BundleParams>;

inline constexpr int kMaxBundleLevel = 4;

// Level 0 bypasses bundling. Levels 1-4 weaken the springs and lengthen the
// step, from barely curved to strongly bundled.
inline BundlePreset preset_params(int level) {
  if (level < 0 || level > kMaxBundleLevel) {
    throw Error(ErrorCode::InvalidLevel, "bundling level must be in 0..4, got " + std::to_string(level));
  }
  if (level == 0) return Straight{};
  static constexpr double kStiffness[] = {0.8, 0.4, 0.1, 0.02};
  static constexpr double kStep[] = {1.5e-4, 3e-4, 6e-4, 1.2e-3};
  BundleParams p;
  p.stiffness = kStiffness[level - 1];
  p.initial_step = kStep[level - 1];
  return p;
}

struct BundledPolyline {
  EdgeId id;
  std::vector<Vec2> points;
};

namespace detail {

inline double visibility(const Segment& p, const Segment& q) {
  const Vec2 dir = p.b - p.a;
  const double len2 = dot(dir, dir);
  auto on_line = [&](Vec2 pt) { return p.a + dir * (dot(pt - p.a, dir) / len2); };
  const Vec2 i0 = on_line(q.a);
  const Vec2 i1 = on_line(q.b);
  const double span = distance(i0, i1);
  if (span == 0.0) return 0.0;
  const Vec2 mid_i = (i0 + i1) * 0.5;
  const Vec2 mid_p = (p.a + p.b) * 0.5;
  return std::max(0.0, 1.0 - 2.0 * distance(mid_p, mid_i) / span);
}

}  // namespace detail

inline double angle_compatibility(const Segment& e1, const Segment& e2) {
  const Vec2 p = e1.b - e1.a;
  const Vec2 q = e2.b - e2.a;
  return std::min(1.0, std::abs(dot(p, q)) / (norm(p) * norm(q)));
}

inline double scale_compatibility(const Segment& e1, const Segment& e2) {
  const double l1 = distance(e1.a, e1.b);
  const double l2 = distance(e2.a, e2.b);
  const double avg = (l1 + l2) / 2.0;
  return 2.0 / (avg / std::min(l1, l2) + std::max(l1, l2) / avg);
}

inline double position_compatibility(const Segment& e1, const Segment& e2) {
  const double avg = (distance(e1.a, e1.b) + distance(e2.a, e2.b)) / 2.0;
  const Vec2 m1 = (e1.a + e1.b) * 0.5;
  const Vec2 m2 = (e2.a + e2.b) * 0.5;
  return avg / (avg + distance(m1, m2));
}

inline double visibility_compatibility(const Segment& e1, const Segment& e2) {
  return std::min(detail::visibility(e1, e2), detail::visibility(e2, e1));
}

inline double compatibility(const Segment& e1, const Segment& e2) {
  return angle_compatibility(e1, e2) * scale_compatibility(e1, e2) * position_compatibility(e1, e2) *
         visibility_compatibility(e1, e2);
}

namespace detail {

// Resamples a polyline to `interior` evenly spaced points by arc length.
// The first and last points are carried over unchanged.
inline std::vector<Vec2> resample(const std::vector<Vec2>& poly, int interior) {
  std::vector<double> cum(poly.size(), 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i) cum[i] = cum[i - 1] + distance(poly[i - 1], poly[i]);
  const double total = cum.back();
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(interior) + 2);
  out.push_back(poly.front());
  std::size_t seg = 0;
  for (int k = 1; k <= interior; ++k) {
    const double target = total * k / (interior + 1);
    while (seg + 2 < poly.size() && cum[seg + 1] < target) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double f = len > 0.0 ? (target - cum[seg]) / len : 0.0;
    out.push_back(poly[seg] + (poly[seg + 1] - poly[seg]) * f);
  }
  out.push_back(poly.back());
  return out;
}

struct Partner {
  std::size_t edge = 0;
  bool reversed = false;  // the partner runs the opposite way; pair point i with P+1-i
};

inline constexpr double kCoincidentEpsilon = 1e-12;

}  // namespace detail

inline std::vector<BundledPolyline> bundle(std::span<const Segment> segments, const BundleParams& params) {
  validate(params);
  for (const auto& s : segments) {
    if (s.a == s.b) {
      throw Error(ErrorCode::DegenerateSegment,
                  "zero-length segment " + s.id.copy_id + "#" + std::to_string(s.id.j));
    }
    if (!std::isfinite(s.a.x) || !std::isfinite(s.a.y) || !std::isfinite(s.b.x) || !std::isfinite(s.b.y)) {
      throw Error(ErrorCode::InvalidParams, "non-finite segment coordinates");
    }
  }
  const std::size_t n = segments.size();
  if (n == 0) return {};

  std::vector<std::vector<detail::Partner>> partners(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (compatibility(segments[i], segments[k]) < params.compatibility_threshold) continue;
      const bool reversed = dot(segments[i].b - segments[i].a, segments[k].b - segments[k].a) < 0.0;
      partners[i].push_back({k, reversed});
      partners[k].push_back({i, reversed});
    }
  }

  Vec2 lo = segments[0].a, hi = segments[0].a;
  for (const auto& s : segments) {
    for (Vec2 v : {s.a, s.b}) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
  }
  const double diagonal = distance(lo, hi);

  std::vector<double> lengths(n);
  std::vector<std::vector<Vec2>> current(n);
  for (std::size_t i = 0; i < n; ++i) {
    lengths[i] = distance(segments[i].a, segments[i].b);
    current[i] = {segments[i].a, segments[i].b};
  }

  for (int cycle = 0; cycle < params.cycles; ++cycle) {
    const int interior = params.subdivisions_at(cycle);
    for (auto& poly : current) poly = detail::resample(poly, interior);
    const double step = params.initial_step * diagonal * std::pow(params.step_decay, cycle);
    const int iterations = params.iterations_at(cycle);
    const std::size_t last = static_cast<std::size_t>(interior) + 1;

    auto next = current;
    for (int it = 0; it < iterations; ++it) {
      for (std::size_t e = 0; e < n; ++e) {
        const auto& poly = current[e];
        const double kp = params.stiffness / (lengths[e] * static_cast<double>(interior + 1));
        for (std::size_t i = 1; i < last; ++i) {
          Vec2 force = (poly[i - 1] + poly[i + 1] - poly[i] * 2.0) * kp;
          for (const auto& partner : partners[e]) {
            const Vec2 other = current[partner.edge][partner.reversed ? last - i : i];
            const Vec2 d = other - poly[i];
            const double r = norm(d);
            if (r > detail::kCoincidentEpsilon) force += d * (1.0 / r);
          }
          next[e][i] = poly[i] + force * step;
        }
      }
      std::swap(current, next);
    }
  }

  std::vector<BundledPolyline> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    current[i].front() = segments[i].a;
    current[i].back() = segments[i].b;
    out.push_back({segments[i].id, std::move(current[i])});
  }
  return out;
}

inline std::vector<BundledPolyline> straight_polylines(std::span<const Segment> segments) {
  std::vector<BundledPolyline> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back({s.id, {s.a, s.b}});
  return out;
}

inline std::vector<BundledPolyline> bundle_at_level(std::span<const Segment> segments, int level) {
  const auto preset = preset_params(level);
  if (std::holds_alternative<Straight>(preset)) {
    for (const auto& s : segments) {
      if (s.a == s.b) throw Error(ErrorCode::DegenerateSegment, "zero-length segment " + s.id.copy_id);
    }
    return straight_polylines(segments);
  }
  return bundle(segments, std::get<BundleParams>(preset));
}

// Map geometry for a set of transfers: one record per drawable transfer with
// its points in lat/lon. Endpoints are the recorded coordinates exactly.
struct BundledEdge {
  EdgeId id;
  std::vector<LatLon> points;
};

struct BundleGeometry {
  int level = 0;
  Projection projection;
  std::vector<BundledEdge> edges;
};

// Drawable transfers: both ends resolved and at distinct locations.
inline bool drawable(const Transfer& t) { return t.mappable() && !t.zero_length; }

inline BundleGeometry bundle_transfers(std::span<const Transfer> transfers, int level) {
  (void)preset_params(level);
  std::vector<GeoPoint> endpoints;
  std::vector<const Transfer*> kept;
  for (const auto& t : transfers) {
    if (!drawable(t)) continue;
    endpoints.push_back(*t.from_geo);
    endpoints.push_back(*t.to_geo);
    kept.push_back(&t);
  }
  BundleGeometry geo;
  geo.level = level;
  geo.projection = Projection::fit(endpoints);

  std::vector<Segment> segments;
  std::vector<const Transfer*> source;
  for (const auto* t : kept) {
    Segment s{{t->copy_id, t->order_index}, geo.projection.project(*t->from_geo), geo.projection.project(*t->to_geo)};
    if (s.a == s.b) continue;  // distinct names sharing one coordinate
    segments.push_back(std::move(s));
    source.push_back(t);
  }

  const auto lines = bundle_at_level(segments, level);
  geo.edges.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    BundledEdge edge{lines[i].id, {}};
    edge.points.reserve(lines[i].points.size());
    for (const auto& p : lines[i].points) edge.points.push_back(geo.projection.unproject(p));
    edge.points.front() = {source[i]->from_geo->lat, source[i]->from_geo->lon};
    edge.points.back() = {source[i]->to_geo->lat, source[i]->to_geo->lon};
    geo.edges.push_back(std::move(edge));
  }
  return geo;
}

}  // namespace provenance_atlas
