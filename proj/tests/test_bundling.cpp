#include <gtest/gtest.h>

#include <cstring>

#include "support.hpp"

namespace pa = provenance_atlas;
using testsupport::midpoint_separation;
using testsupport::parallel_pair;

namespace {

pa::Segment seg(double ax, double ay, double bx, double by, int j = 1) {
  return {{"E", j}, {ax, ay}, {bx, by}};
}

double poly_length(const std::vector<pa::Vec2>& pts) {
  double s = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) s += pa::distance(pts[i - 1], pts[i]);
  return s;
}

bool bitwise_equal(pa::Vec2 a, pa::Vec2 b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<pa::Segment> random_scene(unsigned seed, int n) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<pa::Segment> out;
  for (int i = 0; i < n; ++i) out.push_back(seg(u(rng), u(rng), u(rng), u(rng), i + 1));
  return out;
}

}  // namespace

TEST(Projection, RoundTripOnRandomPoints) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  std::vector<pa::GeoPoint> pts;
  for (int i = 0; i < 100; ++i) pts.push_back({lat(rng), lon(rng), "IT"});
  const auto proj = pa::Projection::fit(pts);
  double worst = 0;
  for (const auto& g : pts) {
    const auto back = proj.unproject(proj.project(g));
    worst = std::max({worst, std::fabs(back.lat - g.lat), std::fabs(back.lon - g.lon)});
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Projection, SymmetricBoxCentresOrigin) {
  std::vector<pa::GeoPoint> pts{{-10, -20, "AA"}, {10, 20, "AA"}};
  const auto p = pa::Projection::fit(pts).project(pa::LatLon{0, 0});
  EXPECT_DOUBLE_EQ(p.x, 0.5);
  EXPECT_DOUBLE_EQ(p.y, 0.5);
}

TEST(Projection, FlorenceFollowsAffineMap) {
  const auto proj = pa::Projection::world();
  const auto p = proj.project(pa::LatLon{43.77, 11.26});
  EXPECT_EQ(p.x, 0.5 + 11.26 / 360.0);
  EXPECT_EQ(p.y, 0.5 + 43.77 / 360.0);
  EXPECT_EQ(proj.project(pa::LatLon{43.77, 11.26}), p);
}

TEST(Compatibility, IdenticalSegmentsScoreOne) {
  auto a = seg(0.1, 0.1, 0.9, 0.4);
  EXPECT_DOUBLE_EQ(pa::compatibility(a, a), 1.0);
}

TEST(Compatibility, PerpendicularCrossingScoresZero) {
  auto a = seg(0.0, 0.5, 1.0, 0.5);
  auto b = seg(0.5, 0.0, 0.5, 1.0);
  EXPECT_NEAR(pa::angle_compatibility(a, b), 0.0, 1e-15);
  EXPECT_NEAR(pa::compatibility(a, b), 0.0, 1e-15);
}

TEST(Compatibility, ParallelOffsetTenPercent) {
  // Hand evaluation: angle 1, scale 1, visibility 1, position L/(L+0.1L).
  auto a = seg(0.0, 0.0, 1.0, 0.0);
  auto b = seg(0.0, 0.1, 1.0, 0.1);
  EXPECT_DOUBLE_EQ(pa::angle_compatibility(a, b), 1.0);
  EXPECT_DOUBLE_EQ(pa::scale_compatibility(a, b), 1.0);
  EXPECT_DOUBLE_EQ(pa::visibility_compatibility(a, b), 1.0);
  EXPECT_DOUBLE_EQ(pa::position_compatibility(a, b), 1.0 / 1.1);
  const double c = pa::compatibility(a, b);
  EXPECT_GT(c, 0.5);
  EXPECT_LT(c, 1.0);
}

TEST(Compatibility, SymmetricAndBounded) {
  auto scene = random_scene(3, 30);
  for (const auto& a : scene) {
    for (const auto& b : scene) {
      const double ab = pa::compatibility(a, b);
      EXPECT_NEAR(ab, pa::compatibility(b, a), 1e-12);
      EXPECT_GE(ab, 0.0);
      EXPECT_LE(ab, 1.0 + 1e-12);
      EXPECT_NEAR(ab, testsupport::ref_compat(a.a.x, a.a.y, a.b.x, a.b.y, b.a.x, b.a.y, b.b.x, b.b.y), 1e-12);
    }
  }
}

TEST(Presets, LevelTable) {
  EXPECT_TRUE(std::holds_alternative<pa::Straight>(pa::preset_params(0)));
  double prev = 1e9;
  for (int level = 1; level <= 4; ++level) {
    const auto p = std::get<pa::BundleParams>(pa::preset_params(level));
    EXPECT_LT(p.stiffness, prev);
    prev = p.stiffness;
  }
  EXPECT_EQ(std::get<pa::BundleParams>(pa::preset_params(3)).stiffness, 0.1);
  for (int bad : {-1, 5}) {
    try {
      (void)pa::preset_params(bad);
      FAIL();
    } catch (const pa::Error& e) {
      EXPECT_EQ(e.code(), pa::ErrorCode::InvalidLevel);
    }
  }
}

TEST(Presets, ScheduleHelpers) {
  pa::BundleParams p;
  EXPECT_EQ(p.subdivisions_at(0), 1);
  EXPECT_EQ(p.subdivisions_at(3), 8);
  EXPECT_EQ(p.iterations_at(0), 50);
  EXPECT_EQ(p.iterations_at(1), 33);
  p.stiffness = 0;
  EXPECT_THROW(pa::validate(p), pa::Error);
}

TEST(Bundle, LevelZeroIsStraightChords) {
  auto scene = random_scene(4, 12);
  auto out = pa::bundle_at_level(scene, 0);
  ASSERT_EQ(out.size(), scene.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_EQ(out[i].points.size(), 2u);
    EXPECT_EQ(out[i].points[0], scene[i].a);
    EXPECT_EQ(out[i].points[1], scene[i].b);
  }
}

TEST(Bundle, DegenerateSegmentRejected) {
  std::vector<pa::Segment> s{seg(0.2, 0.2, 0.2, 0.2)};
  try {
    (void)pa::bundle_at_level(s, 2);
    FAIL();
  } catch (const pa::Error& e) {
    EXPECT_EQ(e.code(), pa::ErrorCode::DegenerateSegment);
  }
}

TEST(Bundle, MatchesReferenceSimulation) {
  // One cycle, three interior points, twenty iterations.
  const std::vector<std::vector<pa::Segment>> scenes{parallel_pair(), random_scene(8, 6),
                                                     {seg(0.1, 0.4, 0.9, 0.45), seg(0.9, 0.55, 0.1, 0.6)}};
  for (const auto& scene : scenes) {
    pa::Vec2 lo = scene[0].a, hi = scene[0].a;
    std::vector<std::array<double, 4>> raw;
    for (const auto& s : scene) {
      for (auto v : {s.a, s.b}) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
      }
      raw.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
    }
    const double diag = pa::distance(lo, hi);
    for (double k : {0.8, 0.1, 0.02}) {
      pa::BundleParams p;
      p.cycles = 1;
      p.initial_subdivisions = 3;
      p.iterations_first_cycle = 20;
      p.initial_step = 1e-3;
      p.stiffness = k;
      testsupport::RefParams rp;
      rp.stiffness = k;
      rp.step = 1e-3 * diag;
      const auto ours = pa::bundle(scene, p);
      const auto ref = testsupport::reference_bundle(raw, rp);
      for (std::size_t e = 0; e < scene.size(); ++e) {
        ASSERT_EQ(ours[e].points.size(), ref[e].size());
        for (std::size_t i = 0; i < ref[e].size(); ++i) {
          EXPECT_NEAR(ours[e].points[i].x, ref[e][i].first, 1e-12);
          EXPECT_NEAR(ours[e].points[i].y, ref[e][i].second, 1e-12);
        }
      }
    }
  }
}

TEST(Bundle, ParallelPairIsMirrorSymmetricAndContracts) {
  const double d = 0.32;
  auto scene = parallel_pair(0.8, d);
  for (int level = 1; level <= 4; ++level) {
    auto out = pa::bundle_at_level(scene, level);
    ASSERT_EQ(out[0].points.size(), out[1].points.size());
    for (std::size_t i = 0; i < out[0].points.size(); ++i) {
      EXPECT_NEAR(out[0].points[i].x, out[1].points[i].x, 1e-9);
      EXPECT_NEAR(out[0].points[i].y - 0.5, 0.5 - out[1].points[i].y, 1e-9);
    }
    EXPECT_LT(midpoint_separation(out), d);
  }
}

TEST(Bundle, SeparationDecreasesWithLevel) {
  auto scene = parallel_pair();
  double prev = 1e9;
  for (int level = 1; level <= 4; ++level) {
    const double sep = midpoint_separation(pa::bundle_at_level(scene, level));
    EXPECT_LT(sep, prev) << "level " << level;
    prev = sep;
  }
}

TEST(Bundle, ReferenceSeparationDecreasesWithStiffness) {
  std::vector<std::array<double, 4>> raw;
  for (const auto& s : parallel_pair()) raw.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
  double prev = 1e9;
  for (double k : {0.8, 0.4, 0.1, 0.02}) {
    testsupport::RefParams rp;
    rp.stiffness = k;
    rp.step = 2e-3;
    const auto pts = testsupport::reference_bundle(raw, rp);
    const double sep = std::fabs(pts[0][2].second - pts[1][2].second);
    EXPECT_LT(sep, prev);
    prev = sep;
  }
}

TEST(Bundle, MirrorImageSceneGivesMirrorImageOutput) {
  auto scene = random_scene(21, 10);
  auto mirrored = scene;
  for (auto& s : mirrored) {
    s.a.x = 1.0 - s.a.x;
    s.b.x = 1.0 - s.b.x;
  }
  auto a = pa::bundle_at_level(scene, 4);
  auto b = pa::bundle_at_level(mirrored, 4);
  for (std::size_t e = 0; e < a.size(); ++e) {
    for (std::size_t i = 0; i < a[e].points.size(); ++i) {
      EXPECT_NEAR(a[e].points[i].x, 1.0 - b[e].points[i].x, 1e-9);
      EXPECT_NEAR(a[e].points[i].y, b[e].points[i].y, 1e-9);
    }
  }
}

TEST(Bundle, EndpointsFixedAndCurvesNoShorterThanChords) {
  auto scene = random_scene(5, 25);
  for (int level = 0; level <= 4; ++level) {
    auto out = pa::bundle_at_level(scene, level);
    for (std::size_t e = 0; e < out.size(); ++e) {
      EXPECT_TRUE(bitwise_equal(out[e].points.front(), scene[e].a));
      EXPECT_TRUE(bitwise_equal(out[e].points.back(), scene[e].b));
      EXPECT_GE(poly_length(out[e].points), pa::distance(scene[e].a, scene[e].b) * (1 - 1e-12));
    }
  }
}

TEST(Bundle, Deterministic) {
  auto scene = random_scene(6, 20);
  auto a = pa::bundle_at_level(scene, 3);
  auto b = pa::bundle_at_level(scene, 3);
  for (std::size_t e = 0; e < a.size(); ++e) {
    ASSERT_EQ(a[e].points.size(), b[e].points.size());
    EXPECT_EQ(std::memcmp(a[e].points.data(), b[e].points.data(), a[e].points.size() * sizeof(pa::Vec2)), 0);
  }
}

TEST(Bundle, IsolatedEdgeStaysStraight) {
  std::vector<pa::Segment> one{seg(0.13, 0.27, 0.81, 0.64)};
  const double len = pa::distance(one[0].a, one[0].b);
  for (int level = 1; level <= 4; ++level) {
    auto out = pa::bundle_at_level(one, level);
    const pa::Vec2 dir = (one[0].b - one[0].a) * (1.0 / len);
    for (const auto& p : out[0].points) {
      const pa::Vec2 r = p - one[0].a;
      const double off = std::fabs(r.x * dir.y - r.y * dir.x);
      EXPECT_LT(off, 1e-6 * len);
    }
  }
}

TEST(BundleTransfers, UsesRecordedEndpointsAndSkipsStays) {
  auto ds = testsupport::synthetic_ingest(12, {30, 6, 0.1, 0.1}).dataset;
  auto ts = pa::flatten_transfers(ds);
  std::size_t drawable = 0;
  for (const auto& t : ts) drawable += pa::drawable(t) ? 1 : 0;
  for (int level : {0, 2}) {
    auto geo = pa::bundle_transfers(ts, level);
    EXPECT_EQ(geo.edges.size(), drawable);
    for (const auto& e : geo.edges) {
      const auto it = std::find_if(ts.begin(), ts.end(), [&](const auto& t) {
        return t.copy_id == e.id.copy_id && t.order_index == e.id.j;
      });
      ASSERT_NE(it, ts.end());
      EXPECT_EQ(e.points.front(), (pa::LatLon{it->from_geo->lat, it->from_geo->lon}));
      EXPECT_EQ(e.points.back(), (pa::LatLon{it->to_geo->lat, it->to_geo->lon}));
    }
  }
}
