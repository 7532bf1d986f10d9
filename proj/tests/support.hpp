#pragma once

#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "provenance_atlas.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using nlohmann::json;
namespace pa = provenance_atlas;

inline std::string data_path(const std::string& name) { return std::string(PA_DATA_DIR) + "/" + name; }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "pa-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) std::abort();
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Small gazetteer used by synthetic corpora.
inline const char* kMiniGazetteer =
    "name,lat,lon,country_code\n"
    "Florence,43.77,11.26,IT\n"
    "Rome,41.90,12.50,IT\n"
    "Venice,45.44,12.33,IT\n"
    "Munich,48.14,11.58,DE\n"
    "Berlin,52.52,13.40,DE\n"
    "Paris,48.86,2.35,FR\n"
    "London,51.51,-0.13,GB\n"
    "Oxford,51.75,-1.26,GB\n"
    "New York,40.71,-74.01,US\n"
    "Boston,42.36,-71.06,US\n"
    "Madrid,40.42,-3.70,ES\n"
    "alias,canonical_name\n"
    "Firenze,Florence\n";

inline pa::Gazetteer mini_gazetteer() { return pa::Gazetteer::from_csv(kMiniGazetteer); }

struct CorpusOptions {
  int copies = 200;
  int max_provenances = 10;
  double missing_year = 0.15;
  double unresolved = 0.1;
};

// Random dataset document over the mini gazetteer. Same seed, same bytes.
inline json synthetic_document(unsigned seed, const CorpusOptions& opt = {}) {
  std::mt19937 rng(seed);
  const std::vector<std::string> places{"Florence", "Rome",   "Venice", "Munich", "Berlin", "Paris",
                                        "London",   "Oxford", "New York", "Boston", "Madrid", "firenze "};
  const std::vector<std::string> unknown{"Atlantis", "Lemuria", "El Dorado"};
  std::uniform_int_distribution<int> n_dist(1, opt.max_provenances);
  std::uniform_int_distribution<int> year(1450, 1990);
  std::uniform_int_distribution<std::size_t> pick(0, places.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_unknown(0, unknown.size() - 1);
  std::bernoulli_distribution miss(opt.missing_year), unres(opt.unresolved), approx(0.2);

  json doc{{"editions", json::array({{{"istc", "syn-ed"}, {"title", "Synthetic"}, {"print_place", "Florence"},
                                      {"print_year", 1481}}})},
           {"copies", json::array()}};
  for (int c = 0; c < opt.copies; ++c) {
    json copy{{"mei_id", "SYN-" + std::to_string(c)}, {"istc", "syn-ed"}, {"provenances", json::array()}};
    const int n = n_dist(rng);
    for (int k = 0; k < n; ++k) {
      json p = json::object();
      if (!miss(rng)) p["start_year"] = year(rng);
      if (!miss(rng)) p["end_year"] = year(rng);
      if (approx(rng)) p["start_quality"] = "approx";
      if (approx(rng)) p["end_quality"] = "approx";
      p["place"] = unres(rng) ? unknown[pick_unknown(rng)] : places[pick(rng)];
      if (approx(rng)) p["place_quality"] = "approx";
      copy["provenances"].push_back(p);
    }
    doc["copies"].push_back(copy);
  }
  return doc;
}

inline pa::IngestResult synthetic_ingest(unsigned seed, const CorpusOptions& opt = {}) {
  return pa::parse_dataset(synthetic_document(seed, opt).dump(), mini_gazetteer());
}

// Independent force-directed bundler: plain arrays, factor formulas written
// out again, used only as an oracle for the library implementation.
struct RefParams {
  int p0 = 3;
  int iterations = 20;
  double step = 1e-3;  // absolute, in scene units
  double stiffness = 0.1;
  double threshold = 0.6;
};

inline double ref_compat(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy) {
  const double px = bx - ax, py = by - ay, qx = dx - cx, qy = dy - cy;
  const double lp = std::sqrt(px * px + py * py), lq = std::sqrt(qx * qx + qy * qy);
  const double ca = std::fabs(px * qx + py * qy) / (lp * lq);
  const double lavg = 0.5 * (lp + lq);
  const double cs = 2.0 / (lavg / std::fmin(lp, lq) + std::fmax(lp, lq) / lavg);
  const double mx = 0.5 * (ax + bx) - 0.5 * (cx + dx), my = 0.5 * (ay + by) - 0.5 * (cy + dy);
  const double cp = lavg / (lavg + std::sqrt(mx * mx + my * my));
  auto vis = [](double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy) {
    const double ux = bx - ax, uy = by - ay, l2 = ux * ux + uy * uy;
    const double t0 = ((cx - ax) * ux + (cy - ay) * uy) / l2;
    const double t1 = ((dx - ax) * ux + (dy - ay) * uy) / l2;
    const double i0x = ax + t0 * ux, i0y = ay + t0 * uy, i1x = ax + t1 * ux, i1y = ay + t1 * uy;
    const double span = std::hypot(i1x - i0x, i1y - i0y);
    if (span == 0.0) return 0.0;
    const double off = std::hypot(0.5 * (ax + bx) - 0.5 * (i0x + i1x), 0.5 * (ay + by) - 0.5 * (i0y + i1y));
    return std::fmax(0.0, 1.0 - 2.0 * off / span);
  };
  const double cv = std::fmin(vis(ax, ay, bx, by, cx, cy, dx, dy), vis(cx, cy, dx, dy, ax, ay, bx, by));
  return ca * cs * cp * cv;
}

// One cycle on straight input lines; returns interior + endpoints per edge.
inline std::vector<std::vector<std::pair<double, double>>> reference_bundle(
    const std::vector<std::array<double, 4>>& edges, const RefParams& rp) {
  const std::size_t n = edges.size();
  const int P = rp.p0;
  std::vector<std::vector<std::pair<double, double>>> pts(n);
  for (std::size_t e = 0; e < n; ++e) {
    const auto& s = edges[e];
    for (int i = 0; i <= P + 1; ++i) {
      const double f = static_cast<double>(i) / (P + 1);
      pts[e].push_back({s[0] + (s[2] - s[0]) * f, s[1] + (s[3] - s[1]) * f});
    }
  }
  std::vector<std::vector<int>> comp(n, std::vector<int>(n, 0));  // 0 none, 1 same dir, -1 reversed
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto &s = edges[a], &t = edges[b];
      if (ref_compat(s[0], s[1], s[2], s[3], t[0], t[1], t[2], t[3]) >= rp.threshold) {
        const double d = (s[2] - s[0]) * (t[2] - t[0]) + (s[3] - s[1]) * (t[3] - t[1]);
        comp[a][b] = d < 0 ? -1 : 1;
      }
    }
  }
  for (int it = 0; it < rp.iterations; ++it) {
    auto next = pts;
    for (std::size_t e = 0; e < n; ++e) {
      const auto& s = edges[e];
      const double len = std::hypot(s[2] - s[0], s[3] - s[1]);
      const double kp = rp.stiffness / (len * (P + 1));
      for (int i = 1; i <= P; ++i) {
        const auto [x, y] = pts[e][i];
        double fx = kp * (pts[e][i - 1].first + pts[e][i + 1].first - 2 * x);
        double fy = kp * (pts[e][i - 1].second + pts[e][i + 1].second - 2 * y);
        for (std::size_t o = 0; o < n; ++o) {
          if (!comp[e][o]) continue;
          const auto [ox, oy] = pts[o][comp[e][o] < 0 ? P + 1 - i : i];
          const double r = std::hypot(ox - x, oy - y);
          if (r > 1e-12) {
            fx += (ox - x) / r;
            fy += (oy - y) / r;
          }
        }
        next[e][i] = {x + rp.step * fx, y + rp.step * fy};
      }
    }
    pts = std::move(next);
  }
  return pts;
}

// Canonical fixture: two parallel edges of length L separated by d, centred in the unit box.
inline std::vector<pa::Segment> parallel_pair(double L = 0.8, double d = 0.32) {
  const double x0 = 0.5 - L / 2, x1 = 0.5 + L / 2;
  return {pa::Segment{{"A", 1}, {x0, 0.5 - d / 2}, {x1, 0.5 - d / 2}},
          pa::Segment{{"B", 1}, {x0, 0.5 + d / 2}, {x1, 0.5 + d / 2}}};
}

inline pa::Vec2 midpoint_of(const std::vector<pa::Vec2>& poly) {
  // Arc-length midpoint.
  double total = 0;
  for (std::size_t i = 1; i < poly.size(); ++i) total += pa::distance(poly[i - 1], poly[i]);
  double acc = 0;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const double l = pa::distance(poly[i - 1], poly[i]);
    if (acc + l >= total / 2 && l > 0) return poly[i - 1] + (poly[i] - poly[i - 1]) * ((total / 2 - acc) / l);
    acc += l;
  }
  return poly.back();
}

inline double midpoint_separation(const std::vector<pa::BundledPolyline>& lines) {
  return pa::distance(midpoint_of(lines[0].points), midpoint_of(lines[1].points));
}

}  // namespace testsupport
