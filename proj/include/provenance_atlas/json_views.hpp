#pragma once

// JSON renderings of derived products, shared by the HTTP service and CLI.

#include <nlohmann/json.hpp>

#include "provenance_atlas/aggregation.hpp"
#include "provenance_atlas/animation.hpp"
#include "provenance_atlas/bundling.hpp"
#include "provenance_atlas/ingest.hpp"
#include "provenance_atlas/normalized.hpp"
#include "provenance_atlas/query.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

using nlohmann::json;

inline json to_json(const ValidationFinding& f) {
  json j{{"severity", to_string(f.severity)}, {"copy_id", f.copy_id}, {"rule", f.rule}, {"message", f.message}};
  j["provenance_index"] = f.provenance_index ? json(*f.provenance_index) : json(nullptr);
  return j;
}

inline json to_json(const IngestReport& r) {
  json findings = json::array();
  for (const auto& f : r.findings) findings.push_back(to_json(f));
  json unresolved = json::array();
  for (const auto& u : r.unresolved_places) {
    unresolved.push_back({{"mei_id", u.mei_id}, {"order_index", u.order_index}, {"raw_name", u.raw_name}});
  }
  return {{"editions_loaded", r.editions_loaded},
          {"copies_loaded", r.copies_loaded},
          {"provenances_loaded", r.provenances_loaded},
          {"records_skipped", r.records_skipped},
          {"unresolved_places", unresolved},
          {"findings", findings}};
}

inline json to_json(const DatasetSnapshot& s) {
  return {{"digest", s.digest},
          {"loaded_at", s.loaded_at},
          {"counts",
           {{"editions", s.counts.editions},
            {"copies", s.counts.copies},
            {"provenances", s.counts.provenances},
            {"transfers", s.counts.transfers}}}};
}

inline json to_json(const GeoPoint& g) {
  return {{"lat", g.lat}, {"lon", g.lon}, {"country_code", g.country_code}};
}

inline json to_json(const CompletenessTriple& c) {
  return {{"start_time", to_string(c.start_time)},
          {"end_time", to_string(c.end_time)},
          {"location", to_string(c.location)}};
}

inline json to_json(const Provenance& p) {
  auto opt_int = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  auto opt_str = [](const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); };
  return {{"order_index", p.order_index},
          {"start_year", opt_int(p.start_year)},
          {"end_year", opt_int(p.end_year)},
          {"place", opt_str(p.place)},
          {"resolved_place", opt_str(p.resolved_place)},
          {"geo", p.geo ? to_json(*p.geo) : json(nullptr)},
          {"completeness", to_json(p.completeness)},
          {"evidence", p.evidence}};
}

inline json to_json(const Transfer& t) {
  json j{{"copy_id", t.copy_id},
         {"j", t.order_index},
         {"from_provenance", t.from_provenance},
         {"to_provenance", t.to_provenance},
         {"consistent", t.consistent},
         {"from_country", t.from_label()},
         {"to_country", t.to_label()},
         {"zero_length", t.zero_length},
         {"mappable", t.mappable()}};
  j["interval"] = t.interval ? json{{"t_start", t.interval->t_start}, {"t_end", t.interval->t_end}} : json(nullptr);
  j["from_geo"] = t.from_geo ? to_json(*t.from_geo) : json(nullptr);
  j["to_geo"] = t.to_geo ? to_json(*t.to_geo) : json(nullptr);
  return j;
}

inline json to_json(const Journey& journey) {
  json nodes = json::array();
  for (const auto& n : journey) {
    nodes.push_back({{"provenance", to_json(n.provenance)},
                     {"outgoing", n.outgoing ? to_json(*n.outgoing) : json(nullptr)}});
  }
  return nodes;
}

inline json to_json(const CopySummary& s) {
  json spokes = json::array();
  for (const auto& sp : s.completeness_spokes) {
    spokes.push_back({{"order_index", sp.order_index},
                      {"start_time", to_string(sp.start_time)},
                      {"end_time", to_string(sp.end_time)},
                      {"location", to_string(sp.location)}});
  }
  return {{"mei_id", s.mei_id},
          {"n_provenances", s.n_provenances},
          {"completeness_spokes", spokes},
          {"journey_nodes", to_json(s.journey_nodes)},
          {"highlight", s.highlight}};
}

inline json to_json(const HeatmapGrid& g) {
  json rows = json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < g.cols(); ++c) row.push_back(g.at(r, c));
    rows.push_back(std::move(row));
  }
  return {{"kind", to_string(g.kind)},
          {"ordering", to_string(g.ordering)},
          {"row_labels", g.row_labels},
          {"col_labels", g.col_labels},
          {"counts", rows}};
}

inline json to_json(const QuerySpec& s) {
  json j{{"kind", to_string(s.kind)}};
  if (s.od) j["od"] = {{"from", s.od->from_country}, {"to", s.od->to_country}};
  if (s.journey) j["journey"] = {{"origin", s.journey->origin}, {"destination", s.journey->destination}};
  if (s.id) j["id"] = *s.id;
  return j;
}

inline json to_json(const QueryResult& r) {
  json matched = json::object();
  for (const auto& [id, js] : r.matched_transfers) matched[id] = js;
  return {{"spec", to_json(r.spec)},
          {"copy_ids", r.copy_ids},
          {"matched_transfers", matched},
          {"stats",
           {{"n_copies", r.stats.n_copies},
            {"n_matched_transfers", r.stats.n_matched_transfers},
            {"n_distinct_countries", r.stats.n_distinct_countries}}}};
}

inline json to_json(LatLon p) { return json::array({p.lat, p.lon}); }

inline json to_json(const BundleGeometry& g) {
  json edges = json::array();
  for (const auto& e : g.edges) {
    json pts = json::array();
    for (const auto& p : e.points) pts.push_back(to_json(p));
    edges.push_back({{"copy_id", e.id.copy_id}, {"j", e.id.j}, {"points", pts}});
  }
  return {{"level", g.level}, {"edges", edges}};
}

inline json to_json(const AnimationTimeline& tl) {
  json tracks = json::array();
  for (const auto& t : tl.tracks) {
    json segs = json::array();
    for (const auto& s : t.segments) {
      segs.push_back({{"from", to_json(s.from)},
                      {"to", to_json(s.to)},
                      {"start_ms", s.start_ms},
                      {"duration_ms", s.duration_ms},
                      {"j", s.j}});
    }
    tracks.push_back({{"mei_id", t.mei_id}, {"color_index", t.color_index}, {"segments", segs}});
  }
  json skipped = json::array();
  for (const auto& s : tl.skipped) skipped.push_back({{"mei_id", s.mei_id}, {"j", s.j}});
  return {{"mode", to_string(tl.mode)}, {"tracks", tracks}, {"skipped", skipped}, {"total_ms", tl.total_ms}};
}

}  // namespace provenance_atlas
