#pragma once

// Dataset ingest: JSON document -> editions, copies and a report.
//
// Schema (UTF-8 JSON):
//   { "editions": [ { "istc", "title", "print_place", "print_year" } ],
//     "copies":   [ { "mei_id", "istc", "mei_url"?, "provenances": [
//         { "start_year"?, "start_quality"?, "end_year"?, "end_quality"?,
//           "place"?, "place_quality"?, "evidence"?,
//           "lat"?, "lon"?, "country_code"?, "resolved_place"? } ] } ] }
//
// Quality flags are "accurate" or "approx". The geo fields are written by the
// normalized export; when present they are used as-is and geocoding is skipped.
// Provenance array order is the chronological order.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "provenance_atlas/error.hpp"
#include "provenance_atlas/gazetteer.hpp"
#include "provenance_atlas/model.hpp"

namespace provenance_atlas {

struct UnresolvedPlace {
  MeiId mei_id;
  int order_index = 0;
  std::string raw_name;

  bool operator==(const UnresolvedPlace&) const = default;
};

struct IngestReport {
  std::size_t editions_loaded = 0;
  std::size_t copies_loaded = 0;
  std::size_t provenances_loaded = 0;
  std::size_t records_skipped = 0;
  std::vector<UnresolvedPlace> unresolved_places;
  std::vector<ValidationFinding> findings;
};

struct IngestResult {
  Dataset dataset;
  IngestReport report;
};

// One provenance block as it appears in the input, before resolution.
struct ProvenanceRecord {
  std::optional<int> start_year;
  bool start_approx = false;
  std::optional<int> end_year;
  bool end_approx = false;
  std::optional<std::string> place;
  bool place_approx = false;
};

inline CompletenessTriple derive_completeness(const ProvenanceRecord& rec, bool place_resolved) {
  auto level = [](bool present, bool approx) {
    if (!present) return CompletenessLevel::Missing;
    return approx ? CompletenessLevel::Approximate : CompletenessLevel::Accurate;
  };
  return {level(rec.start_year.has_value(), rec.start_approx),
          level(rec.end_year.has_value(), rec.end_approx),
          level(place_resolved, rec.place_approx)};
}

namespace detail {

using nlohmann::json;

struct RecordError {
  std::string rule;
  std::string message;
  std::optional<int> provenance_index;
};

inline const std::set<std::string, std::less<>>& known_provenance_keys() {
  static const std::set<std::string, std::less<>> keys{
      "start_year", "start_quality", "end_year", "end_quality", "place", "place_quality",
      "evidence", "lat", "lon", "country_code", "resolved_place"};
  return keys;
}

inline std::optional<int> read_year(const json& obj, const char* key, std::optional<int> idx) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw RecordError{std::string(rules::kInvalidField), std::string(key) + " must be an integer year", idx};
  }
  return it->get<int>();
}

inline bool read_quality(const json& obj, const char* key, std::optional<int> idx) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (it->is_string()) {
    const auto& v = it->get_ref<const std::string&>();
    if (v == "approx") return true;
    if (v == "accurate") return false;
  }
  throw RecordError{std::string(rules::kInvalidField),
                    std::string(key) + " must be \"accurate\" or \"approx\"", idx};
}

inline std::optional<std::string> read_string(const json& obj, const char* key, std::optional<int> idx) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw RecordError{std::string(rules::kInvalidField), std::string(key) + " must be a string", idx};
  }
  return it->get<std::string>();
}

inline std::map<std::string, std::string> collect_extra(const json& obj,
                                                     std::initializer_list<std::string_view> known) {
  std::map<std::string, std::string> extra;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool is_known = false;
    for (auto k : known) is_known = is_known || it.key() == k;
    if (!is_known) extra.emplace(it.key(), it.value().dump());
  }
  return extra;
}

inline Provenance read_provenance(const json& obj, int idx, const Gazetteer& gaz,
                                  const MeiId& copy_id, IngestReport& report) {
  if (!obj.is_object()) {
    throw RecordError{std::string(rules::kInvalidField), "provenance must be an object", idx};
  }
  ProvenanceRecord rec;
  rec.start_year = read_year(obj, "start_year", idx);
  rec.start_approx = read_quality(obj, "start_quality", idx);
  rec.end_year = read_year(obj, "end_year", idx);
  rec.end_approx = read_quality(obj, "end_quality", idx);
  rec.place = read_string(obj, "place", idx);
  rec.place_approx = read_quality(obj, "place_quality", idx);

  Provenance p;
  p.order_index = idx;
  p.start_year = rec.start_year;
  p.end_year = rec.end_year;
  p.place = rec.place;

  const bool has_lat = obj.contains("lat") && !obj["lat"].is_null();
  const bool has_lon = obj.contains("lon") && !obj["lon"].is_null();
  const auto country = read_string(obj, "country_code", idx);
  if (has_lat || has_lon || country) {
    if (!has_lat || !has_lon || !country || !obj["lat"].is_number() || !obj["lon"].is_number()) {
      throw RecordError{std::string(rules::kInvalidGeo), "lat, lon and country_code must be given together", idx};
    }
    GeoPoint g{obj["lat"].get<double>(), obj["lon"].get<double>(), *country};
    if (!is_valid(g)) throw RecordError{std::string(rules::kInvalidGeo), "coordinates or country code out of range", idx};
    p.geo = g;
    p.resolved_place = read_string(obj, "resolved_place", idx);
  } else if (rec.place) {
    if (const auto* hit = gaz.resolve(*rec.place)) {
      p.geo = hit->point;
      p.resolved_place = hit->name;
    } else {
      report.unresolved_places.push_back({copy_id, idx, *rec.place});
      report.findings.push_back({Severity::Warning, copy_id, idx, std::string(rules::kUnresolvedPlace),
                                 "place '" + *rec.place + "' not in gazetteer"});
    }
  }
  p.completeness = derive_completeness(rec, p.geo.has_value());

  if (auto ev = obj.find("evidence"); ev != obj.end() && !ev->is_null()) {
    p.evidence = ev->is_string() ? ev->get<std::string>() : ev->dump();
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (known_provenance_keys().contains(it.key())) continue;
    if (!p.evidence.empty()) p.evidence += '\n';
    p.evidence += it.key() + ": " + it.value().dump();
  }
  return p;
}

inline Copy read_copy(const json& obj, const Gazetteer& gaz, IngestReport& report) {
  if (!obj.is_object()) throw RecordError{std::string(rules::kInvalidField), "copy must be an object", std::nullopt};
  auto id = obj.find("mei_id");
  if (id == obj.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    throw RecordError{std::string(rules::kMissingId), "copy has no mei_id", std::nullopt};
  }
  Copy copy;
  copy.mei_id = id->get<std::string>();
  auto istc = read_string(obj, "istc", std::nullopt);
  if (!istc || istc->empty()) throw RecordError{std::string(rules::kMissingField), "copy has no istc", std::nullopt};
  copy.istc_code = *istc;
  copy.mei_url = read_string(obj, "mei_url", std::nullopt);

  auto provs = obj.find("provenances");
  if (provs == obj.end() || !provs->is_array()) {
    throw RecordError{std::string(rules::kMissingField), "copy has no provenances array", std::nullopt};
  }
  // Unresolved-place entries are only committed when the whole copy loads.
  IngestReport local;
  int idx = 0;
  for (const auto& p : *provs) copy.provenances.push_back(read_provenance(p, ++idx, gaz, copy.mei_id, local));
  copy.extra = collect_extra(obj, {"mei_id", "istc", "mei_url", "provenances"});

  report.unresolved_places.insert(report.unresolved_places.end(), local.unresolved_places.begin(),
                                  local.unresolved_places.end());
  report.findings.insert(report.findings.end(), local.findings.begin(), local.findings.end());
  return canonical_order(std::move(copy));
}

inline Edition read_edition(const json& obj) {
  if (!obj.is_object()) throw RecordError{std::string(rules::kInvalidField), "edition must be an object", std::nullopt};
  auto istc = read_string(obj, "istc", std::nullopt);
  if (!istc || istc->empty()) throw RecordError{std::string(rules::kMissingId), "edition has no istc", std::nullopt};
  Edition e;
  e.istc_code = *istc;
  e.title = read_string(obj, "title", std::nullopt).value_or("");
  e.print_place = read_string(obj, "print_place", std::nullopt).value_or("");
  e.print_year = read_year(obj, "print_year", std::nullopt);
  e.extra = collect_extra(obj, {"istc", "title", "print_place", "print_year"});
  return e;
}

inline std::string record_label(const json& obj, const char* key, std::size_t position) {
  if (obj.is_object()) {
    if (auto it = obj.find(key); it != obj.end() && it->is_string() && !it->get_ref<const std::string&>().empty()) {
      return it->get<std::string>();
    }
  }
  return "#" + std::to_string(position);
}

}  // namespace detail

// Parses a dataset document. A document that is not valid JSON, or whose
// top level is not an object with array-valued "editions"/"copies", throws
// MALFORMED_DOCUMENT. Any other violation skips only the offending record and
// is reported as an error finding.
inline IngestResult parse_dataset(std::string_view bytes, const Gazetteer& gaz) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "top level must be an object");
  for (const char* key : {"editions", "copies"}) {
    if (doc.contains(key) && !doc[key].is_array()) {
      throw Error(ErrorCode::MalformedDocument, std::string(key) + " must be an array");
    }
  }

  IngestResult out;
  auto& report = out.report;
  auto skip = [&](const std::string& label, const detail::RecordError& e) {
    ++report.records_skipped;
    report.findings.push_back({Severity::Error, label, e.provenance_index, e.rule, e.message});
  };

  std::set<std::string> istcs;
  if (doc.contains("editions")) {
    std::size_t pos = 0;
    for (const auto& rec : doc["editions"]) {
      const auto label = detail::record_label(rec, "istc", pos++);
      try {
        auto e = detail::read_edition(rec);
        if (!istcs.insert(e.istc_code).second) {
          throw detail::RecordError{std::string(rules::kDuplicateIstc), "duplicate edition skipped", std::nullopt};
        }
        if (e.print_year && (*e.print_year < 1440 || *e.print_year > 1501)) {
          report.findings.push_back({Severity::Warning, e.istc_code, std::nullopt,
                                     std::string(rules::kPrintYearOutOfRange),
                                     "print year " + std::to_string(*e.print_year) + " outside 1440-1501"});
        }
        out.dataset.editions.push_back(std::move(e));
      } catch (const detail::RecordError& err) {
        skip(label, err);
      }
    }
  }

  std::set<std::string> ids;
  if (doc.contains("copies")) {
    std::size_t pos = 0;
    for (const auto& rec : doc["copies"]) {
      const auto label = detail::record_label(rec, "mei_id", pos++);
      try {
        if (ids.contains(label)) {
          throw detail::RecordError{std::string(rules::kDuplicateMeiId), "duplicate copy skipped", std::nullopt};
        }
        auto copy = detail::read_copy(rec, gaz, report);
        ids.insert(copy.mei_id);
        for (auto& f : validate_copy(copy)) report.findings.push_back(std::move(f));
        if (!istcs.empty() && !istcs.contains(copy.istc_code)) {
          report.findings.push_back({Severity::Warning, copy.mei_id, std::nullopt, std::string(rules::kUnknownEdition),
                                     "copy references unknown edition " + copy.istc_code});
        }
        out.dataset.copies.push_back(std::move(copy));
      } catch (const detail::RecordError& err) {
        skip(label, err);
      }
    }
  }

  report.editions_loaded = out.dataset.editions.size();
  report.copies_loaded = out.dataset.copies.size();
  report.provenances_loaded = out.dataset.provenance_count();
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace provenance_atlas
