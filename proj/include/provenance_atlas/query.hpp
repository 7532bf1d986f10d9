#pragma once

// The three fixed query forms: OD cell, full journey (first/last location),
// and MEI ID lookup. Results list copies in dataset order.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "provenance_atlas/aggregation.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/gazetteer.hpp"
#include "provenance_atlas/model.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

enum class QueryKind { OdCell, FullJourney, MeiId };

constexpr std::string_view to_string(QueryKind k) {
  switch (k) {
    case QueryKind::OdCell: return "od";
    case QueryKind::FullJourney: return "journey";
    case QueryKind::MeiId: return "id";
  }
  return "";
}

struct JourneyEnds {
  std::string origin;       // place name, country code or "??"
  std::string destination;  // same

  bool operator==(const JourneyEnds&) const = default;
};

struct QuerySpec {
  QueryKind kind = QueryKind::MeiId;
  std::optional<OdPair> od;
  std::optional<JourneyEnds> journey;
  std::optional<MeiId> id;

  bool operator==(const QuerySpec&) const = default;

  static QuerySpec od_cell(std::string from, std::string to) {
    return {QueryKind::OdCell, OdPair{std::move(from), std::move(to)}, std::nullopt, std::nullopt};
  }
  static QuerySpec full_journey(std::string origin, std::string destination) {
    return {QueryKind::FullJourney, std::nullopt, JourneyEnds{std::move(origin), std::move(destination)},
            std::nullopt};
  }
  static QuerySpec by_id(MeiId id) { return {QueryKind::MeiId, std::nullopt, std::nullopt, std::move(id)}; }
};

struct QueryStats {
  std::size_t n_copies = 0;
  std::size_t n_matched_transfers = 0;
  // Distinct resolved countries visited by the result copies.
  std::size_t n_distinct_countries = 0;

  bool operator==(const QueryStats&) const = default;
};

struct QueryResult {
  QuerySpec spec;
  std::vector<MeiId> copy_ids;
  std::map<MeiId, std::set<int>> matched_transfers;
  QueryStats stats;

  bool operator==(const QueryResult&) const = default;
};

namespace detail {

inline void finish(QueryResult& r, const Dataset& ds) {
  std::set<std::string> countries;
  for (const auto& id : r.copy_ids) {
    if (const auto* c = ds.find_copy(id)) {
      for (const auto& p : c->provenances) {
        if (p.geo) countries.insert(p.geo->country_code);
      }
    }
  }
  r.stats.n_copies = r.copy_ids.size();
  r.stats.n_matched_transfers = 0;
  for (const auto& [id, js] : r.matched_transfers) r.stats.n_matched_transfers += js.size();
  r.stats.n_distinct_countries = countries.size();
}

inline void add_whole_copy(QueryResult& r, const Copy& c) {
  r.copy_ids.push_back(c.mei_id);
  auto& js = r.matched_transfers[c.mei_id];
  for (std::size_t j = 1; j < c.provenances.size(); ++j) js.insert(static_cast<int>(j));
}

}  // namespace detail

// OD grid label set: every country label at either end of a transfer ("??" included when present).
inline std::set<std::string> od_labels(const Dataset& ds) {
  std::set<std::string> labels;
  for (const auto& c : ds.copies) {
    for (const auto& t : reconstruct_transfers(c)) {
      labels.insert(t.from_label());
      labels.insert(t.to_label());
    }
  }
  return labels;
}

inline QueryResult query_od_cell(const Dataset& ds, std::string_view from_country, std::string_view to_country) {
  const auto labels = od_labels(ds);
  for (auto code : {from_country, to_country}) {
    if (!labels.contains(std::string(code))) {
      throw Error(ErrorCode::UnknownLabel, "'" + std::string(code) + "' is not an OD grid label");
    }
  }
  QueryResult r;
  r.spec = QuerySpec::od_cell(std::string(from_country), std::string(to_country));
  const OdPair od = *r.spec.od;
  for (const auto& c : ds.copies) {
    std::set<int> js;
    for (const auto& t : reconstruct_transfers(c)) {
      if (matches(t, od)) js.insert(t.order_index);
    }
    if (!js.empty()) {
      r.copy_ids.push_back(c.mei_id);
      r.matched_transfers.emplace(c.mei_id, std::move(js));
    }
  }
  detail::finish(r, ds);
  return r;
}

// Values offered to the full-journey drop-downs.
struct JourneyDomain {
  std::set<std::string> places;     // canonical resolved place names
  std::set<std::string> countries;  // country codes, plus "??" when some location is unresolved
};

inline JourneyDomain journey_domain(const Dataset& ds) {
  JourneyDomain d;
  for (const auto& c : ds.copies) {
    for (const auto& p : c.provenances) {
      if (p.geo) {
        d.countries.insert(p.geo->country_code);
        if (p.resolved_place) d.places.insert(*p.resolved_place);
      } else {
        d.countries.insert(std::string(kUnknownLabel));
      }
    }
  }
  return d;
}

namespace detail {

// Country codes are matched at country level, "??" matches an unresolved
// location, anything else is a place name matched after normalization.
class LocationMatcher {
 public:
  LocationMatcher(std::string_view arg, const JourneyDomain& domain) {
    if (arg == kUnknownLabel) {
      mode_ = Mode::Unknown;
      return;
    }
    if (domain.countries.contains(std::string(arg)) && is_valid_country_code(arg)) {
      mode_ = Mode::Country;
      value_ = std::string(arg);
      return;
    }
    value_ = normalize_place(arg);
    for (const auto& p : domain.places) {
      if (normalize_place(p) == value_) {
        mode_ = Mode::Place;
        return;
      }
    }
    throw Error(ErrorCode::UnknownLabel, "'" + std::string(arg) + "' is not a known place or country");
  }

  bool operator()(const Provenance& p) const {
    switch (mode_) {
      case Mode::Unknown: return !p.geo;
      case Mode::Country: return p.geo && p.geo->country_code == value_;
      case Mode::Place: return p.geo && p.resolved_place && normalize_place(*p.resolved_place) == value_;
    }
    return false;
  }

 private:
  enum class Mode { Unknown, Country, Place };
  Mode mode_ = Mode::Unknown;
  std::string value_;
};

}  // namespace detail

// Matches copies whose first provenance is at `origin` and last at `destination`.
inline QueryResult query_full_journey(const Dataset& ds, std::string_view origin, std::string_view destination) {
  const auto domain = journey_domain(ds);
  const detail::LocationMatcher match_origin(origin, domain);
  const detail::LocationMatcher match_dest(destination, domain);

  QueryResult r;
  r.spec = QuerySpec::full_journey(std::string(origin), std::string(destination));
  for (const auto& c : ds.copies) {
    if (c.provenances.empty()) continue;
    if (match_origin(c.provenances.front()) && match_dest(c.provenances.back())) detail::add_whole_copy(r, c);
  }
  detail::finish(r, ds);
  return r;
}

inline QueryResult query_by_id(const Dataset& ds, std::string_view mei_id) {
  const auto* c = ds.find_copy(mei_id);
  if (!c) throw Error(ErrorCode::NotFound, "no copy with MEI ID '" + std::string(mei_id) + "'");
  QueryResult r;
  r.spec = QuerySpec::by_id(std::string(mei_id));
  detail::add_whole_copy(r, *c);
  detail::finish(r, ds);
  return r;
}

inline QueryResult run_query(const Dataset& ds, const QuerySpec& spec) {
  switch (spec.kind) {
    case QueryKind::OdCell:
      if (!spec.od) break;
      return query_od_cell(ds, spec.od->from_country, spec.od->to_country);
    case QueryKind::FullJourney:
      if (!spec.journey) break;
      return query_full_journey(ds, spec.journey->origin, spec.journey->destination);
    case QueryKind::MeiId:
      if (!spec.id) break;
      return query_by_id(ds, *spec.id);
  }
  throw Error(ErrorCode::InvalidRequest, "query spec is missing the field for its kind");
}

}  // namespace provenance_atlas
