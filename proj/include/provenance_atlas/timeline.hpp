#pragma once

// Transfer reconstruction. The j-th transfer links provenance j to j+1 and
// spans [end of block j, start of block j+1]. Recorded years are unreliable,
// so sequence position (the order statistic j) is the authoritative relative
// time; intervals are kept verbatim and only flagged when inconsistent.

#include <optional>
#include <string>
#include <vector>

#include "provenance_atlas/model.hpp"

namespace provenance_atlas {

struct YearInterval {
  int t_start = 0;
  int t_end = 0;

  bool operator==(const YearInterval&) const = default;
};

struct Transfer {
  MeiId copy_id;
  int order_index = 0;  // j
  int from_provenance = 0;
  int to_provenance = 0;
  std::optional<YearInterval> interval;
  bool consistent = false;
  std::optional<GeoPoint> from_geo;
  std::optional<GeoPoint> to_geo;
  std::optional<std::string> from_country;
  std::optional<std::string> to_country;
  // Both ends resolved to the same location: the copy stayed, only custody changed.
  bool zero_length = false;

  bool operator==(const Transfer&) const = default;

  bool mappable() const { return from_geo.has_value() && to_geo.has_value(); }

  std::string from_label() const { return from_country.value_or(std::string(kUnknownLabel)); }
  std::string to_label() const { return to_country.value_or(std::string(kUnknownLabel)); }
};

namespace detail {

inline bool same_location(const Provenance& a, const Provenance& b) {
  if (!a.geo || !b.geo) return false;
  if (a.resolved_place && b.resolved_place) return *a.resolved_place == *b.resolved_place;
  return a.geo->lat == b.geo->lat && a.geo->lon == b.geo->lon;
}

}  // namespace detail

inline std::vector<Transfer> reconstruct_transfers(const Copy& copy) {
  std::vector<Transfer> out;
  const auto& ps = copy.provenances;
  if (ps.size() < 2) return out;
  out.reserve(ps.size() - 1);

  for (std::size_t k = 0; k + 1 < ps.size(); ++k) {
    const auto& here = ps[k];
    const auto& next = ps[k + 1];
    Transfer t;
    t.copy_id = copy.mei_id;
    t.order_index = static_cast<int>(k) + 1;
    t.from_provenance = t.order_index;
    t.to_provenance = t.order_index + 1;
    if (here.end_year && next.start_year) {
      t.interval = YearInterval{*here.end_year, *next.start_year};
      t.consistent = *next.start_year >= *here.end_year;
    }
    t.from_geo = here.geo;
    t.to_geo = next.geo;
    if (here.geo) t.from_country = here.geo->country_code;
    if (next.geo) t.to_country = next.geo->country_code;
    t.zero_length = detail::same_location(here, next);
    out.push_back(std::move(t));
  }
  return out;
}

struct JourneyNode {
  Provenance provenance;
  std::optional<Transfer> outgoing;  // none for the last block
};

using Journey = std::vector<JourneyNode>;

inline Journey journey_of(const Copy& copy) {
  auto transfers = reconstruct_transfers(copy);
  Journey out;
  out.reserve(copy.provenances.size());
  for (std::size_t k = 0; k < copy.provenances.size(); ++k) {
    JourneyNode node{copy.provenances[k], std::nullopt};
    if (k < transfers.size()) node.outgoing = std::move(transfers[k]);
    out.push_back(std::move(node));
  }
  return out;
}

}  // namespace provenance_atlas
