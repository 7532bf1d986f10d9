#pragma once

// Hierarchical provenance model: edition -> copy -> ordered provenance blocks.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace provenance_atlas {

using MeiId = std::string;
using IstcCode = std::string;

// Label used wherever a country or place could not be resolved.
inline constexpr std::string_view kUnknownLabel = "??";

enum class CompletenessLevel { Accurate, Approximate, Missing };

constexpr std::string_view to_string(CompletenessLevel level) {
  switch (level) {
    case CompletenessLevel::Accurate: return "accurate";
    case CompletenessLevel::Approximate: return "approximate";
    case CompletenessLevel::Missing: return "missing";
  }
  return "missing";
}

struct CompletenessTriple {
  CompletenessLevel start_time = CompletenessLevel::Missing;
  CompletenessLevel end_time = CompletenessLevel::Missing;
  CompletenessLevel location = CompletenessLevel::Missing;

  bool operator==(const CompletenessTriple&) const = default;
};

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  std::string country_code;

  bool operator==(const GeoPoint&) const = default;
};

inline bool is_valid_country_code(std::string_view code) {
  return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' &&
         code[1] <= 'Z';
}

inline bool is_valid(const GeoPoint& g) {
  return g.lat >= -90.0 && g.lat <= 90.0 && g.lon >= -180.0 && g.lon <= 180.0 &&
         is_valid_country_code(g.country_code);
}

struct Provenance {
  int order_index = 0;  // 1-based position within the owning copy
  std::optional<int> start_year;
  std::optional<int> end_year;
  std::optional<std::string> place;           // as recorded
  std::optional<std::string> resolved_place;  // canonical gazetteer name
  std::optional<GeoPoint> geo;
  CompletenessTriple completeness;
  std::string evidence;

  bool operator==(const Provenance&) const = default;

  std::string country_label() const {
    return geo ? geo->country_code : std::string(kUnknownLabel);
  }
};

struct Copy {
  MeiId mei_id;
  IstcCode istc_code;
  std::vector<Provenance> provenances;
  std::optional<std::string> mei_url;
  // Unrecognised input fields, kept verbatim as serialized JSON values.
  std::map<std::string, std::string> extra;

  bool operator==(const Copy&) const = default;
};

struct Edition {
  IstcCode istc_code;
  std::string title;
  std::string print_place;
  std::optional<int> print_year;
  std::map<std::string, std::string> extra;

  bool operator==(const Edition&) const = default;
};

struct Dataset {
  std::vector<Edition> editions;
  std::vector<Copy> copies;

  bool operator==(const Dataset&) const = default;

  const Copy* find_copy(std::string_view mei_id) const {
    for (const auto& c : copies) {
      if (c.mei_id == mei_id) return &c;
    }
    return nullptr;
  }

  std::size_t provenance_count() const {
    std::size_t n = 0;
    for (const auto& c : copies) n += c.provenances.size();
    return n;
  }
};

enum class Severity { Error, Warning };

constexpr std::string_view to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

namespace rules {
inline constexpr std::string_view kEmptyProvenances = "EMPTY_PROVENANCES";
inline constexpr std::string_view kNonMonotoneRange = "NON_MONOTONE_RANGE";
inline constexpr std::string_view kOrderIndexMismatch = "ORDER_INDEX_MISMATCH";
inline constexpr std::string_view kMissingId = "MISSING_ID";
inline constexpr std::string_view kMissingField = "MISSING_FIELD";
inline constexpr std::string_view kInvalidField = "INVALID_FIELD";
inline constexpr std::string_view kInvalidGeo = "INVALID_GEO";
inline constexpr std::string_view kDuplicateMeiId = "DUPLICATE_MEI_ID";
inline constexpr std::string_view kDuplicateIstc = "DUPLICATE_ISTC";
inline constexpr std::string_view kUnknownEdition = "UNKNOWN_EDITION";
inline constexpr std::string_view kPrintYearOutOfRange = "PRINT_YEAR_OUT_OF_RANGE";
inline constexpr std::string_view kUnresolvedPlace = "UNRESOLVED_PLACE";
}  // namespace rules

struct ValidationFinding {
  Severity severity = Severity::Error;
  std::string copy_id;                   // mei_id, or istc code for edition rules
  std::optional<int> provenance_index;  // 1-based, when the rule concerns one block
  std::string rule;
  std::string message;

  bool operator==(const ValidationFinding&) const = default;
};

inline std::size_t count_errors(const std::vector<ValidationFinding>& findings) {
  std::size_t n = 0;
  for (const auto& f : findings) n += f.severity == Severity::Error;
  return n;
}

inline std::vector<ValidationFinding> validate_copy(const Copy& copy) {
  std::vector<ValidationFinding> out;
  auto add = [&](Severity sev, std::optional<int> idx, std::string_view rule, std::string msg) {
    out.push_back({sev, copy.mei_id, idx, std::string(rule), std::move(msg)});
  };

  if (copy.mei_id.empty()) add(Severity::Error, std::nullopt, rules::kMissingId, "copy has no MEI ID");
  if (copy.provenances.empty()) {
    add(Severity::Error, std::nullopt, rules::kEmptyProvenances, "copy has no provenance blocks");
  }

  for (std::size_t k = 0; k < copy.provenances.size(); ++k) {
    const auto& p = copy.provenances[k];
    const int position = static_cast<int>(k) + 1;
    if (p.order_index != position) {
      add(Severity::Warning, position, rules::kOrderIndexMismatch,
          "order_index " + std::to_string(p.order_index) + " at list position " +
              std::to_string(position));
    }
    if (p.start_year && p.end_year && *p.start_year > *p.end_year) {
      add(Severity::Warning, position, rules::kNonMonotoneRange,
          "start year " + std::to_string(*p.start_year) + " after end year " +
              std::to_string(*p.end_year));
    }
    if (p.geo && !is_valid(*p.geo)) {
      add(Severity::Error, position, rules::kInvalidGeo, "coordinates or country code out of range");
    }
  }
  return out;
}

// Rewrites order_index to match list position; list order is the chronology.
inline Copy canonical_order(Copy copy) {
  for (std::size_t k = 0; k < copy.provenances.size(); ++k) {
    copy.provenances[k].order_index = static_cast<int>(k) + 1;
  }
  return copy;
}

// Per-copy findings plus the dataset-wide uniqueness and reference rules.
inline std::vector<ValidationFinding> validate_dataset(const Dataset& ds) {
  std::vector<ValidationFinding> out;
  std::set<std::string_view> istcs;
  for (const auto& e : ds.editions) {
    if (!istcs.insert(e.istc_code).second) {
      out.push_back({Severity::Error, e.istc_code, std::nullopt, std::string(rules::kDuplicateIstc),
                     "edition ISTC code appears more than once"});
    }
    if (e.print_year && (*e.print_year < 1440 || *e.print_year > 1501)) {
      out.push_back({Severity::Warning, e.istc_code, std::nullopt,
                     std::string(rules::kPrintYearOutOfRange),
                     "print year " + std::to_string(*e.print_year) + " outside 1440-1501"});
    }
  }

  std::set<std::string_view> ids;
  for (const auto& c : ds.copies) {
    auto found = validate_copy(c);
    out.insert(out.end(), found.begin(), found.end());
    if (!ids.insert(c.mei_id).second) {
      out.push_back({Severity::Error, c.mei_id, std::nullopt, std::string(rules::kDuplicateMeiId),
                     "MEI ID appears more than once"});
    }
    if (!ds.editions.empty() && !istcs.contains(c.istc_code)) {
      out.push_back({Severity::Warning, c.mei_id, std::nullopt, std::string(rules::kUnknownEdition),
                     "copy references unknown edition " + c.istc_code});
    }
  }
  return out;
}

}  // namespace provenance_atlas
