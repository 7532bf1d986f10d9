#pragma once

// Flattened transfer instances and the derived count grids.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "provenance_atlas/csv.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/model.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

enum class GridKind { OdInstances, CopyTime, CopyLocation };
enum class GridOrdering { Frequency, Alphabetical, Dataset };

constexpr std::string_view to_string(GridKind k) {
  switch (k) {
    case GridKind::OdInstances: return "od_instances";
    case GridKind::CopyTime: return "copy_time";
    case GridKind::CopyLocation: return "copy_location";
  }
  return "";
}

constexpr std::string_view to_string(GridOrdering o) {
  switch (o) {
    case GridOrdering::Frequency: return "frequency";
    case GridOrdering::Alphabetical: return "alphabetical";
    case GridOrdering::Dataset: return "dataset";
  }
  return "";
}

inline constexpr std::string_view kUndatedLabel = "undated";

struct HeatmapGrid {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::int64_t> counts;  // row-major
  GridKind kind = GridKind::OdInstances;
  GridOrdering ordering = GridOrdering::Dataset;

  bool operator==(const HeatmapGrid&) const = default;

  std::size_t rows() const { return row_labels.size(); }
  std::size_t cols() const { return col_labels.size(); }

  std::int64_t at(std::size_t r, std::size_t c) const { return counts[r * cols() + c]; }

  std::int64_t row_total(std::size_t r) const {
    std::int64_t s = 0;
    for (std::size_t c = 0; c < cols(); ++c) s += at(r, c);
    return s;
  }

  std::int64_t col_total(std::size_t c) const {
    std::int64_t s = 0;
    for (std::size_t r = 0; r < rows(); ++r) s += at(r, c);
    return s;
  }

  std::int64_t grand_total() const {
    std::int64_t s = 0;
    for (auto v : counts) s += v;
    return s;
  }

  std::optional<std::size_t> row_of(std::string_view label) const { return index_of(row_labels, label); }
  std::optional<std::size_t> col_of(std::string_view label) const { return index_of(col_labels, label); }

  std::optional<std::int64_t> cell(std::string_view row, std::string_view col) const {
    auto r = row_of(row);
    auto c = col_of(col);
    if (!r || !c) return std::nullopt;
    return at(*r, *c);
  }

 private:
  static std::optional<std::size_t> index_of(const std::vector<std::string>& labels, std::string_view l) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
  }
};

// Alphabetical, with the unknown sentinel sorted last.
inline bool label_less(std::string_view a, std::string_view b) {
  const bool ua = a == kUnknownLabel;
  const bool ub = b == kUnknownLabel;
  if (ua != ub) return ub;
  return a < b;
}

// Labels in first row/column; the corner cell names the row dimension.
inline std::string to_csv(const HeatmapGrid& g) {
  std::string out;
  std::vector<std::string> header;
  header.push_back(g.kind == GridKind::OdInstances ? "origin\\destination" : "mei_id");
  header.insert(header.end(), g.col_labels.begin(), g.col_labels.end());
  csv::append_row(out, header);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    std::vector<std::string> row{g.row_labels[r]};
    for (std::size_t c = 0; c < g.cols(); ++c) row.push_back(std::to_string(g.at(r, c)));
    csv::append_row(out, row);
  }
  return out;
}

inline std::vector<Transfer> flatten_transfers(const Dataset& ds) {
  std::vector<Transfer> out;
  for (const auto& c : ds.copies) {
    auto ts = reconstruct_transfers(c);
    out.insert(out.end(), std::make_move_iterator(ts.begin()), std::make_move_iterator(ts.end()));
  }
  return out;
}

namespace detail {

// Orders one axis. Frequency: marginal descending, ties alphabetical.
inline std::vector<std::string> order_axis(const std::vector<std::string>& first_seen,
                                           const std::map<std::string, std::int64_t>& marginal,
                                           GridOrdering ordering) {
  std::vector<std::string> labels = first_seen;
  if (ordering == GridOrdering::Dataset) return labels;
  std::sort(labels.begin(), labels.end(), label_less);
  if (ordering == GridOrdering::Frequency) {
    std::stable_sort(labels.begin(), labels.end(), [&](const std::string& a, const std::string& b) {
      return marginal.at(a) > marginal.at(b);
    });
  }
  return labels;
}

}  // namespace detail

// Square origin-destination grid over every country seen at either end of a
// transfer; "??" appears when some endpoint is unresolved.
inline HeatmapGrid od_matrix(std::span<const Transfer> transfers, GridOrdering ordering) {
  std::vector<std::string> seen;
  std::set<std::string> seen_set;
  std::map<std::pair<std::string, std::string>, std::int64_t> tally;
  std::map<std::string, std::int64_t> row_marg, col_marg;
  auto note = [&](const std::string& l) {
    if (seen_set.insert(l).second) {
      seen.push_back(l);
      row_marg[l];
      col_marg[l];
    }
  };
  for (const auto& t : transfers) {
    auto from = t.from_label();
    auto to = t.to_label();
    note(from);
    note(to);
    ++tally[{from, to}];
    ++row_marg[from];
    ++col_marg[to];
  }

  HeatmapGrid g;
  g.kind = GridKind::OdInstances;
  g.ordering = ordering;
  g.row_labels = detail::order_axis(seen, row_marg, ordering);
  g.col_labels = detail::order_axis(seen, col_marg, ordering);
  g.counts.assign(g.rows() * g.cols(), 0);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (auto it = tally.find({g.row_labels[r], g.col_labels[c]}); it != tally.end()) {
        g.counts[r * g.cols() + c] = it->second;
      }
    }
  }
  return g;
}

inline int current_year() {
  const auto today = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
  return static_cast<int>(std::chrono::year_month_day{today}.year());
}

struct TimeBuckets {
  int width = 25;
  std::optional<int> last_year;  // defaults to the current calendar year
};

namespace detail {

inline int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

// Rows are copies in dataset order. Columns are fixed-width year buckets from
// the earliest print year (or recorded year) through the last year, then
// "undated". A provenance adds one to every bucket its known years touch; a
// block with only one year counts in that year's bucket.
inline HeatmapGrid time_heatmap(const Dataset& ds, const TimeBuckets& buckets = {}) {
  const int w = buckets.width;
  if (w < 1) throw Error(ErrorCode::InvalidBucket, "bucket width must be at least 1 year");

  std::optional<int> lo, hi;
  auto see = [&](int y) {
    lo = lo ? std::min(*lo, y) : y;
    hi = hi ? std::max(*hi, y) : y;
  };
  for (const auto& e : ds.editions) {
    if (e.print_year) see(*e.print_year);
  }
  for (const auto& c : ds.copies) {
    for (const auto& p : c.provenances) {
      if (p.start_year) see(*p.start_year);
      if (p.end_year) see(*p.end_year);
    }
  }
  const int last = std::max(buckets.last_year.value_or(current_year()), hi.value_or(std::numeric_limits<int>::min()));
  const int first = detail::floor_div(lo.value_or(last), w) * w;
  const int n_buckets = detail::floor_div(last - first, w) + 1;

  HeatmapGrid g;
  g.kind = GridKind::CopyTime;
  g.ordering = GridOrdering::Dataset;
  for (int b = 0; b < n_buckets; ++b) {
    const int start = first + b * w;
    g.col_labels.push_back(w == 1 ? std::to_string(start)
                                  : std::to_string(start) + "-" + std::to_string(start + w - 1));
  }
  g.col_labels.emplace_back(kUndatedLabel);
  const std::size_t undated = g.col_labels.size() - 1;

  for (const auto& c : ds.copies) g.row_labels.push_back(c.mei_id);
  g.counts.assign(g.rows() * g.cols(), 0);

  for (std::size_t r = 0; r < ds.copies.size(); ++r) {
    for (const auto& p : ds.copies[r].provenances) {
      if (!p.start_year && !p.end_year) {
        ++g.counts[r * g.cols() + undated];
        continue;
      }
      const int a = p.start_year.value_or(*p.end_year);
      const int b = p.end_year.value_or(*p.start_year);
      const int from = detail::floor_div(std::min(a, b) - first, w);
      const int to = detail::floor_div(std::max(a, b) - first, w);
      for (int k = from; k <= to; ++k) ++g.counts[r * g.cols() + static_cast<std::size_t>(k)];
    }
  }
  return g;
}

// Rows are copies; columns are countries (alphabetical, "??" last); a cell
// counts the copy's stays in that country.
inline HeatmapGrid location_heatmap(const Dataset& ds) {
  std::set<std::string, decltype(&label_less)> countries(&label_less);
  for (const auto& c : ds.copies) {
    for (const auto& p : c.provenances) countries.insert(p.country_label());
  }
  HeatmapGrid g;
  g.kind = GridKind::CopyLocation;
  g.ordering = GridOrdering::Dataset;
  g.col_labels.assign(countries.begin(), countries.end());
  for (const auto& c : ds.copies) g.row_labels.push_back(c.mei_id);
  g.counts.assign(g.rows() * g.cols(), 0);
  for (std::size_t r = 0; r < ds.copies.size(); ++r) {
    for (const auto& p : ds.copies[r].provenances) {
      const auto col = *g.col_of(p.country_label());
      ++g.counts[r * g.cols() + col];
    }
  }
  return g;
}

struct OdPair {
  std::string from_country;
  std::string to_country;

  bool operator==(const OdPair&) const = default;
};

inline bool matches(const Transfer& t, const OdPair& od) {
  return t.from_label() == od.from_country && t.to_label() == od.to_country;
}

struct CompletenessSpoke {
  int order_index = 0;
  CompletenessLevel start_time = CompletenessLevel::Missing;
  CompletenessLevel end_time = CompletenessLevel::Missing;
  CompletenessLevel location = CompletenessLevel::Missing;

  bool operator==(const CompletenessSpoke&) const = default;
};

struct CopySummary {
  MeiId mei_id;
  int n_provenances = 0;
  std::vector<CompletenessSpoke> completeness_spokes;
  Journey journey_nodes;
  std::set<int> highlight;  // transfer indices j matched by the active OD query
};

inline CopySummary copy_summary(const Copy& copy, const std::optional<OdPair>& active_query = std::nullopt) {
  CopySummary s;
  s.mei_id = copy.mei_id;
  s.n_provenances = static_cast<int>(copy.provenances.size());
  for (const auto& p : copy.provenances) {
    s.completeness_spokes.push_back(
        {p.order_index, p.completeness.start_time, p.completeness.end_time, p.completeness.location});
  }
  s.journey_nodes = journey_of(copy);
  if (active_query) {
    for (const auto& node : s.journey_nodes) {
      if (node.outgoing && matches(*node.outgoing, *active_query)) s.highlight.insert(node.outgoing->order_index);
    }
  }
  return s;
}

}  // namespace provenance_atlas
