#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "provenance_atlas/aggregation.hpp"
#include "provenance_atlas/csv.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

inline std::string transfers_to_csv(std::span<const Transfer> transfers) {
  std::string out;
  csv::append_row(out, {"copy_id", "j", "from_provenance", "to_provenance", "t_start", "t_end", "consistent",
                        "from_country", "to_country", "from_lat", "from_lon", "to_lat", "to_lon", "zero_length"});
  auto coord = [](const std::optional<GeoPoint>& g, bool lat) {
    return g ? csv::format_double(lat ? g->lat : g->lon) : std::string();
  };
  for (const auto& t : transfers) {
    csv::append_row(out, {t.copy_id, std::to_string(t.order_index), std::to_string(t.from_provenance),
                          std::to_string(t.to_provenance), t.interval ? std::to_string(t.interval->t_start) : "",
                          t.interval ? std::to_string(t.interval->t_end) : "", t.consistent ? "true" : "false",
                          t.from_label(), t.to_label(), coord(t.from_geo, true), coord(t.from_geo, false),
                          coord(t.to_geo, true), coord(t.to_geo, false), t.zero_length ? "true" : "false"});
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

}  // namespace provenance_atlas
