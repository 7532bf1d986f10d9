#pragma once

// Offline place-name resolution. Names are matched after normalization
// (ASCII case-fold, trim, internal whitespace collapsed to one space).

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "provenance_atlas/csv.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/model.hpp"

namespace provenance_atlas {

inline std::string normalize_place(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    const bool ws = ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
    if (ws) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a') : ch);
  }
  return out;
}

struct GazetteerEntry {
  std::string name;  // canonical spelling as written in the file
  GeoPoint point;
};

class Gazetteer {
 public:
  Gazetteer() = default;

  // Rows of four fields are entries (name,lat,lon,country_code); rows of two
  // fields are aliases (alias,canonical_name). Lines starting with '#' and the
  // optional header rows are ignored.
  static Gazetteer from_csv(std::string_view text) {
    Gazetteer gaz;
    std::vector<std::pair<std::string, std::string>> pending_aliases;
    std::size_t line = 0;
    for (auto& row : csv::parse(text)) {
      ++line;
      if (row.empty() || (!row[0].empty() && row[0][0] == '#')) continue;
      if (row.size() == 1 && normalize_place(row[0]).empty()) continue;
      const std::string first = normalize_place(row[0]);
      if (row.size() == 4) {
        if (first == "name") continue;
        auto lat = csv::parse_double(row[1]);
        auto lon = csv::parse_double(row[2]);
        std::string cc = normalize_place(row[3]);
        for (auto& ch : cc) {
          if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
        }
        if (first.empty() || !lat || !lon) fail(line, "entry needs name, lat and lon");
        GeoPoint g{*lat, *lon, cc};
        if (!is_valid(g)) fail(line, "coordinates or country code out of range");
        if (!gaz.entries_.emplace(first, GazetteerEntry{trimmed(row[0]), g}).second) {
          fail(line, "duplicate canonical name '" + row[0] + "'");
        }
      } else if (row.size() == 2) {
        if (first == "alias") continue;
        if (first.empty() || normalize_place(row[1]).empty()) fail(line, "alias needs two names");
        pending_aliases.emplace_back(first, normalize_place(row[1]));
      } else {
        fail(line, "expected 4 fields (entry) or 2 fields (alias)");
      }
    }
    for (auto& [alias, target] : pending_aliases) {
      if (!gaz.entries_.contains(target)) {
        throw Error(ErrorCode::MalformedGazetteer, "alias '" + alias + "' targets unknown name '" + target + "'");
      }
      if (gaz.entries_.contains(alias)) continue;  // an exact entry always wins
      gaz.aliases_[alias] = target;
    }
    return gaz;
  }

  static Gazetteer from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open gazetteer " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_csv(ss.str());
  }

  const GazetteerEntry* resolve(std::string_view raw) const {
    const std::string key = normalize_place(raw);
    if (auto it = entries_.find(key); it != entries_.end()) return &it->second;
    if (auto al = aliases_.find(key); al != aliases_.end()) return &entries_.at(al->second);
    return nullptr;
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t alias_count() const { return aliases_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  [[noreturn]] static void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::MalformedGazetteer, "gazetteer record " + std::to_string(line) + ": " + what);
  }

  static std::string trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return std::string(s);
  }

  std::map<std::string, GazetteerEntry> entries_;
  std::map<std::string, std::string> aliases_;
};

inline std::optional<GeoPoint> geocode_place(std::string_view name, const Gazetteer& gaz) {
  if (const auto* e = gaz.resolve(name)) return e->point;
  return std::nullopt;
}

}  // namespace provenance_atlas
