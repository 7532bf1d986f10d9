#pragma once

// Normalized dataset export and content digest.
//
// The normalized form is the ingest schema plus the resolved geo fields, so a
// re-ingest needs no gazetteer and reproduces the same in-memory dataset. The
// digest is SHA-256 over the normalized form's canonical dump (sorted keys),
// which makes it independent of the input's formatting and key order.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <string>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "provenance_atlas/error.hpp"
#include "provenance_atlas/model.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

namespace detail {

inline void put_extra(nlohmann::json& obj, const std::map<std::string, std::string>& extra) {
  for (const auto& [k, v] : extra) obj[k] = nlohmann::json::parse(v);
}

}  // namespace detail

inline nlohmann::json to_normalized_json(const Provenance& p) {
  nlohmann::json j = nlohmann::json::object();
  if (p.start_year) {
    j["start_year"] = *p.start_year;
    if (p.completeness.start_time == CompletenessLevel::Approximate) j["start_quality"] = "approx";
  }
  if (p.end_year) {
    j["end_year"] = *p.end_year;
    if (p.completeness.end_time == CompletenessLevel::Approximate) j["end_quality"] = "approx";
  }
  if (p.place) j["place"] = *p.place;
  if (p.completeness.location == CompletenessLevel::Approximate) j["place_quality"] = "approx";
  if (!p.evidence.empty()) j["evidence"] = p.evidence;
  if (p.geo) {
    j["lat"] = p.geo->lat;
    j["lon"] = p.geo->lon;
    j["country_code"] = p.geo->country_code;
    if (p.resolved_place) j["resolved_place"] = *p.resolved_place;
  }
  return j;
}

inline nlohmann::json to_normalized_json(const Copy& c) {
  nlohmann::json j = nlohmann::json::object();
  detail::put_extra(j, c.extra);
  j["mei_id"] = c.mei_id;
  j["istc"] = c.istc_code;
  if (c.mei_url) j["mei_url"] = *c.mei_url;
  auto& provs = j["provenances"] = nlohmann::json::array();
  for (const auto& p : c.provenances) provs.push_back(to_normalized_json(p));
  return j;
}

inline nlohmann::json to_normalized_json(const Edition& e) {
  nlohmann::json j = nlohmann::json::object();
  detail::put_extra(j, e.extra);
  j["istc"] = e.istc_code;
  j["title"] = e.title;
  j["print_place"] = e.print_place;
  if (e.print_year) j["print_year"] = *e.print_year;
  return j;
}

inline nlohmann::json to_normalized_json(const Dataset& ds) {
  nlohmann::json j = nlohmann::json::object();
  auto& eds = j["editions"] = nlohmann::json::array();
  for (const auto& e : ds.editions) eds.push_back(to_normalized_json(e));
  auto& cps = j["copies"] = nlohmann::json::array();
  for (const auto& c : ds.copies) cps.push_back(to_normalized_json(c));
  return j;
}

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

inline std::string dataset_digest(const Dataset& ds) { return sha256_hex(to_normalized_json(ds).dump()); }

struct SnapshotCounts {
  std::size_t editions = 0;
  std::size_t copies = 0;
  std::size_t provenances = 0;
  std::size_t transfers = 0;

  bool operator==(const SnapshotCounts&) const = default;
};

struct DatasetSnapshot {
  std::string digest;
  std::string loaded_at;  // UTC, ISO 8601
  SnapshotCounts counts;
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp = std::chrono::system_clock::now()) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline DatasetSnapshot make_snapshot(const Dataset& ds) {
  DatasetSnapshot s;
  s.digest = dataset_digest(ds);
  s.loaded_at = utc_timestamp();
  s.counts.editions = ds.editions.size();
  s.counts.copies = ds.copies.size();
  s.counts.provenances = ds.provenance_count();
  for (const auto& c : ds.copies) s.counts.transfers += c.provenances.empty() ? 0 : c.provenances.size() - 1;
  return s;
}

}  // namespace provenance_atlas
