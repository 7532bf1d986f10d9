#include <gtest/gtest.h>

#include "support.hpp"

namespace pa = provenance_atlas;
using testsupport::mini_gazetteer;

namespace {

pa::Dataset fixture() {
  return pa::parse_dataset(R"({"copies": [
    {"mei_id": "A", "istc": "e", "provenances": [{"place": "Florence"}, {"place": "Munich"}, {"place": "New York"}]},
    {"mei_id": "B", "istc": "e", "provenances": [{"place": "Rome"}, {"place": "Berlin"}]},
    {"mei_id": "C", "istc": "e", "provenances": [{"place": "Florence"}, {"place": "Paris"}, {"place": "Boston"}]},
    {"mei_id": "D", "istc": "e", "provenances": [{"place": "Florence"}]},
    {"mei_id": "E", "istc": "e", "provenances": [{"place": "Florence"}, {"place": "Atlantis"}]}]})",
                           mini_gazetteer())
      .dataset;
}

pa::ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const pa::Error& e) {
    return e.code();
  }
  return pa::ErrorCode::Io;
}

}  // namespace

TEST(OdQuery, ReturnsCopiesWithMatchingTransfer) {
  auto ds = fixture();
  auto r = pa::query_od_cell(ds, "IT", "DE");
  EXPECT_EQ(r.copy_ids, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(r.matched_transfers.at("A"), (std::set<int>{1}));
  EXPECT_EQ(r.stats.n_copies, 2u);
  EXPECT_EQ(r.stats.n_matched_transfers, 2u);
  EXPECT_EQ(r.stats.n_distinct_countries, 3u);  // IT, DE, US
}

TEST(OdQuery, EmptyCellGivesZeroStats) {
  auto r = pa::query_od_cell(fixture(), "US", "IT");
  EXPECT_TRUE(r.copy_ids.empty());
  EXPECT_EQ(r.stats, (pa::QueryStats{0, 0, 0}));
}

TEST(OdQuery, UnknownLabelRejected) {
  auto ds = fixture();
  EXPECT_EQ(code_of([&] { (void)pa::query_od_cell(ds, "IT", "JP"); }), pa::ErrorCode::UnknownLabel);
  EXPECT_EQ(pa::query_od_cell(ds, "IT", "??").copy_ids, (std::vector<std::string>{"E"}));
}

TEST(OdQuery, StatsMatchGridOnSyntheticCorpus) {
  auto ds = testsupport::synthetic_ingest(17).dataset;
  auto grid = pa::od_matrix(pa::flatten_transfers(ds), pa::GridOrdering::Alphabetical);
  for (const auto& a : grid.row_labels) {
    for (const auto& b : grid.col_labels) {
      auto r = pa::query_od_cell(ds, a, b);
      ASSERT_EQ(static_cast<std::int64_t>(r.stats.n_matched_transfers), *grid.cell(a, b)) << a << "->" << b;
    }
  }
}

TEST(JourneyQuery, PlaceOriginCountryDestination) {
  auto r = pa::query_full_journey(fixture(), "Florence", "US");
  EXPECT_EQ(r.copy_ids, (std::vector<std::string>{"A", "C"}));
  EXPECT_EQ(r.matched_transfers.at("C"), (std::set<int>{1, 2}));
}

TEST(JourneyQuery, CopyThatNeverLeft) {
  auto r = pa::query_full_journey(fixture(), "florence", "Florence");
  EXPECT_EQ(r.copy_ids, (std::vector<std::string>{"D"}));
}

TEST(JourneyQuery, UnresolvedLastPlaceMatchesOnlySentinel) {
  auto ds = fixture();
  EXPECT_EQ(pa::query_full_journey(ds, "IT", "??").copy_ids, (std::vector<std::string>{"E"}));
  for (const auto& dest : {"IT", "DE", "US", "FR", "Atlantis"}) {
    if (std::string(dest) == "Atlantis") {
      EXPECT_EQ(code_of([&] { (void)pa::query_full_journey(ds, "IT", dest); }), pa::ErrorCode::UnknownLabel);
      continue;
    }
    auto ids = pa::query_full_journey(ds, "IT", dest).copy_ids;
    EXPECT_EQ(std::count(ids.begin(), ids.end(), "E"), 0) << dest;
  }
}

TEST(JourneyQuery, BruteForceFirstLastScan) {
  auto ds = testsupport::synthetic_ingest(23).dataset;
  const auto domain = pa::journey_domain(ds);
  std::vector<std::string> ends(domain.countries.begin(), domain.countries.end());
  ends.insert(ends.end(), domain.places.begin(), domain.places.end());
  auto where = [](const pa::Provenance& p, const std::string& v) {
    if (v == "??") return !p.geo.has_value();
    if (v.size() == 2 && p.geo) return p.geo->country_code == v;
    return p.resolved_place && *p.resolved_place == v;
  };
  for (const auto& o : ends) {
    for (const auto& d : ends) {
      std::vector<std::string> expect;
      for (const auto& c : ds.copies) {
        if (where(c.provenances.front(), o) && where(c.provenances.back(), d)) expect.push_back(c.mei_id);
      }
      ASSERT_EQ(pa::query_full_journey(ds, o, d).copy_ids, expect) << o << " -> " << d;
    }
  }
}

TEST(IdQuery, ExistingAndMissing) {
  auto ds = fixture();
  EXPECT_EQ(pa::query_by_id(ds, "B").copy_ids, (std::vector<std::string>{"B"}));
  EXPECT_EQ(code_of([&] { (void)pa::query_by_id(ds, "nope"); }), pa::ErrorCode::NotFound);
  EXPECT_EQ(pa::run_query(ds, pa::QuerySpec::by_id("A")).copy_ids, (std::vector<std::string>{"A"}));
}
