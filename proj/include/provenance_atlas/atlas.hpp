#pragma once

// A loaded, immutable dataset together with its ingest report and snapshot.

#include <optional>
#include <string>

#include "provenance_atlas/aggregation.hpp"
#include "provenance_atlas/gazetteer.hpp"
#include "provenance_atlas/ingest.hpp"
#include "provenance_atlas/model.hpp"
#include "provenance_atlas/normalized.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

struct Atlas {
  Dataset dataset;
  IngestReport report;
  DatasetSnapshot snapshot;
  std::vector<Transfer> transfers;  // flattened, copy-major then j

  bool has_errors() const { return count_errors(report.findings) > 0; }

  static Atlas from_ingest(IngestResult ingested) {
    Atlas a;
    a.dataset = std::move(ingested.dataset);
    a.report = std::move(ingested.report);
    a.snapshot = make_snapshot(a.dataset);
    a.transfers = flatten_transfers(a.dataset);
    return a;
  }

  static Atlas load(const std::string& dataset_path, const std::optional<std::string>& gazetteer_path) {
    const Gazetteer gaz = gazetteer_path ? Gazetteer::from_file(*gazetteer_path) : Gazetteer{};
    return from_ingest(parse_dataset(read_file(dataset_path), gaz));
  }
};

}  // namespace provenance_atlas
