#pragma once

// Playback schedules for the dynamic storyboard. Every mappable transfer gets
// one fixed-duration segment in order-statistic order; recorded years never
// drive pacing.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "provenance_atlas/bundling.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/model.hpp"
#include "provenance_atlas/timeline.hpp"

namespace provenance_atlas {

enum class AnimationMode { AllAtOnce, OneByOne };

constexpr std::string_view to_string(AnimationMode m) {
  return m == AnimationMode::AllAtOnce ? "all_at_once" : "one_by_one";
}

inline constexpr std::int64_t kDefaultSegmentMs = 1500;

struct AnimationSegment {
  LatLon from;
  LatLon to;
  std::int64_t start_ms = 0;
  std::int64_t duration_ms = 0;
  int j = 0;

  bool operator==(const AnimationSegment&) const = default;
};

struct AnimationTrack {
  MeiId mei_id;
  int color_index = 0;
  std::vector<AnimationSegment> segments;

  bool operator==(const AnimationTrack&) const = default;

  std::int64_t start_ms() const { return segments.empty() ? 0 : segments.front().start_ms; }
  std::int64_t end_ms() const {
    return segments.empty() ? 0 : segments.back().start_ms + segments.back().duration_ms;
  }
};

struct SkippedTransfer {
  MeiId mei_id;
  int j = 0;

  bool operator==(const SkippedTransfer&) const = default;
};

struct AnimationTimeline {
  AnimationMode mode = AnimationMode::AllAtOnce;
  std::vector<AnimationTrack> tracks;
  std::vector<SkippedTransfer> skipped;
  std::int64_t total_ms = 0;

  bool operator==(const AnimationTimeline&) const = default;
};

// All-at-once: every track starts at 0. One-by-one: track m starts when
// track m-1 ends, each with its own colour. Unmappable transfers are listed
// in `skipped`; a copy with none mappable fails with NO_MAPPABLE_PATH.
inline AnimationTimeline build_animation_timeline(const Dataset& ds, std::span<const MeiId> ids, AnimationMode mode,
                                                  std::int64_t segment_ms = kDefaultSegmentMs) {
  if (segment_ms <= 0) throw Error(ErrorCode::InvalidRequest, "segment duration must be positive");
  AnimationTimeline tl;
  tl.mode = mode;
  std::int64_t cursor = 0;
  int color = 0;
  for (const auto& id : ids) {
    const auto* copy = ds.find_copy(id);
    if (!copy) throw Error(ErrorCode::NotFound, "no copy with MEI ID '" + id + "'");

    AnimationTrack track;
    track.mei_id = id;
    track.color_index = color++;
    std::int64_t t = mode == AnimationMode::OneByOne ? cursor : 0;
    for (const auto& tr : reconstruct_transfers(*copy)) {
      if (!tr.mappable()) {
        tl.skipped.push_back({id, tr.order_index});
        continue;
      }
      track.segments.push_back({{tr.from_geo->lat, tr.from_geo->lon},
                                {tr.to_geo->lat, tr.to_geo->lon},
                                t,
                                segment_ms,
                                tr.order_index});
      t += segment_ms;
    }
    if (track.segments.empty()) throw Error(ErrorCode::NoMappablePath, "copy '" + id + "' has no mappable transfer");
    cursor = track.end_ms();
    tl.total_ms = std::max(tl.total_ms, track.end_ms());
    tl.tracks.push_back(std::move(track));
  }
  return tl;
}

}  // namespace provenance_atlas
