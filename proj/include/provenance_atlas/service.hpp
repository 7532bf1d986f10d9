#pragma once

// Read-only HTTP API over an immutable Atlas.
//
// Routing lives in `Api`, which maps (path, params, body) to a status and a
// JSON body without touching sockets; `serve` binds it to cpp-httplib. Every
// successful response object carries the snapshot digest under "digest".
// Errors are {code, message} with status 400 or 404.

#include <charconv>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "provenance_atlas/aggregation.hpp"
#include "provenance_atlas/animation.hpp"
#include "provenance_atlas/atlas.hpp"
#include "provenance_atlas/bundling.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/json_views.hpp"
#include "provenance_atlas/normalized.hpp"
#include "provenance_atlas/query.hpp"

namespace provenance_atlas {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::multimap<std::string, std::string>;

namespace detail {

// Values computed at most once per key, safe under concurrent callers.
class ComputeOnceCache {
 public:
  template <typename Fn>
  const nlohmann::json& get(const std::string& key, Fn&& compute) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard lock(mu_);
      auto& s = slots_[key];
      if (!s) s = std::make_shared<Slot>();
      slot = s;
    }
    std::call_once(slot->once, [&] { slot->value = compute(); });
    return slot->value;
  }

 private:
  struct Slot {
    std::once_flag once;
    nlohmann::json value;
  };
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

inline int status_for(ErrorCode code) {
  return code == ErrorCode::NotFound ? 404 : 400;
}

inline std::optional<std::string> param(const QueryParams& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

inline std::string required(const QueryParams& params, const std::string& key) {
  auto v = param(params, key);
  if (!v || v->empty()) throw Error(ErrorCode::InvalidRequest, "missing query parameter '" + key + "'");
  return *v;
}

inline std::optional<long long> int_param(const QueryParams& params, const std::string& key) {
  auto v = param(params, key);
  if (!v) return std::nullopt;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw Error(ErrorCode::InvalidRequest, "query parameter '" + key + "' must be an integer");
  }
  return out;
}

}  // namespace detail

class Api {
 public:
  explicit Api(std::shared_ptr<const Atlas> atlas) : atlas_(std::move(atlas)) {}

  ApiResponse get(std::string_view path, const QueryParams& params = {}) {
    return guarded([&] { return route_get(path, params); });
  }

  ApiResponse post(std::string_view path, std::string_view body) {
    return guarded([&] { return route_post(path, body); });
  }

  const Atlas& atlas() const { return *atlas_; }

 private:
  template <typename Fn>
  ApiResponse guarded(Fn&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      return {detail::status_for(e.code()), {{"code", e.code_name()}, {"message", e.what()}}};
    } catch (const nlohmann::json::exception& e) {
      return {400, {{"code", to_string(ErrorCode::InvalidRequest)}, {"message", e.what()}}};
    }
  }

  ApiResponse ok(nlohmann::json body) const {
    body["digest"] = atlas_->snapshot.digest;
    return {200, std::move(body)};
  }

  ApiResponse route_get(std::string_view path, const QueryParams& params) {
    const auto& ds = atlas_->dataset;
    if (path == "/healthz") return {200, {{"status", "ok"}}};
    if (path == "/api/snapshot") return ok(to_json(atlas_->snapshot));
    if (path == "/api/editions") {
      auto list = nlohmann::json::array();
      for (const auto& e : ds.editions) list.push_back(to_normalized_json(e));
      return ok({{"editions", list}});
    }
    if (path == "/api/copies") return copies(params);
    if (path.starts_with("/api/copies/")) return copy_detail(path.substr(12), params);
    if (path == "/api/heatmaps/od") {
      const auto order = detail::param(params, "order").value_or("frequency");
      GridOrdering ordering;
      if (order == "frequency") {
        ordering = GridOrdering::Frequency;
      } else if (order == "alphabetical") {
        ordering = GridOrdering::Alphabetical;
      } else {
        throw Error(ErrorCode::InvalidRequest, "order must be frequency or alphabetical");
      }
      return ok(cache_.get("od:" + order, [&] { return to_json(od_matrix(atlas_->transfers, ordering)); }));
    }
    if (path == "/api/heatmaps/time") {
      const auto width = detail::int_param(params, "bucket").value_or(25);
      if (width < 1 || width > 100000) throw Error(ErrorCode::InvalidBucket, "bucket width must be at least 1 year");
      return ok(cache_.get("time:" + std::to_string(width), [&] {
        return to_json(time_heatmap(ds, TimeBuckets{static_cast<int>(width), std::nullopt}));
      }));
    }
    if (path == "/api/heatmaps/location") {
      return ok(cache_.get("location", [&] { return to_json(location_heatmap(ds)); }));
    }
    if (path == "/api/query") return query(params);
    if (path == "/api/journey-domain") {
      const auto dom = journey_domain(ds);
      return ok({{"places", dom.places}, {"countries", dom.countries}});
    }
    if (path == "/api/bundle") {
      const auto level = detail::int_param(params, "level").value_or(0);
      if (level < 0 || level > kMaxBundleLevel) throw Error(ErrorCode::InvalidLevel, "level must be in 0..4");
      return ok(cache_.get("bundle:" + std::to_string(level), [&] {
        return to_json(bundle_transfers(atlas_->transfers, static_cast<int>(level)));
      }));
    }
    throw Error(ErrorCode::NotFound, "no route " + std::string(path));
  }

  ApiResponse route_post(std::string_view path, std::string_view body) {
    if (path != "/api/animation") throw Error(ErrorCode::NotFound, "no route " + std::string(path));
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::InvalidRequest, e.what());
    }
    if (!req.is_object() || !req.contains("ids") || !req["ids"].is_array()) {
      throw Error(ErrorCode::InvalidRequest, "body must be {ids: [...], mode}");
    }
    std::vector<MeiId> ids;
    for (const auto& v : req["ids"]) {
      if (!v.is_string()) throw Error(ErrorCode::InvalidRequest, "ids must be strings");
      ids.push_back(v.get<std::string>());
    }
    const auto mode_name = req.value("mode", std::string("all_at_once"));
    AnimationMode mode;
    if (mode_name == "all_at_once") {
      mode = AnimationMode::AllAtOnce;
    } else if (mode_name == "one_by_one") {
      mode = AnimationMode::OneByOne;
    } else {
      throw Error(ErrorCode::InvalidRequest, "mode must be all_at_once or one_by_one");
    }
    const auto duration = req.value("duration_ms", kDefaultSegmentMs);
    return ok(to_json(build_animation_timeline(atlas_->dataset, ids, mode, duration)));
  }

  ApiResponse copies(const QueryParams& params) {
    const auto& cs = atlas_->dataset.copies;
    const auto offset = detail::int_param(params, "offset").value_or(0);
    const auto limit = detail::int_param(params, "limit").value_or(static_cast<long long>(cs.size()));
    if (offset < 0 || limit < 0) throw Error(ErrorCode::InvalidRequest, "limit and offset must be non-negative");
    auto list = nlohmann::json::array();
    for (auto i = static_cast<std::size_t>(offset); i < cs.size() && list.size() < static_cast<std::size_t>(limit);
         ++i) {
      const auto& c = cs[i];
      list.push_back({{"mei_id", c.mei_id},
                      {"istc", c.istc_code},
                      {"n_provenances", c.provenances.size()},
                      {"mei_url", c.mei_url ? nlohmann::json(*c.mei_url) : nlohmann::json(nullptr)}});
    }
    return ok({{"total", cs.size()}, {"offset", offset}, {"copies", list}});
  }

  ApiResponse copy_detail(std::string_view id, const QueryParams& params) {
    const auto* c = atlas_->dataset.find_copy(id);
    if (!c) throw Error(ErrorCode::NotFound, "no copy with MEI ID '" + std::string(id) + "'");
    std::optional<OdPair> active;
    auto from = detail::param(params, "from");
    auto to = detail::param(params, "to");
    if (from && to) active = OdPair{*from, *to};
    const auto summary = copy_summary(*c, active);
    return ok({{"copy", to_normalized_json(*c)},
               {"mei_url", c->mei_url ? nlohmann::json(*c->mei_url) : nlohmann::json(nullptr)},
               {"journey", to_json(summary.journey_nodes)},
               {"summary", to_json(summary)}});
  }

  ApiResponse query(const QueryParams& params) {
    const auto kind = detail::required(params, "kind");
    const auto& ds = atlas_->dataset;
    if (kind == "od") {
      return ok(to_json(query_od_cell(ds, detail::required(params, "from"), detail::required(params, "to"))));
    }
    if (kind == "journey") {
      return ok(to_json(
          query_full_journey(ds, detail::required(params, "origin"), detail::required(params, "destination"))));
    }
    if (kind == "id") return ok(to_json(query_by_id(ds, detail::required(params, "id"))));
    throw Error(ErrorCode::InvalidRequest, "kind must be od, journey or id");
  }

  std::shared_ptr<const Atlas> atlas_;
  detail::ComputeOnceCache cache_;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
};

// Owns the listening server; stops and joins on destruction.
class ServiceHandle {
 public:
  ServiceHandle(const ServiceHandle&) = delete;
  ServiceHandle& operator=(const ServiceHandle&) = delete;
  ServiceHandle(ServiceHandle&&) = default;
  ServiceHandle& operator=(ServiceHandle&&) = delete;
  ~ServiceHandle() { stop(); }

  int port() const { return port_; }
  const std::string& host() const { return host_; }

  void stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  // Blocks until the server stops.
  void wait() {
    if (thread_.joinable()) thread_.join();
  }

 private:
  friend ServiceHandle serve(std::shared_ptr<const Atlas>, const ServiceConfig&);
  ServiceHandle() = default;

  std::unique_ptr<Api> api_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

inline QueryParams to_params(const httplib::Params& p) { return QueryParams(p.begin(), p.end()); }

inline ServiceHandle serve(std::shared_ptr<const Atlas> atlas, const ServiceConfig& config = {}) {
  if (atlas->has_errors()) {
    throw Error(ErrorCode::ValidationFailed,
                std::to_string(count_errors(atlas->report.findings)) + " validation error(s) in dataset");
  }
  ServiceHandle h;
  h.api_ = std::make_unique<Api>(std::move(atlas));
  h.server_ = std::make_unique<httplib::Server>();
  Api* api = h.api_.get();

  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  h.server_->Get(R"(/.*)", [api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api->get(req.path, to_params(req.params)));
  });
  h.server_->Post(R"(/.*)", [api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api->post(req.path, req.body));
  });

  h.host_ = config.host;
  if (config.port == 0) {
    h.port_ = h.server_->bind_to_any_port(config.host);
    if (h.port_ <= 0) throw Error(ErrorCode::BindFailure, "cannot bind " + config.host);
  } else {
    if (!h.server_->bind_to_port(config.host, config.port)) {
      throw Error(ErrorCode::BindFailure, "cannot bind " + config.host + ":" + std::to_string(config.port));
    }
    h.port_ = config.port;
  }
  h.thread_ = std::thread([srv = h.server_.get()] { srv->listen_after_bind(); });
  return h;
}

}  // namespace provenance_atlas
