#include "mitofreq/service.hpp"

#include <httplib.h>

#include <random>
#include <sstream>

#include "mitofreq/api_docs.hpp"
#include "mitofreq/error.hpp"
#include "mitofreq/estimators.hpp"
#include "mitofreq/lr_engine.hpp"
#include "mitofreq/report_json.hpp"

namespace mitofreq {

// Sessions -------------------------------------------------------------------

SessionStore::SessionStore(std::chrono::seconds idle_ttl, Clock clock)
    : ttl_(idle_ttl), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
  seed_ = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
}

std::string SessionStore::fresh_id() {
  // Not a secret: ids only need to be unique and hard to guess by accident.
  std::mt19937_64 rng(seed_ + counter_++);
  std::ostringstream id;
  id << std::hex;
  for (int i = 0; i < 2; ++i) {
    auto v = rng();
    for (int b = 0; b < 16; ++b) id << ((v >> (4 * b)) & 0xf);
  }
  return id.str();
}

std::string SessionStore::create(std::optional<TlhgDistribution> distribution,
                                 std::vector<std::string> sources) {
  std::lock_guard lock(mu_);
  auto now = clock_();
  std::string id;
  do {
    id = fresh_id();
  } while (sessions_.count(id));
  sessions_[id] = SessionState{id, std::move(distribution), std::move(sources), now, now};
  return id;
}

std::optional<SessionState> SessionStore::get(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  auto now = clock_();
  if (now - it->second.last_used > ttl_) {
    sessions_.erase(it);
    return std::nullopt;
  }
  it->second.last_used = now;
  return it->second;
}

std::size_t SessionStore::size() {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

std::size_t SessionStore::evict_expired() {
  std::lock_guard lock(mu_);
  auto now = clock_();
  return std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second.last_used > ttl_; });
}

// Requests -------------------------------------------------------------------

namespace {

/// An error that already knows its HTTP status and wire code.
struct HttpError {
  int status;
  std::string code;
  int exit_code;
  std::string message;
  std::string token;
};

ServiceResponse error_response(const HttpError& e) {
  Json err{{"code", e.code}, {"exit_code", e.exit_code}, {"message", e.message}};
  if (!e.token.empty()) err["token"] = e.token;
  return {e.status, to_wire(Json{{"error", err}})};
}

Json parse_body(std::string_view body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::exception& e) {
    throw HttpError{400, "bad_request", 3, std::string("request body is not JSON: ") + e.what(), {}};
  }
  if (!j.is_object()) throw HttpError{400, "bad_request", 3, "request body must be a JSON object", {}};
  return j;
}

template <typename T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw HttpError{400, "bad_request", 3, std::string("field '") + key + "' has the wrong type", {}};
  }
}

MitoProfile profile_from(const Json& j, const RcrsReference& ref) {
  if (!j.contains("profile")) throw HttpError{400, "bad_request", 3, "field 'profile' is required", {}};
  auto text = field<std::string>(j, "profile", "");
  auto coverage = field<std::string>(j, "coverage", "");
  try {
    if (coverage.empty()) return parse_profile(text, ref);
    return parse_profile(text, ref, std::string_view(coverage));
  } catch (const ParseError& e) {
    throw HttpError{400, "invalid_profile", 2, e.what(), e.token()};
  }
}

ClassifierMode mode_from(const Json& j, ClassifierMode fallback) {
  auto s = field<std::string>(j, "mode", "");
  if (s.empty()) return fallback;
  try {
    return classifier_mode_from_string(s);
  } catch (const DomainError& e) {
    throw HttpError{400, "bad_request", 3, e.what(), {}};
  }
}

std::optional<std::int64_t> int_param(const std::multimap<std::string, std::string>& q,
                                      const char* key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    auto v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw HttpError{400, "bad_request", 3,
                    std::string("query parameter '") + key + "' must be an integer", {}};
  }
}

}  // namespace

struct Service::Impl {
  httplib::Server server;
};

Service::Service(std::shared_ptr<const Workspace> workspace, CliConfig config, ServiceOptions options)
    : ws_(std::move(workspace)),
      config_(std::move(config)),
      options_(std::move(options)),
      sessions_(options_.session_ttl),
      impl_(std::make_unique<Impl>()) {
  if (config_.tlhg_file || !ws_->dbs.empty()) default_distribution_ = resolve_tlhg_distribution(config_, *ws_);

  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    auto r = handle(req.method, req.path, req.body, query);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  impl_->server.Get(".*", forward);
  impl_->server.Post(".*", forward);
}

Service::~Service() { stop(); }

int Service::bind() {
  if (options_.port == 0) return impl_->server.bind_to_any_port(options_.bind);
  return impl_->server.bind_to_port(options_.bind, options_.port) ? options_.port : -1;
}

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

ServiceResponse Service::handle(std::string_view method, std::string_view path,
                                std::string_view body,
                                const std::multimap<std::string, std::string>& query) {
  const auto& ws = *ws_;
  try {
    sessions_.evict_expired();

    if (method == "POST" && path == "/classify") {
      auto j = parse_body(body);
      auto profile = profile_from(j, ws.reference);
      auto mode = mode_from(j, config_.mode);
      Json out = classify(profile, ws.table, mode);
      out["profile"] = format_profile(profile);
      out["classifier_mode"] = std::string(to_string(mode));
      return {200, to_wire(out)};
    }

    if (method == "POST" && path == "/lr") {
      auto j = parse_body(body);
      LrRequest req;
      req.profile = profile_from(j, ws.reference);
      req.classifier_mode = mode_from(j, config_.mode);
      req.pool = field<bool>(j, "pool", false);
      req.allow_fallback = field<bool>(j, "allow_fallback", true);
      try {
        req.rank_policy = rank_policy_from_string(
            field<std::string>(j, "rank_policy", "min_of_rank1_rank2"));
      } catch (const DomainError& e) {
        throw HttpError{400, "bad_request", 3, e.what(), {}};
      }
      auto override_tlhg = field<std::string>(j, "tlhg_override", "");
      if (!override_tlhg.empty()) req.tlhg_override = override_tlhg;

      std::optional<SessionState> session;
      auto session_id = field<std::string>(j, "session", "");
      if (!session_id.empty()) {
        session = sessions_.get(session_id);
        if (!session) throw HttpError{404, "unknown_session", 2, "unknown or expired session " + session_id, {}};
      }
      auto names = field<std::vector<std::string>>(j, "sources", {});
      if (names.empty() && session) names = session->sources;
      req.snv_sources = ws.sources(names);
      if (req.snv_sources.empty()) throw HttpError{422, "domain_error", 2, "no SNV source loaded", {}};

      auto tlhg_source = field<std::string>(j, "tlhg_source", "");
      if (!tlhg_source.empty()) {
        req.tlhg_dist = tlhg_distribution(ws.source(tlhg_source));
      } else if (session && session->distribution) {
        req.tlhg_dist = *session->distribution;
      } else if (default_distribution_) {
        req.tlhg_dist = *default_distribution_;
      } else {
        throw HttpError{422, "domain_error", 2, "no TLHG distribution available", {}};
      }

      if (field<bool>(j, "per_source", false)) {
        Json arr = Json::array();
        for (const auto& r : evaluate_per_source(req, ws.table)) arr.push_back(r);
        return {200, to_wire(arr)};
      }
      return {200, to_wire(Json(evaluate(req, ws.table)))};
    }

    if (method == "POST" && path == "/tlhg-distribution") {
      auto j = parse_body(body);
      if (!j.contains("table")) throw HttpError{400, "bad_request", 3, "field 'table' is required", {}};
      auto name = field<std::string>(j, "name", "custom");
      TlhgDistribution dist;
      try {
        const auto& table = j.at("table");
        if (table.is_string()) {
          std::istringstream in(table.get<std::string>());
          dist = read_tlhg_weights(in, name);
        } else if (table.is_object()) {
          std::map<std::string, double> weights;
          for (const auto& [k, v] : table.items()) {
            if (!v.is_number()) throw DomainError("weight for " + k + " is not a number");
            weights[k] = v.get<double>();
          }
          dist = normalize_weights(weights, name);
        } else {
          throw HttpError{400, "bad_request", 3, "field 'table' must be TSV text or an object", {}};
        }
      } catch (const Error& e) {
        throw HttpError{422, "invalid_distribution", 2, e.what(), {}};
      }
      auto sources = field<std::vector<std::string>>(j, "sources", {});
      for (const auto& s : sources) ws.source(s);  // validate names
      auto id = sessions_.create(dist, sources);
      return {200, to_wire(Json{{"session_id", id}, {"distribution", dist}, {"sources", sources}})};
    }

    constexpr std::string_view kDistPrefix = "/tlhg-distribution/";
    if (method == "GET" && path.substr(0, kDistPrefix.size()) == kDistPrefix) {
      std::string id(path.substr(kDistPrefix.size()));
      auto session = sessions_.get(id);
      if (!session || !session->distribution) {
        throw HttpError{404, "unknown_session", 2, "unknown or expired session " + id, {}};
      }
      Json out = *session->distribution;
      out["session_id"] = id;
      return {200, to_wire(out)};
    }

    if (method == "GET" && path == "/openapi.json") return {200, to_wire(openapi_document())};

    if (method == "GET" && path == "/sources") {
      Json arr = Json::array();
      for (const auto& db : ws.dbs) arr.push_back(describe_source(*db));
      return {200, to_wire(arr)};
    }

    if (method == "GET" && path == "/estimators") {
      auto it = query.find("method");
      std::string name = it == query.end() ? "" : it->second;
      if (!is_estimator_method(name)) {
        throw HttpError{400, "unknown_method", 3, "unknown estimator method '" + name + "'", {}};
      }
      EstimatorArgs args{int_param(query, "n"), int_param(query, "s"), int_param(query, "d"),
                         int_param(query, "k"), config_.confidence};
      if (auto c = query.find("confidence"); c != query.end()) {
        try {
          args.confidence = std::stod(c->second);
        } catch (const std::exception&) {
          throw HttpError{400, "bad_request", 3, "query parameter 'confidence' must be a number", {}};
        }
      }
      return {200, to_wire(Json(run_estimator(name, args)))};
    }

    return error_response({404, "not_found", 2, std::string(method) + " " + std::string(path) + " not found", {}});
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const UnclassifiableError& e) {
    return error_response({422, "unclassifiable", 2, e.what(), {}});
  } catch (const ParseError& e) {
    return error_response({400, "invalid_profile", 2, e.what(), e.token()});
  } catch (const DomainError& e) {
    return error_response({422, "domain_error", 2, e.what(), {}});
  } catch (const ConfigError& e) {
    return error_response({500, "config_error", 3, e.what(), {}});
  } catch (const std::exception& e) {
    return error_response({500, "internal_error", 1, e.what(), {}});
  }
}

}  // namespace mitofreq
