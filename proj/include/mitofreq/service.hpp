#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mitofreq/config.hpp"
#include "mitofreq/freqdb.hpp"

namespace mitofreq {

struct SessionState {
  std::string id;
  std::optional<TlhgDistribution> distribution;
  std::vector<std::string> sources;
  std::chrono::steady_clock::time_point created;
  std::chrono::steady_clock::time_point last_used;
};

/// Mutex-guarded session map with idle expiry. Expired sessions are evicted
/// lazily on access; eviction is best-effort.
class SessionStore {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionStore(std::chrono::seconds idle_ttl, Clock clock = {});

  std::string create(std::optional<TlhgDistribution> distribution,
                     std::vector<std::string> sources);
  /// Copy of a live session, refreshing its idle timer.
  std::optional<SessionState> get(const std::string& id);
  std::size_t size();
  std::size_t evict_expired();

 private:
  std::string fresh_id();

  std::chrono::seconds ttl_;
  Clock clock_;
  std::mutex mu_;
  std::unordered_map<std::string, SessionState> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t seed_ = 0;
};

struct ServiceOptions {
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::chrono::seconds session_ttl{3600};
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

/// HTTP facade over a loaded workspace.
///
///   POST /classify                 {profile, coverage?, mode?}
///   POST /lr                       {profile, coverage?, sources?, pool?, rank_policy?,
///                                   mode?, session?, tlhg_source?, tlhg_override?,
///                                   allow_fallback?, per_source?}
///   POST /tlhg-distribution        {table: TSV text | {tlhg: weight}, name?, sources?}
///   GET  /tlhg-distribution/{id}
///   GET  /sources
///   GET  /estimators?method=&n=&s=&d=&k=&confidence=
///
/// Errors: {"error": {"code", "exit_code", "message"[, "token"]}}.
class Service {
 public:
  Service(std::shared_ptr<const Workspace> workspace, CliConfig config, ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Route a request without a socket. `query` holds decoded parameters.
  ServiceResponse handle(std::string_view method, std::string_view path, std::string_view body,
                         const std::multimap<std::string, std::string>& query = {});

  /// Bind to options.bind:options.port (port 0 picks a free port) and
  /// return the bound port, or -1.
  int bind();
  /// Serve until stop(); call after bind().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  SessionStore& sessions() { return sessions_; }

 private:
  struct Impl;
  std::shared_ptr<const Workspace> ws_;
  CliConfig config_;
  ServiceOptions options_;
  SessionStore sessions_;
  std::optional<TlhgDistribution> default_distribution_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mitofreq
