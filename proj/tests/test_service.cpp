#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <set>
#include <thread>

#include "mitofreq/api_docs.hpp"
#include "mitofreq/config.hpp"
#include "mitofreq/service.hpp"
#include "schema_check.hpp"
#include "support.hpp"

using namespace mitofreq;
using testsupport::fixture;

namespace {

CliConfig service_config() {
  CliConfig c = default_config();
  for (const std::string name : {"split_coarse", "helix_like", "gnomad_like"}) {
    c.sources.push_back(SourceSpec{name, fixture(name + "_snv.tsv"), fixture(name + "_sizes.tsv"), {}});
  }
  return c;
}

std::shared_ptr<const Workspace> workspace() {
  static auto ws = load_workspace(service_config());
  return ws;
}

struct Reply {
  int status;
  Json body;
};

Reply call(Service& s, std::string_view method, std::string_view path, const Json& body = nullptr,
           std::multimap<std::string, std::string> query = {}) {
  auto r = s.handle(method, path, body.is_null() ? "" : body.dump(), query);
  return {r.status, Json::parse(r.body)};
}

testsupport::SchemaChecker schema(const std::string& name) {
  return testsupport::SchemaChecker(
      Json::parse(testsupport::slurp(std::filesystem::path(MITOFREQ_DOCS_DIR) / (name + ".schema.json"))));
}

void check_error(const Reply& r, int status, const std::string& code, int exit_code) {
  CHECK(r.status == status);
  CHECK(schema("error").check(r.body).empty());
  CHECK(r.body.at("error").at("code") == code);
  CHECK(r.body.at("error").at("exit_code") == exit_code);
}

const std::string kH1e1a = "263G 750G 1438G 3010A 4769G 5460A 8512G 8860G 14902T 15326G 16519C";

Json split_body() {
  return Json{{"profile", "5000G 6000T"},
              {"sources", {"split_coarse"}},
              {"tlhg_source", "split_coarse"},
              {"tlhg_override", "A"}};
}

}  // namespace

TEST_CASE("POST /classify") {
  Service s(workspace(), service_config());
  auto ok = call(s, "POST", "/classify", {{"profile", kH1e1a}, {"mode", "227"}});
  CHECK(ok.status == 200);
  CHECK(ok.body.at("rank1") == "H");
  CHECK(ok.body.at("classifier_mode") == "positions227");
  CHECK(schema("tlhg_prediction").check(ok.body).empty());

  CHECK(call(s, "POST", "/classify", {{"profile", ""}}).body.at("rank1") == "H");

  auto bad = call(s, "POST", "/classify", {{"profile", "263G 16570A"}});
  check_error(bad, 400, "invalid_profile", 2);
  CHECK(bad.body.at("error").at("token") == "16570A");

  check_error(call(s, "POST", "/classify", {{"profile", ""}, {"coverage", "1900-2400"}}), 422, "unclassifiable", 2);
  check_error(call(s, "POST", "/classify", {{"mode", "all"}}), 400, "bad_request", 3);
  check_error(call(s, "POST", "/classify", {{"profile", ""}, {"mode", "fancy"}}), 400, "bad_request", 3);
  check_error(call(s, "POST", "/classify", {{"profile", 263}}), 400, "bad_request", 3);
  auto not_json = s.handle("POST", "/classify", "{oops", {});
  CHECK(not_json.status == 400);
  CHECK(Json::parse(not_json.body).at("error").at("code") == "bad_request");
}

TEST_CASE("POST /lr") {
  Service s(workspace(), service_config());
  auto split = call(s, "POST", "/lr", split_body());
  REQUIRE(split.status == 200);
  CHECK(split.body.at("lr") == 20.0);
  CHECK(split.body.at("chosen_snv") == "5000G");
  CHECK(schema("lr_report").check(split.body).empty());

  auto fb = split_body();
  fb["profile"] = "12000T";
  auto fallback = call(s, "POST", "/lr", fb);
  CHECK(fallback.body.at("fallback_used") == true);
  CHECK(fallback.body.at("lr") == 1.25);
  fb["allow_fallback"] = false;
  check_error(call(s, "POST", "/lr", fb), 422, "domain_error", 2);

  auto bad = split_body();
  bad["profile"] = "5000G 5000X";
  auto r = call(s, "POST", "/lr", bad);
  check_error(r, 400, "invalid_profile", 2);
  CHECK(r.body.at("error").at("token") == "5000X");

  // Identical requests give identical bytes.
  CHECK(s.handle("POST", "/lr", split_body().dump(), {}).body == s.handle("POST", "/lr", split_body().dump(), {}).body);

  auto per = split_body();
  per["sources"] = {"helix_like", "gnomad_like"};
  per["tlhg_override"] = "H";
  per["tlhg_source"] = "helix_like";
  per["per_source"] = true;
  auto cols = call(s, "POST", "/lr", per);
  REQUIRE(cols.status == 200);
  REQUIRE(cols.body.size() == 3);
  CHECK(cols.body[2].at("pooled") == true);
  per["per_source"] = false;
  check_error(call(s, "POST", "/lr", per), 422, "domain_error", 2);  // several sources, no pool
  per["pool"] = true;
  CHECK(call(s, "POST", "/lr", per).body.at("pooled") == true);

  auto policy = split_body();
  policy["rank_policy"] = "max";
  check_error(call(s, "POST", "/lr", policy), 400, "bad_request", 3);
  auto unknown_source = split_body();
  unknown_source["sources"] = {"nope"};
  check_error(call(s, "POST", "/lr", unknown_source), 422, "domain_error", 2);
  auto session = split_body();
  session["session"] = "0123";
  check_error(call(s, "POST", "/lr", session), 404, "unknown_session", 2);
}

TEST_CASE("TLHG distribution sessions") {
  Service s(workspace(), service_config());
  auto created = call(s, "POST", "/tlhg-distribution", {{"table", {{"A", 4}, {"B", 1}}}, {"sources", {"split_coarse"}}});
  REQUIRE(created.status == 200);
  auto id = created.body.at("session_id").get<std::string>();
  CHECK(id.size() == 32);
  CHECK(created.body.at("distribution").at("probs").at("A") == 0.8);
  CHECK(created.body.at("distribution").at("probs").at("B") == 0.2);

  auto got = call(s, "GET", "/tlhg-distribution/" + id);
  REQUIRE(got.status == 200);
  CHECK(schema("tlhg_distribution").check(got.body).empty());
  CHECK(got.body.at("probs").at("A") == 0.8);
  CHECK(got.body.at("session_id") == id);

  // The session supplies both the distribution and the sources.
  auto lr = call(s, "POST", "/lr", {{"profile", "5000G 6000T"}, {"session", id}, {"tlhg_override", "A"}});
  REQUIRE(lr.status == 200);
  CHECK(lr.body.at("tlhg_prob") == 0.8);
  CHECK(lr.body.at("sources") == Json::array({"split_coarse"}));

  auto tsv = call(s, "POST", "/tlhg-distribution",
                  {{"table", testsupport::slurp(fixture("weights_ab.tsv"))}, {"name", "uploaded"}});
  REQUIRE(tsv.status == 200);
  CHECK(tsv.body.at("distribution").at("source_name") == "uploaded");
  CHECK(tsv.body.at("distribution").at("probs").at("A") == 0.8);

  check_error(call(s, "POST", "/tlhg-distribution", {{"table", {{"A", -1}, {"B", 2}}}}), 422, "invalid_distribution", 2);
  check_error(call(s, "POST", "/tlhg-distribution", {{"table", {{"A", 0}, {"B", 0}}}}), 422, "invalid_distribution", 2);
  check_error(call(s, "POST", "/tlhg-distribution", {{"table", testsupport::slurp(fixture("weights_negative.tsv"))}}),
              422, "invalid_distribution", 2);
  check_error(call(s, "POST", "/tlhg-distribution", {{"table", {{"A", "x"}}}}), 422, "invalid_distribution", 2);
  check_error(call(s, "POST", "/tlhg-distribution", {{"table", 5}}), 400, "bad_request", 3);
  check_error(call(s, "POST", "/tlhg-distribution", Json::object()), 400, "bad_request", 3);
  check_error(call(s, "GET", "/tlhg-distribution/ffff"), 404, "unknown_session", 2);
  CHECK(s.sessions().size() == 2);
}

TEST_CASE("GET /sources and /estimators") {
  Service s(workspace(), service_config());
  auto sources = call(s, "GET", "/sources");
  REQUIRE(sources.status == 200);
  REQUIRE(sources.body.size() == 3);
  for (const auto& src : sources.body) CHECK(schema("source").check(src).empty());
  CHECK(sources.body[0].at("name") == "split_coarse");
  CHECK(sources.body[0].at("total_n") == 100);

  auto b = call(s, "GET", "/estimators", nullptr, {{"method", "brenner"}, {"n", "934"}, {"s", "778"}});
  REQUIRE(b.status == 200);
  CHECK(std::llround(b.body.at("lr").get<double>()) == 5604);
  CHECK(schema("estimate_result").check(b.body).empty());
  auto c = call(s, "GET", "/estimators", nullptr, {{"method", "cggt"}, {"n", "61295"}, {"s", "42614"}, {"d", "3466"}});
  CHECK(std::llround(c.body.at("lr").get<double>()) == 376807);
  auto cp = call(s, "GET", "/estimators", nullptr,
                 {{"method", "clopper-pearson"}, {"n", "100"}, {"k", "0"}, {"confidence", "0.95"}});
  CHECK(cp.body.at("match_probability").get<double>() == doctest::Approx(0.029513).epsilon(1e-5));

  check_error(call(s, "GET", "/estimators", nullptr, {{"method", "magic"}}), 400, "unknown_method", 3);
  check_error(call(s, "GET", "/estimators", nullptr, {{"method", "brenner"}, {"n", "ten"}}), 400, "bad_request", 3);
  check_error(call(s, "GET", "/estimators", nullptr, {{"method", "brenner"}, {"n", "10"}, {"s", "10"}}), 422,
              "domain_error", 2);
  check_error(call(s, "GET", "/nowhere"), 404, "not_found", 2);
  check_error(call(s, "DELETE", "/sources"), 404, "not_found", 2);
}

TEST_CASE("GET /openapi.json serves the generated document") {
  Service s(workspace(), service_config());
  auto doc = call(s, "GET", "/openapi.json");
  REQUIRE(doc.status == 200);
  CHECK(doc.body == openapi_document());
  // Every documented path is routed.
  for (const auto& [path, ops] : doc.body.at("paths").items()) {
    std::string concrete = path == "/tlhg-distribution/{id}" ? "/tlhg-distribution/x" : path;
    for (const auto& [verb, op] : ops.items()) {
      std::string method = verb == "get" ? "GET" : "POST";
      auto r = s.handle(method, concrete, "{}", {});
      CAPTURE(concrete);
      auto j = Json::parse(r.body);
      CHECK_FALSE((j.is_object() && j.contains("error") && j["error"]["code"] == "not_found"));
    }
  }
}

TEST_CASE("session store expiry with a fake clock") {
  using namespace std::chrono;
  steady_clock::time_point now{};
  SessionStore store(seconds(60), [&] { return now; });
  auto a = store.create(std::nullopt, {});
  auto b = store.create(std::nullopt, {"x"});
  CHECK(a != b);
  now += seconds(50);
  REQUIRE(store.get(a));  // refreshes a
  now += seconds(30);
  CHECK(store.get(a));
  CHECK_FALSE(store.get(b));  // 80 s idle
  CHECK(store.size() == 1);
  now += seconds(61);
  CHECK(store.evict_expired() == 1);
  CHECK(store.size() == 0);
}

TEST_CASE("session store under concurrent use") {
  SessionStore store(std::chrono::seconds(3600));
  std::vector<std::thread> threads;
  std::vector<std::vector<std::string>> ids(8);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 200; ++i) {
        auto id = store.create(std::nullopt, {});
        ids[t].push_back(id);
        if (!store.get(id)) ids[t].push_back("lost");
        store.evict_expired();
      }
    });
  }
  for (auto& th : threads) th.join();
  std::set<std::string> all;
  for (const auto& v : ids) all.insert(v.begin(), v.end());
  CHECK(all.size() == 1600);
  CHECK_FALSE(all.count("lost"));
  CHECK(store.size() == 1600);
}

TEST_CASE("sessions expire inside the service") {
  ServiceOptions opts;
  opts.session_ttl = std::chrono::seconds(0);
  Service s(workspace(), service_config(), opts);
  auto id = call(s, "POST", "/tlhg-distribution", {{"table", {{"A", 1}}}}).body.at("session_id").get<std::string>();
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  check_error(call(s, "GET", "/tlhg-distribution/" + id), 404, "unknown_session", 2);
}

TEST_CASE("HTTP round trip with concurrent clients") {
  ServiceOptions opts;
  opts.port = 0;
  Service s(workspace(), service_config(), opts);
  int port = s.bind();
  REQUIRE(port > 0);
  std::thread server([&] { s.listen_after_bind(); });
  s.wait_until_ready();

  const auto expected = s.handle("POST", "/lr", split_body().dump(), {}).body;
  std::atomic<int> mismatches{0};
  std::atomic<int> done{0};
  std::vector<std::thread> clients;
  for (int t = 0; t < 6; ++t) {
    clients.emplace_back([&] {
      httplib::Client cli("127.0.0.1", port);
      for (int i = 0; i < 15; ++i) {
        auto res = cli.Post("/lr", split_body().dump(), "application/json");
        if (!res || res->status != 200 || res->body != expected) ++mismatches;
        auto est = cli.Get("/estimators?method=brenner&n=934&s=778");
        if (!est || est->status != 200 || std::llround(Json::parse(est->body).at("lr").get<double>()) != 5604) {
          ++mismatches;
        }
        ++done;
      }
    });
  }
  for (auto& c : clients) c.join();
  CHECK(mismatches == 0);
  CHECK(done == 90);

  httplib::Client cli("127.0.0.1", port);
  auto bad = cli.Post("/lr", Json{{"profile", "16570A"}}.dump(), "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(bad->get_header_value("Content-Type") == "application/json");
  auto created = cli.Post("/tlhg-distribution", Json{{"table", {{"A", 4}, {"B", 1}}}}.dump(), "application/json");
  REQUIRE(created);
  auto id = Json::parse(created->body).at("session_id").get<std::string>();
  auto got = cli.Get("/tlhg-distribution/" + id);
  REQUIRE(got);
  CHECK(Json::parse(got->body).at("probs").at("A") == 0.8);
  auto neg = cli.Post("/tlhg-distribution", Json{{"table", {{"A", -4}}}}.dump(), "application/json");
  REQUIRE(neg);
  CHECK(neg->status == 422);

  s.stop();
  server.join();
}
