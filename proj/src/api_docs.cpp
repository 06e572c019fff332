#include "mitofreq/api_docs.hpp"

#include <fstream>

#include "mitofreq/error.hpp"
#include "mitofreq/estimators.hpp"

namespace mitofreq {

namespace {

Json type(const char* t) { return Json{{"type", t}}; }
Json nullable(const char* t) { return Json{{"type", Json::array({t, "null"})}}; }

Json probability() { return Json{{"type", "number"}, {"minimum", 0}, {"maximum", 1}}; }

Json object_of(Json properties, bool closed = true) {
  Json required = Json::array();
  for (const auto& [k, v] : properties.items()) required.push_back(k);
  return Json{{"type", "object"},
              {"properties", std::move(properties)},
              {"required", std::move(required)},
              {"additionalProperties", !closed}};
}

Json lr_report_schema() {
  Json p{
      {"profile", type("string")},
      {"coverage", type("string")},
      {"sources", Json{{"type", "array"}, {"items", type("string")}, {"minItems", 1}}},
      {"pooled", type("boolean")},
      {"tlhg_source", type("string")},
      {"classifier_mode", Json{{"type", "string"}, {"enum", {"full", "positions227"}}}},
      {"rank_policy", Json{{"type", "string"}, {"enum", {"rank1_only", "min_of_rank1_rank2"}}}},
      {"tlhg_overridden", type("boolean")},
      {"rank_used", Json{{"type", "integer"}, {"enum", {1, 2}}}},
      {"tlhg_used", type("string")},
      {"tlhg_prob", probability()},
      {"chosen_snv", nullable("string")},
      {"snv_prob", probability()},
      {"match_probability", probability()},
      {"lr", Json{{"type", "number"}, {"minimum", 1}}},
      {"fallback_used", type("boolean")},
      {"warnings", Json{{"type", "array"}, {"items", type("string")}}},
      {"software_version", type("string")},
  };
  // rank1_* is always present; rank2_* is all null without a second rank.
  for (const char* prefix : {"rank1_", "rank2_"}) {
    const bool opt = std::string(prefix) == "rank2_";
    auto t = [&](const char* name) { return opt ? nullable(name) : type(name); };
    p[std::string(prefix) + "tlhg"] = t("string");
    p[std::string(prefix) + "tlhg_prob"] = t("number");
    p[std::string(prefix) + "snv"] = nullable("string");
    p[std::string(prefix) + "snv_prob"] = t("number");
    p[std::string(prefix) + "match_probability"] = nullable("number");
    p[std::string(prefix) + "lr"] = nullable("number");
    p[std::string(prefix) + "fallback"] = t("boolean");
    p[std::string(prefix) + "usable"] = t("boolean");
    p[std::string(prefix) + "note"] = t("string");
  }
  auto s = object_of(std::move(p));
  s["title"] = "LrReport";
  return s;
}

Json tlhg_prediction_schema() {
  auto s = object_of(Json{{"rank1", type("string")},
                          {"rank2", type("string")},
                          {"rank1_motif", type("string")},
                          {"rank2_motif", type("string")},
                          {"scores", Json{{"type", "object"}, {"additionalProperties", type("number")}}}},
                     false);
  s["title"] = "TlhgPrediction";
  // /classify adds the canonical profile and the mode used.
  s["properties"]["profile"] = type("string");
  s["properties"]["classifier_mode"] = Json{{"type", "string"}, {"enum", {"full", "positions227"}}};
  return s;
}

Json estimate_result_schema() {
  Json methods = Json::array();
  for (const auto& m : estimator_methods()) methods.push_back(m);
  auto s = object_of(Json{{"method", Json{{"type", "string"}, {"enum", methods}}},
                          {"match_probability", Json{{"type", "number"}, {"exclusiveMinimum", 0}, {"maximum", 1}}},
                          {"lr", Json{{"type", "number"}, {"minimum", 1}}}});
  s["title"] = "EstimateResult";
  return s;
}

Json tlhg_distribution_schema() {
  auto s = object_of(Json{{"source_name", type("string")},
                          {"probs", Json{{"type", "object"}, {"additionalProperties", probability()}}}},
                     false);
  s["title"] = "TlhgDistribution";
  s["properties"]["session_id"] = type("string");
  return s;
}

Json source_schema() {
  auto s = object_of(Json{{"name", type("string")},
                          {"total_n", Json{{"type", "integer"}, {"minimum", 0}}},
                          {"tlhg_count", Json{{"type", "integer"}, {"minimum", 0}}},
                          {"snv_records", Json{{"type", "integer"}, {"minimum", 0}}},
                          {"tlhg_sizes", Json{{"type", "object"}, {"additionalProperties", type("integer")}}}});
  s["title"] = "Source";
  return s;
}

Json error_schema() {
  auto inner = object_of(Json{{"code", type("string")},
                              {"exit_code", Json{{"type", "integer"}, {"enum", {1, 2, 3}}}},
                              {"message", type("string")}});
  inner["properties"]["token"] = type("string");
  auto s = object_of(Json{{"error", inner}});
  s["title"] = "Error";
  return s;
}

Json ref(const std::string& name) { return Json{{"$ref", "#/components/schemas/" + name}}; }

Json json_content(Json schema) { return Json{{"application/json", Json{{"schema", std::move(schema)}}}}; }

Json response(const char* description, Json schema) {
  return Json{{"description", description}, {"content", json_content(std::move(schema))}};
}

Json errors(std::initializer_list<const char*> statuses) {
  Json out = Json::object();
  for (const char* s : statuses) out[s] = response("error", ref("error"));
  return out;
}

Json body(Json properties, std::initializer_list<const char*> required) {
  Json schema{{"type", "object"}, {"properties", std::move(properties)}};
  schema["required"] = Json::array();
  for (const char* r : required) schema["required"].push_back(r);
  return Json{{"required", true}, {"content", json_content(std::move(schema))}};
}

Json query_param(const char* name, const char* t, bool required = false) {
  return Json{{"name", name}, {"in", "query"}, {"required", required}, {"schema", type(t)}};
}

}  // namespace

const std::map<std::string, Json>& json_schemas() {
  static const std::map<std::string, Json> schemas = [] {
    std::map<std::string, Json> m{{"lr_report", lr_report_schema()},
                                  {"tlhg_prediction", tlhg_prediction_schema()},
                                  {"estimate_result", estimate_result_schema()},
                                  {"tlhg_distribution", tlhg_distribution_schema()},
                                  {"source", source_schema()},
                                  {"error", error_schema()}};
    for (auto& [name, s] : m) s["$schema"] = "https://json-schema.org/draft/2020-12/schema";
    return m;
  }();
  return schemas;
}

Json openapi_document() {
  Json components = Json::object();
  for (const auto& [name, s] : json_schemas()) {
    Json copy = s;
    copy.erase("$schema");
    components[name] = copy;
  }
  const Json mode{{"type", "string"}, {"enum", {"full", "positions227", "all", "227"}}};

  Json paths;
  auto ok = [](Json r) { return Json{{"200", std::move(r)}}; };

  auto classify_responses = ok(response("TLHG prediction", ref("tlhg_prediction")));
  classify_responses.update(errors({"400", "422"}));
  paths["/classify"]["post"] = Json{
      {"summary", "Rank-1 and rank-2 TLHG prediction"},
      {"requestBody",
       body(Json{{"profile", type("string")}, {"coverage", type("string")}, {"mode", mode}}, {"profile"})},
      {"responses", classify_responses}};

  auto lr_responses = ok(response("LrReport, or one per source then pooled when per_source is set",
                                  Json{{"oneOf", {ref("lr_report"), Json{{"type", "array"}, {"items", ref("lr_report")}}}}}));
  lr_responses.update(errors({"400", "404", "422"}));
  paths["/lr"]["post"] = Json{
      {"summary", "Likelihood ratio for a profile"},
      {"requestBody",
       body(Json{{"profile", type("string")},
                 {"coverage", type("string")},
                 {"sources", Json{{"type", "array"}, {"items", type("string")}}},
                 {"pool", type("boolean")},
                 {"per_source", type("boolean")},
                 {"rank_policy", Json{{"type", "string"}, {"enum", {"rank1_only", "min_of_rank1_rank2"}}}},
                 {"mode", mode},
                 {"session", type("string")},
                 {"tlhg_source", type("string")},
                 {"tlhg_override", type("string")},
                 {"allow_fallback", type("boolean")}},
            {"profile"})},
      {"responses", lr_responses}};

  Json session_out = object_of(Json{{"session_id", type("string")},
                                    {"distribution", ref("tlhg_distribution")},
                                    {"sources", Json{{"type", "array"}, {"items", type("string")}}}});
  auto dist_responses = ok(response("new session", session_out));
  dist_responses.update(errors({"400", "422"}));
  paths["/tlhg-distribution"]["post"] = Json{
      {"summary", "Upload a custom TLHG distribution and open a session"},
      {"requestBody",
       body(Json{{"table", Json{{"oneOf", {type("string"), Json{{"type", "object"},
                                                              {"additionalProperties", type("number")}}}}}},
                 {"name", type("string")},
                 {"sources", Json{{"type", "array"}, {"items", type("string")}}}},
            {"table"})},
      {"responses", dist_responses}};

  auto get_dist = ok(response("session distribution", ref("tlhg_distribution")));
  get_dist.update(errors({"404"}));
  paths["/tlhg-distribution/{id}"]["get"] = Json{
      {"summary", "Distribution stored in a session"},
      {"parameters", Json::array({Json{{"name", "id"}, {"in", "path"}, {"required", true}, {"schema", type("string")}}})},
      {"responses", get_dist}};

  paths["/sources"]["get"] = Json{
      {"summary", "Loaded SNV frequency sources"},
      {"responses", ok(response("sources", Json{{"type", "array"}, {"items", ref("source")}}))}};

  auto est = ok(response("estimate", ref("estimate_result")));
  est.update(errors({"400", "422"}));
  paths["/estimators"]["get"] = Json{
      {"summary", "Count-based match probability estimators"},
      {"parameters", Json::array({query_param("method", "string", true), query_param("n", "integer"),
                                  query_param("s", "integer"), query_param("d", "integer"),
                                  query_param("k", "integer"), query_param("confidence", "number")})},
      {"responses", est}};

  paths["/openapi.json"]["get"] = Json{{"summary", "This document"},
                                       {"responses", ok(Json{{"description", "OpenAPI document"}})}};

  return Json{{"openapi", "3.0.3"},
              {"info", Json{{"title", "mitofreq service"}, {"version", MITOFREQ_VERSION}}},
              {"paths", paths},
              {"components", Json{{"schemas", components}}}};
}

void write_api_docs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto write = [&](const std::filesystem::path& p, const Json& j) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << to_wire(j);
  };
  write(dir / "openapi.json", openapi_document());
  for (const auto& [name, s] : json_schemas()) write(dir / (name + ".schema.json"), s);
}

}  // namespace mitofreq
