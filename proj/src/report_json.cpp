#include "mitofreq/report_json.hpp"

#include "mitofreq/error.hpp"

namespace mitofreq {

namespace {

Json snv_json(const std::optional<SnvChoice>& snv) {
  return snv ? Json(snv->to_string()) : Json(nullptr);
}

std::optional<SnvChoice> snv_from(const Json& j, double frequency) {
  if (j.is_null()) return std::nullopt;
  auto s = j.get<std::string>();
  if (s.size() < 2) throw DomainError("bad SNV '" + s + "' in report");
  return SnvChoice{std::stoi(s.substr(0, s.size() - 1)), s.back(), frequency};
}

Json number_or_null(bool present, double v) { return present ? Json(v) : Json(nullptr); }

void put_rank(Json& j, const std::string& prefix, const std::optional<RankEvaluation>& r) {
  if (!r) {
    for (const char* key : {"tlhg", "tlhg_prob", "snv", "snv_prob", "match_probability", "lr",
                            "fallback", "usable", "note"}) {
      j[prefix + key] = nullptr;
    }
    return;
  }
  j[prefix + "tlhg"] = r->tlhg;
  j[prefix + "tlhg_prob"] = r->tlhg_prob;
  j[prefix + "snv"] = snv_json(r->snv);
  j[prefix + "snv_prob"] = r->snv_prob;
  j[prefix + "match_probability"] = number_or_null(r->usable, r->match_probability);
  j[prefix + "lr"] = number_or_null(r->usable, r->lr);
  j[prefix + "fallback"] = r->fallback;
  j[prefix + "usable"] = r->usable;
  j[prefix + "note"] = r->note;
}

std::optional<RankEvaluation> get_rank(const Json& j, const std::string& prefix, int rank) {
  if (!j.contains(prefix + "tlhg") || j.at(prefix + "tlhg").is_null()) return std::nullopt;
  RankEvaluation r;
  r.rank = rank;
  r.tlhg = j.at(prefix + "tlhg").get<std::string>();
  r.tlhg_prob = j.at(prefix + "tlhg_prob").get<double>();
  r.snv_prob = j.at(prefix + "snv_prob").get<double>();
  r.snv = snv_from(j.at(prefix + "snv"), r.snv_prob);
  r.usable = j.at(prefix + "usable").get<bool>();
  if (r.usable) {
    r.match_probability = j.at(prefix + "match_probability").get<double>();
    r.lr = j.at(prefix + "lr").get<double>();
  }
  r.fallback = j.at(prefix + "fallback").get<bool>();
  r.note = j.at(prefix + "note").get<std::string>();
  return r;
}

}  // namespace

void to_json(Json& j, const TlhgPrediction& p) {
  j = Json{{"rank1", p.rank1},
           {"rank2", p.rank2},
           {"rank1_motif", p.rank1_motif},
           {"rank2_motif", p.rank2_motif},
           {"scores", p.scores}};
}

void from_json(const Json& j, TlhgPrediction& p) {
  j.at("rank1").get_to(p.rank1);
  j.at("rank2").get_to(p.rank2);
  j.at("rank1_motif").get_to(p.rank1_motif);
  j.at("rank2_motif").get_to(p.rank2_motif);
  j.at("scores").get_to(p.scores);
}

void to_json(Json& j, const LrReport& r) {
  j = Json::object();
  j["profile"] = r.profile;
  j["coverage"] = r.coverage;
  j["sources"] = r.sources;
  j["pooled"] = r.pooled;
  j["tlhg_source"] = r.tlhg_source;
  j["classifier_mode"] = std::string(to_string(r.classifier_mode));
  j["rank_policy"] = std::string(to_string(r.rank_policy));
  j["tlhg_overridden"] = r.tlhg_overridden;
  j["rank_used"] = r.rank_used;
  j["tlhg_used"] = r.tlhg_used;
  j["tlhg_prob"] = r.tlhg_prob;
  j["chosen_snv"] = snv_json(r.chosen_snv);
  j["snv_prob"] = r.snv_prob;
  j["match_probability"] = r.match_probability;
  j["lr"] = r.lr;
  j["fallback_used"] = r.fallback_used;
  put_rank(j, "rank1_", r.rank1);
  put_rank(j, "rank2_", r.rank2);
  j["warnings"] = r.warnings;
  j["software_version"] = r.software_version;
}

void from_json(const Json& j, LrReport& r) {
  j.at("profile").get_to(r.profile);
  j.at("coverage").get_to(r.coverage);
  j.at("sources").get_to(r.sources);
  j.at("pooled").get_to(r.pooled);
  j.at("tlhg_source").get_to(r.tlhg_source);
  r.classifier_mode = classifier_mode_from_string(j.at("classifier_mode").get<std::string>());
  r.rank_policy = rank_policy_from_string(j.at("rank_policy").get<std::string>());
  j.at("tlhg_overridden").get_to(r.tlhg_overridden);
  j.at("rank_used").get_to(r.rank_used);
  j.at("tlhg_used").get_to(r.tlhg_used);
  j.at("tlhg_prob").get_to(r.tlhg_prob);
  j.at("snv_prob").get_to(r.snv_prob);
  r.chosen_snv = snv_from(j.at("chosen_snv"), r.snv_prob);
  j.at("match_probability").get_to(r.match_probability);
  j.at("lr").get_to(r.lr);
  j.at("fallback_used").get_to(r.fallback_used);
  auto rank1 = get_rank(j, "rank1_", 1);
  if (!rank1) throw DomainError("LR report without rank1 breakdown");
  r.rank1 = *rank1;
  r.rank2 = get_rank(j, "rank2_", 2);
  j.at("warnings").get_to(r.warnings);
  j.at("software_version").get_to(r.software_version);
}

void to_json(Json& j, const EstimateResult& e) {
  j = Json{{"method", e.method}, {"match_probability", e.match_probability}, {"lr", e.lr}};
}

void from_json(const Json& j, EstimateResult& e) {
  j.at("method").get_to(e.method);
  j.at("match_probability").get_to(e.match_probability);
  j.at("lr").get_to(e.lr);
}

void to_json(Json& j, const TlhgDistribution& d) {
  j = Json{{"source_name", d.source_name}, {"probs", d.probs}};
}

void from_json(const Json& j, TlhgDistribution& d) {
  j.at("source_name").get_to(d.source_name);
  j.at("probs").get_to(d.probs);
}

void to_json(Json& j, const ComparisonReport& c) {
  Json pairs = Json::array();
  for (const auto& p : c.pairs) {
    pairs.push_back({{"position", p.position},
                     {"alt", std::string(1, p.alt)},
                     {"tlhg", p.tlhg},
                     {"freq1", p.freq1},
                     {"freq2", p.freq2}});
  }
  j = Json{{"shared_snv_count", c.shared_snv_count},
           {"pearson_log10", c.pearson_log10},
           {"pairs", std::move(pairs)}};
}

void to_json(Json& j, const ProfileCountSummary& s) {
  j = Json{{"n", s.n}, {"s", s.s}, {"d", s.d}};
  if (s.n > 0) {
    j["s_over_n"] = static_cast<double>(s.s) / static_cast<double>(s.n);
    j["d_over_n"] = static_cast<double>(s.d) / static_cast<double>(s.n);
  } else {
    j["s_over_n"] = 0.0;
    j["d_over_n"] = 0.0;
  }
}

void to_json(Json& j, const IngestReport& r) {
  j = Json{{"rows_read", r.rows_read},
           {"retained", r.retained},
           {"dropped", r.dropped},
           {"indel", r.indel},
           {"multi_base", r.multi_base},
           {"heteroplasmic", r.heteroplasmic},
           {"global_count_below_2", r.global_count_below_2},
           {"zero_count", r.zero_count},
           {"poly_stretch", r.poly_stretch}};
}

std::string to_wire(const Json& j) { return j.dump(2) + "\n"; }

Json describe_source(const SnvFrequencyDb& db) {
  return Json{{"name", db.source_name()},
              {"total_n", db.total_n()},
              {"tlhg_count", db.tlhg_sizes().size()},
              {"snv_records", db.records().size()},
              {"tlhg_sizes", db.tlhg_sizes()}};
}

}  // namespace mitofreq
