#include "mitofreq/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mitofreq/api_docs.hpp"
#include "mitofreq/batch.hpp"
#include "mitofreq/config.hpp"
#include "mitofreq/error.hpp"
#include "mitofreq/estimators.hpp"
#include "mitofreq/report_json.hpp"
#include "mitofreq/service.hpp"

namespace mitofreq {

namespace {

std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// 5604 -> "5,604", the way LRs are printed in casework tables.
std::string group_thousands(double v) {
  if (!std::isfinite(v)) return num(v);
  auto digits = std::to_string(std::llround(std::fabs(v)));
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return v < 0 ? "-" + out : out;
}

struct Flags {
  std::string config_path;
  std::string motifs;
  std::string positions_file;
  std::string rcrs;
  std::string format;
  std::string positions_mode;
  double absent_penalty = 0.5;

  std::optional<std::string> profile;
  std::string profile_file;
  std::string coverage;

  std::vector<std::string> sources;
  bool pool = false;
  bool per_source = false;
  std::string rank_policy = "min_of_rank1_rank2";
  std::string tlhg_source;
  std::string tlhg_file;
  std::string tlhg_override;
  bool no_fallback = false;
  bool exclude_poly = false;

  std::string method;
  std::optional<std::int64_t> n, s, d, k;
  double confidence = 0.95;

  std::string scatter;

  std::string snv;
  std::string sizes;
  std::string name;
  std::string out;

  std::string bind = "127.0.0.1";
  int port = 8080;
  int session_ttl = 3600;
};

struct Options {
  CLI::Option* motifs = nullptr;
  CLI::Option* positions_file = nullptr;
  CLI::Option* rcrs = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* positions_mode = nullptr;
  CLI::Option* absent_penalty = nullptr;
  CLI::Option* confidence = nullptr;
  CLI::Option* tlhg_source = nullptr;
  CLI::Option* tlhg_file = nullptr;
  CLI::Option* exclude_poly = nullptr;
};

void add_data_options(CLI::App* sub, Flags& f, Options& o) {
  o.motifs = sub->add_option("--motifs", f.motifs, "Motif table (LABEL TLHG variants)");
  o.positions_file = sub->add_option("--positions-file", f.positions_file, "Classifier position list");
  o.rcrs = sub->add_option("--rcrs", f.rcrs, "Reference sequence file");
  o.absent_penalty = sub->add_option("--absent-penalty", f.absent_penalty,
                                     "Score penalty per missing motif variant");
  o.format = sub->add_option("--format", f.format, "Output format")
                 ->check(CLI::IsMember({"text", "json", "tsv"}));
}

void add_profile_options(CLI::App* sub, Flags& f, Options& o) {
  sub->add_option("--profile", f.profile, "Whitespace-separated variants, e.g. \"263G 315.1C\"");
  sub->add_option("--profile-file", f.profile_file,
                  "One profile per line: variants[<TAB>coverage]; '.' is the reference");
  sub->add_option("--coverage", f.coverage, "Interpretation range for --profile, e.g. 1-16569");
  o.positions_mode = sub->add_option("--positions", f.positions_mode,
                                     "Classifier positions: all or 227")
                         ->check(CLI::IsMember({"all", "full", "227", "positions227"}));
}

void add_source_options(CLI::App* sub, Flags& f, Options& o) {
  sub->add_option("--source", f.sources,
                  "SNV source name:snv.tsv:sizes.tsv[:cache] or name:cache (repeatable)");
  o.exclude_poly = sub->add_flag("--exclude-poly-stretches", f.exclude_poly,
                                 "Drop SNVs in 303-315, 513-525, 16180-16194 at ingestion");
}

CliConfig build_config(const Flags& f, const Options& o) {
  CliConfig c = default_config();
  std::string config_path = f.config_path;
  if (config_path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
  }
  if (!config_path.empty()) apply_config_file(c, config_path);

  auto set = [](const CLI::Option* opt) { return opt && opt->count() > 0; };
  if (set(o.motifs)) c.motifs = f.motifs;
  if (set(o.positions_file)) c.positions = f.positions_file;
  if (set(o.rcrs)) c.rcrs = f.rcrs;
  if (set(o.format)) c.format = f.format;
  if (set(o.positions_mode)) c.mode = classifier_mode_from_string(f.positions_mode);
  if (set(o.absent_penalty)) c.absent_penalty = f.absent_penalty;
  if (set(o.confidence)) c.confidence = f.confidence;
  if (set(o.tlhg_source)) c.tlhg_source = f.tlhg_source;
  if (set(o.tlhg_file)) c.tlhg_file = f.tlhg_file;
  if (set(o.exclude_poly)) c.exclude_poly_stretches = f.exclude_poly;
  if (!f.sources.empty()) {
    c.sources.clear();
    for (const auto& s : f.sources) c.sources.push_back(SourceSpec::parse(s));
  }
  return c;
}

std::vector<ProfileLine> profile_inputs(const Flags& f) {
  if (f.profile && !f.profile_file.empty()) {
    throw ConfigError("give either --profile or --profile-file, not both");
  }
  if (f.profile) {
    ProfileLine line{0, *f.profile, std::nullopt};
    if (!f.coverage.empty()) line.coverage = f.coverage;
    return {line};
  }
  if (!f.profile_file.empty()) {
    if (!f.coverage.empty()) throw ConfigError("--coverage applies to --profile only");
    return read_profile_file(f.profile_file);
  }
  throw ConfigError("a profile is required (--profile or --profile-file)");
}

// Parse every line; parse failures become per-line errors.
struct ParsedProfiles {
  std::vector<MitoProfile> profiles;
  std::vector<std::size_t> line_of;  // input line for each parsed profile
  std::vector<std::pair<std::size_t, std::string>> errors;
};

ParsedProfiles parse_inputs(const std::vector<ProfileLine>& lines, const RcrsReference& ref) {
  ParsedProfiles out;
  for (const auto& line : lines) {
    try {
      out.profiles.push_back(parse_profile_line(line, ref));
      out.line_of.push_back(line.line_number);
    } catch (const DomainError& e) {
      out.errors.emplace_back(line.line_number, e.what());
    }
  }
  return out;
}

void report_line_errors(const ParsedProfiles& parsed, bool batch, std::ostream& err) {
  for (const auto& [line, msg] : parsed.errors) {
    if (batch) {
      err << "line " << line << ": " << msg << "\n";
    } else {
      err << "error: " << msg << "\n";
    }
  }
}

// classify ------------------------------------------------------------------

int cmd_classify(const Flags& f, const Options& o, std::ostream& out, std::ostream& err) {
  auto config = build_config(f, o);
  auto lines = profile_inputs(f);
  auto ws = load_workspace_without_sources(config);
  const bool batch = !f.profile;
  auto parsed = parse_inputs(lines, ws->reference);
  report_line_errors(parsed, batch, err);
  if (!batch && !parsed.errors.empty()) return kExitDomain;

  auto results = classify_parallel(parsed.profiles, ws->table, config.mode);
  int code = parsed.errors.empty() ? kExitOk : kExitDomain;

  Json array = Json::array();
  if (config.format == "tsv") out << "profile\trank1\trank2\trank1_motif\trank2_motif\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto profile = format_profile(parsed.profiles[i]);
    if (!r.ok()) {
      code = std::max(code, r.exit_code);
      if (batch) {
        err << "line " << parsed.line_of[i] << ": " << r.error << "\n";
      } else {
        err << "error: " << r.error << "\n";
      }
      continue;
    }
    const auto& p = *r.value;
    if (config.format == "json") {
      Json j = p;
      j["profile"] = profile;
      j["classifier_mode"] = std::string(to_string(config.mode));
      if (batch) j["line"] = parsed.line_of[i];
      array.push_back(std::move(j));
    } else if (config.format == "tsv") {
      out << profile << "\t" << p.rank1 << "\t" << p.rank2 << "\t" << p.rank1_motif << "\t"
          << p.rank2_motif << "\n";
    } else {
      out << "rank1=" << p.rank1 << " rank2=" << p.rank2 << " rank1_motif=" << p.rank1_motif
          << " rank2_motif=" << p.rank2_motif << "\n";
    }
  }
  if (config.format == "json") out << to_wire(batch ? array : (array.empty() ? Json() : array[0]));
  return code;
}

// lr -------------------------------------------------------------------------

void print_rank(const RankEvaluation& r, std::ostream& out) {
  out << "rank " << r.rank << "             " << r.tlhg << "  P(TLHG)=" << num(r.tlhg_prob);
  if (!r.usable) {
    out << "  unusable: " << r.note << "\n";
    return;
  }
  if (r.snv) {
    out << "  SNV " << r.snv->to_string() << " p=" << num(r.snv_prob);
  } else {
    out << "  no SNV (fallback)";
  }
  out << "  LR=" << num(r.lr, "%.6g") << "\n";
}

void print_report_text(const LrReport& r, std::ostream& out) {
  out << "profile            " << (r.profile.empty() ? "(reference)" : r.profile) << "\n";
  out << "coverage           " << r.coverage << "\n";
  out << "sources            ";
  for (std::size_t i = 0; i < r.sources.size(); ++i) out << (i ? ", " : "") << r.sources[i];
  out << (r.pooled ? " (pooled)" : "") << "\n";
  out << "TLHG distribution  " << r.tlhg_source << "\n";
  out << "classifier         " << to_string(r.classifier_mode) << ", policy "
      << to_string(r.rank_policy) << (r.tlhg_overridden ? ", TLHG overridden" : "") << "\n";
  print_rank(r.rank1, out);
  if (r.rank2) print_rank(*r.rank2, out);
  out << "used               rank " << r.rank_used << ", TLHG " << r.tlhg_used << "\n";
  out << "TLHG probability   " << num(r.tlhg_prob, "%.10g") << "\n";
  out << "chosen SNV         " << (r.chosen_snv ? r.chosen_snv->to_string() : "none") << "\n";
  out << "SNV probability    " << num(r.snv_prob, "%.10g") << "\n";
  out << "match probability  " << num(r.match_probability, "%.10g") << "\n";
  out << "LR                 " << num(r.lr, "%.10g") << " (" << group_thousands(r.lr) << ")\n";
  out << "fallback           " << (r.fallback_used ? "yes" : "no") << "\n";
  for (const auto& w : r.warnings) out << "warning            " << w << "\n";
}

constexpr const char* kLrTsvHeader =
    "profile\tsources\tpooled\ttlhg_used\ttlhg_prob\tchosen_snv\tsnv_prob\tmatch_probability\t"
    "lr\tfallback_used\trank1_tlhg\trank1_lr\trank2_tlhg\trank2_lr\n";

void print_report_tsv(const LrReport& r, std::ostream& out) {
  std::string sources;
  for (std::size_t i = 0; i < r.sources.size(); ++i) sources += (i ? "," : "") + r.sources[i];
  auto rank_lr = [](const RankEvaluation& e) { return e.usable ? num(e.lr, "%.10g") : "NA"; };
  out << r.profile << "\t" << sources << "\t" << (r.pooled ? "yes" : "no") << "\t" << r.tlhg_used
      << "\t" << num(r.tlhg_prob, "%.10g") << "\t"
      << (r.chosen_snv ? r.chosen_snv->to_string() : "NA") << "\t" << num(r.snv_prob, "%.10g")
      << "\t" << num(r.match_probability, "%.10g") << "\t" << num(r.lr, "%.10g") << "\t"
      << (r.fallback_used ? "yes" : "no") << "\t" << r.rank1.tlhg << "\t" << rank_lr(r.rank1)
      << "\t" << (r.rank2 ? r.rank2->tlhg : "NA") << "\t" << (r.rank2 ? rank_lr(*r.rank2) : "NA")
      << "\n";
}

int cmd_lr(const Flags& f, const Options& o, std::ostream& out, std::ostream& err) {
  auto config = build_config(f, o);
  if (config.sources.empty()) throw ConfigError("lr needs at least one --source");
  auto lines = profile_inputs(f);
  auto ws = load_workspace(config);
  auto dist = resolve_tlhg_distribution(config, *ws);
  const bool batch = !f.profile;
  auto parsed = parse_inputs(lines, ws->reference);
  report_line_errors(parsed, batch, err);
  if (!batch && !parsed.errors.empty()) return kExitDomain;

  std::vector<LrRequest> requests;
  for (const auto& p : parsed.profiles) {
    LrRequest req;
    req.profile = p;
    req.snv_sources = ws->all_sources();
    req.pool = f.pool;
    req.tlhg_dist = dist;
    req.classifier_mode = config.mode;
    req.rank_policy = rank_policy_from_string(f.rank_policy);
    req.allow_fallback = !f.no_fallback;
    if (!f.tlhg_override.empty()) req.tlhg_override = f.tlhg_override;
    requests.push_back(std::move(req));
  }
  if (!f.per_source && requests.size() > 0 && requests[0].snv_sources.size() > 1 && !f.pool) {
    throw ConfigError("several sources need --pool or --per-source");
  }

  // Each input yields a list of reports: one, or one per source column.
  std::vector<Outcome<std::vector<LrReport>>> results;
  if (f.per_source) {
    for (const auto& req : requests) {
      Outcome<std::vector<LrReport>> r;
      try {
        r.value = evaluate_per_source(req, ws->table);
      } catch (const DomainError& e) {
        r.error = e.what();
        r.exit_code = kExitDomain;
      }
      results.push_back(std::move(r));
    }
  } else {
    for (auto& r : evaluate_parallel(requests, ws->table)) {
      Outcome<std::vector<LrReport>> o2;
      if (r.ok()) o2.value = std::vector<LrReport>{std::move(*r.value)};
      o2.error = std::move(r.error);
      o2.exit_code = r.exit_code;
      results.push_back(std::move(o2));
    }
  }

  int code = parsed.errors.empty() ? kExitOk : kExitDomain;
  Json array = Json::array();
  if (config.format == "tsv") out << kLrTsvHeader;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (!r.ok()) {
      code = std::max(code, r.exit_code);
      if (batch) {
        err << "line " << parsed.line_of[i] << ": " << r.error << "\n";
      } else {
        err << "error: " << r.error << "\n";
      }
      continue;
    }
    for (const auto& rep : *r.value) {
      if (config.format == "json") {
        array.push_back(rep);
      } else if (config.format == "tsv") {
        print_report_tsv(rep, out);
      } else {
        if (i > 0 || &rep != &r.value->front()) out << "\n";
        print_report_text(rep, out);
      }
    }
  }
  if (config.format == "json") {
    bool single = !batch && !f.per_source;
    out << to_wire(single ? (array.empty() ? Json() : array[0]) : array);
  }
  return code;
}

// estimate -------------------------------------------------------------------

int cmd_estimate(const Flags& f, const Options& o, std::ostream& out) {
  auto config = build_config(f, o);
  EstimatorArgs args{f.n, f.s, f.d, f.k, config.confidence};
  auto r = run_estimator(f.method, args);
  if (config.format == "json") {
    out << to_wire(Json(r));
  } else if (config.format == "tsv") {
    out << "method\tmatch_probability\tlr\n"
        << r.method << "\t" << num(r.match_probability, "%.12g") << "\t" << num(r.lr, "%.12g")
        << "\n";
  } else {
    out << "method=" << r.method << " match_probability=" << num(r.match_probability, "%.10g")
        << " lr=" << num(r.lr, "%.10g") << " lr_rounded=" << group_thousands(r.lr) << "\n";
  }
  return kExitOk;
}

// compare --------------------------------------------------------------------

int cmd_compare(const Flags& f, const Options& o, std::ostream& out) {
  auto config = build_config(f, o);
  if (config.sources.size() != 2) throw ConfigError("compare needs exactly two --source options");
  auto ws = load_workspace(config);
  auto report = compare_databases(*ws->dbs[0], *ws->dbs[1]);
  if (!f.scatter.empty()) {
    std::ofstream sc(f.scatter);
    if (!sc) throw ConfigError("cannot write " + f.scatter);
    sc << "position\talt\ttlhg\tlog10_" << ws->dbs[0]->source_name() << "\tlog10_"
       << ws->dbs[1]->source_name() << "\n";
    for (const auto& p : report.pairs) {
      sc << p.position << "\t" << p.alt << "\t" << p.tlhg << "\t"
         << num(std::log10(p.freq1), "%.10g") << "\t" << num(std::log10(p.freq2), "%.10g")
         << "\n";
    }
  }
  if (config.format == "json") {
    out << to_wire(Json(report));
  } else if (config.format == "tsv") {
    out << "source1\tsource2\tshared_snv_count\tpearson_log10\n"
        << ws->dbs[0]->source_name() << "\t" << ws->dbs[1]->source_name() << "\t"
        << report.shared_snv_count << "\t" << num(report.pearson_log10, "%.15g") << "\n";
  } else {
    out << "sources=" << ws->dbs[0]->source_name() << "," << ws->dbs[1]->source_name()
        << " shared_snv_count=" << report.shared_snv_count
        << " pearson_log10=" << num(report.pearson_log10, "%.15g") << "\n";
  }
  return kExitOk;
}

// summarize ------------------------------------------------------------------

int cmd_summarize(const Flags& f, const Options& o, std::ostream& out, std::ostream& err) {
  auto config = build_config(f, o);
  if (f.profile_file.empty()) throw ConfigError("summarize needs --profiles FILE");
  auto lines = read_profile_file(f.profile_file);
  auto ref = RcrsReference::load(config.rcrs);
  auto parsed = parse_inputs(lines, ref);
  if (!parsed.errors.empty()) {
    report_line_errors(parsed, true, err);
    return kExitDomain;
  }
  auto summary = summarize_profiles(parsed.profiles);
  Json j = summary;
  if (config.format == "json") {
    out << to_wire(j);
  } else if (config.format == "tsv") {
    out << "n\ts\td\ts_over_n\td_over_n\n"
        << summary.n << "\t" << summary.s << "\t" << summary.d << "\t"
        << num(j["s_over_n"].get<double>()) << "\t" << num(j["d_over_n"].get<double>()) << "\n";
  } else {
    out << "n=" << summary.n << " s=" << summary.s << " d=" << summary.d
        << " s/n=" << num(j["s_over_n"].get<double>()) << " d/n=" << num(j["d_over_n"].get<double>())
        << "\n";
  }
  return kExitOk;
}

// ingest ---------------------------------------------------------------------

int cmd_ingest(const Flags& f, const Options& o, std::ostream& out) {
  auto config = build_config(f, o);
  IngestOptions opts{config.exclude_poly_stretches};
  IngestResult result = [&] {
    try {
      return ingest_files(f.snv, f.sizes, f.name, opts);
    } catch (const ConfigError&) {
      throw;
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }();
  if (!f.out.empty()) save_cache(result.db, f.out, source_checksum(f.snv, f.sizes, opts));
  Json j = result.report;
  j["source"] = describe_source(result.db);
  if (!f.out.empty()) j["cache"] = f.out;
  if (config.format == "json") {
    out << to_wire(j);
  } else {
    const auto& r = result.report;
    out << "source=" << result.db.source_name() << " rows_read=" << r.rows_read
        << " retained=" << r.retained << " dropped=" << r.dropped << "\n"
        << "indel=" << r.indel << " multi_base=" << r.multi_base
        << " heteroplasmic=" << r.heteroplasmic
        << " global_count_below_2=" << r.global_count_below_2 << " zero_count=" << r.zero_count
        << " poly_stretch=" << r.poly_stretch << "\n"
        << "tlhgs=" << result.db.tlhg_sizes().size() << " total_n=" << result.db.total_n() << "\n";
    if (!f.out.empty()) out << "cache=" << f.out << "\n";
  }
  return kExitOk;
}

// serve ----------------------------------------------------------------------

int cmd_serve(const Flags& f, const Options& o, std::ostream& out, std::ostream& err) {
  auto config = build_config(f, o);
  auto ws = load_workspace(config);
  ServiceOptions opts;
  opts.bind = f.bind;
  opts.port = f.port;
  opts.session_ttl = std::chrono::seconds(f.session_ttl);
  Service service(ws, config, opts);
  int port = service.bind();
  if (port < 0) {
    err << "error: cannot bind " << f.bind << ":" << f.port << "\n";
    return kExitConfig;
  }
  out << "listening on http://" << f.bind << ":" << port << std::endl;
  return service.listen_after_bind() ? kExitOk : kExitConfig;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mitogenome match probabilities from TLHG and rarest-SNV frequencies", "mitofreq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MITOFREQ_VERSION);
  Flags f;
  Options o;
  app.add_option("--config", f.config_path, "JSON config file (default: $MITOFREQ_CONFIG)");

  auto* classify_cmd = app.add_subcommand("classify", "Predict rank-1 and rank-2 TLHG");
  add_data_options(classify_cmd, f, o);
  add_profile_options(classify_cmd, f, o);

  auto* lr_cmd = app.add_subcommand("lr", "Evaluate the likelihood ratio for a profile");
  add_data_options(lr_cmd, f, o);
  add_profile_options(lr_cmd, f, o);
  add_source_options(lr_cmd, f, o);
  lr_cmd->add_flag("--pool", f.pool, "Pool the sources, weighted by TLHG sizes");
  lr_cmd->add_flag("--per-source", f.per_source, "One result per source, then pooled");
  lr_cmd->add_option("--rank-policy", f.rank_policy, "rank1_only or min_of_rank1_rank2")
      ->check(CLI::IsMember({"rank1_only", "min_of_rank1_rank2", "rank1", "min"}));
  o.tlhg_source = lr_cmd->add_option("--tlhg-source", f.tlhg_source,
                                     "Source whose TLHG sizes give P(TLHG)");
  o.tlhg_file = lr_cmd->add_option("--tlhg-file", f.tlhg_file, "Custom TLHG weights (tlhg<TAB>weight)");
  lr_cmd->add_option("--tlhg-override", f.tlhg_override, "Evaluate this TLHG, skip classification");
  lr_cmd->add_flag("--no-fallback", f.no_fallback, "Fail instead of falling back to 1/P(TLHG)");

  auto* est_cmd = app.add_subcommand("estimate", "Count-based match probability estimators");
  est_cmd->add_option("--method", f.method, "Estimator")
      ->required()
      ->check(CLI::IsMember(estimator_methods()));
  est_cmd->add_option("--n", f.n, "Database size");
  est_cmd->add_option("--s", f.s, "Singleton count");
  est_cmd->add_option("--d", f.d, "Doubleton count");
  est_cmd->add_option("--k", f.k, "Observations of the query profile");
  o.confidence = est_cmd->add_option("--confidence", f.confidence, "Clopper-Pearson level")
                     ->check(CLI::Range(0.0, 1.0));
  est_cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json", "tsv"}));

  auto* cmp_cmd = app.add_subcommand("compare", "Correlate SNV frequencies of two sources");
  add_data_options(cmp_cmd, f, o);
  add_source_options(cmp_cmd, f, o);
  cmp_cmd->add_option("--scatter", f.scatter, "Write log10 frequency pairs as TSV");

  auto* sum_cmd = app.add_subcommand("summarize", "Singleton and doubleton counts of a profile file");
  add_data_options(sum_cmd, f, o);
  sum_cmd->add_option("--profiles,--profile-file", f.profile_file, "One profile per line")->required();

  auto* ing_cmd = app.add_subcommand("ingest", "Filter an SNV export and write a binary cache");
  add_data_options(ing_cmd, f, o);
  ing_cmd->add_option("--snv", f.snv, "SNV TSV")->required();
  ing_cmd->add_option("--sizes", f.sizes, "TLHG sizes TSV")->required();
  ing_cmd->add_option("--name", f.name, "Source name")->required();
  ing_cmd->add_option("--out", f.out, "Cache file to write");
  o.exclude_poly = ing_cmd->add_flag("--exclude-poly-stretches", f.exclude_poly,
                                     "Drop SNVs in 303-315, 513-525, 16180-16194");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  add_data_options(serve_cmd, f, o);
  add_source_options(serve_cmd, f, o);
  o.tlhg_source = serve_cmd->add_option("--tlhg-source", f.tlhg_source,
                                        "Source whose TLHG sizes give the default P(TLHG)");
  o.tlhg_file = serve_cmd->add_option("--tlhg-file", f.tlhg_file, "Default custom TLHG weights");
  serve_cmd->add_option("--bind", f.bind, "Bind address");
  serve_cmd->add_option("--port", f.port, "Port (0 picks a free one)");
  serve_cmd->add_option("--session-ttl", f.session_ttl, "Idle seconds before a session expires");

  std::string docs_dir;
  auto* docs_cmd = app.add_subcommand("docs", "Write the OpenAPI document and JSON schemas");
  docs_cmd->add_option("--out", docs_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  // The shared option pointers refer to the last subcommand that added
  // them; point them at the subcommand that actually ran.
  auto pick = [&](CLI::App* sub, const char* name) -> CLI::Option* {
    try {
      return sub->get_option(name);
    } catch (const CLI::OptionNotFound&) {
      return nullptr;
    }
  };
  CLI::App* ran = app.get_subcommands().front();
  o.motifs = pick(ran, "--motifs");
  o.positions_file = pick(ran, "--positions-file");
  o.rcrs = pick(ran, "--rcrs");
  o.format = pick(ran, "--format");
  o.positions_mode = pick(ran, "--positions");
  o.absent_penalty = pick(ran, "--absent-penalty");
  o.confidence = pick(ran, "--confidence");
  o.tlhg_source = pick(ran, "--tlhg-source");
  o.tlhg_file = pick(ran, "--tlhg-file");
  o.exclude_poly = pick(ran, "--exclude-poly-stretches");

  try {
    if (ran == classify_cmd) return cmd_classify(f, o, out, err);
    if (ran == lr_cmd) return cmd_lr(f, o, out, err);
    if (ran == est_cmd) return cmd_estimate(f, o, out);
    if (ran == cmp_cmd) return cmd_compare(f, o, out);
    if (ran == sum_cmd) return cmd_summarize(f, o, out, err);
    if (ran == ing_cmd) return cmd_ingest(f, o, out);
    if (ran == serve_cmd) return cmd_serve(f, o, out, err);
    if (ran == docs_cmd) {
      write_api_docs(docs_dir);
      out << "wrote " << docs_dir << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}

}  // namespace mitofreq
