#include "mitofreq/config.hpp"

#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "mitofreq/error.hpp"

namespace mitofreq {

namespace fs = std::filesystem;

SourceSpec SourceSpec::parse(std::string_view spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = spec.find(':', start);
    parts.emplace_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  for (const auto& p : parts) {
    if (p.empty()) throw ConfigError("bad source spec '" + std::string(spec) + "'");
  }
  SourceSpec out;
  out.name = parts[0];
  if (parts.size() == 2) {
    out.cache = parts[1];
  } else if (parts.size() == 3 || parts.size() == 4) {
    out.snv = parts[1];
    out.sizes = parts[2];
    if (parts.size() == 4) out.cache = parts[3];
  } else {
    throw ConfigError("bad source spec '" + std::string(spec) +
                      "' (expected name:snv.tsv:sizes.tsv[:cache] or name:cache)");
  }
  return out;
}

CliConfig default_config() {
  CliConfig c;
  const auto dir = data_directory();
  c.motifs = dir / "motifs.tsv";
  c.positions = dir / "positions227.txt";
  c.rcrs = dir / "rcrs.txt";
  return c;
}

void apply_config_file(CliConfig& c, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file " + path.string() + " is not a JSON object");
  // Relative paths are relative to the config file.
  const auto base = path.parent_path();
  auto file = [&](const nlohmann::json& v) {
    fs::path p = v.get<std::string>();
    return p.is_relative() ? base / p : p;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "motifs") {
        c.motifs = file(v);
      } else if (key == "positions") {
        c.positions = file(v);
      } else if (key == "rcrs") {
        c.rcrs = file(v);
      } else if (key == "sources") {
        c.sources.clear();
        for (const auto& s : v) {
          SourceSpec spec;
          spec.name = s.at("name").get<std::string>();
          if (s.contains("snv")) spec.snv = file(s.at("snv"));
          if (s.contains("sizes")) spec.sizes = file(s.at("sizes"));
          if (s.contains("cache")) spec.cache = file(s.at("cache"));
          c.sources.push_back(std::move(spec));
        }
      } else if (key == "tlhg_file") {
        c.tlhg_file = file(v);
      } else if (key == "tlhg_source") {
        c.tlhg_source = v.get<std::string>();
      } else if (key == "format") {
        c.format = v.get<std::string>();
      } else if (key == "confidence") {
        c.confidence = v.get<double>();
      } else if (key == "mode") {
        c.mode = classifier_mode_from_string(v.get<std::string>());
      } else if (key == "absent_penalty") {
        c.absent_penalty = v.get<double>();
      } else if (key == "exclude_poly_stretches") {
        c.exclude_poly_stretches = v.get<bool>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  } catch (const DomainError& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

const SnvFrequencyDb& Workspace::source(std::string_view name) const {
  for (const auto& db : dbs) {
    if (db->source_name() == name) return *db;
  }
  throw DomainError("unknown SNV source '" + std::string(name) + "'");
}

std::vector<DbRef> Workspace::sources(const std::vector<std::string>& names) const {
  if (names.empty()) return all_sources();
  std::vector<DbRef> out;
  for (const auto& n : names) out.emplace_back(source(n));
  return out;
}

std::vector<DbRef> Workspace::all_sources() const {
  std::vector<DbRef> out;
  for (const auto& db : dbs) out.emplace_back(*db);
  return out;
}

SnvFrequencyDb load_source(const SourceSpec& spec, IngestOptions options) {
  try {
    if (spec.snv.empty()) {
      auto cached = load_cache(spec.cache);
      if (cached.db.source_name() != spec.name) {
        throw ConfigError("cache " + spec.cache.string() + " holds source '" +
                          cached.db.source_name() + "', not '" + spec.name + "'");
      }
      return std::move(cached.db);
    }
    if (!spec.cache.empty()) return load_or_ingest(spec.snv, spec.sizes, spec.name, spec.cache, options);
    return ingest_files(spec.snv, spec.sizes, spec.name, options).db;
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError("source " + spec.name + ": " + e.what());
  }
}

namespace {

std::shared_ptr<Workspace> load_base(const CliConfig& c) {
  try {
    auto reference = RcrsReference::load(c.rcrs);
    MotifTableOptions opts;
    opts.absent_penalty = c.absent_penalty;
    auto table = MotifTable::load(c.motifs, c.positions, reference, opts);
    return std::make_shared<Workspace>(Workspace{std::move(reference), std::move(table), {}});
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::shared_ptr<const Workspace> load_workspace_without_sources(const CliConfig& c) {
  return load_base(c);
}

std::shared_ptr<const Workspace> load_workspace(const CliConfig& c) {
  auto ws = load_base(c);
  IngestOptions opts{c.exclude_poly_stretches};
  for (const auto& spec : c.sources) {
    for (const auto& db : ws->dbs) {
      if (db->source_name() == spec.name) throw ConfigError("duplicate source name " + spec.name);
    }
    ws->dbs.push_back(std::make_unique<SnvFrequencyDb>(load_source(spec, opts)));
  }
  return ws;
}

TlhgDistribution resolve_tlhg_distribution(const CliConfig& c, const Workspace& ws) {
  if (c.tlhg_file) {
    std::ifstream in(*c.tlhg_file);
    if (!in) throw ConfigError("cannot open TLHG weights " + c.tlhg_file->string());
    return read_tlhg_weights(in, c.tlhg_file->filename().string());
  }
  if (!c.tlhg_source.empty()) {
    for (const auto& db : ws.dbs) {
      if (db->source_name() == c.tlhg_source) return tlhg_distribution(*db);
    }
    throw ConfigError("TLHG source '" + c.tlhg_source + "' is not among the loaded sources");
  }
  if (ws.dbs.empty()) throw ConfigError("no TLHG distribution: load a source or give a weights file");
  return tlhg_distribution(*ws.dbs.front());
}

std::vector<ProfileLine> read_profile_lines(std::istream& in) {
  std::vector<ProfileLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    ProfileLine p;
    p.line_number = number;
    auto tab = line.find('\t', first);
    p.text = line.substr(first, tab == std::string::npos ? std::string::npos : tab - first);
    if (tab != std::string::npos) {
      auto cov = line.substr(tab + 1);
      if (cov.find_first_not_of(" \t") != std::string::npos) p.coverage = cov;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ProfileLine> read_profile_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file " + path.string());
  return read_profile_lines(in);
}

MitoProfile parse_profile_line(const ProfileLine& line, const RcrsReference& reference) {
  std::string_view text = line.text;
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text == ".") text = {};
  if (line.coverage) return parse_profile(text, reference, std::string_view(*line.coverage));
  return parse_profile(text, reference);
}

}  // namespace mitofreq
