#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mitofreq/freqdb.hpp"
#include "mitofreq/haplogroup.hpp"
#include "mitofreq/lr_engine.hpp"
#include "mitofreq/profile.hpp"
#include "mitofreq/reference.hpp"

namespace mitofreq {

/// One SNV source: either a TSV pair (optionally cached) or a cache file.
struct SourceSpec {
  std::string name;
  std::filesystem::path snv;
  std::filesystem::path sizes;
  std::filesystem::path cache;

  /// "name:snv.tsv:sizes.tsv", "name:snv.tsv:sizes.tsv:cache.mfq" or
  /// "name:cache.mfq".
  static SourceSpec parse(std::string_view spec);
};

struct CliConfig {
  std::filesystem::path motifs;
  std::filesystem::path positions;
  std::filesystem::path rcrs;
  std::vector<SourceSpec> sources;
  std::optional<std::filesystem::path> tlhg_file;
  std::string tlhg_source;  // loaded source whose TLHG sizes give P(TLHG)
  std::string format = "text";
  double confidence = 0.95;
  ClassifierMode mode = ClassifierMode::full;
  double absent_penalty = 0.5;
  bool exclude_poly_stretches = false;
};

/// Paths to the bundled data files, everything else defaulted.
CliConfig default_config();

/// Overlay a JSON config file. Keys: motifs, positions, rcrs, sources
/// ([{name, snv, sizes, cache}]), tlhg_file, tlhg_source, format,
/// confidence, mode, absent_penalty, exclude_poly_stretches.
void apply_config_file(CliConfig& config, const std::filesystem::path& path);

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "MITOFREQ_CONFIG";

/// Everything loaded and validated from a config. Immutable and shareable.
struct Workspace {
  RcrsReference reference;
  MotifTable table;
  std::vector<std::unique_ptr<SnvFrequencyDb>> dbs;

  const SnvFrequencyDb& source(std::string_view name) const;
  std::vector<DbRef> sources(const std::vector<std::string>& names) const;
  std::vector<DbRef> all_sources() const;
};

/// Loads reference, motif table and sources. Any bad file is a ConfigError.
std::shared_ptr<const Workspace> load_workspace(const CliConfig& config);
/// Reference and motif table only.
std::shared_ptr<const Workspace> load_workspace_without_sources(const CliConfig& config);

SnvFrequencyDb load_source(const SourceSpec& spec, IngestOptions options);

/// TLHG distribution per config: the weights file if given, otherwise the
/// named source (or the first loaded source).
TlhgDistribution resolve_tlhg_distribution(const CliConfig& config, const Workspace& ws);

/// One profile per line: "variants[<TAB>coverage]". Blank lines and lines
/// starting with '#' are skipped; "." stands for the reference profile.
struct ProfileLine {
  std::size_t line_number = 0;
  std::string text;
  std::optional<std::string> coverage;
};
std::vector<ProfileLine> read_profile_lines(std::istream& in);
std::vector<ProfileLine> read_profile_file(const std::filesystem::path& path);

MitoProfile parse_profile_line(const ProfileLine& line, const RcrsReference& reference);

}  // namespace mitofreq
