#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mitofreq {

struct SnvRecord {
  int position = 0;
  char ref_base = '\0';
  char alt_base = '\0';
  std::string tlhg;
  std::int64_t count = 0;  // carriers of the alt base within the TLHG
  bool homoplasmic = true;

  friend bool operator==(const SnvRecord&, const SnvRecord&) = default;
};

/// Per-TLHG SNV counts for one source database. Immutable once built.
class SnvFrequencyDb {
 public:
  /// Validates: single-base ref != alt, count <= TLHG size, every record's
  /// TLHG has a size, unique (position, alt, TLHG). Throws DomainError.
  static SnvFrequencyDb create(std::string source_name, std::vector<SnvRecord> records,
                               std::map<std::string, std::int64_t> tlhg_sizes);

  const std::string& source_name() const { return source_name_; }
  /// Sorted by (TLHG, position, alt).
  const std::vector<SnvRecord>& records() const { return records_; }
  const std::map<std::string, std::int64_t>& tlhg_sizes() const { return tlhg_sizes_; }
  std::int64_t total_n() const { return total_n_; }

  bool has_tlhg(const std::string& tlhg) const { return tlhg_sizes_.count(tlhg) != 0; }
  std::int64_t tlhg_size(const std::string& tlhg) const;
  /// Carrier count, or nullopt when the SNV was not recorded in the TLHG.
  std::optional<std::int64_t> count(int position, char alt, const std::string& tlhg) const;

  friend bool operator==(const SnvFrequencyDb& a, const SnvFrequencyDb& b) {
    return a.source_name_ == b.source_name_ && a.records_ == b.records_ &&
           a.tlhg_sizes_ == b.tlhg_sizes_;
  }

 private:
  std::string source_name_;
  std::vector<SnvRecord> records_;
  std::map<std::string, std::int64_t> tlhg_sizes_;
  std::int64_t total_n_ = 0;
  std::map<std::string, std::unordered_map<std::uint32_t, std::int64_t>> index_;
};

using DbRef = std::reference_wrapper<const SnvFrequencyDb>;

struct TlhgDistribution {
  std::string source_name;
  std::map<std::string, double> probs;

  /// Probability of `tlhg`, 0 when absent.
  double prob(const std::string& tlhg) const;
  friend bool operator==(const TlhgDistribution&, const TlhgDistribution&) = default;
};

struct IngestOptions {
  /// Drop SNVs in the poly-C stretches 303-315, 513-525 and 16180-16194.
  bool exclude_poly_stretches = false;
};

/// Rows failing each filter. A row can fail several filters; `dropped`
/// counts each dropped row once.
struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t retained = 0;
  std::size_t dropped = 0;
  std::size_t indel = 0;
  std::size_t multi_base = 0;
  std::size_t heteroplasmic = 0;
  std::size_t global_count_below_2 = 0;
  std::size_t zero_count = 0;
  std::size_t poly_stretch = 0;
};

/// One row of the SNV TSV before filtering.
struct RawSnvRow {
  int position = 0;
  std::string ref;
  std::string alt;
  std::string tlhg;
  std::int64_t count = 0;
  bool homoplasmic = true;
};

/// A named drop predicate. Predicates only look at the row and at
/// statistics of the raw table, so they commute.
struct IngestFilter {
  std::string name;
  std::function<bool(const RawSnvRow&)> drops;
};

/// indel, multi_base, heteroplasmic, global_count_below_2, zero_count and,
/// when enabled, poly_stretch.
std::vector<IngestFilter> ingestion_filters(std::span<const RawSnvRow> rows,
                                            IngestOptions options);

struct IngestResult {
  SnvFrequencyDb db;
  IngestReport report;
};

/// SNV TSV header: position ref alt tlhg count homoplasmic
/// TLHG sizes TSV:  tlhg n  (header optional)
IngestResult ingest(std::istream& snv_tsv, std::istream& sizes_tsv, std::string source_name,
                    IngestOptions options = {});
IngestResult ingest_files(const std::filesystem::path& snv_tsv,
                          const std::filesystem::path& sizes_tsv, std::string source_name,
                          IngestOptions options = {});

bool in_poly_stretch(int position);

/// count / TLHG size, or nullopt when unseen. Throws on unknown TLHG.
std::optional<double> snv_frequency(const SnvFrequencyDb& db, int position, char alt,
                                    const std::string& tlhg);

/// Size-weighted pooling: sum of counts over sum of TLHG sizes, across the
/// databases that know the TLHG. nullopt if no database saw the SNV.
std::optional<double> pooled_frequency(std::span<const DbRef> dbs, int position, char alt,
                                       const std::string& tlhg);

TlhgDistribution tlhg_distribution(const SnvFrequencyDb& db);

/// Normalize non-negative weights; rejects negative weights and a zero sum.
TlhgDistribution normalize_weights(const std::map<std::string, double>& weights,
                                   std::string source_name);
/// "tlhg<TAB>weight" rows, header optional.
TlhgDistribution read_tlhg_weights(std::istream& in, std::string source_name);

struct ComparisonPair {
  int position = 0;
  char alt = '\0';
  std::string tlhg;
  double freq1 = 0.0;
  double freq2 = 0.0;
};

struct ComparisonReport {
  std::size_t shared_snv_count = 0;
  double pearson_log10 = 0.0;
  std::vector<ComparisonPair> pairs;
};

/// Pearson correlation of log10 frequencies over SNVs present in both.
ComparisonReport compare_databases(const SnvFrequencyDb& db1, const SnvFrequencyDb& db2);

// Binary cache -------------------------------------------------------------

inline constexpr std::uint32_t kCacheSchemaVersion = 1;

/// CRC-32 of a file's bytes.
std::uint32_t file_checksum(const std::filesystem::path& path);

void save_cache(const SnvFrequencyDb& db, const std::filesystem::path& path,
                std::uint32_t source_checksum);

struct CachedDb {
  SnvFrequencyDb db;
  std::uint32_t source_checksum = 0;
};

/// Throws ConfigError on a bad magic, schema version or payload checksum.
CachedDb load_cache(const std::filesystem::path& path);

/// CRC-32 over the SNV file, the sizes file and the ingestion options, so a
/// cache built under other options does not match.
std::uint32_t source_checksum(const std::filesystem::path& snv_tsv,
                              const std::filesystem::path& sizes_tsv, IngestOptions options);

/// Use `cache` when it matches the sources, otherwise ingest the TSVs and
/// rewrite it. The TSVs stay the ground truth.
SnvFrequencyDb load_or_ingest(const std::filesystem::path& snv_tsv,
                              const std::filesystem::path& sizes_tsv, std::string source_name,
                              const std::filesystem::path& cache, IngestOptions options = {});

}  // namespace mitofreq
