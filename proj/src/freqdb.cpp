#include "mitofreq/freqdb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <istream>
#include <set>
#include <sstream>
#include <tuple>

#include "mitofreq/error.hpp"
#include "mitofreq/variant.hpp"

namespace mitofreq {

namespace {

std::uint32_t snv_key(int position, char alt) {
  std::uint32_t code = 0;
  switch (alt) {
    case 'A': code = 0; break;
    case 'C': code = 1; break;
    case 'G': code = 2; break;
    case 'T': code = 3; break;
    default: code = 4; break;
  }
  return static_cast<std::uint32_t>(position) * 8u + code;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

bool getline_trimmed(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stoll(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size();
}

bool all_nucleotides(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_nucleotide);
}

}  // namespace

// ------------------------------------------------------------- SnvFrequencyDb

SnvFrequencyDb SnvFrequencyDb::create(std::string source_name, std::vector<SnvRecord> records,
                                      std::map<std::string, std::int64_t> tlhg_sizes) {
  SnvFrequencyDb db;
  db.source_name_ = std::move(source_name);
  for (const auto& [tlhg, n] : tlhg_sizes) {
    if (n < 1) throw DomainError("TLHG " + tlhg + " has non-positive sample size");
    db.total_n_ += n;
  }
  db.tlhg_sizes_ = std::move(tlhg_sizes);

  std::sort(records.begin(), records.end(), [](const SnvRecord& a, const SnvRecord& b) {
    return std::tie(a.tlhg, a.position, a.alt_base) < std::tie(b.tlhg, b.position, b.alt_base);
  });
  for (const auto& r : records) {
    auto where = std::to_string(r.position) + r.alt_base + " in " + r.tlhg;
    if (r.position < 1 || r.position > kMitogenomeLength) {
      throw DomainError("SNV position out of range: " + where);
    }
    if (!is_nucleotide(r.ref_base) || !is_nucleotide(r.alt_base) || r.ref_base == r.alt_base) {
      throw DomainError("SNV must be a single-base change: " + where);
    }
    auto size = db.tlhg_sizes_.find(r.tlhg);
    if (size == db.tlhg_sizes_.end()) throw DomainError("SNV in TLHG without a size: " + where);
    if (r.count < 0 || r.count > size->second) {
      throw DomainError("SNV count exceeds TLHG size: " + where);
    }
    auto [it, inserted] = db.index_[r.tlhg].emplace(snv_key(r.position, r.alt_base), r.count);
    if (!inserted) throw DomainError("duplicate SNV record: " + where);
  }
  db.records_ = std::move(records);
  return db;
}

std::int64_t SnvFrequencyDb::tlhg_size(const std::string& tlhg) const {
  auto it = tlhg_sizes_.find(tlhg);
  if (it == tlhg_sizes_.end()) {
    throw DomainError("unknown TLHG '" + tlhg + "' in source " + source_name_);
  }
  return it->second;
}

std::optional<std::int64_t> SnvFrequencyDb::count(int position, char alt,
                                                  const std::string& tlhg) const {
  auto t = index_.find(tlhg);
  if (t == index_.end()) return std::nullopt;
  auto it = t->second.find(snv_key(position, alt));
  if (it == t->second.end()) return std::nullopt;
  return it->second;
}

double TlhgDistribution::prob(const std::string& tlhg) const {
  auto it = probs.find(tlhg);
  return it == probs.end() ? 0.0 : it->second;
}

// ------------------------------------------------------------------ ingestion

bool in_poly_stretch(int position) {
  return (position >= 303 && position <= 315) || (position >= 513 && position <= 525) ||
         (position >= 16180 && position <= 16194);
}

namespace {

bool is_indel(const RawSnvRow& r) {
  return !all_nucleotides(r.ref) || !all_nucleotides(r.alt) || r.ref.size() != r.alt.size();
}

bool is_multi_base(const RawSnvRow& r) { return !is_indel(r) && r.ref.size() > 1; }

bool is_single_base(const RawSnvRow& r) { return !is_indel(r) && !is_multi_base(r); }

}  // namespace

std::vector<IngestFilter> ingestion_filters(std::span<const RawSnvRow> rows,
                                            IngestOptions options) {
  // Global carrier counts per (position, alt), over homoplasmic single-base
  // rows of the raw table ("at least twice globally, not within a TLHG").
  auto global = std::make_shared<std::map<std::pair<int, char>, std::int64_t>>();
  for (const auto& r : rows) {
    if (is_single_base(r) && r.homoplasmic) (*global)[{r.position, r.alt[0]}] += r.count;
  }
  std::vector<IngestFilter> filters{
      {"indel", is_indel},
      {"multi_base", is_multi_base},
      {"heteroplasmic", [](const RawSnvRow& r) { return !r.homoplasmic; }},
      {"global_count_below_2",
       [global](const RawSnvRow& r) {
         if (!is_single_base(r)) return false;
         auto it = global->find({r.position, r.alt[0]});
         return it == global->end() || it->second < 2;
       }},
      {"zero_count", [](const RawSnvRow& r) { return r.count == 0; }},
  };
  if (options.exclude_poly_stretches) {
    filters.push_back({"poly_stretch", [](const RawSnvRow& r) { return in_poly_stretch(r.position); }});
  }
  return filters;
}

IngestResult ingest(std::istream& snv_tsv, std::istream& sizes_tsv, std::string source_name,
                    IngestOptions options) {
  std::map<std::string, std::int64_t> sizes;
  {
    std::string line;
    int lineno = 0;
    while (getline_trimmed(sizes_tsv, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto f = split_tabs(line);
      if (lineno == 1 && f.size() == 2 && f[0] == "tlhg") continue;
      std::int64_t n = 0;
      if (f.size() != 2 || f[0].empty()) {
        throw ConfigError("TLHG sizes row " + std::to_string(lineno) + ": expected tlhg<TAB>n");
      }
      if (!parse_i64(f[1], n) || n < 1) {
        throw ConfigError("TLHG sizes row " + std::to_string(lineno) +
                          " column n: expected a positive integer");
      }
      if (!sizes.emplace(f[0], n).second) {
        throw ConfigError("TLHG sizes row " + std::to_string(lineno) + ": duplicate TLHG " + f[0]);
      }
    }
  }

  static const std::vector<std::string> kHeader{"position", "ref",   "alt",
                                                "tlhg",     "count", "homoplasmic"};
  std::string line;
  if (!getline_trimmed(snv_tsv, line) || split_tabs(line) != kHeader) {
    throw ConfigError("SNV table row 1: header must be position ref alt tlhg count homoplasmic");
  }

  std::vector<RawSnvRow> rows;
  int lineno = 1;
  while (getline_trimmed(snv_tsv, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_tabs(line);
    auto where = [&](const char* column) {
      return "SNV table row " + std::to_string(lineno) + " column " + column + ": ";
    };
    if (f.size() != kHeader.size()) {
      throw ConfigError("SNV table row " + std::to_string(lineno) + ": expected 6 columns, found " +
                        std::to_string(f.size()));
    }
    RawSnvRow r;
    std::int64_t pos = 0;
    if (!parse_i64(f[0], pos) || pos < 1 || pos > kMitogenomeLength) {
      throw ConfigError(where("position") + "expected an integer in [1, 16569]");
    }
    r.position = static_cast<int>(pos);
    if (f[1].empty()) throw ConfigError(where("ref") + "empty");
    if (f[2].empty()) throw ConfigError(where("alt") + "empty");
    if (f[3].empty()) throw ConfigError(where("tlhg") + "empty");
    r.ref = f[1];
    r.alt = f[2];
    r.tlhg = f[3];
    if (!parse_i64(f[4], r.count) || r.count < 0) {
      throw ConfigError(where("count") + "expected a non-negative integer");
    }
    const auto& h = f[5];
    if (h == "true" || h == "1" || h == "yes" || h == "TRUE") {
      r.homoplasmic = true;
    } else if (h == "false" || h == "0" || h == "no" || h == "FALSE") {
      r.homoplasmic = false;
    } else {
      throw ConfigError(where("homoplasmic") + "expected true/false");
    }
    auto size = sizes.find(r.tlhg);
    if (size == sizes.end()) throw ConfigError(where("tlhg") + "TLHG " + r.tlhg + " has no size");
    if (r.count > size->second) {
      throw ConfigError(where("count") + "count " + std::to_string(r.count) +
                        " exceeds TLHG size " + std::to_string(size->second));
    }
    if (r.ref == r.alt) throw ConfigError(where("alt") + "alt equals ref");
    rows.push_back(std::move(r));
  }

  auto filters = ingestion_filters(rows, options);
  IngestReport report;
  report.rows_read = rows.size();
  std::vector<SnvRecord> kept;
  for (const auto& r : rows) {
    bool drop = false;
    for (const auto& f : filters) {
      if (!f.drops(r)) continue;
      drop = true;
      if (f.name == "indel") ++report.indel;
      else if (f.name == "multi_base") ++report.multi_base;
      else if (f.name == "heteroplasmic") ++report.heteroplasmic;
      else if (f.name == "global_count_below_2") ++report.global_count_below_2;
      else if (f.name == "zero_count") ++report.zero_count;
      else if (f.name == "poly_stretch") ++report.poly_stretch;
    }
    if (drop) {
      ++report.dropped;
      continue;
    }
    kept.push_back({r.position, r.ref[0], r.alt[0], r.tlhg, r.count, true});
  }
  report.retained = kept.size();

  try {
    return {SnvFrequencyDb::create(std::move(source_name), std::move(kept), std::move(sizes)),
            report};
  } catch (const DomainError& e) {
    throw ConfigError(std::string("SNV table: ") + e.what());
  }
}

IngestResult ingest_files(const std::filesystem::path& snv_tsv,
                          const std::filesystem::path& sizes_tsv, std::string source_name,
                          IngestOptions options) {
  std::ifstream snv(snv_tsv);
  if (!snv) throw ConfigError("cannot open SNV table: " + snv_tsv.string());
  std::ifstream sizes(sizes_tsv);
  if (!sizes) throw ConfigError("cannot open TLHG sizes: " + sizes_tsv.string());
  return ingest(snv, sizes, std::move(source_name), options);
}

// -------------------------------------------------------------------- queries

std::optional<double> snv_frequency(const SnvFrequencyDb& db, int position, char alt,
                                    const std::string& tlhg) {
  auto n = db.tlhg_size(tlhg);
  auto x = db.count(position, alt, tlhg);
  if (!x || *x == 0) return std::nullopt;
  return static_cast<double>(*x) / static_cast<double>(n);
}

std::optional<double> pooled_frequency(std::span<const DbRef> dbs, int position, char alt,
                                       const std::string& tlhg) {
  if (dbs.empty()) throw DomainError("pooled frequency needs at least one database");
  std::int64_t x = 0;
  std::int64_t n = 0;
  bool known = false;
  for (const SnvFrequencyDb& db : dbs) {
    if (!db.has_tlhg(tlhg)) continue;
    known = true;
    n += db.tlhg_size(tlhg);
    x += db.count(position, alt, tlhg).value_or(0);
  }
  if (!known) throw DomainError("TLHG '" + tlhg + "' is missing from every database");
  if (x == 0) return std::nullopt;
  return static_cast<double>(x) / static_cast<double>(n);
}

TlhgDistribution tlhg_distribution(const SnvFrequencyDb& db) {
  if (db.total_n() <= 0) throw DomainError("database " + db.source_name() + " is empty");
  TlhgDistribution dist{db.source_name(), {}};
  for (const auto& [tlhg, n] : db.tlhg_sizes()) {
    dist.probs[tlhg] = static_cast<double>(n) / static_cast<double>(db.total_n());
  }
  return dist;
}

TlhgDistribution normalize_weights(const std::map<std::string, double>& weights,
                                   std::string source_name) {
  double total = 0.0;
  for (const auto& [tlhg, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("negative or invalid weight for TLHG " + tlhg);
    }
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("TLHG weights sum to zero");
  TlhgDistribution dist{std::move(source_name), {}};
  for (const auto& [tlhg, w] : weights) dist.probs[tlhg] = w / total;
  return dist;
}

TlhgDistribution read_tlhg_weights(std::istream& in, std::string source_name) {
  std::map<std::string, double> weights;
  std::string line;
  int lineno = 0;
  while (getline_trimmed(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (lineno == 1 && f.size() == 2 && f[0] == "tlhg") continue;
    if (f.size() != 2 || f[0].empty()) {
      throw DomainError("TLHG weights row " + std::to_string(lineno) + ": expected tlhg<TAB>weight");
    }
    double w = 0.0;
    std::size_t used = 0;
    try {
      w = std::stod(f[1], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != f[1].size()) {
      throw DomainError("TLHG weights row " + std::to_string(lineno) + ": weight is not a number");
    }
    if (!weights.emplace(f[0], w).second) {
      throw DomainError("TLHG weights row " + std::to_string(lineno) + ": duplicate TLHG " + f[0]);
    }
  }
  return normalize_weights(weights, std::move(source_name));
}

// ----------------------------------------------------------------- comparison

ComparisonReport compare_databases(const SnvFrequencyDb& db1, const SnvFrequencyDb& db2) {
  if (db1.records().empty() || db2.records().empty()) {
    throw DomainError("cannot compare an empty database");
  }
  ComparisonReport report;
  for (const auto& r : db1.records()) {
    if (r.count == 0) continue;
    auto other = db2.count(r.position, r.alt_base, r.tlhg);
    if (!other || *other == 0) continue;
    report.pairs.push_back(
        {r.position, r.alt_base, r.tlhg,
         static_cast<double>(r.count) / static_cast<double>(db1.tlhg_size(r.tlhg)),
         static_cast<double>(*other) / static_cast<double>(db2.tlhg_size(r.tlhg))});
  }
  report.shared_snv_count = report.pairs.size();
  if (report.pairs.size() < 2) {
    throw DomainError("correlation undefined: fewer than 2 shared SNVs");
  }

  const auto n = static_cast<double>(report.pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : report.pairs) {
    mx += std::log10(p.freq1);
    my += std::log10(p.freq2);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : report.pairs) {
    double dx = std::log10(p.freq1) - mx;
    double dy = std::log10(p.freq2) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DomainError("correlation undefined: constant log10 frequencies");
  }
  report.pearson_log10 = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return report;
}

}  // namespace mitofreq
