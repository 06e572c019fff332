#include "mitofreq/haplogroup.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "mitofreq/error.hpp"

namespace mitofreq {

std::string_view to_string(ClassifierMode mode) {
  return mode == ClassifierMode::full ? "full" : "positions227";
}

ClassifierMode classifier_mode_from_string(std::string_view s) {
  if (s == "full" || s == "all") return ClassifierMode::full;
  if (s == "positions227" || s == "227") return ClassifierMode::positions227;
  throw DomainError("unknown classifier mode '" + std::string(s) + "'");
}

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

bool blank_or_comment(std::string_view line) {
  auto pos = line.find_first_not_of(" \t");
  return pos == std::string_view::npos || line[pos] == '#';
}

}  // namespace

MotifTable MotifTable::from_parts(std::vector<HaplogroupMotif> motifs, PositionSet positions,
                                  MotifTableOptions options) {
  if (options.require_reference_shape) {
    if (motifs.size() != 39) {
      throw ConfigError("motif table must hold 39 motifs, found " + std::to_string(motifs.size()));
    }
    if (positions.size() != 227) {
      throw ConfigError("position list must hold 227 positions, found " +
                        std::to_string(positions.size()));
    }
  }
  if (!(options.absent_penalty >= 0.0)) {
    throw ConfigError("absent-variant penalty must be non-negative");
  }
  std::set<std::string> labels;
  std::set<std::string> tlhgs;
  for (auto& m : motifs) {
    if (m.label.empty() || m.tlhg.empty()) throw ConfigError("motif with empty label or TLHG");
    if (!labels.insert(m.label).second) throw ConfigError("duplicate motif label '" + m.label + "'");
    for (const auto& v : m.variants) {
      if (!positions.contains(v.position)) {
        throw ConfigError("motif " + m.label + ": position " + std::to_string(v.position) +
                          " is not in the position list");
      }
    }
    std::sort(m.variants.begin(), m.variants.end());
    tlhgs.insert(m.tlhg);
  }
  if (tlhgs.size() < 2) throw ConfigError("motif table must span at least two TLHGs");
  // A TLHG label that is also a motif label must be that motif's own TLHG,
  // otherwise collapse would be ambiguous.
  for (const auto& m : motifs) {
    if (tlhgs.count(m.label) && m.tlhg != m.label) {
      throw ConfigError("motif " + m.label + " shares its name with a TLHG but collapses to " +
                        m.tlhg);
    }
  }

  MotifTable table;
  table.motifs_ = std::move(motifs);
  table.positions_ = std::move(positions);
  table.absent_penalty_ = options.absent_penalty;
  table.tlhgs_.assign(tlhgs.begin(), tlhgs.end());
  return table;
}

MotifTable MotifTable::parse(std::string_view motifs_text, std::string_view positions_text,
                             const RcrsReference& reference, MotifTableOptions options) {
  std::vector<int> pos;
  int lineno = 0;
  for (auto line : lines_of(positions_text)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::string s(line);
    std::size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || s.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("position list line " + std::to_string(lineno) + ": not an integer");
    }
    if (p < 1 || p > kMitogenomeLength) {
      throw ConfigError("position list line " + std::to_string(lineno) + ": out of range");
    }
    pos.push_back(p);
  }
  auto n_listed = pos.size();
  PositionSet positions(std::move(pos));
  if (positions.size() != n_listed) throw ConfigError("position list has duplicates");

  std::vector<HaplogroupMotif> motifs;
  lineno = 0;
  for (auto line : lines_of(motifs_text)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw ConfigError("motif table line " + std::to_string(lineno) +
                        ": expected LABEL<TAB>TLHG<TAB>variants");
    }
    HaplogroupMotif m;
    m.label = std::string(line.substr(0, t1));
    m.tlhg = std::string(line.substr(t1 + 1, t2 - t1 - 1));
    try {
      m.variants = parse_profile(line.substr(t2 + 1), reference).variants();
    } catch (const ParseError& e) {
      throw ConfigError("motif table line " + std::to_string(lineno) + ": " + e.what());
    }
    motifs.push_back(std::move(m));
  }
  return from_parts(std::move(motifs), std::move(positions), options);
}

MotifTable MotifTable::load(const std::filesystem::path& motifs,
                            const std::filesystem::path& positions,
                            const RcrsReference& reference, MotifTableOptions options) {
  return parse(read_file(motifs, "motif table"), read_file(positions, "position list"),
               reference, options);
}

const MotifTable& MotifTable::bundled() {
  static const MotifTable table = load(data_directory() / "motifs.tsv",
                                       data_directory() / "positions227.txt",
                                       RcrsReference::bundled());
  return table;
}

const HaplogroupMotif* MotifTable::find_motif(std::string_view label) const {
  for (const auto& m : motifs_) {
    if (m.label == label) return &m;
  }
  return nullptr;
}

bool MotifTable::is_tlhg(std::string_view label) const {
  return std::binary_search(tlhgs_.begin(), tlhgs_.end(), label);
}

const HaplogroupMotif* MotifTable::resolve(std::string_view label) const {
  const HaplogroupMotif* best = nullptr;
  for (const auto& m : motifs_) {
    if (label.substr(0, m.label.size()) == m.label &&
        (!best || m.label.size() > best->label.size())) {
      best = &m;
    }
  }
  return best;
}

std::string MotifTable::collapse(std::string_view refined_label) const {
  if (auto* m = find_motif(refined_label)) return m->tlhg;
  if (is_tlhg(refined_label)) return std::string(refined_label);
  if (auto* m = resolve(refined_label)) return m->tlhg;
  throw DomainError("unknown haplogroup label '" + std::string(refined_label) + "'");
}

std::vector<std::string> MotifTable::ancestors(std::string_view label) const {
  std::vector<std::string> chain{std::string(label)};
  if (!find_motif(label) && is_tlhg(label)) return chain;
  if (auto* m = resolve(label)) {
    if (m->label != label) chain.push_back(m->label);
    if (m->tlhg != chain.back()) chain.push_back(m->tlhg);
  } else if (!is_tlhg(label)) {
    throw DomainError("unknown haplogroup label '" + std::string(label) + "'");
  }
  return chain;
}

bool MotifTable::is_refinement(std::string_view h, std::string_view g) const {
  auto chain = ancestors(h);
  ancestors(g);  // validates g
  return std::find(chain.begin(), chain.end(), g) != chain.end();
}

std::string collapse_tlhg(std::string_view refined_label, const MotifTable& table) {
  return table.collapse(refined_label);
}

bool is_refinement(std::string_view h, std::string_view g, const MotifTable& table) {
  return table.is_refinement(h, g);
}

TlhgPrediction classify(const MitoProfile& profile, const MotifTable& table,
                        ClassifierMode mode) {
  const MitoProfile& scored =
      mode == ClassifierMode::positions227 ? restrict(profile, table.positions()) : profile;
  const auto& coverage = scored.coverage();

  bool any_covered = std::any_of(table.positions().values().begin(),
                                 table.positions().values().end(),
                                 [&](int p) { return coverage.contains(p); });
  if (!any_covered) {
    throw UnclassifiableError("profile coverage is disjoint from all motif positions");
  }

  struct Ranked {
    double score;
    int absent;
    const HaplogroupMotif* motif;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(table.motifs().size());
  TlhgPrediction out;
  for (const auto& m : table.motifs()) {
    int matched = 0;
    int absent = 0;
    for (const auto& v : m.variants) {
      if (!coverage.contains(v.position)) continue;
      if (scored.contains(v)) {
        ++matched;
      } else {
        ++absent;
      }
    }
    double score = matched - table.absent_penalty() * absent;
    out.scores[m.label] = score;
    ranked.push_back({score, absent, &m});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::forward_as_tuple(b.score, a.absent, a.motif->label) <
           std::forward_as_tuple(a.score, b.absent, b.motif->label);
  });

  out.rank1 = ranked.front().motif->tlhg;
  out.rank1_motif = ranked.front().motif->label;
  for (const auto& r : ranked) {
    if (r.motif->tlhg != out.rank1) {
      out.rank2 = r.motif->tlhg;
      out.rank2_motif = r.motif->label;
      break;
    }
  }
  return out;
}

}  // namespace mitofreq
