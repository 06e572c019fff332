#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mitofreq/profile.hpp"

namespace mitofreq {

enum class ClassifierMode { full, positions227 };

std::string_view to_string(ClassifierMode mode);
ClassifierMode classifier_mode_from_string(std::string_view s);

struct HaplogroupMotif {
  std::string label;  // refined haplogroup, e.g. "M8"
  std::string tlhg;   // collapsed top-level haplogroup, e.g. "M"
  std::vector<Variant> variants;
};

struct MotifTableOptions {
  /// Enforce the reference table shape: 39 motifs and 227 positions.
  bool require_reference_shape = true;
  /// Score penalty per expected-but-absent motif variant.
  double absent_penalty = 0.5;
};

/// The motif table and the refined-label -> TLHG collapse it induces.
///
/// Text formats:
///   motifs:    LABEL<TAB>TLHG<TAB>variant tokens   ('#' starts a comment)
///   positions: one integer per line
///
/// Every motif variant must lie on a listed position; labels are unique.
class MotifTable {
 public:
  static MotifTable load(const std::filesystem::path& motifs,
                         const std::filesystem::path& positions,
                         const RcrsReference& reference, MotifTableOptions options = {});
  static MotifTable parse(std::string_view motifs_text, std::string_view positions_text,
                          const RcrsReference& reference, MotifTableOptions options = {});
  static MotifTable from_parts(std::vector<HaplogroupMotif> motifs, PositionSet positions,
                               MotifTableOptions options = {});
  /// The bundled 39-motif table, loaded once.
  static const MotifTable& bundled();

  const std::vector<HaplogroupMotif>& motifs() const { return motifs_; }
  const PositionSet& positions() const { return positions_; }
  double absent_penalty() const { return absent_penalty_; }
  /// Sorted TLHG labels (the collapse image).
  const std::vector<std::string>& tlhgs() const { return tlhgs_; }

  const HaplogroupMotif* find_motif(std::string_view label) const;
  bool is_tlhg(std::string_view label) const;

  /// Longest motif label that is a prefix of `label`, or nullptr.
  const HaplogroupMotif* resolve(std::string_view label) const;

  /// Collapse a refined label to its TLHG; throws DomainError if unknown.
  std::string collapse(std::string_view refined_label) const;

  /// `label` and all its ancestors in the refined-label -> TLHG DAG.
  std::vector<std::string> ancestors(std::string_view label) const;

  /// True iff `g` is an ancestor of (or equal to) `h`.
  bool is_refinement(std::string_view h, std::string_view g) const;

 private:
  std::vector<HaplogroupMotif> motifs_;
  PositionSet positions_;
  double absent_penalty_ = 0.5;
  std::vector<std::string> tlhgs_;
};

struct TlhgPrediction {
  std::string rank1;
  std::string rank2;
  std::string rank1_motif;
  std::string rank2_motif;
  std::map<std::string, double> scores;  // motif label -> score

  friend bool operator==(const TlhgPrediction&, const TlhgPrediction&) = default;
};

/// Score every motif against the profile and return the two best TLHGs.
///
/// score(m) = matched(m) - penalty * absent(m), where both counts only look
/// at motif variants on covered positions. Ties go to fewer absent variants,
/// then to the lexicographically smaller label. rank2 is the best motif with
/// a TLHG different from rank1.
TlhgPrediction classify(const MitoProfile& profile, const MotifTable& table,
                        ClassifierMode mode);

std::string collapse_tlhg(std::string_view refined_label, const MotifTable& table);
bool is_refinement(std::string_view h, std::string_view g, const MotifTable& table);

}  // namespace mitofreq
