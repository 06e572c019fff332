#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mitofreq/reference.hpp"
#include "mitofreq/variant.hpp"

namespace mitofreq {

/// Sorted set of mitogenome positions.
class PositionSet {
 public:
  PositionSet() = default;
  explicit PositionSet(std::vector<int> positions);
  static PositionSet all();

  bool contains(int position) const;
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const std::vector<int>& values() const { return positions_; }
  bool is_subset_of(const PositionSet& other) const;

 private:
  std::vector<int> positions_;
};

struct PositionRange {
  int first = 1;
  int last = kMitogenomeLength;
  friend bool operator==(const PositionRange&, const PositionRange&) = default;
};

/// Interpretation range: closed, disjoint, sorted intervals. Overlapping
/// and adjacent input ranges are merged at construction.
class Coverage {
 public:
  static Coverage full();
  static Coverage none() { return Coverage{}; }
  static Coverage from_ranges(std::vector<PositionRange> ranges);
  /// "a-b[,c-d...]"; a bare "a" means a-a.
  static Coverage parse(std::string_view spec);

  bool contains(int position) const;
  bool empty() const { return ranges_.empty(); }
  const std::vector<PositionRange>& ranges() const { return ranges_; }
  Coverage intersect(const PositionSet& positions) const;
  std::string to_string() const;

  friend bool operator==(const Coverage&, const Coverage&) = default;

 private:
  std::vector<PositionRange> ranges_;
};

/// An immutable, canonical rCRS-relative profile.
class MitoProfile {
 public:
  MitoProfile() : coverage_(Coverage::full()) {}

  /// Validates against the reference and sorts. Throws ParseError.
  static MitoProfile create(std::vector<Variant> variants, Coverage coverage,
                            const RcrsReference& reference);

  const std::vector<Variant>& variants() const { return variants_; }
  const Coverage& coverage() const { return coverage_; }
  bool empty() const { return variants_.empty(); }
  bool contains(const Variant& v) const;

  friend bool operator==(const MitoProfile&, const MitoProfile&) = default;

 private:
  friend MitoProfile restrict(const MitoProfile&, const PositionSet&);
  MitoProfile(std::vector<Variant> variants, Coverage coverage)
      : variants_(std::move(variants)), coverage_(std::move(coverage)) {}

  std::vector<Variant> variants_;
  Coverage coverage_;
};

struct Substitution {
  int position = 0;
  char base = '\0';
  friend auto operator<=>(const Substitution&, const Substitution&) = default;
};

/// Parses a single token such as "263G", "315.1C" or "523del".
Variant parse_variant(std::string_view token, const RcrsReference& reference);

/// Whitespace-separated tokens; optional coverage spec (default full).
MitoProfile parse_profile(std::string_view text, const RcrsReference& reference,
                          std::optional<std::string_view> coverage = std::nullopt);

std::string format_profile(const MitoProfile& profile);

MitoProfile restrict(const MitoProfile& profile, const PositionSet& positions);

std::vector<Substitution> substitutions(const MitoProfile& profile);

}  // namespace mitofreq
