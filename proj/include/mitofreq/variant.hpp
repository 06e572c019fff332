#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace mitofreq {

inline constexpr int kMitogenomeLength = 16569;

enum class VariantKind : std::uint8_t { substitution, deletion, insertion };

/// One rCRS-relative difference. Field order gives the canonical sort:
/// position, then insertion index (0 for non-insertions), then kind.
struct Variant {
  int position = 0;
  int insertion_index = 0;
  VariantKind kind = VariantKind::substitution;
  char base = '\0';  // '\0' for deletions

  static Variant substitution(int position, char base) {
    return {position, 0, VariantKind::substitution, base};
  }
  static Variant deletion(int position) {
    return {position, 0, VariantKind::deletion, '\0'};
  }
  static Variant insertion(int position, int index, char base) {
    return {position, index, VariantKind::insertion, base};
  }

  bool is_substitution() const { return kind == VariantKind::substitution; }

  /// Same site and kind, ignoring the base. Two variants with the same key
  /// cannot coexist in a profile.
  bool same_key(const Variant& other) const {
    return position == other.position &&
           insertion_index == other.insertion_index && kind == other.kind;
  }

  std::string to_string() const;

  friend auto operator<=>(const Variant&, const Variant&) = default;
};

inline bool is_nucleotide(char c) {
  return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

/// IUPAC ambiguity codes other than the four nucleotides.
inline bool is_ambiguity_code(char c) {
  switch (c) {
    case 'R': case 'Y': case 'K': case 'M': case 'S': case 'W':
    case 'B': case 'D': case 'H': case 'V': case 'N':
      return true;
    default:
      return false;
  }
}

}  // namespace mitofreq
