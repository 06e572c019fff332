#include "mitofreq/profile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "mitofreq/error.hpp"

namespace mitofreq {

// ---------------------------------------------------------------- PositionSet

PositionSet::PositionSet(std::vector<int> positions) : positions_(std::move(positions)) {
  std::sort(positions_.begin(), positions_.end());
  positions_.erase(std::unique(positions_.begin(), positions_.end()), positions_.end());
  if (!positions_.empty() &&
      (positions_.front() < 1 || positions_.back() > kMitogenomeLength)) {
    throw DomainError("position set contains a position outside [1, 16569]");
  }
}

PositionSet PositionSet::all() {
  std::vector<int> v(kMitogenomeLength);
  for (int i = 0; i < kMitogenomeLength; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  return PositionSet(std::move(v));
}

bool PositionSet::contains(int position) const {
  return std::binary_search(positions_.begin(), positions_.end(), position);
}

bool PositionSet::is_subset_of(const PositionSet& other) const {
  return std::includes(other.positions_.begin(), other.positions_.end(),
                       positions_.begin(), positions_.end());
}

// ------------------------------------------------------------------- Coverage

Coverage Coverage::full() {
  return from_ranges({PositionRange{1, kMitogenomeLength}});
}

Coverage Coverage::from_ranges(std::vector<PositionRange> ranges) {
  for (const auto& r : ranges) {
    if (r.first < 1 || r.last > kMitogenomeLength || r.first > r.last) {
      throw ParseError(ParseError::Kind::bad_coverage,
                       std::to_string(r.first) + "-" + std::to_string(r.last),
                       "invalid coverage range " + std::to_string(r.first) + "-" +
                           std::to_string(r.last));
    }
  }
  std::sort(ranges.begin(), ranges.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Coverage out;
  for (const auto& r : ranges) {
    if (!out.ranges_.empty() && r.first <= out.ranges_.back().last + 1) {
      out.ranges_.back().last = std::max(out.ranges_.back().last, r.last);
    } else {
      out.ranges_.push_back(r);
    }
  }
  return out;
}

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty() || !std::all_of(s.begin(), s.end(),
                                [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return false;
  }
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range || v > 1'000'000'000LL) {
    out = -1;  // caller reports as out of range
    return true;
  }
  if (ec != std::errc() || ptr != s.data() + s.size()) return false;
  out = static_cast<int>(v);
  return true;
}

std::vector<std::string_view> split(std::string_view s, auto is_sep) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_sep(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_sep(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Coverage Coverage::parse(std::string_view spec) {
  auto bad = [&](std::string_view piece) {
    return ParseError(ParseError::Kind::bad_coverage, std::string(piece),
                      "malformed coverage range '" + std::string(piece) + "'");
  };
  std::vector<PositionRange> ranges;
  auto pieces = split(spec, [](char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); });
  if (pieces.empty()) throw bad(spec);
  for (auto piece : pieces) {
    auto dash = piece.find('-');
    int a = 0, b = 0;
    if (dash == std::string_view::npos) {
      if (!parse_int(piece, a)) throw bad(piece);
      b = a;
    } else if (!parse_int(piece.substr(0, dash), a) || !parse_int(piece.substr(dash + 1), b)) {
      throw bad(piece);
    }
    ranges.push_back({a, b});
  }
  return from_ranges(std::move(ranges));
}

bool Coverage::contains(int position) const {
  auto it = std::upper_bound(ranges_.begin(), ranges_.end(), position,
                             [](int p, const PositionRange& r) { return p < r.first; });
  return it != ranges_.begin() && std::prev(it)->last >= position;
}

Coverage Coverage::intersect(const PositionSet& positions) const {
  Coverage out;
  for (int p : positions.values()) {
    if (!contains(p)) continue;
    if (!out.ranges_.empty() && out.ranges_.back().last + 1 == p) {
      out.ranges_.back().last = p;
    } else {
      out.ranges_.push_back({p, p});
    }
  }
  return out;
}

std::string Coverage::to_string() const {
  std::string out;
  for (const auto& r : ranges_) {
    if (!out.empty()) out += ',';
    out += std::to_string(r.first) + "-" + std::to_string(r.last);
  }
  return out;
}

// ---------------------------------------------------------------- MitoProfile

namespace {

void check_reference(const Variant& v, const RcrsReference& reference) {
  if (v.position < 1 || v.position > kMitogenomeLength) {
    auto tok = v.to_string();
    throw ParseError(ParseError::Kind::out_of_range, tok,
                     "position out of range in token '" + tok + "'");
  }
  if (v.kind != VariantKind::deletion && !is_nucleotide(v.base)) {
    auto tok = v.to_string();
    throw ParseError(ParseError::Kind::malformed, tok, "invalid base in token '" + tok + "'");
  }
  if (v.kind == VariantKind::insertion && v.insertion_index < 1) {
    auto tok = v.to_string();
    throw ParseError(ParseError::Kind::malformed, tok,
                     "insertion index must be positive in token '" + tok + "'");
  }
  if (v.is_substitution() && reference.base_at(v.position) == v.base) {
    auto tok = v.to_string();
    throw ParseError(ParseError::Kind::reference_base, tok,
                     "substitution equals the rCRS base in token '" + tok + "'");
  }
}

}  // namespace

MitoProfile MitoProfile::create(std::vector<Variant> variants, Coverage coverage,
                                const RcrsReference& reference) {
  for (const auto& v : variants) check_reference(v, reference);
  std::sort(variants.begin(), variants.end());
  for (std::size_t i = 1; i < variants.size(); ++i) {
    if (variants[i].same_key(variants[i - 1])) {
      auto tok = variants[i].to_string();
      throw ParseError(ParseError::Kind::duplicate, tok,
                       "duplicate variant site in token '" + tok + "'");
    }
  }
  for (const auto& v : variants) {
    if (!coverage.contains(v.position)) {
      auto tok = v.to_string();
      throw ParseError(ParseError::Kind::outside_coverage, tok,
                       "token '" + tok + "' lies outside the coverage " + coverage.to_string());
    }
  }
  return MitoProfile(std::move(variants), std::move(coverage));
}

bool MitoProfile::contains(const Variant& v) const {
  return std::binary_search(variants_.begin(), variants_.end(), v);
}

// -------------------------------------------------------------------- parsing

Variant parse_variant(std::string_view token, const RcrsReference& reference) {
  const std::string tok(token);
  auto fail = [&](ParseError::Kind kind, const std::string& why) {
    return ParseError(kind, tok, why + " in token '" + tok + "'");
  };

  if (!token.empty() && token.back() == '?') {
    throw fail(ParseError::Kind::uncertain_call, "uncertain call");
  }
  std::size_t i = 0;
  while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
  int position = 0;
  if (i == 0 || !parse_int(token.substr(0, i), position)) {
    throw fail(ParseError::Kind::malformed, "malformed token");
  }
  if (position < 1 || position > kMitogenomeLength) {
    throw fail(ParseError::Kind::out_of_range, "position out of range");
  }
  auto rest = token.substr(i);

  auto read_base = [&](std::string_view s) -> char {
    if (s.size() == 1 && is_nucleotide(s[0])) return s[0];
    if (s.size() == 1 && is_ambiguity_code(s[0])) {
      throw fail(ParseError::Kind::uncertain_call, "ambiguous base");
    }
    throw fail(ParseError::Kind::malformed, "malformed token");
  };

  Variant v;
  if (rest == "del") {
    v = Variant::deletion(position);
  } else if (!rest.empty() && rest.front() == '.') {
    std::size_t j = 1;
    while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j]))) ++j;
    int index = 0;
    if (j == 1 || !parse_int(rest.substr(1, j - 1), index) || index < 1) {
      throw fail(ParseError::Kind::malformed, "malformed insertion index");
    }
    v = Variant::insertion(position, index, read_base(rest.substr(j)));
  } else {
    v = Variant::substitution(position, read_base(rest));
  }
  check_reference(v, reference);
  return v;
}

MitoProfile parse_profile(std::string_view text, const RcrsReference& reference,
                          std::optional<std::string_view> coverage) {
  std::vector<Variant> variants;
  for (auto tok : split(text, [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; })) {
    variants.push_back(parse_variant(tok, reference));
  }
  auto cov = coverage ? Coverage::parse(*coverage) : Coverage::full();
  return MitoProfile::create(std::move(variants), std::move(cov), reference);
}

std::string format_profile(const MitoProfile& profile) {
  std::string out;
  for (const auto& v : profile.variants()) {
    if (!out.empty()) out += ' ';
    out += v.to_string();
  }
  return out;
}

MitoProfile restrict(const MitoProfile& profile, const PositionSet& positions) {
  std::vector<Variant> kept;
  for (const auto& v : profile.variants()) {
    if (positions.contains(v.position)) kept.push_back(v);
  }
  return MitoProfile(std::move(kept), profile.coverage().intersect(positions));
}

std::vector<Substitution> substitutions(const MitoProfile& profile) {
  std::vector<Substitution> out;
  for (const auto& v : profile.variants()) {
    if (v.is_substitution()) out.push_back({v.position, v.base});
  }
  return out;
}

}  // namespace mitofreq
