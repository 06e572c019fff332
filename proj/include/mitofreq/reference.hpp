#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mitofreq {

/// The 16,569-base revised Cambridge Reference Sequence.
///
/// File format: one line of bases, then a line `crc32 <8 hex digits>`
/// holding the zlib CRC-32 of the base line. Position 3107 is the
/// conventional `N` placeholder; every other position is A, C, G or T.
class RcrsReference {
 public:
  static RcrsReference load(const std::filesystem::path& path);
  static RcrsReference parse(std::string_view text);

  /// Reference loaded once from the bundled data directory.
  static const RcrsReference& bundled();

  /// 1-based position; throws DomainError outside [1, 16569].
  char base_at(int position) const;
  const std::string& bases() const { return bases_; }

 private:
  explicit RcrsReference(std::string bases) : bases_(std::move(bases)) {}
  std::string bases_;
};

/// Directory with rcrs.txt, motifs.tsv and positions227.txt. Honors the
/// MITOFREQ_DATA_DIR environment variable, else the build-time location.
std::filesystem::path data_directory();

}  // namespace mitofreq
