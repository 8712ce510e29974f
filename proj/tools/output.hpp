#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fockscope::cli {

/// 17-significant-digit decimal rendering; non-finite values become the
/// literal token "inf" so downstream tools can tell divergence from merely
/// large numbers.
std::string num17(double v);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

/// Per-run manifest: toolkit version, command, wall clock and a checksum
/// line for every data file the run produced. The checksum list is what
/// determinism comparisons key on.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  /// Record `file` (checksummed now) under its path relative to `root`.
  void add_file(const std::filesystem::path& root,
                const std::filesystem::path& file);

  void write(const std::filesystem::path& path, double wall_seconds) const;

  const std::vector<std::pair<std::string, std::uint64_t>>& entries() const {
    return entries_;
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::uint64_t>> entries_;
};

/// Plain-text `key = value` record with a versioned header line.
void write_kv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::pair<std::string, std::string>>& pairs);

/// Parse the record back; the header line is returned under the key "".
std::map<std::string, std::string> read_kv(const std::filesystem::path& path);

}  // namespace fockscope::cli
