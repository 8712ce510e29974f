#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fockscope/version.hpp"

namespace fockscope::cli {

std::string num17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t k = 0; k < size; ++k) {
    h ^= bytes[k];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return fnv1a64(bytes.data(), bytes.size());
}

std::string hex64(std::uint64_t v) {
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(v));
  return buffer;
}

void Manifest::add_file(const std::filesystem::path& root,
                        const std::filesystem::path& file) {
  entries_.emplace_back(std::filesystem::relative(file, root).generic_string(),
                        fnv1a64_file(file));
}

void Manifest::write(const std::filesystem::path& path,
                     double wall_seconds) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "fockscope run manifest v1\n";
  out << "version = " << kVersion << "\n";
  out << "command = " << command_ << "\n";
  out << "config = config_echo.ini\n";
  out << "wall_clock_seconds = " << num17(wall_seconds) << "\n";
  for (const auto& [name, checksum] : entries_) {
    out << "fnv1a64  " << hex64(checksum) << "  " << name << "\n";
  }
}

void write_kv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  if (!header.empty()) out << header << "\n";
  for (const auto& [key, value] : pairs) {
    out << key << " = " << value << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::map<std::string, std::string> read_kv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (first && !line.empty()) kv[""] = line;
      first = false;
      continue;
    }
    first = false;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace fockscope::cli
