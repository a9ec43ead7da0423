#pragma once

#include "lattri/bigcount.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace lattri {

/// Persistent store of rectangle counts: one `m<TAB>n<TAB>count` line per rectangle
/// in `<dir>/counts.tsv`. Appends are single write(2) calls on an O_APPEND
/// descriptor, so concurrent writers never interleave within a line.
class CountCache {
 public:
  static constexpr const char* env_var = "LATTRI_CACHE_DIR";

  explicit CountCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// Directory from the environment, if set.
  static std::optional<CountCache> from_env() {
    const char* d = std::getenv(env_var);
    if (!d || !*d) return std::nullopt;
    return CountCache(d);
  }

  std::filesystem::path file() const { return dir_ / "counts.tsv"; }

  /// All records; f(m,n) = f(n,m) so keys are stored with m <= n.
  std::map<std::pair<std::int64_t, std::int64_t>, BigCount> load() const {
    std::map<std::pair<std::int64_t, std::int64_t>, BigCount> out;
    std::ifstream in(file());
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::int64_t m = 0, n = 0;
      std::string count;
      if (!(ls >> m >> n >> count)) continue;  // torn or foreign line
      try {
        out[key(m, n)] = BigCount(count);
      } catch (const std::exception&) {
      }
    }
    return out;
  }

  std::optional<BigCount> lookup(std::int64_t m, std::int64_t n) const {
    const auto all = load();
    if (auto it = all.find(key(m, n)); it != all.end()) return it->second;
    return std::nullopt;
  }

  void append(std::int64_t m, std::int64_t n, const BigCount& count) const {
    std::filesystem::create_directories(dir_);
    const std::string line = std::to_string(m) + '\t' + std::to_string(n) + '\t' + to_decimal(count) + '\n';
    const int fd = ::open(file().c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) throw std::runtime_error("cannot open cache file: " + std::string(std::strerror(errno)));
    const auto written = ::write(fd, line.data(), line.size());
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size())) throw std::runtime_error("short write to cache file");
  }

 private:
  static std::pair<std::int64_t, std::int64_t> key(std::int64_t m, std::int64_t n) {
    return m <= n ? std::pair{m, n} : std::pair{n, m};
  }

  std::filesystem::path dir_;
};

}  // namespace lattri
