#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lexpalo/corpus.hpp"

namespace lexpalo::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(LEXPALO_TEST_DATA_DIR) / name;
}

/// (id, palo, text) triples to a Corpus.
inline Corpus make_corpus(const std::vector<std::tuple<std::string, std::string, std::string>>& rows) {
  std::vector<LyricRecord> records;
  for (const auto& [id, palo, text] : rows) records.push_back({id, text, palo, {}});
  return Corpus(std::move(records));
}

/// Corpus whose documents are given per palo; ids are palo + index.
inline Corpus corpus_of(const std::vector<std::pair<std::string, std::vector<std::string>>>& palos) {
  std::vector<LyricRecord> records;
  for (const auto& [palo, texts] : palos) {
    for (std::size_t i = 0; i < texts.size(); ++i) {
      records.push_back({palo + "-" + std::to_string(i), texts[i], palo, {}});
    }
  }
  return Corpus(std::move(records));
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "lexpalo") {
    static int counter = 0;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(stamp) + "-" + std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Sets an environment variable for the current scope.
class ScopedEnv {
 public:
  ScopedEnv(const char* name, const std::string& value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old, had_ = true;
    ::setenv(name, value.c_str(), 1);
  }
  ~ScopedEnv() {
    if (had_) {
      ::setenv(name_, old_.c_str(), 1);
    } else {
      ::unsetenv(name_);
    }
  }
  ScopedEnv(const ScopedEnv&) = delete;
  ScopedEnv& operator=(const ScopedEnv&) = delete;

 private:
  const char* name_;
  std::string old_;
  bool had_ = false;
};

}  // namespace lexpalo::testing
