#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "lrcare/problem.hpp"

namespace lrcare {

/// A flat `key = value` text file. Lines starting with '#' are comments,
/// values may be double-quoted. Relative paths resolve against the
/// manifest's directory.
class Manifest {
 public:
  static Manifest parse(const std::string& text, std::filesystem::path base_dir = {});
  static Manifest read(const std::filesystem::path& path);

  void write(const std::filesystem::path& path) const;

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }
  std::filesystem::path resolve(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::map<std::string, std::string> entries_;
  std::filesystem::path base_dir_;
};

/// Reads the matrices named by keys A, B (optional), C and E (optional).
CareProblem load_problem(const Manifest& manifest);

}  // namespace lrcare
