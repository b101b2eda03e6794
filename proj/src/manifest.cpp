#include "lrcare/manifest.hpp"

#include <fstream>
#include <sstream>

#include "lrcare/matrix_market.hpp"

namespace lrcare {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Manifest Manifest::parse(const std::string& text, std::filesystem::path base_dir) {
  Manifest m;
  m.base_dir_ = std::move(base_dir);
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("manifest line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string::npos)
        throw ConfigError("manifest line " + std::to_string(lineno) + ": unterminated string");
      value = value.substr(1, close - 1);
    } else if (const auto hash = value.find('#'); hash != std::string::npos) {
      value = trim(value.substr(0, hash));
    }
    if (key.empty())
      throw ConfigError("manifest line " + std::to_string(lineno) + ": empty key");
    m.entries_[key] = value;
  }
  return m;
}

Manifest Manifest::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (const auto& [k, v] : entries_) out << k << " = \"" << v << "\"\n";
}

std::optional<std::string> Manifest::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::filesystem::path Manifest::resolve(const std::string& key) const {
  auto v = get(key);
  if (!v) throw ConfigError("manifest is missing key '" + key + "'");
  std::filesystem::path p(*v);
  return p.is_absolute() ? p : base_dir_ / p;
}

CareProblem load_problem(const Manifest& manifest) {
  auto load = [&](const std::string& key) {
    auto path = manifest.resolve(key);
    if (!std::filesystem::exists(path))
      throw ConfigError("matrix file for '" + key + "' not found: " + path.string());
    return read_matrix_market(path);
  };
  MarketMatrix a = load("A");
  MarketMatrix c = load("C");
  MatrixXc b(a.rows(), 0);
  if (manifest.contains("B")) b = load("B").dense();
  std::optional<SparseXc> e;
  if (manifest.contains("E")) e = load("E").values;
  return CareProblem::assemble(a.values, std::move(b), c.dense(), std::move(e));
}

}  // namespace lrcare
