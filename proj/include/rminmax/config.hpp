#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rminmax/geometry.hpp"

namespace rminmax {

// Raised for malformed files, missing or duplicated keys, and values that
// fail to parse as the requested type. The message names the offending key.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key-value experiment description. Keys are dotted lowercase paths
// (problem.name, solver.epsilon, output.csv). One `key = value` pair per
// line; `#` starts a comment; blank lines are ignored. Duplicate keys are
// rejected so fixtures stay unambiguous.
class Config {
public:
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;

  // Required getters: throw ConfigError naming the key when it is absent or
  // its value does not parse as the requested type.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  // Comma- or space-separated list of numbers.
  std::vector<double> get_vector(const std::string& key) const;

  // Defaulted getters: fall back when the key is absent, still throw on a
  // present-but-unparseable value.
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;

  // Keys beginning with `prefix`, in file order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  // Every getter and has() marks its key as consumed; after a runner has
  // pulled everything it understands, leftovers are likely typos.
  std::vector<std::string> unused_keys() const;

  const std::string& origin() const { return origin_; }

private:
  std::string raw(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
  std::string origin_;
  mutable std::set<std::string> consumed_;
};

// Rows of ambient coordinates, one point per line, comma-separated. `#`
// comments and blank lines are ignored; every row must have the same width.
std::vector<Vec> read_points_csv(const std::string& path);
void write_points_csv(const std::vector<Vec>& points, const std::string& path);

}  // namespace rminmax
