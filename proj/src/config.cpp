#include "rminmax/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rminmax {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
              c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

double parse_double_or_throw(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) {
    throw ConfigError("config: key '" + key + "' expects a number, got ''");
  }
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + t +
                      "'");
  }
  return v;
}

}  // namespace

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (!valid_key(key)) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": invalid key '" + key + "'");
    }
    if (cfg.values_.count(key)) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
    cfg.order_.push_back(key);
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& key) const {
  bool present = values_.count(key) != 0;
  if (present) consumed_.insert(key);
  return present;
}

std::string Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("config: missing required key '" + key + "' (" +
                      origin_ + ")");
  }
  consumed_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key) const {
  return raw(key);
}

double Config::get_double(const std::string& key) const {
  return parse_double_or_throw(key, raw(key));
}

std::int64_t Config::get_int(const std::string& key) const {
  std::string t = trim(raw(key));
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      t + "'");
  }
  return static_cast<std::int64_t>(v);
}

bool Config::get_bool(const std::string& key) const {
  std::string t = trim(raw(key));
  for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + t +
                    "'");
}

std::vector<double> Config::get_vector(const std::string& key) const {
  std::string t = raw(key);
  for (char& c : t) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double_or_throw(key, tok));
  if (out.empty()) {
    throw ConfigError("config: key '" + key +
                      "' expects a list of numbers, got '" + trim(t) + "'");
  }
  return out;
}

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
  return values_.count(key) ? raw(key) : dflt;
}

double Config::get_double(const std::string& key, double dflt) const {
  return values_.count(key) ? get_double(key) : dflt;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t dflt) const {
  return values_.count(key) ? get_int(key) : dflt;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  return values_.count(key) ? get_bool(key) : dflt;
}

std::vector<std::string> Config::keys_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& k : order_) {
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  }
  return out;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& k : order_) {
    if (!consumed_.count(k)) out.push_back(k);
  }
  return out;
}

std::vector<Vec> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open points file '" + path + "'");
  std::vector<Vec> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream row(line);
    std::vector<double> vals;
    std::string tok;
    while (row >> tok) {
      vals.push_back(parse_double_or_throw(path + ":" +
                                               std::to_string(lineno),
                                           tok));
    }
    Vec v = Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    if (!points.empty() && v.size() != points.front().size()) {
      throw ConfigError("config: points file '" + path + "' row " +
                        std::to_string(lineno) + " has " +
                        std::to_string(v.size()) + " columns, expected " +
                        std::to_string(points.front().size()));
    }
    points.push_back(std::move(v));
  }
  if (points.empty()) {
    throw ConfigError("config: points file '" + path + "' contains no rows");
  }
  return points;
}

void write_points_csv(const std::vector<Vec>& points, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write points file '" + path + "'");
  char buf[64];
  for (const Vec& p : points) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace rminmax
