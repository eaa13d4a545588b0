// Minimal TOML reader/writer covering the subset experiment configs use:
// [sections], key = value with strings, booleans, integers, floats and flat
// arrays, plus # comments. Keys are stored flattened as "section.key".
#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gln {

struct TomlValue {
  std::variant<bool, int64_t, double, std::string, std::vector<double>,
               std::vector<std::string>>
      data;

  bool is_string() const { return std::holds_alternative<std::string>(data); }

  double as_double() const {
    if (std::holds_alternative<double>(data)) return std::get<double>(data);
    if (std::holds_alternative<int64_t>(data))
      return static_cast<double>(std::get<int64_t>(data));
    throw std::runtime_error("toml: value is not numeric");
  }
  int64_t as_int() const {
    if (std::holds_alternative<int64_t>(data)) return std::get<int64_t>(data);
    throw std::runtime_error("toml: value is not an integer");
  }
  bool as_bool() const {
    if (std::holds_alternative<bool>(data)) return std::get<bool>(data);
    throw std::runtime_error("toml: value is not a boolean");
  }
  const std::string& as_string() const {
    if (!is_string()) throw std::runtime_error("toml: value is not a string");
    return std::get<std::string>(data);
  }
  std::vector<double> as_double_array() const {
    if (std::holds_alternative<std::vector<double>>(data))
      return std::get<std::vector<double>>(data);
    throw std::runtime_error("toml: value is not a numeric array");
  }
};

class TomlTable {
 public:
  bool contains(const std::string& key) const { return values_.count(key) > 0; }

  const TomlValue& at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::runtime_error("toml: missing key: " + key);
    return it->second;
  }

  void set(const std::string& key, TomlValue v) { values_[key] = std::move(v); }

  double get_double(const std::string& key, double fallback) const {
    return contains(key) ? at(key).as_double() : fallback;
  }
  int64_t get_int(const std::string& key, int64_t fallback) const {
    return contains(key) ? at(key).as_int() : fallback;
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return contains(key) ? at(key).as_string() : fallback;
  }
  bool get_bool(const std::string& key, bool fallback) const {
    return contains(key) ? at(key).as_bool() : fallback;
  }

  const std::map<std::string, TomlValue>& entries() const { return values_; }

 private:
  std::map<std::string, TomlValue> values_;
};

namespace detail {

inline std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline TomlValue parse_toml_scalar(const std::string& raw) {
  std::string t = strip(raw);
  if (t.empty()) throw std::runtime_error("toml: empty value");
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') throw std::runtime_error("toml: unterminated string");
    std::string out;
    for (size_t i = 1; i + 1 < t.size(); ++i) {
      if (t[i] == '\\' && i + 2 < t.size()) {
        ++i;
        switch (t[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: out += t[i];
        }
      } else {
        out += t[i];
      }
    }
    return {out};
  }
  if (t == "true") return {true};
  if (t == "false") return {false};
  // integer if it parses fully without . e E
  if (t.find_first_of(".eE") == std::string::npos ||
      (t.size() > 1 && (t[0] == '0') && (t[1] == 'x'))) {
    try {
      size_t used = 0;
      int64_t v = std::stoll(t, &used, 10);
      if (used == t.size()) return {v};
    } catch (...) {
    }
  }
  size_t used = 0;
  double d = std::stod(t, &used);
  if (used != t.size()) throw std::runtime_error("toml: cannot parse value: " + t);
  return {d};
}

}  // namespace detail

inline TomlTable parse_toml(std::istream& in) {
  TomlTable table;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments outside strings
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
      if (line[i] == '#' && !in_str) {
        line = line.substr(0, i);
        break;
      }
    }
    std::string t = detail::strip(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::runtime_error("toml: bad section header at line " + std::to_string(lineno));
      section = detail::strip(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("toml: expected key = value at line " + std::to_string(lineno));
    std::string key = detail::strip(t.substr(0, eq));
    std::string val = detail::strip(t.substr(eq + 1));
    std::string full = section.empty() ? key : section + "." + key;
    if (!val.empty() && val.front() == '[') {
      if (val.back() != ']')
        throw std::runtime_error("toml: unterminated array at line " + std::to_string(lineno));
      std::string inner = val.substr(1, val.size() - 2);
      std::vector<std::string> parts;
      std::string cur;
      bool in_str2 = false;
      for (char c : inner) {
        if (c == '"') in_str2 = !in_str2;
        if (c == ',' && !in_str2) {
          parts.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!detail::strip(cur).empty()) parts.push_back(cur);
      bool strings = false;
      for (const auto& p : parts)
        if (!detail::strip(p).empty() && detail::strip(p).front() == '"') strings = true;
      if (strings) {
        std::vector<std::string> arr;
        for (const auto& p : parts) arr.push_back(detail::parse_toml_scalar(p).as_string());
        table.set(full, {arr});
      } else {
        std::vector<double> arr;
        for (const auto& p : parts) arr.push_back(detail::parse_toml_scalar(p).as_double());
        table.set(full, {arr});
      }
    } else {
      table.set(full, detail::parse_toml_scalar(val));
    }
  }
  return table;
}

inline TomlTable parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config: " + path);
  return parse_toml(in);
}

inline TomlTable parse_toml_string(const std::string& text) {
  std::istringstream in(text);
  return parse_toml(in);
}

namespace detail {

inline std::string format_toml_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s = buf;
  // TOML floats need a decimal point or exponent; integers-as-doubles get .0
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find_first_of("0123456789") != std::string::npos)
    s += ".0";
  return s;
}

}  // namespace detail

// Writes keys grouped by section in sorted order; sectionless keys first.
inline std::string to_toml_string(const TomlTable& table) {
  std::ostringstream out;
  std::string section;
  bool first = true;
  std::vector<std::pair<std::string, const TomlValue*>> ordered;
  for (const auto& [full, value] : table.entries())
    if (full.find('.') == std::string::npos) ordered.emplace_back(full, &value);
  for (const auto& [full, value] : table.entries())
    if (full.find('.') != std::string::npos) ordered.emplace_back(full, &value);
  for (const auto& [full, value_ptr] : ordered) {
    const TomlValue& value = *value_ptr;
    size_t dot = full.rfind('.');
    std::string sec = dot == std::string::npos ? "" : full.substr(0, dot);
    std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
    if (sec != section || first) {
      if (!first) out << "\n";
      if (!sec.empty()) out << "[" << sec << "]\n";
      section = sec;
      first = false;
    }
    out << key << " = ";
    std::visit(
        [&out](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) {
            out << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, int64_t>) {
            out << v;
          } else if constexpr (std::is_same_v<T, double>) {
            out << detail::format_toml_double(v);
          } else if constexpr (std::is_same_v<T, std::string>) {
            out << '"' << v << '"';
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            out << "[";
            for (size_t i = 0; i < v.size(); ++i)
              out << (i ? ", " : "") << detail::format_toml_double(v[i]);
            out << "]";
          } else {
            out << "[";
            for (size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << '"' << v[i] << '"';
            out << "]";
          }
        },
        value.data);
    out << "\n";
  }
  return out.str();
}

}  // namespace gln
