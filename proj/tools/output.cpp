#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace riskdiff::cli {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string value_text(const JsonValue& v) {
  switch (v.kind) {
    case JsonValue::Kind::number: return json_number(v.num);
    case JsonValue::Kind::integer: return std::to_string(v.inum);
    case JsonValue::Kind::boolean: return v.b ? "true" : "false";
    case JsonValue::Kind::text: return "\"" + escape(v.text) + "\"";
  }
  return "null";
}

}  // namespace

std::string json_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void JsonDoc::set(const std::string& section, const std::string& key,
                  JsonValue v) {
  if (data_.find(section) == data_.end()) section_order_.push_back(section);
  data_[section].emplace_back(key, std::move(v));
}

std::string JsonDoc::dump() const {
  std::string out = "{\n";
  for (size_t s = 0; s < section_order_.size(); ++s) {
    const auto& name = section_order_[s];
    out += "  \"" + escape(name) + "\": {";
    const auto& entries = data_.at(name);
    for (size_t i = 0; i < entries.size(); ++i) {
      out += (i ? ", " : "");
      out += "\"" + escape(entries[i].first) + "\": " +
             value_text(entries[i].second);
    }
    out += "}";
    out += (s + 1 < section_order_.size()) ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

std::string CsvTable::dump() const {
  std::string out;
  if (!config_line.empty()) out += "# config: " + config_line + "\n";
  for (size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

}  // namespace riskdiff::cli
