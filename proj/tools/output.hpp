#pragma once

#include <map>
#include <string>
#include <vector>

namespace riskdiff::cli {

/// One JSON value: double, integer, boolean, or string.
struct JsonValue {
  enum class Kind { number, integer, boolean, text } kind = Kind::number;
  double num = 0.0;
  long long inum = 0;
  bool b = false;
  std::string text;

  static JsonValue of(double v) { return {Kind::number, v, 0, false, {}}; }
  static JsonValue of(int v) { return {Kind::integer, 0, v, false, {}}; }
  static JsonValue of(long long v) { return {Kind::integer, 0, v, false, {}}; }
  static JsonValue of(bool v) { return {Kind::boolean, 0, 0, v, {}}; }
  static JsonValue of(std::string v) {
    return {Kind::text, 0, 0, false, std::move(v)};
  }
};

/// Flat ordered JSON object; nested one level through dotted sections.
class JsonDoc {
 public:
  void set(const std::string& section, const std::string& key, JsonValue v);
  std::string dump() const;

 private:
  std::vector<std::string> section_order_;
  std::map<std::string, std::vector<std::pair<std::string, JsonValue>>> data_;
};

/// Doubles with 17 significant digits; strings escaped minimally.
std::string json_number(double v);

/// CSV table with a `# config:` comment header, LF endings, '.' decimals.
struct CsvTable {
  std::string config_line;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
  std::string dump() const;
};

std::string csv_number(double v);

/// Writes via a temporary file and rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace riskdiff::cli
