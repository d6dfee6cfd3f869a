// Minimal TOML subset: flat [table] sections of key = value lines, where a
// value is a string, integer, float, boolean, or a homogeneous array of
// numbers or strings. Enough for declarative experiment configs; parse
// failures carry line and column.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace covertctl::toml {

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct Value {
  enum class Kind { Integer, Float, String, Boolean, NumberArray, StringArray };

  Kind kind = Kind::Integer;
  std::int64_t integer = 0;
  double real = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<double> numbers;
  std::vector<std::string> strings;

  bool is_number() const { return kind == Kind::Integer || kind == Kind::Float; }
  double as_number() const;  // Integer or Float, else throws
};

using Table = std::map<std::string, Value>;

struct Document {
  std::map<std::string, Table> tables;  // key "" holds top-level entries

  const Value* find(const std::string& table, const std::string& key) const;
};

/// Parses a whole config. Throws ParseError.
Document parse(std::string_view text);

/// Applies one "table.key=value" override on top of a parsed document.
/// Throws ParseError (line 0) on malformed input.
void apply_override(Document& doc, const std::string& assignment);

}  // namespace covertctl::toml
