#include "covertctl/toml.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace covertctl::toml {
namespace {

struct Cursor {
  std::string_view line;
  int line_no = 0;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_no, static_cast<int>(pos) + 1, what);
  }
  bool done() const { return pos >= line.size(); }
  char peek() const { return line[pos]; }
  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
};

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_bare_key(Cursor& cur) {
  cur.skip_ws();
  const std::size_t start = cur.pos;
  while (!cur.done() && is_bare_key_char(cur.peek())) ++cur.pos;
  if (cur.pos == start) cur.fail("expected a key");
  return std::string(cur.line.substr(start, cur.pos - start));
}

std::string parse_string(Cursor& cur) {
  ++cur.pos;  // opening quote
  std::string out;
  while (!cur.done()) {
    char c = cur.line[cur.pos++];
    if (c == '"') return out;
    if (c == '\\') {
      if (cur.done()) cur.fail("dangling escape in string");
      char e = cur.line[cur.pos++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        default: cur.fail("unsupported escape in string");
      }
    } else {
      out += c;
    }
  }
  cur.fail("unterminated string");
}

Value parse_scalar_token(Cursor& cur, std::string_view token) {
  Value v;
  if (token == "true" || token == "false") {
    v.kind = Value::Kind::Boolean;
    v.boolean = token == "true";
    return v;
  }
  const std::string text(token);
  const bool looks_float = text.find_first_of(".eE") != std::string::npos;
  char* end = nullptr;
  if (!looks_float) {
    errno = 0;
    const long long parsed = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() + text.size() && errno == 0) {
      v.kind = Value::Kind::Integer;
      v.integer = parsed;
      return v;
    }
  }
  errno = 0;
  const double parsed = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE) {
    cur.fail("malformed value '" + text + "'");
  }
  v.kind = Value::Kind::Float;
  v.real = parsed;
  return v;
}

std::string_view take_token(Cursor& cur, std::string_view stoppers) {
  const std::size_t start = cur.pos;
  while (!cur.done() && stoppers.find(cur.peek()) == std::string_view::npos &&
         cur.peek() != ' ' && cur.peek() != '\t') {
    ++cur.pos;
  }
  return cur.line.substr(start, cur.pos - start);
}

Value parse_array(Cursor& cur) {
  ++cur.pos;  // opening bracket
  Value v;
  bool first = true;
  bool any_string = false;
  bool any_number = false;
  for (;;) {
    cur.skip_ws();
    if (cur.done()) cur.fail("unterminated array");
    if (cur.peek() == ']') {
      ++cur.pos;
      break;
    }
    if (!first) {
      if (cur.peek() != ',') cur.fail("expected ',' in array");
      ++cur.pos;
      cur.skip_ws();
      if (!cur.done() && cur.peek() == ']') {  // trailing comma
        ++cur.pos;
        break;
      }
    }
    first = false;
    if (cur.done()) cur.fail("unterminated array");
    if (cur.peek() == '"') {
      any_string = true;
      v.strings.push_back(parse_string(cur));
    } else {
      any_number = true;
      const Value elem = parse_scalar_token(cur, take_token(cur, ",]"));
      if (!elem.is_number()) cur.fail("array elements must be numbers or strings");
      v.numbers.push_back(elem.as_number());
    }
  }
  if (any_string && any_number) cur.fail("mixed array element types");
  v.kind = any_string ? Value::Kind::StringArray : Value::Kind::NumberArray;
  return v;
}

Value parse_value(Cursor& cur) {
  cur.skip_ws();
  if (cur.done()) cur.fail("expected a value");
  if (cur.peek() == '"') {
    Value v;
    v.kind = Value::Kind::String;
    v.text = parse_string(cur);
    return v;
  }
  if (cur.peek() == '[') return parse_array(cur);
  return parse_scalar_token(cur, take_token(cur, ""));
}

// Strips a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

double Value::as_number() const {
  if (kind == Kind::Integer) return static_cast<double>(integer);
  if (kind == Kind::Float) return real;
  throw std::runtime_error("config value is not a number");
}

const Value* Document::find(const std::string& table,
                            const std::string& key) const {
  const auto t = tables.find(table);
  if (t == tables.end()) return nullptr;
  const auto k = t->second.find(key);
  if (k == t->second.end()) return nullptr;
  return &k->second;
}

Document parse(std::string_view text) {
  Document doc;
  std::string current;  // current table name
  int line_no = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    const std::size_t nl = text.find('\n', offset);
    std::string_view raw = text.substr(
        offset, nl == std::string_view::npos ? text.size() - offset : nl - offset);
    offset = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    Cursor cur{rstrip(strip_comment(raw)), line_no, 0};
    cur.skip_ws();
    if (cur.done()) continue;

    if (cur.peek() == '[') {
      ++cur.pos;
      const std::string name = parse_bare_key(cur);
      cur.skip_ws();
      if (cur.done() || cur.peek() != ']') cur.fail("expected ']'");
      ++cur.pos;
      cur.skip_ws();
      if (!cur.done()) cur.fail("trailing characters after table header");
      current = name;
      doc.tables[current];  // materialize even if empty
      continue;
    }

    const std::string key = parse_bare_key(cur);
    cur.skip_ws();
    if (cur.done() || cur.peek() != '=') cur.fail("expected '=' after key");
    ++cur.pos;
    Value value = parse_value(cur);
    cur.skip_ws();
    if (!cur.done()) cur.fail("trailing characters after value");
    doc.tables[current][key] = std::move(value);
  }
  return doc;
}

void apply_override(Document& doc, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ParseError(0, 1, "override must look like table.key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::size_t dot = path.rfind('.');
  const std::string table = dot == std::string::npos ? "" : path.substr(0, dot);
  const std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
  if (key.empty()) throw ParseError(0, 1, "override key must not be empty");
  Cursor cur{std::string_view(assignment).substr(eq + 1), 0, 0};
  Value value = parse_value(cur);
  cur.skip_ws();
  if (!cur.done()) {
    throw ParseError(0, static_cast<int>(eq + cur.pos) + 2,
                     "trailing characters in override value");
  }
  doc.tables[table][key] = std::move(value);
}

}  // namespace covertctl::toml
