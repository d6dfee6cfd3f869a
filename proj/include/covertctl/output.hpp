// Deterministic JSON and CSV emission. Doubles are written with 17
// significant digits so every serialized value round-trips exactly and
// repeated runs produce byte-identical files.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace covertctl {

/// %.17g rendering of a double.
std::string format_double(double v);

/// Append-only JSON builder with insertion-ordered keys.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& null();

  /// key + scalar in one call.
  template <typename T>
  JsonWriter& field(const std::string& name, const T& v) {
    key(name);
    return value(v);
  }

  const std::string& str() const { return out_; }

 private:
  void separate();
  std::string out_;
  std::vector<bool> needs_comma_;
  bool pending_key_ = false;
};

std::string json_escape(const std::string& s);
std::string csv_field(const std::string& s);

}  // namespace covertctl
