#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qnls {

/// Minimal ordered JSON builder for the run reports: objects keep insertion
/// order so emitted files diff cleanly, numbers render with %.17g (exact
/// binary round-trip), and non-finite values render as null.  Writing only;
/// nothing here parses.
class JsonValue {
 public:
  JsonValue() = default;

  static JsonValue object();
  static JsonValue array();
  static JsonValue number(double value);
  static JsonValue integer(long long value);
  static JsonValue boolean(bool value);
  static JsonValue string(std::string value);
  static JsonValue null();

  /// Appends a key/value pair; valid on objects only.
  JsonValue& add(const std::string& key, JsonValue value);
  /// Appends an element; valid on arrays only.
  JsonValue& push(JsonValue value);

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };
  Kind kind_ = Kind::Null;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;

  void write(std::string& out, int indent, int depth) const;
};

}  // namespace qnls
