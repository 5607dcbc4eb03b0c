#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sbm {

// 17-significant-digit decimal form (%.17g), enough to round-trip any double.
// Every number written to an output file goes through this.
std::string fmt17(double v);

std::string sha1_hex(std::string_view data);

// SHA-1 of "blob <len>\0<content>", the id git would assign the file content.
std::string git_blob_sha1(std::string_view content);

// Append-only JSON document builder; objects keep insertion order so output
// is deterministic. Doubles are written via fmt17 and must be finite.
class JsonValue {
  public:
    JsonValue() = default;

    static JsonValue object();
    static JsonValue array();
    static JsonValue str(std::string s);
    static JsonValue num(double v);
    static JsonValue integer(long long v);
    static JsonValue uinteger(std::uint64_t v);
    static JsonValue boolean(bool b);
    static JsonValue null();
    static JsonValue num_array(const std::vector<double>& vs);

    JsonValue& set(std::string key, JsonValue v);  // object only
    JsonValue& push(JsonValue v);                  // array only

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { null, boolean, integer, uinteger, number, string, array, object };
    Kind kind_ = Kind::null;
    bool bval_ = false;
    long long ival_ = 0;
    std::uint64_t uval_ = 0;
    double nval_ = 0.0;
    std::string sval_;
    std::vector<JsonValue> items_;
    std::vector<std::pair<std::string, JsonValue>> fields_;

    void emit(std::string& out, int indent, int depth) const;
};

void ensure_directory(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace sbm
