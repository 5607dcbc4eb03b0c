#include "sbm/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sbm/errors.hpp"

namespace sbm {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct Sha1 {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    std::uint64_t total_bytes = 0;
    unsigned char block[64];
    std::size_t fill = 0;

    static std::uint32_t rotl(std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

    void process(const unsigned char* p) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 80; ++i) w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    void update(const void* data, std::size_t len) {
        auto p = static_cast<const unsigned char*>(data);
        total_bytes += len;
        while (len > 0) {
            std::size_t take = std::min(len, std::size_t{64} - fill);
            std::memcpy(block + fill, p, take);
            fill += take;
            p += take;
            len -= take;
            if (fill == 64) {
                process(block);
                fill = 0;
            }
        }
    }

    std::string hex_digest() {
        std::uint64_t bits = total_bytes * 8;
        unsigned char pad = 0x80;
        update(&pad, 1);
        unsigned char zero = 0;
        while (fill != 56) update(&zero, 1);
        unsigned char len_be[8];
        for (int i = 0; i < 8; ++i) len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        total_bytes -= 9;  // padding does not count toward the message length
        update(len_be, 8);
        char out[41];
        for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
        return std::string(out, 40);
    }
};

}  // namespace

std::string sha1_hex(std::string_view data) {
    Sha1 s;
    s.update(data.data(), data.size());
    return s.hex_digest();
}

std::string git_blob_sha1(std::string_view content) {
    Sha1 s;
    std::string header = "blob " + std::to_string(content.size());
    s.update(header.data(), header.size() + 1);  // includes the terminating NUL
    s.update(content.data(), content.size());
    return s.hex_digest();
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::object;
    return v;
}
JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::array;
    return v;
}
JsonValue JsonValue::str(std::string s) {
    JsonValue v;
    v.kind_ = Kind::string;
    v.sval_ = std::move(s);
    return v;
}
JsonValue JsonValue::num(double d) {
    if (!std::isfinite(d)) throw std::invalid_argument("JSON numbers must be finite");
    JsonValue v;
    v.kind_ = Kind::number;
    v.nval_ = d;
    return v;
}
JsonValue JsonValue::integer(long long i) {
    JsonValue v;
    v.kind_ = Kind::integer;
    v.ival_ = i;
    return v;
}
JsonValue JsonValue::uinteger(std::uint64_t u) {
    JsonValue v;
    v.kind_ = Kind::uinteger;
    v.uval_ = u;
    return v;
}
JsonValue JsonValue::boolean(bool b) {
    JsonValue v;
    v.kind_ = Kind::boolean;
    v.bval_ = b;
    return v;
}
JsonValue JsonValue::null() { return JsonValue(); }

JsonValue JsonValue::num_array(const std::vector<double>& vs) {
    JsonValue v = array();
    for (double d : vs) v.push(num(d));
    return v;
}

JsonValue& JsonValue::set(std::string key, JsonValue v) {
    if (kind_ != Kind::object) throw std::logic_error("JsonValue::set on a non-object");
    fields_.emplace_back(std::move(key), std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::array) throw std::logic_error("JsonValue::push on a non-array");
    items_.push_back(std::move(v));
    return *this;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

}  // namespace

void JsonValue::emit(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::boolean: out += bval_ ? "true" : "false"; break;
        case Kind::integer: out += std::to_string(ival_); break;
        case Kind::uinteger: out += std::to_string(uval_); break;
        case Kind::number: out += fmt17(nval_); break;
        case Kind::string: escape_into(out, sval_); break;
        case Kind::array:
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].emit(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "]";
            break;
        case Kind::object:
            if (fields_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                out += pad;
                escape_into(out, fields_[i].first);
                out += ": ";
                fields_[i].second.emit(out, indent, depth + 1);
                if (i + 1 < fields_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "}";
            break;
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    emit(out, indent, 0);
    out += '\n';
    return out;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return ss.str();
}

}  // namespace sbm
