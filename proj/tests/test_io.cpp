#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include "sbm/io.hpp"

using namespace sbm;

TEST_CASE("fmt17 writes 17 significant digits") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(1.0) == "1");
    CHECK(fmt17(2.25) == "2.25");
    CHECK(fmt17(-1.0 / 3.0) == "-0.33333333333333331");
    CHECK(fmt17(1e300) == "1.0000000000000001e+300");
    // round trip: parsing the text recovers the exact double
    double v = 0.22119921692859512;
    CHECK(std::stod(fmt17(v)) == v);
}

TEST_CASE("sha1 known vectors") {
    CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(sha1_hex("The quick brown fox jumps over the lazy dog") ==
          "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
}

TEST_CASE("git blob hashing matches git hash-object") {
    CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("json builder emits deterministic insertion-ordered output") {
    JsonValue doc = JsonValue::object();
    doc.set("name", JsonValue::str("run"));
    doc.set("count", JsonValue::integer(-3));
    doc.set("big", JsonValue::uinteger(18446744073709551615ull));
    doc.set("ok", JsonValue::boolean(true));
    doc.set("nothing", JsonValue::null());
    doc.set("xs", JsonValue::num_array({1.0, 0.5}));
    JsonValue arr = JsonValue::array();
    arr.push(JsonValue::num(2.25));
    doc.set("nested", arr);

    const std::string want =
        "{\n"
        "  \"name\": \"run\",\n"
        "  \"count\": -3,\n"
        "  \"big\": 18446744073709551615,\n"
        "  \"ok\": true,\n"
        "  \"nothing\": null,\n"
        "  \"xs\": [\n"
        "    1,\n"
        "    0.5\n"
        "  ],\n"
        "  \"nested\": [\n"
        "    2.25\n"
        "  ]\n"
        "}\n";
    CHECK(doc.dump(2) == want);
}

TEST_CASE("json strings are escaped") {
    JsonValue doc = JsonValue::object();
    doc.set("text", JsonValue::str("a\"b\\c\nd\ttab"));
    CHECK(doc.dump(0).find("a\\\"b\\\\c\\nd\\ttab") != std::string::npos);
}

TEST_CASE("non-finite numbers are rejected") {
    CHECK_THROWS_AS(JsonValue::num(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(JsonValue::num(std::nan("")), std::invalid_argument);
}

TEST_CASE("text files round trip through the filesystem helpers") {
    const std::string dir = "io_test_tmp";
    const std::string path = dir + "/payload.txt";
    ensure_directory(dir);
    write_text_file(path, "line one\nline two\n");
    CHECK(read_text_file(path) == "line one\nline two\n");
    std::remove(path.c_str());
    std::remove(dir.c_str());
}
