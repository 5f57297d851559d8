#include "lxtopic/csv.hpp"
#include "lxtopic/error.hpp"

#include <doctest.h>

using namespace lxtopic;

TEST_CASE("csv parses quoted fields, embedded newlines and CRLF") {
    const auto t = csv::parse("a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\"two\nlines\",z\r\n");
    REQUIRE(t.header == csv::Row{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == csv::Row{"x, y", "say \"hi\""});
    CHECK(t.rows[1] == csv::Row{"two\nlines", "z"});
    CHECK(t.line_numbers == std::vector<std::size_t>{2, 3});
}

TEST_CASE("csv accepts a missing trailing newline and empty fields") {
    const auto t = csv::parse("a,b,c\n,,\n1,,3");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == csv::Row{"", "", ""});
    CHECK(t.rows[1] == csv::Row{"1", "", "3"});
}

TEST_CASE("csv errors carry the line number") {
    auto code_and_message = [](const std::string& text) -> std::pair<ErrorCode, std::string> {
        try {
            csv::parse(text);
        } catch (const Error& e) {
            return {e.code(), e.what()};
        }
        return {ErrorCode::IoError, ""};
    };
    auto [c1, m1] = code_and_message("a,b\n1,2\n3\n");
    CHECK(c1 == ErrorCode::MalformedCsv);
    CHECK(m1.find("line 3") != std::string::npos);

    auto [c2, m2] = code_and_message("a\n\"open\n");
    CHECK(c2 == ErrorCode::MalformedCsv);
    CHECK(m2.find("line 2") != std::string::npos);

    auto [c3, m3] = code_and_message("a\nab\"c\n");
    CHECK(c3 == ErrorCode::MalformedCsv);
}

TEST_CASE("csv escape round-trips through parse") {
    const csv::Row row{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
    const auto t = csv::parse(csv::join_row(row) + "\n", false);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == row);
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
}

TEST_CASE("csv read_file reports IoError") {
    try {
        csv::read_file("/nonexistent/lxtopic.csv", "load_csv");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
        CHECK(e.where() == "load_csv");
    }
}
