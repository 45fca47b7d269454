#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "sparsereg/csv.hpp"

using namespace sparsereg;

TEST_CASE("header and rows parse with LF endings") {
    const Table t = parse_csv("a,b,c\n1,2,3\n4,5,6\n");
    CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.n_rows() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"1", "2", "3"});
    CHECK(t.rows[1] == std::vector<std::string>{"4", "5", "6"});
}

TEST_CASE("CRLF endings and missing trailing newline") {
    const Table t = parse_csv("a,b\r\nx,y\r\np,q");
    REQUIRE(t.n_rows() == 2);
    CHECK(t.rows[1] == std::vector<std::string>{"p", "q"});
}

TEST_CASE("quoted fields keep commas, newlines and escaped quotes") {
    const Table t = parse_csv("a,b\n\"x,1\",\"line\nbreak\"\n\"say \"\"hi\"\"\",z\n");
    REQUIRE(t.n_rows() == 2);
    CHECK(t.rows[0][0] == "x,1");
    CHECK(t.rows[0][1] == "line\nbreak");
    CHECK(t.rows[1][0] == "say \"hi\"");
}

TEST_CASE("empty fields and empty trailing field") {
    const Table t = parse_csv("a,b,c\n,,\nx,,y\n");
    REQUIRE(t.n_rows() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"", "", ""});
    CHECK(t.rows[1] == std::vector<std::string>{"x", "", "y"});
}

TEST_CASE("field count must match the header") {
    CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), std::invalid_argument);
}

TEST_CASE("empty input is rejected") { CHECK_THROWS_AS(parse_csv(""), std::invalid_argument); }

TEST_CASE("column_index finds columns and rejects unknown names") {
    const Table t = parse_csv("a,b\n1,2\n");
    CHECK(t.column_index("b") == 1);
    CHECK_THROWS_AS(t.column_index("missing"), std::invalid_argument);
}

TEST_CASE("csv_escape quotes only when needed") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("escaped fields survive a parse round trip") {
    const std::string nasty = "a\"b,c\nd";
    const Table t = parse_csv("h\n" + csv_escape(nasty) + "\n");
    REQUIRE(t.n_rows() == 1);
    CHECK(t.rows[0][0] == nasty);
}
