#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "dirac/errors.hpp"
#include "dirac/table.hpp"

using dirac::Table;

namespace {

Table awkward_table() {
    Table t({"x", "label", "value"});
    t.add_row({1.0 / 3.0, std::string("plain"), 1e-17});
    t.add_row({-0.0, std::string("comma, quoted \"q\" text"), 1e300});
    t.add_row({0.1 + 0.2, std::string(""), -4.9406564584124654e-324});
    return t;
}

}  // namespace

TEST_CASE("csv round trip is bit exact") {
    auto t = awkward_table();
    auto text = t.to_csv();
    CHECK(text.rfind("# schema=1\n", 0) == 0);
    auto back = Table::from_csv(text);
    CHECK(back == t);
    CHECK(back.number(0, 0) == 1.0 / 3.0);  // exact, not approximate
    CHECK(back.text(1, 1) == "comma, quoted \"q\" text");
}

TEST_CASE("jsonl round trip is bit exact") {
    auto t = awkward_table();
    auto back = Table::from_jsonl(t.to_jsonl());
    CHECK(back == t);
    CHECK(back.number(2, 2) == -4.9406564584124654e-324);
}

TEST_CASE("cell access kinds are checked") {
    auto t = awkward_table();
    CHECK_THROWS_AS(t.number(0, 1), dirac::InvalidArgument);  // a string cell
    CHECK_THROWS_AS(t.text(0, 0), dirac::InvalidArgument);    // a double cell
    CHECK(t.col_index("label") == 1);
    CHECK_THROWS_AS(t.col_index("missing"), dirac::InvalidArgument);
    CHECK_THROWS_AS(t.add_row({1.0}), dirac::InvalidArgument);  // wrong width
}

TEST_CASE("equality is bitwise on numbers") {
    Table a({"v"}), b({"v"});
    a.add_row({0.1});
    b.add_row({0.1 + 1e-18});  // same double? no: 0.1+1e-18 == 0.1 in binary64
    CHECK(a == b);
    Table c({"v"});
    c.add_row({std::nextafter(0.1, 1.0)});
    CHECK_FALSE(a == c);
    Table zp({"v"}), zn({"v"});
    zp.add_row({0.0});
    zn.add_row({-0.0});
    CHECK_FALSE(zp == zn);  // signed zeros differ bitwise
}

TEST_CASE("parse failures") {
    CHECK_THROWS_AS(Table::from_csv(""), dirac::ParseError);
    CHECK_THROWS_AS(Table::from_csv("# schema=1\na,b\n1,2,3\n"), dirac::ParseError);
    CHECK_THROWS_AS(Table::from_jsonl("{\"rows\":[]}\n"), dirac::ParseError);
    CHECK_THROWS_AS(Table::from_jsonl("not json\n"), dirac::ParseError);
}

TEST_CASE("file io round trip and errors") {
    auto t = awkward_table();
    const char* path = "table_roundtrip_tmp.csv";
    t.write_file(path, false);
    auto back = Table::read_file(path, false);
    CHECK(back == t);
    std::remove(path);

    const char* jpath = "table_roundtrip_tmp.jsonl";
    t.write_file(jpath, true);
    CHECK(Table::read_file(jpath, true) == t);
    std::remove(jpath);

    CHECK_THROWS_AS(t.write_file("/nonexistent-dir/x.csv", false), dirac::IoError);
    CHECK_THROWS_AS(Table::read_file("/nonexistent-dir/x.csv", false), dirac::IoError);
}
