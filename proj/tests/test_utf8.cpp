#include "doctest.h"

#include "annopipe/utf8.hpp"

using namespace annopipe;

TEST_SUITE("utf8") {
  TEST_CASE("decode and encode round-trip mixed scripts") {
    std::string s = "hoče đak жена 😀";
    auto cps = utf8::decode(s);
    CHECK(cps.size() == 15);
    CHECK(cps[2] == U'č');
    CHECK(utf8::encode(cps) == s);
  }

  TEST_CASE("invalid bytes decode to their raw value") {
    std::string s = "a\xFF" "b";
    auto cps = utf8::decode(s);
    REQUIRE(cps.size() == 3);
    CHECK(cps[1] == 0xFF);
  }

  TEST_CASE("case mapping covers Latin Extended-A and Cyrillic") {
    CHECK(utf8::to_lower("ČŠŽĆĐ") == "čšžćđ");
    CHECK(utf8::to_lower("ЖЕНА Ѓ") == "жена ѓ");
    CHECK(utf8::is_upper(U'Č'));
    CHECK_FALSE(utf8::is_upper(U'č'));
  }

  TEST_CASE("length, suffix and common prefix count code points") {
    CHECK(utf8::length("človek") == 6);
    CHECK(utf8::suffix("človek", 3) == "vek");
    CHECK(utf8::suffix("če", 5) == "če");
    CHECK(utf8::suffix("če", 0).empty());
    auto cp = utf8::common_prefix("hočem", "hoče");
    CHECK(cp.code_points == 4);
    CHECK(cp.bytes == 5);
  }

  TEST_CASE("whitespace classification") {
    CHECK(utf8::is_space(U' '));
    CHECK(utf8::is_space(U'\t'));
    CHECK(utf8::is_space(0xA0));
    CHECK_FALSE(utf8::is_space(U'a'));
  }
}
