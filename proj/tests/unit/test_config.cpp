#include <doctest.h>

#include "rholab/config.hpp"
#include "rholab/error.hpp"

using namespace rholab;

TEST_CASE("parsing") {
  const auto c = Config::parse_string(
      "# comment\n"
      "a.x = 1.5\n"
      "a.list = [1, 2.5, 3e-2]   # trailing\n"
      "b.name = hello\n"
      "b.flag = true\n"
      "b.names = [x, y]\n");
  CHECK(c.get_double("a.x") == 1.5);
  CHECK(c.get_doubles("a.list") == std::vector<double>{1, 2.5, 3e-2});
  CHECK(c.get_string("b.name") == "hello");
  CHECK(c.get_bool("b.flag", false));
  CHECK(c.get_strings("b.names") == std::vector<std::string>{"x", "y"});
  CHECK(c.get_int("missing", 7) == 7);
  CHECK(c.line_of("b.name") == 4);
  CHECK_NOTHROW(c.reject_unused());
}

TEST_CASE("diagnostics carry line and key") {
  try {
    Config::parse_string("a.x = 1\na.x = 2\n");
    FAIL("expected a duplicate-key error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "a.x");
  }
  CHECK_THROWS_AS(Config::parse_string("no equals sign\n"), ConfigError);
  const auto c = Config::parse_string("a.x = abc\na.y = 1\n");
  CHECK_THROWS_AS(c.get_double("a.x"), ConfigError);
  try {
    c.reject_unused();
    FAIL("expected an unknown-key error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(Config::parse_string("a.l = [1, 2\n").get_doubles("a.l"), ConfigError);
}
