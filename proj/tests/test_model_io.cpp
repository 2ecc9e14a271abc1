#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cstdio>
#include <fstream>

#include "sbf/model_io.hpp"
#include "sbf/rng.hpp"

using namespace sbf;

namespace {

std::string temp_path(const char* name) {
  return std::string("io_test_") + name + ".json";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("minimal two-state file parses to the conservative chain") {
  std::string path = temp_path("chain");
  write_file(path, R"({"n": 2, "m": [1, 1], "L": [[-1, 1], [1, -1]]})");
  FiniteModel m = load_model(path);
  CHECK(m.n == 2);
  CHECK(m.L(0, 1) == 1.0);
  CHECK(m.L(1, 1) == -1.0);
  std::remove(path.c_str());
}

TEST_CASE("J/kappa form assembles through the same schema") {
  std::string path = temp_path("jk");
  write_file(path, R"({"n": 2, "m": [1, 1], "J": [[0, 1], [1, 0]], "kappa": [0.5, 0]})");
  FiniteModel m = load_model(path);
  CHECK(m.L(0, 0) == doctest::Approx(-1.5));
  CHECK(m.L(1, 1) == doctest::Approx(-1.0));
  std::remove(path.c_str());
}

TEST_CASE("error classes are distinct and name the offending field") {
  std::string path = temp_path("bad");

  write_file(path, "{ not json");
  CHECK_THROWS_AS(load_model(path), ModelParseError);

  write_file(path, R"({"n": 2, "m": [-1, 1], "L": [[-1, 1], [1, -1]]})");
  try {
    load_model(path);
    CHECK(false);
  } catch (const ModelSchemaError& e) {
    CHECK(std::string(e.what()).find("m[0]") != std::string::npos);
  }

  write_file(path, R"({"n": 2, "m": [1, 1]})");
  CHECK_THROWS_AS(load_model(path), ModelSchemaError);

  write_file(path,
             R"({"n": 2, "m": [1, 1], "L": [[-1, 1], [1, -1]], "J": [[0, 1], [1, 0]], "kappa": [0, 0]})");
  CHECK_THROWS_AS(load_model(path), ModelSchemaError);

  // schema-valid but not m-symmetric
  write_file(path, R"({"n": 2, "m": [1, 1], "L": [[-1, 2], [1, -1]]})");
  CHECK_THROWS_AS(load_model(path), ModelInvariantError);

  CHECK_THROWS_AS(load_model("does_not_exist_anywhere.json"), ModelParseError);

  std::remove(path.c_str());
}

TEST_CASE("save/load round trip is value-exact") {
  SplitMix64 g(17);
  for (int k = 0; k < 20; ++k) {
    FiniteModel m = random_model(g.next(), 2 + static_cast<int>(g.below(12)), 0.6, k % 2 == 0);
    std::string path = temp_path("roundtrip");
    save_model(m, path);
    FiniteModel back = load_model(path);
    REQUIRE(back.n == m.n);
    for (int i = 0; i < m.n; ++i) {
      CHECK(back.m[i] == m.m[i]);
      for (int j = 0; j < m.n; ++j) CHECK(back.L(i, j) == m.L(i, j));
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("labels survive the round trip") {
  FiniteModel m = random_model(123, 2, 1.0, false);
  m.labels = {"left", "right"};
  std::string path = temp_path("labels");
  save_model(m, path);
  FiniteModel back = load_model(path);
  REQUIRE(back.labels.size() == 2);
  CHECK(back.labels[0] == "left");
  CHECK(back.labels[1] == "right");
  std::remove(path.c_str());
}
