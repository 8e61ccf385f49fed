#include <cmath>
#include <cstdlib>

#include "carleman/catalog.hpp"
#include "carleman/error.hpp"
#include "carleman/io.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace carleman;

TEST_CASE("sequence specs") {
  auto F = sequence_from_spec("factorial", 64);
  CHECK(F.K() == 64);
  CHECK(F.log_M(10) == doctest::Approx(std::lgamma(11.0)));
  auto G = sequence_from_spec("gevrey:1.5");
  CHECK(G.K() == 256);
  CHECK(G.log_M(20) == doctest::Approx(1.5 * std::lgamma(21.0)));
  CHECK(sequence_from_spec("exp-k2", 32).log_M(7) == 49.0);
  CHECK(sequence_from_spec("q:1", 64).K() == 64);
  for (const char* bad : {"gevrey:x", "gevrey:-1", "q:7", "q:1.5", "nonsense", "/no/such/file.json"}) {
    try {
      sequence_from_spec(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
}

TEST_CASE("sequence JSON round trip") {
  auto G = sequence_from_spec("gevrey:2", 40);
  auto back = sequence_from_json(sequence_json(G));
  CHECK(back.label() == "gevrey:2");
  REQUIRE(back.K() == 40);
  for (std::size_t k = 0; k <= 40; ++k) CHECK(back.log_M(k) == G.log_M(k));
  auto cut = sequence_from_json(R"({"label": "x", "logM": [0,0,1,3,6,10,15,21,28,36], "K": 8})");
  CHECK(cut.K() == 8);
  CHECK_THROWS_AS(sequence_from_json(R"({"logM": [0,1], "K": 5})"), Error);
  CHECK_THROWS_AS(sequence_from_json("{"), Error);
}

TEST_CASE("function specs") {
  CHECK(function_from_spec("linear").value(0.3) == doctest::Approx(0.3));
  CHECK(function_from_spec("zero").value(0.3) == 0.0);
  CHECK(function_from_spec("cauchy2").value(0.0) == doctest::Approx(0.5));
  CHECK(function_from_spec("poly:1,0,2").value(0.5) == doctest::Approx(1.5));
  auto b = function_from_spec("bump:gevrey2");
  CHECK(b.name() == "bump:gevrey2");
  double f0 = 0;
  for (int j = 0; j < 20; ++j) f0 += std::exp(-std::pow(2.0, j / 2.0));
  CHECK(b.value(0.0) == doctest::Approx(f0));
  CHECK_THROWS_AS(function_from_spec("bump"), Error);
  CHECK_THROWS_AS(function_from_spec("poly:1,a"), Error);
}

TEST_CASE("number formatting and CSV") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 5e-324}) CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CsvTable t{{"a", "b"}, {{1.0, 0.5}, {2.0, -kInf}}};
  CHECK(t.str() == "a,b\n1,0.5\n2,-inf\n");
  CHECK(parse_number_list("0.5,1,2") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK_THROWS_AS(parse_number_list(""), Error);
}

TEST_CASE("grid function JSON") {
  Grid g = Grid::make(1.0, 0.5, 8);
  GridFn f(g);
  f.v[3] = cplx(1.5, -2.0);
  auto s = gridfn_json(f);
  CHECK(s.find("\"shape\":[9,") != std::string::npos);
  CHECK(s.find("1.5") != std::string::npos);
  CHECK(gridfn_csv(f).rows.size() == g.size());
}
