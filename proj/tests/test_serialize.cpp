#include "flatdetect/error.hpp"
#include "flatdetect/serialize.hpp"

#include <doctest.h>

#include <random>

using namespace flatdetect;

TEST_CASE("rationals round-trip, including values beyond 64 bits") {
  const Rational values[] = {Rational(0), Rational(-7, 3), Rational(Integer("123456789012345678901234567890"), 7)};
  for (const auto& q : values) CHECK(rational_from_json(rational_to_json(q)) == q);
  CHECK(rational_to_json(Rational(-7, 3)).dump() == R"({"num":-7,"den":3})");
  CHECK(rational_to_json(Rational(Integer("123456789012345678901234567890"))).at("num").is_string());
  CHECK_THROWS_AS(rational_from_json(Json::parse(R"({"num": 1, "den": 0})")), ParseError);
  CHECK_THROWS_AS(rational_from_json(Json::parse(R"({"num": "1x", "den": 1})")), ParseError);
}

TEST_CASE("forms round-trip on random inputs") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> coeff(-5, 5), den(1, 4);
  std::uniform_int_distribution<std::uint32_t> mono(0, 15);
  for (int trial = 0; trial < 100; ++trial) {
    MultiForm f(LabelSpace{4, 4});
    for (int t = 0; t < 6; ++t) f.add_term(make_monomial(mono(rng), mono(rng)), Rational(coeff(rng), den(rng)));
    CHECK(form_from_json(form_to_json(f)) == f);
  }
  CHECK_THROWS_AS(form_from_json(Json::parse(R"({"base": 1, "param": 1, "terms": [{"labels": ["z2"], "num": 1, "den": 1}]})")),
                  ParseError);
}

TEST_CASE("detection reports round-trip and render") {
  const auto r = detection_matrix(GroupClassDescriptor::free_abelian(2), {character_family_Zn(2, 8)});
  const Json j = report_to_json(r);
  CHECK(j.at("verdict") == "FD-certified");
  CHECK(j.at("rows").size() == 4);
  const auto back = report_from_json(j);
  CHECK(back.matrix == r.matrix);
  CHECK(back.row_labels == r.row_labels);
  CHECK(dump(report_to_json(back)) == dump(j));
  const std::string text = render_report(r);
  CHECK(text.find("verdict:  FD-certified") != std::string::npos);
  CHECK(text.find("[e1^e2]") != std::string::npos);

  Json broken = j;
  broken["verdict"] = "maybe";
  CHECK_THROWS_AS(report_from_json(broken), ParseError);
  broken = j;
  broken["rows"][0]["entries"].erase(0);
  CHECK_THROWS_AS(report_from_json(broken), ParseError);
}

TEST_CASE("null entries survive serialization") {
  const auto r = numeric_detection_matrix(GroupClassDescriptor::free_abelian(2), {character_family_Zn(2, 16)});
  const auto back = report_from_json(report_to_json(r));
  CHECK(back.matrix == r.matrix);
  CHECK(back.verdict == Verdict::Obstructed);
  CHECK(render_report(back).find('?') != std::string::npos);
}
