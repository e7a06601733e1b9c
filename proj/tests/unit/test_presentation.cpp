#include <random>

#include <doctest.h>

#include "relhyp/errors.hpp"
#include "support.hpp"

using namespace relhyp;
using testing::lit;

namespace {

RelativePresentation zz() {
  return RelativePresentation({"x", "y"},
                              {PeripheralModel::free_abelian(1, 1),
                               PeripheralModel::free_abelian(2, 1)},
                              {});
}

Word random_word(const RelativePresentation& p, std::mt19937_64& rng, int len) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> expo(-3, 3);
  Word w;
  for (int i = 0; i < len; ++i) {
    const int k = pick(rng);
    if (k < 2) {
      w.letters.push_back(Letter::x(k, expo(rng) < 0 ? -1 : 1));
    } else {
      int e = 0;
      while (e == 0) e = expo(rng);
      w.letters.push_back(Letter::h(k - 1, ModelElement{{e}}));
    }
  }
  return w;
}

}  // namespace

TEST_CASE("z-example document parses") {
  auto doc = testing::load("z-example.json");
  const auto& p = doc.presentation;
  CHECK(p.x_symbols().empty());
  CHECK(p.models().size() == 2);
  CHECK(p.relators().size() == 1);
  CHECK(doc.oracle.has_value());
}

TEST_CASE("ordinary presentation of Z/2 as a relative one") {
  auto doc = testing::load("z2.json");
  CHECK(doc.presentation.x_symbols().size() == 1);
  CHECK(doc.presentation.models().empty());
  CHECK(doc.presentation.relators().at(0).size() == 2);
}

TEST_CASE("identity peripheral letter in a relator is rejected") {
  const char* text = R"({"models": [{"label": 1, "kind": "Z^d", "rank": 1}],
    "relators": [[{"h": {"lambda": 1, "elem": [0]}}]]})";
  CHECK_THROWS_AS(parse_presentation(text), ParseError);
}

TEST_CASE("unknown model label in a relator is rejected") {
  const char* text = R"({"models": [{"label": 1, "kind": "Z^d", "rank": 1}],
    "relators": [[{"h": {"lambda": 3, "elem": [1]}}]]})";
  CHECK_THROWS_AS(parse_presentation(text), ParseError);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_presentation(testing::slurp(testing::data_path("malformed.json")));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() != std::string::npos);
  }
}

TEST_CASE("free_reduce examples") {
  auto p = zz();
  CHECK(free_reduce(p, lit(p, "h1^2 h1^-2")).empty());
  CHECK(free_reduce(p, lit(p, "h1^1 h2^3 h2^-1")) == lit(p, "h1^1 h2^2"));
  CHECK(free_reduce(p, lit(p, "x x^-1 h1^5")) == lit(p, "h1^5"));
}

TEST_CASE("letter_count") {
  auto p = zz();
  CHECK(letter_count(Word{}) == 0);
  CHECK(letter_count(lit(p, "h1^7")) == 1);
  CHECK(letter_count(lit(p, "x h2^-4 x")) == 3);
}

TEST_CASE("free_reduce is idempotent and kills w w^-1") {
  auto p = zz();
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    Word w = random_word(p, rng, t % 12);
    Word r = free_reduce(p, w);
    CHECK(free_reduce(p, r) == r);
    CHECK(is_syllable_reduced(p, r));
    CHECK(free_reduce(p, w * inverse(p, w)).empty());
  }
}

TEST_CASE("relators are stored cyclically reduced") {
  RelativePresentation p({"x", "y"}, {}, {lit(zz(), "y x x y^-1")});
  CHECK(p.relators().at(0) == lit(zz(), "x x"));
}

TEST_CASE("loop literal grammar") {
  auto p = zz();
  auto w = lit(p, "h1^2 h2^2");
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Letter::h(1, ModelElement{{2}}));
  CHECK(w[1] == Letter::h(2, ModelElement{{2}}));
  CHECK(lit(p, "x x^-1").size() == 2);
  CHECK(lit(p, "x^3").size() == 3);
  CHECK_THROWS_AS(lit(p, "h1^0"), ParseError);
  CHECK_THROWS_AS(lit(p, "z"), ParseError);
}

TEST_CASE("to_string round-trips through the loop grammar") {
  auto p = zz();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Word w = random_word(p, rng, t % 9);
    CHECK(lit(p, to_string(p, w)) == w);
  }
}

TEST_CASE("finite and free-group model letters") {
  RelativePresentation p({}, {PeripheralModel::finite_table(1, {{0, 1}, {1, 0}}, {"e", "a"}),
                              PeripheralModel::free_group(2, 2)},
                         {});
  auto w = lit(p, "h1:a h1:1 h2[1,-2]");
  REQUIRE(w.size() == 3);
  CHECK(free_reduce(p, w).size() == 1);
  CHECK_THROWS_AS(lit(p, "h2[1,-1]"), ParseError);
}

TEST_CASE("presentation JSON round-trip") {
  auto doc = testing::load("z-example.json");
  auto back = presentation_from_json(presentation_to_json(doc.presentation));
  CHECK(back == doc.presentation);
  auto again = parse_document(document_to_json(doc).dump());
  CHECK(again.presentation == doc.presentation);
}
