#include <random>

#include <doctest.h>

#include "relhyp/errors.hpp"
#include "relhyp/word_problem.hpp"
#include "support.hpp"

using namespace relhyp;
using testing::lit;

namespace {

// Exponent sum of the z-example word: h1 counts +1, h2 counts -1.
long exponent_sum(const Word& w) {
  long s = 0;
  for (const auto& l : w.letters) s += (l.index == 1 ? 1 : -1) * l.elem.value[0];
  return s;
}

}  // namespace

TEST_CASE("free product normal forms") {
  auto doc = testing::load("free-product-zz.json");
  const auto& p = doc.presentation;
  const auto& o = *doc.oracle;
  CHECK(o.normal_form(p, lit(p, "h1^1 h2^1 h2^-1")) == lit(p, "h1^1"));
  CHECK_FALSE(equal(p, o, lit(p, "h1 h2"), lit(p, "h2 h1")));
  CHECK(equal(p, o, lit(p, "h1^3 h2"), lit(p, "h1^3 h2")));
}

TEST_CASE("integer quotient on the z-example") {
  auto doc = testing::load("z-example.json");
  const auto& p = doc.presentation;
  const auto& o = *doc.oracle;
  CHECK(o.normal_form(p, lit(p, "h1^3 h2^3")).empty());
  CHECK(equal(p, o, lit(p, "h1^3"), lit(p, "h2^-3")));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(-4, 4), which(1, 2), len(0, 6);
  for (int t = 0; t < 300; ++t) {
    Word u, v;
    for (int i = len(rng); i > 0; --i) {
      int k = e(rng);
      if (k) u.letters.push_back(Letter::h(which(rng), ModelElement{{k}}));
    }
    for (int i = len(rng); i > 0; --i) {
      int k = e(rng);
      if (k) v.letters.push_back(Letter::h(which(rng), ModelElement{{k}}));
    }
    CHECK(equal(p, o, u, v) == (exponent_sum(u) == exponent_sum(v)));
    auto h = o.peripheral_element(p, 1, u);
    REQUIRE(h.has_value());
    CHECK(h->value[0] == exponent_sum(u));
  }
}

TEST_CASE("finite quotient for Z/2") {
  auto doc = testing::load("z2.json");
  const auto& p = doc.presentation;
  const auto& o = *doc.oracle;
  CHECK(o.normal_form(p, lit(p, "x x x")) == lit(p, "x"));
  CHECK(o.normal_form(p, lit(p, "x^-1")) == lit(p, "x"));
  CHECK(o.normal_form(p, lit(p, "x^4")).empty());
}

TEST_CASE("oracles that do not kill a relator are rejected") {
  auto p = testing::load("z-example.json").presentation;
  CHECK_THROWS_AS(GroupOracle::free_product().validate(p), OracleError);
  IntegerQuotientSpec wrong{1, {}, {{1, {{1}}}, {2, {{1}}}}};
  CHECK_THROWS_AS(GroupOracle::integer_quotient(p, wrong).validate(p), OracleError);
  const char* text = R"({"models": [{"label": 1, "kind": "Z^d", "rank": 1},
                                     {"label": 2, "kind": "Z^d", "rank": 1}],
                         "relators": ["h1 h2"], "oracle": {"kind": "free_product"}})";
  CHECK_THROWS_AS(parse_document(text), OracleError);
}

TEST_CASE("plugin oracle agrees with the free product oracle") {
  auto doc = testing::load("free-product-zz.json");
  const auto& p = doc.presentation;
  auto plugin = GroupOracle::plugin({RELHYP_PLUGIN});
  plugin.validate(p);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> e(-2, 2), which(1, 2), len(0, 8);
  std::vector<Word> words;
  for (int t = 0; t < 200; ++t) {
    Word w;
    for (int i = len(rng); i > 0; --i) {
      int k = e(rng);
      if (k) w.letters.push_back(Letter::h(which(rng), ModelElement{{k}}));
    }
    words.push_back(w);
  }
  auto forms = plugin.normal_forms(p, words);
  for (std::size_t i = 0; i < words.size(); ++i)
    CHECK(forms[i] == doc.oracle->normal_form(p, words[i]));
  CHECK(plugin.peripheral_element(p, 1, lit(p, "h1^2 h2 h2^-1"))->value[0] == 2);
}

TEST_CASE("budgeted word problem examples") {
  auto z = testing::load("z-example.json");
  const auto& p = z.presentation;
  auto v1 = budgeted_word_problem(p, lit(p, "h1 h2"), 5, 10);
  CHECK(v1.kind == WordProblemVerdict::Kind::Trivial);
  CHECK(v1.area == 1);
  auto v2 = budgeted_word_problem(p, lit(p, "h1^2 h2^2"), 5, 10);
  CHECK(v2.kind == WordProblemVerdict::Kind::Trivial);
  CHECK(v2.area == 2);
  auto fp = testing::load("free-product-zz.json");
  auto v3 = budgeted_word_problem(fp.presentation, lit(fp.presentation, "h1 h2"), 5, 10,
                                  &*fp.oracle);
  CHECK(v3.kind == WordProblemVerdict::Kind::NontrivialCertified);
}

TEST_CASE("word problem never contradicts the oracle") {
  auto z = testing::load("z-example.json");
  const auto& p = z.presentation;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> e(-3, 3), which(1, 2), len(1, 4);
  for (int t = 0; t < 200; ++t) {
    Word w;
    for (int i = len(rng); i > 0; --i) {
      int k = e(rng);
      if (k) w.letters.push_back(Letter::h(which(rng), ModelElement{{k}}));
    }
    auto v = budgeted_word_problem(p, w, 12, 16, &*z.oracle);
    if (exponent_sum(w) != 0) {
      CHECK(v.kind == WordProblemVerdict::Kind::NontrivialCertified);
    } else {
      CHECK(v.kind == WordProblemVerdict::Kind::Trivial);
    }
  }
}
