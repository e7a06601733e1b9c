#include <map>
#include <random>
#include <set>

#include <doctest.h>

#include "relhyp/cayley.hpp"
#include "relhyp/corridor.hpp"
#include "relhyp/errors.hpp"
#include "support.hpp"

using namespace relhyp;
using testing::lit;

namespace {

// Free group on x, y as strings over "xXyY" (capital = inverse).
std::string reduce(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!out.empty() && out.back() != c && std::tolower(out.back()) == std::tolower(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string inv(const std::string& s) {
  std::string out(s.rbegin(), s.rend());
  for (char& c : out) c = std::islower(c) ? std::toupper(c) : std::tolower(c);
  return out;
}

using StrMap = std::map<char, std::string>;

std::string substitute(const StrMap& m, const std::string& w) {
  std::string out;
  for (char c : w) out += std::islower(c) ? m.at(c) : inv(m.at(std::tolower(c)));
  return reduce(out);
}

const StrMap kFib{{'x', "xy"}, {'y', "x"}};
const StrMap kFibInv{{'x', "y"}, {'y', "Yx"}};

// alpha^k for the Fibonacci automorphism.
std::string fib_power(int k, std::string w) {
  for (int i = 0; i < std::abs(k); ++i) w = substitute(k > 0 ? kFib : kFibInv, w);
  return w;
}

std::vector<std::string> reduced_words(int max_len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == max_len) continue;
    for (char c : std::string("xXyY")) {
      std::string w = out[i] + c;
      if (reduce(w) == w) out.push_back(w);
    }
  }
  return out;
}

Word to_word(const RelativePresentation& p, const std::string& s) {
  Word w;
  for (char c : s) w.letters.push_back(Letter::x(std::tolower(c) == 'x' ? 0 : 1, std::islower(c) ? 1 : -1));
  return w;
}

struct F2 {
  PresentationDocument doc;
  FreeAction fib;
  FreeAction identity;
};

F2 f2() {
  auto doc = testing::load("f2.json");
  auto fib = parse_action(doc.presentation, testing::slurp(testing::data_path("f2-fib-action.json")));
  auto id =
      parse_action(doc.presentation, testing::slurp(testing::data_path("f2-identity-action.json")));
  return {std::move(doc), std::move(fib), std::move(id)};
}

// Violations of the flare inequality by brute force over |g| <= max_len.
std::size_t brute_flare_violations(double lambda, int N, int M, int max_len) {
  std::size_t count = 0;
  for (const auto& g : reduced_words(max_len)) {
    const double l = static_cast<double>(g.size());
    if (l < M) continue;
    const double up = static_cast<double>(fib_power(N, g).size());
    const double down = static_cast<double>(fib_power(-N, g).size());
    if (lambda * l > std::max(up, down) + 1e-9) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("F_n word helpers") {
  CHECK(is_reduced({1, 2, -1}));
  CHECK_FALSE(is_reduced({1, -1}));
  CHECK(fn_reduce({1, 2, -2, -1, 3}) == FnWord{3});
  CHECK(fn_concat({1, 2}, fn_inverse({1, 2})).empty());
  for (int rank : {1, 2, 3})
    for (int len = 1; len <= 4; ++len) {
      std::size_t expected = 2 * rank;
      for (int k = 1; k < len; ++k) expected *= 2 * rank - 1;
      CHECK(fn_sphere(rank, len).size() == expected);
    }
  CHECK(fn_from_string(fn_to_string({1, -2, 2})) == FnWord{1, -2, 2});
  CHECK(fn_from_string("1").empty());
  CHECK_THROWS_AS(fn_from_string("b1"), ParseError);
}

TEST_CASE("apply examples") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  CHECK(apply(p, s.fib, {1}, lit(p, "x y")) == lit(p, "x y x"));
  CHECK(apply(p, s.identity, {1, 1}, lit(p, "x y^-1")) == lit(p, "x y^-1"));
  CHECK_THROWS_AS(apply(p, s.fib, {1, -1}, lit(p, "x")), PreconditionError);
}

TEST_CASE("apply agrees with direct substitution and respects composition") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  std::mt19937_64 rng(8);
  auto words = reduced_words(4);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> power(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const auto& g = words[pick(rng)];
    const int k = power(rng), j = power(rng);
    FnWord a(std::abs(k), k < 0 ? -1 : 1), b(std::abs(j), j < 0 ? -1 : 1);
    CHECK(apply(p, s.fib, a, to_word(p, g)) == to_word(p, fib_power(k, g)));
    CHECK(apply(p, s.fib, a, apply(p, s.fib, b, to_word(p, g))) ==
          apply(p, s.fib, fn_concat(a, b), to_word(p, g)));
  }
}

TEST_CASE("composition in rank 2") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  FreeAction two;
  two.basis = 2;
  two.automorphisms.push_back(s.fib.automorphisms[0]);
  RelMap swap;
  swap.x_images = {{0, lit(p, "y")}, {1, lit(p, "x")}};
  two.automorphisms.push_back({swap, swap});
  CHECK(validate_relaut(p, *s.doc.oracle, two.automorphisms[1]).ok);
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> len(0, 3);
  std::uniform_int_distribution<std::size_t> any(0, 1000);
  auto words = reduced_words(3);
  for (int t = 0; t < 100; ++t) {
    auto sa = fn_sphere(2, len(rng)), sb = fn_sphere(2, len(rng));
    const auto& a = sa[any(rng) % sa.size()];
    const auto& b = sb[any(rng) % sb.size()];
    const Word g = to_word(p, words[any(rng) % words.size()]);
    CHECK(apply(p, two, a, apply(p, two, b, g)) == apply(p, two, fn_concat(a, b), g));
  }
}

TEST_CASE("validating relative automorphisms") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  CHECK(validate_relaut(p, *s.doc.oracle, s.fib.automorphisms[0]).ok);
  RelAutomorphism wrong = s.fib.automorphisms[0];
  wrong.inverse.x_images = {{0, lit(p, "y")}, {1, lit(p, "x")}};
  auto rep = validate_relaut(p, *s.doc.oracle, wrong);
  CHECK_FALSE(rep.ok);
  CHECK(rep.witness == "y");

  auto z = testing::load("z-example.json");
  CHECK(validate_relaut(z.presentation, *z.oracle, identity_action(1).automorphisms[0]).ok);

  // Swapping the two labels: h1 -> h2^-1, h2 -> h1^-1 fixes every element.
  RelMap swap;
  swap.sigma = {{1, 2}, {2, 1}};
  swap.peripheral = {{1, {ModelElement{{-1}}}}, {2, {ModelElement{{-1}}}}};
  FreeAction sw{1, {{swap, swap}}};
  CHECK(validate_relaut(z.presentation, *z.oracle, sw.automorphisms[0]).ok);
  CHECK(orbit_representatives(z.presentation, sw) == std::vector<int>{1});
  CHECK(orbit_representatives(z.presentation, identity_action(1)) == std::vector<int>{1, 2});

  RelMap bad_sigma = swap;
  bad_sigma.sigma = {{1, 2}, {2, 2}};
  CHECK_FALSE(validate_relaut(z.presentation, *z.oracle, {bad_sigma, swap}).ok);
  RelMap not_unimodular;
  not_unimodular.peripheral = {{1, {ModelElement{{2}}}}};
  CHECK_FALSE(validate_relaut(z.presentation, *z.oracle, {not_unimodular, not_unimodular}).ok);
}

TEST_CASE("corridor examples") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  const auto& o = *s.doc.oracle;
  auto c = build_corridor(p, o, s.fib, lit(p, "x"), 1);
  REQUIRE(c.entries.size() == 3);
  CHECK(c.find({})->length == RelLength::exact(1));
  CHECK(c.find({1})->length == RelLength::exact(1));
  CHECK(c.find({-1})->length == RelLength::exact(2));

  auto same = build_corridor(p, o, s.identity, lit(p, "x y x"), 3);
  for (const auto& e : same.entries) CHECK(e.length == RelLength::exact(3));
  auto empty = build_corridor(p, o, s.fib, Word{}, 3);
  for (const auto& e : empty.entries) CHECK(e.length == RelLength::exact(0));
}

TEST_CASE("corridor equivariance") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  const auto& o = *s.doc.oracle;
  const int N = 3;
  for (const auto& gs : {"xy", "xYx", "yyX"}) {
    const Word g = to_word(p, gs);
    auto base = build_corridor(p, o, s.fib, g, N + 2);
    for (int len = 0; len <= 2; ++len)
      for (const auto& b : fn_sphere(1, len)) {
        auto moved = build_corridor(p, o, s.fib, apply(p, s.fib, b, g), N);
        for (const auto& e : moved.entries) {
          const auto* ref = base.find(fn_concat(fn_inverse(b), e.a));
          REQUIRE(ref);
          CHECK(ref->length == e.length);
        }
      }
  }
}

TEST_CASE("separation at a single element") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  const auto& o = *s.doc.oracle;
  SeparationOptions at_identity;
  at_identity.center_radius = 0;
  auto r = check_separated(p, o, s.fib, {lit(p, "x y")}, 1.5, 1, 1, at_identity);
  CHECK(r.verdict == SeparationVerdict::Separated);
  CHECK(r.pairs_checked == 1);

  auto id = check_separated(p, o, s.identity, {lit(p, "x y")}, 1.01, 1, 1);
  CHECK(id.verdict == SeparationVerdict::Violated);
  CHECK_THROWS_AS(check_separated(p, o, s.fib, {}, 1.0, 1, 1), PreconditionError);
}

TEST_CASE("flare check matches brute force") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  const auto& o = *s.doc.oracle;
  auto ball = truncated_ball(p, o, 6, 1);
  for (double lambda : {1.05, 1.2, 1.5})
    for (int N : {1, 2}) {
      auto r = check_uniform_flare(p, o, s.fib, ball.vertices, lambda, N, 3);
      CHECK(r.violation_count == brute_flare_violations(lambda, N, 3, 6));
      CHECK(r.indeterminate == 0);
      for (const auto& v : r.violations) {
        CHECK(rel_length(p, o, v.g) == v.lw);
        CHECK(rel_length(p, o, apply(p, s.fib, v.u, v.g)) == v.lu);
        CHECK(rel_length(p, o, apply(p, s.fib, v.v, v.g)) == v.lv);
        CHECK(lambda * v.lw.lower > std::max(v.lu.upper, v.lv.upper));
      }
    }
}

TEST_CASE("flare check is monotone in lambda and weaker than separation") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  const auto& o = *s.doc.oracle;
  auto ball = truncated_ball(p, o, 5, 1);
  std::size_t previous = 0;
  for (double lambda : {1.01, 1.1, 1.2, 1.5, 2.0}) {
    auto flare = check_uniform_flare(p, o, s.fib, ball.vertices, lambda, 2, 3);
    auto sep = check_separated(p, o, s.fib, ball.vertices, lambda, 2, 3);
    CHECK(flare.violation_count >= previous);
    previous = flare.violation_count;
    CHECK(flare.violation_count <= sep.violation_count);
    if (sep.verdict == SeparationVerdict::Separated)
      CHECK(flare.verdict == SeparationVerdict::Separated);
  }
}

TEST_CASE("identity action violates the flare inequality") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  const auto& o = *s.doc.oracle;
  auto ball = truncated_ball(p, o, 4, 1);
  for (double lambda : {1.001, 1.2, 3.0}) {
    auto r = check_uniform_flare(p, o, s.identity, ball.vertices, lambda, 2, 3);
    CHECK(r.verdict == SeparationVerdict::Violated);
    CHECK_FALSE(r.violations.empty());
  }
  SeparationOptions few;
  few.max_violations = 3;
  auto capped = check_uniform_flare(p, o, s.identity, ball.vertices, 1.2, 1, 1, few);
  CHECK(capped.violations.size() == 3);
  CHECK(capped.violation_count > 3);
}

TEST_CASE("bounded relative metric makes the flare check vacuous") {
  auto z = testing::load("z-example.json");
  auto ball = truncated_ball(z.presentation, *z.oracle, 2, 3);
  auto r = check_uniform_flare(z.presentation, *z.oracle, identity_action(1), ball.vertices, 1.5,
                               1, 2);
  CHECK(r.verdict == SeparationVerdict::Separated);
  CHECK(r.pairs_checked == 0);
}

TEST_CASE("corridor cocycle pairing") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  const auto& o = *s.doc.oracle;
  auto r = corridor_cocycle_pairing(p, o, s.fib, lit(p, "x"), {-1}, {1});
  CHECK(r.rhs == 3.0);
  CHECK(r.lhs == 3.0);
  CHECK(r.status == PairingResult::Status::Equal);
  CHECK(r.path.size() == 3);
  auto same = corridor_cocycle_pairing(p, o, s.fib, lit(p, "x y"), {1, 1}, {1, 1});
  CHECK(same.rhs == 0.0);
  CHECK(same.lhs == 0.0);
  auto trivial = corridor_cocycle_pairing(p, o, s.fib, Word{}, {1}, {-1, -1});
  CHECK(trivial.rhs == 0.0);
  CHECK(trivial.status == PairingResult::Status::Equal);

  auto fp = testing::load("free-product-zz.json");
  auto peri = corridor_cocycle_pairing(fp.presentation, *fp.oracle, identity_action(1),
                                       lit(fp.presentation, "h1^2 h2^-1"), {1}, {-1});
  CHECK(peri.status == PairingResult::Status::Equal);
  CHECK(peri.rhs == 4.0);
}

TEST_CASE("side report") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  auto c = build_corridor(p, *s.doc.oracle, s.fib, lit(p, "x y x"), 2);
  auto rep = side_report(c, 2.0);
  CHECK(rep.rows.size() == 1);
  CHECK(rep.all_hold);
}

TEST_CASE("F_n-extension membership") {
  auto fp = testing::load("free-product-zz.json");
  const auto& p = fp.presentation;
  auto id = identity_action(1);
  CHECK(in_fn_extension(p, *fp.oracle, id, 1, Word{}, {}));
  CHECK(in_fn_extension(p, *fp.oracle, id, 1, lit(p, "h1^3"), {1}));
  CHECK_FALSE(in_fn_extension(p, *fp.oracle, id, 1, lit(p, "h2"), {}));
}

TEST_CASE("action documents round-trip") {
  auto s = f2();
  const auto& p = s.doc.presentation;
  auto back = action_from_json(p, action_to_json(p, s.fib));
  CHECK(back.basis == 1);
  CHECK(apply(p, back, {1, 1}, lit(p, "x y^-1")) == apply(p, s.fib, {1, 1}, lit(p, "x y^-1")));
  CHECK_THROWS_AS(parse_action(p, R"({"basis": 1, "automorphisms": [{"x": {}}]})"), ParseError);
  CHECK_THROWS_AS(parse_action(p, R"({"basis": 2, "automorphisms": []})"), ParseError);
}
