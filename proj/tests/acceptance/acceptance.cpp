// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "relhyp/cayley.hpp"
#include "relhyp/cochain.hpp"
#include "relhyp/corridor.hpp"
#include "relhyp/filling.hpp"
#include "relhyp/loop_literal.hpp"
#include "relhyp/oracle.hpp"
#include "relhyp/parallel.hpp"
#include "relhyp/word_problem.hpp"

using namespace relhyp;

namespace {

std::string data(const std::string& name) { return std::string(RELHYP_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PresentationDocument load(const std::string& name) { return parse_document(slurp(data(name))); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    std::ostringstream why;
    why << "took " << secs << " s, limit " << limit_seconds << " s";
    v.fail(why.str());
  }
  if (!v.pass) ++failures;
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(),
              secs, v.detail.empty() ? "" : " -- ", v.detail.c_str());
  std::fflush(stdout);
}

Verdict lp_law() {
  Verdict v;
  auto doc = load("z-example.json");
  const auto& p = doc.presentation;
  const auto& o = *doc.oracle;
  const std::vector<int> ns{4, 8, 12, 16};
  auto report = growth_scan(
      [&](int n) {
        Window w = build_window(p, o, strip_window_spec(p, o, n));
        auto z = make_cocycle(w, CocycleFamily::Ones);
        return WindowCocycle{std::move(w), std::move(z)};
      },
      ns);
  std::ostringstream d;
  for (const auto& row : report.rows) {
    d << "n=" << row.radius << " norm=" << row.norm << "; ";
    if (!row.feasible || std::abs(row.norm - row.radius / 4.0) > 1e-6)
      v.fail("norm at n=" + std::to_string(row.radius) + " is " + std::to_string(row.norm));
  }
  d << "slope=" << report.slope << " verdict=" << to_string(report.verdict);
  if (std::abs(report.slope - 0.25) > 0.01) v.fail("slope " + std::to_string(report.slope));
  if (report.verdict != ScanVerdict::LinearGrowthWitness) v.fail("verdict " + to_string(report.verdict));
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict area_law() {
  Verdict v;
  auto doc = load("z-example.json");
  const auto& p = doc.presentation;
  std::ostringstream d;
  for (int n = 1; n <= 4; ++n) {
    const std::string loop = "h1^" + std::to_string(n) + " h2^" + std::to_string(n);
    auto r = relative_area(p, &*doc.oracle, parse_loop_literal(p, loop));
    if (!r.certificate || r.certificate->area != n || !r.certificate->minimal_within_cap ||
        !replay(p, *r.certificate))
      v.fail("area of " + loop + " is not exactly " + std::to_string(n));
  }
  auto esc = rho_escalation(p, *doc.oracle, 2, {2, 4, 8});
  for (std::size_t i = 0; i < esc.size(); ++i) {
    d << "rho=" << esc[i].rho << " area(2)=" << esc[i].entry.max_area << "; ";
    if (esc[i].entry.max_area < esc[i].rho) v.fail("profile at rho=" + std::to_string(esc[i].rho));
    if (i > 0 && esc[i].entry.max_area <= esc[i - 1].entry.max_area)
      v.fail("profile does not grow under escalation");
  }
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict free_product_baseline() {
  Verdict v;
  std::ostringstream d;
  for (const char* name : {"free-product-zz.json", "f2.json"}) {
    auto doc = load(name);
    auto prof = dehn_profile(doc.presentation, *doc.oracle, 10, 1);
    if (prof.sampled) v.fail(std::string(name) + ": profile was sampled");
    for (const auto& e : prof.entries)
      if (e.max_area != 0 || !e.exact)
        v.fail(std::string(name) + ": entry n=" + std::to_string(e.n) + " is " +
               std::to_string(e.max_area));
    d << name << " trivial loops(n<=10)=" << prof.at(10).loop_count << "; ";
  }
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict cochain_suite() {
  Verdict v;
  std::size_t triples = 0;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> small(-3, 3);
  for (const char* name : {"z-example.json", "free-product-zz.json", "f2.json", "z2.json"}) {
    auto doc = load(name);
    std::vector<Window> windows{build_window(doc.presentation, *doc.oracle, 2, 1)};
    if (std::string(name) == "z-example.json")
      windows.push_back(build_window(doc.presentation, *doc.oracle,
                                     strip_window_spec(doc.presentation, *doc.oracle, 8)));
    for (const auto& w : windows) {
      auto rnd = [&](Eigen::Index n) {
        Vec<double> x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = small(rng);
        return x;
      };
      for (int t = 0; t < 1000; ++t, ++triples) {
        Cochain<double> h{1, rnd(w.size(1))};
        for (Eigen::Index i = 0; i < w.size(1); ++i)
          if (w.cells[1][i].peripheral()) h.values(i) = 0;
        Chain<double> D{2, rnd(w.size(2))};
        for (Eigen::Index i = 0; i < w.size(2); ++i)
          if (!w.interior[i]) D.values(i) = 0;
        Cochain<double> d0{0, rnd(w.size(0))};
        const auto loop = boundary(w, D);
        const auto z = coboundary(w, h);
        if (!coboundary(w, coboundary(w, d0)).values.isZero())
          v.fail(std::string(name) + ": delta delta != 0");
        if (!is_relative(w, z)) v.fail(std::string(name) + ": delta broke relativity");
        if (std::abs(pair(z, D) - pair(h, loop)) > 1e-9)
          v.fail(std::string(name) + ": adjointness");
        if (pair(z, D) > 2 * linf_norm(h.values) * weighted_l1(w, loop) + 1e-9)
          v.fail(std::string(name) + ": evident bound");
      }
    }
  }
  if (v.pass) v.detail = std::to_string(triples) + " triples, 0 violations";
  return v;
}

Verdict pairing_identity() {
  Verdict v;
  auto doc = load("f2.json");
  const auto& p = doc.presentation;
  auto action = parse_action(p, slurp(data("f2-fib-action.json")));
  auto ball = truncated_ball(p, *doc.oracle, 5, 1);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, ball.vertices.size() - 1);
  std::uniform_int_distribution<int> power(-3, 3);
  int equal = 0;
  for (int t = 0; t < 100; ++t) {
    const Word& g = ball.vertices[pick(rng)];
    const int a = power(rng), b = power(rng);
    FnWord u(std::abs(a), a < 0 ? -1 : 1), w(std::abs(b), b < 0 ? -1 : 1);
    auto r = corridor_cocycle_pairing(p, *doc.oracle, action, g, u, w);
    if (r.status == PairingResult::Status::Equal)
      ++equal;
    else
      v.fail("g=" + to_string(p, g) + " u=" + fn_to_string(u) + " v=" + fn_to_string(w) +
             " lhs=" + std::to_string(r.lhs) + " rhs=" + std::to_string(r.rhs));
  }
  if (v.pass) v.detail = std::to_string(equal) + "/100 equal";
  return v;
}

Verdict flare_discrimination() {
  Verdict v;
  auto doc = load("f2.json");
  const auto& p = doc.presentation;
  const auto& o = *doc.oracle;
  auto fib = parse_action(p, slurp(data("f2-fib-action.json")));
  auto id = parse_action(p, slurp(data("f2-identity-action.json")));
  auto ball = truncated_ball(p, o, 6, 1);
  std::ostringstream d;
  auto pass_part = check_uniform_flare(p, o, fib, ball.vertices, 1.2, 2, 3);
  d << "fibonacci: " << to_string(pass_part.verdict) << " over " << ball.vertices.size()
    << " elements, " << pass_part.violation_count << " violations";
  if (pass_part.verdict != SeparationVerdict::Separated) {
    const auto& x = pass_part.violations.front();
    std::ostringstream why;
    why << "fibonacci action violated " << pass_part.violation_count
        << " times; first witness g=" << to_string(p, x.g) << " |g|=" << x.lw.upper
        << " |alpha_a(g)|=" << x.lu.upper << " |alpha_b(g)|=" << x.lv.upper << " for a="
        << fn_to_string(x.u) << " b=" << fn_to_string(x.v);
    v.fail(why.str());
  }
  for (double lambda : {1.0001, 1.2, 2.0, 10.0}) {
    auto r = check_uniform_flare(p, o, id, ball.vertices, lambda, 2, 3);
    if (r.verdict != SeparationVerdict::Violated || r.violations.empty())
      v.fail("identity action not violated at lambda=" + std::to_string(lambda));
  }
  d << "; identity: violated at every tested lambda";
  if (v.pass) v.detail = d.str();
  return v;
}

Verdict oracle_cross_validation() {
  Verdict v;
  auto z = load("z-example.json");
  const auto& p = z.presentation;
  std::vector<Letter> letters;
  for (int label : {1, 2})
    for (int e = -3; e <= 3; ++e)
      if (e != 0) letters.push_back(Letter::h(label, ModelElement{{e}}));
  std::vector<Word> words{Word{}};
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].size() < 4)
      for (const auto& l : letters) words.push_back(words[i] * Word{l});
  std::vector<char> disagree(words.size(), 0);
  parallel_for(words.size(), [&](std::size_t i) {
    const bool trivial = z.oracle->normal_form(p, words[i]).empty();
    auto verdict = budgeted_word_problem(p, words[i], 16, 24);
    const bool found = verdict.kind == WordProblemVerdict::Kind::Trivial;
    disagree[i] = trivial != found;
  });
  std::size_t bad = 0;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (disagree[i]) {
      if (!bad) v.fail("disagreement on " + to_string(p, words[i]));
      ++bad;
    }

  std::size_t vertices = 0;
  for (const char* name : {"free-product-zz.json", "f2.json"}) {
    auto doc = load(name);
    const auto& q = doc.presentation;
    const auto& o = *doc.oracle;
    const int rho = 2;
    auto bfs = [&](int bound) {
      std::vector<Letter> alphabet;
      for (std::size_t s = 0; s < q.x_symbols().size(); ++s)
        for (int sign : {1, -1}) alphabet.push_back(Letter::x(static_cast<int>(s), sign));
      for (const auto& m : q.models())
        for (int k = -bound; k <= bound; ++k)
          if (k != 0) alphabet.push_back(Letter::h(m.label(), ModelElement{{k}}));
      std::map<Word, int> dist{{Word{}, 0}};
      std::deque<Word> queue{Word{}};
      while (!queue.empty()) {
        Word g = queue.front();
        queue.pop_front();
        const int d = dist[g];
        if (d == 3) continue;
        for (const auto& l : alphabet) {
          Word n = o.normal_form(q, g * Word{l});
          if (dist.emplace(n, d + 1).second) queue.push_back(n);
        }
      }
      return dist;
    };
    auto dist = bfs(rho);
    auto full = bfs(3 * rho);
    auto ball = truncated_ball(q, o, 3, rho);
    if (ball.vertices.size() != dist.size()) v.fail(std::string(name) + ": ball size");
    for (const auto& [g, d] : dist) {
      ++vertices;
      if (ball.depth[*ball.find(g)] != d || rel_length(q, o, g) != RelLength::exact(full.at(g)))
        v.fail(std::string(name) + ": length of " + to_string(q, g));
    }
  }
  if (v.pass)
    v.detail = std::to_string(words.size()) + " words agree; " + std::to_string(vertices) +
               " ball vertices match";
  return v;
}

Verdict cli_determinism() {
  Verdict v;
  const std::string bin = RELHYP_BINARY;
  const std::string fib = data("f2-fib-action.json");
  const std::vector<std::string> commands{
      "parse --input " + data("z-example.json"),
      "ball --input " + data("free-product-zz.json") + " --radius 3 --peripheral-bound 2",
      "ball --input " + data("f2.json") + " --radius 3 --format json",
      "length --input " + data("z-example.json") + " --word \"h1^2 h2\"",
      "area --input " + data("z-example.json") + " --loop \"h1^2 h2^2\"",
      "dehn-profile --input " + data("free-product-zz.json") +
          " --n-max 6 --peripheral-bound 2 --max-loops 2000 --seed 7",
      "dehn-profile --input " + data("z-example.json") +
          " --n-max 2 --peripheral-bound 2 --escalate 2,4,8 --format json",
      "window-lp --input " + data("z-example.json") + " --radii 4,8",
      "window-lp --input " + data("z-example.json") + " --radii 4,8 --exact --format json",
      "flare --input " + data("f2.json") + " --action " + fib +
          " --lambda 1.2 --N 2 --M 3 --max-g-length 6",
      "corridor --input " + data("f2.json") + " --action " + fib +
          " --word \"x y\" --N 2 --u a1 --v \"a1^-1\"",
  };
  int index = 0;
  for (const auto& cmd : commands) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const std::string path =
          "relhyp-acceptance-" + std::to_string(index) + "-" + std::to_string(rep) + ".out";
      const int rc = std::system((bin + " " + cmd + " --output " + path).c_str());
      if (rc != 0) v.fail("exit status " + std::to_string(rc) + " for: " + cmd);
      outputs[rep] = slurp(path);
      std::remove(path.c_str());
    }
    if (outputs[0] != outputs[1] || outputs[0].empty()) v.fail("outputs differ for: " + cmd);
    ++index;
  }
  if (v.pass) v.detail = std::to_string(commands.size()) + " invocations byte-identical";
  return v;
}

}  // namespace

int main() {
  criterion(1, "Z-example LP law n/4 and linear growth witness", 10, lp_law);
  criterion(2, "Z-example area law and unbounded profile under rho escalation", 30, area_law);
  criterion(3, "free product relative Dehn profile vanishes for n <= 10", 10,
            free_product_baseline);
  criterion(4, "cochain algebra property suite", 0, cochain_suite);
  criterion(5, "corridor cocycle pairing identity", 60, pairing_identity);
  criterion(6, "flare discrimination", 120, flare_discrimination);
  criterion(7, "oracle cross-validation", 0, oracle_cross_validation);
  criterion(8, "CLI determinism", 0, cli_determinism);
  std::printf("%d criteria failed\n", failures);
  return failures;
}
