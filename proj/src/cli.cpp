#include "relhyp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "relhyp/cayley.hpp"
#include "relhyp/cochain.hpp"
#include "relhyp/corridor.hpp"
#include "relhyp/errors.hpp"
#include "relhyp/filling.hpp"
#include "relhyp/loop_literal.hpp"
#include "relhyp/oracle.hpp"

#ifndef RELHYP_VERSION
#define RELHYP_VERSION "0.0.0"
#endif

namespace relhyp {

std::string version() { return RELHYP_VERSION; }

std::string format_real(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", x);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string default_format(const std::string& subcommand) {
  if (subcommand == "ball" || subcommand == "dehn-profile" || subcommand == "window-lp")
    return "csv";
  return "json";
}

json config_echo(const RunConfig& c) {
  json j{{"subcommand", c.subcommand},
         {"input", c.input},
         {"format", c.format.empty() ? default_format(c.subcommand) : c.format}};
  const auto& s = c.subcommand;
  if (s == "ball") j.update({{"radius", c.radius}, {"peripheral_bound", c.rho}});
  if (s == "length") j.update({{"word", c.word}});
  if (s == "area")
    j.update({{"loop", c.word},
              {"max_area", c.max_area},
              {"max_len", c.max_len},
              {"max_states", c.max_states}});
  if (s == "dehn-profile")
    j.update({{"n_max", c.n_max},
              {"peripheral_bound", c.rho},
              {"escalate", c.escalate},
              {"max_area", c.max_area},
              {"max_len", c.max_len},
              {"max_states", c.max_states},
              {"max_loops", c.max_loops}});
  if (s == "window-lp")
    j.update({{"radii", c.radii},
              {"window", c.window},
              {"cocycle", c.cocycle},
              {"peripheral_bound", c.rho},
              {"exact", c.exact}});
  if (s == "flare")
    j.update({{"action", c.action},
              {"lambda", c.lambda},
              {"N", c.N},
              {"M", c.M},
              {"max_g_length", c.max_g_length},
              {"peripheral_bound", c.rho}});
  if (s == "corridor")
    j.update({{"action", c.action},
              {"word", c.word},
              {"lambda", c.lambda},
              {"N", c.N},
              {"M", c.M},
              {"center_radius", c.center_radius},
              {"lambda_plus", c.lambda_plus},
              {"u", c.u},
              {"v", c.v}});
  return j;
}

std::string json_report(const RunConfig& c, json result) {
  json j{{"tool", "relhyp"},
         {"version", version()},
         {"config", config_echo(c)},
         {"seed", c.seed},
         {"result", std::move(result)}};
  return j.dump(2) + "\n";
}

std::string csv_header(const RunConfig& c, const std::vector<std::string>& extra = {}) {
  std::string out = "# relhyp " + version() + "\n";
  out += "# config: " + config_echo(c).dump() + "\n";
  out += "# seed: " + std::to_string(c.seed) + "\n";
  for (const auto& line : extra) out += "# " + line + "\n";
  return out;
}

PresentationDocument load(const RunConfig& c) {
  if (c.input.empty()) throw ParseError("--input is required");
  auto doc = parse_document(read_file(c.input));
  if (!doc.oracle) throw OracleError("document '" + c.input + "' carries no oracle");
  return doc;
}

std::string want_format(const RunConfig& c) {
  const std::string f = c.format.empty() ? default_format(c.subcommand) : c.format;
  if (f != "json" && f != "csv") throw ParseError("unknown format '" + f + "'");
  return f;
}

std::string cmd_parse(const RunConfig& c) {
  if (c.input.empty()) throw ParseError("--input is required");
  auto doc = parse_document(read_file(c.input));
  return json_report(c, document_to_json(doc));
}

std::string cmd_ball(const RunConfig& c) {
  auto doc = load(c);
  const auto& p = doc.presentation;
  auto ball = truncated_ball(p, *doc.oracle, c.radius, c.rho);
  if (want_format(c) == "csv")
    return csv_header(c, {"vertices: " + std::to_string(ball.vertices.size())}) +
           ball_edges_csv(p, ball);
  return json_report(c, ball_to_json(p, ball));
}

std::string cmd_length(const RunConfig& c) {
  auto doc = load(c);
  const auto& p = doc.presentation;
  const Word w = parse_loop_literal(p, c.word);
  auto r = rel_length_search(p, *doc.oracle, w);
  return json_report(c, {{"word", to_string(p, w)},
                         {"normal_form", to_string(p, doc.oracle->normal_form(p, w))},
                         {"length", rel_length_to_json(r.length)},
                         {"exact", r.length.is_exact()},
                         {"witness", to_string(p, r.witness)},
                         {"rho", r.rho}});
}

FillingCaps caps_of(const RunConfig& c) { return {c.max_area, c.max_len, c.max_states}; }

std::string cmd_area(const RunConfig& c) {
  auto doc = load(c);
  const auto& p = doc.presentation;
  const Word loop = parse_loop_literal(p, c.word);
  auto r = relative_area(p, &*doc.oracle, loop, caps_of(c));
  json j{{"loop", to_string(p, loop)}, {"states_expanded", r.states_expanded}};
  if (r.certificate) {
    j["area"] = r.certificate->area;
    j["exact"] = r.certificate->minimal_within_cap;
    j["certificate"] = certificate_to_json(p, *r.certificate);
  } else {
    j["area"] = nullptr;
    j["exact"] = false;
    j["reason"] = r.reason;
  }
  return json_report(c, j);
}

std::string cmd_profile(const RunConfig& c) {
  auto doc = load(c);
  const auto& p = doc.presentation;
  ProfileOptions opts{caps_of(c), c.max_loops, c.seed};
  auto profile = dehn_profile(p, *doc.oracle, c.n_max, c.rho, opts);
  std::vector<EscalationRow> esc;
  if (!c.escalate.empty()) esc = rho_escalation(p, *doc.oracle, c.n_max, c.escalate, opts);
  std::optional<LinearFit> fit;
  try {
    fit = linear_fit(profile, esc);
  } catch (const PreconditionError&) {
    // fewer than three exact entries: no fit to report
  }
  if (want_format(c) == "csv") {
    std::vector<std::string> extra{"sampled: " + std::string(profile.sampled ? "true" : "false")};
    for (const auto& row : esc)
      extra.push_back("escalation rho=" + std::to_string(row.rho) +
                      " n=" + std::to_string(row.entry.n) +
                      " max_area=" + std::to_string(row.entry.max_area) +
                      " exact=" + (row.entry.exact ? "true" : "false"));
    if (fit)
      extra.push_back("fit slope=" + format_real(fit->slope) +
                      " intercept=" + format_real(fit->intercept) +
                      " verdict=" + to_string(fit->verdict));
    return csv_header(c, extra) + profile_csv(profile);
  }
  json j = profile_to_json(p, profile);
  json rows = json::array();
  for (const auto& row : esc)
    rows.push_back({{"rho", row.rho},
                    {"n", row.entry.n},
                    {"max_area", row.entry.max_area},
                    {"exact", row.entry.exact},
                    {"loop_count", row.entry.loop_count}});
  j["escalation"] = rows;
  if (fit)
    j["fit"] = {{"slope", fit->slope},
                {"intercept", fit->intercept},
                {"max_residual", fit->max_residual},
                {"verdict", to_string(fit->verdict)}};
  return json_report(c, j);
}

CocycleFamily family_of(const std::string& name) {
  if (name == "ones") return CocycleFamily::Ones;
  if (name == "zero") return CocycleFamily::Zero;
  if (name == "coboundary") return CocycleFamily::Coboundary;
  throw ParseError("unknown cocycle family '" + name + "'");
}

std::string cmd_window_lp(const RunConfig& c) {
  auto doc = load(c);
  const auto& p = doc.presentation;
  const auto& o = *doc.oracle;
  const auto family = family_of(c.cocycle);
  if (c.window != "strip" && c.window != "ball")
    throw ParseError("unknown window kind '" + c.window + "'");
  auto make = [&](int r) {
    Window w = c.window == "strip" ? build_window(p, o, strip_window_spec(p, o, r, c.rho))
                                   : build_window(p, o, r, c.rho);
    Cochain<double> z = make_cocycle(w, family);
    return WindowCocycle{std::move(w), std::move(z)};
  };
  auto report = growth_scan(make, c.radii, c.exact);
  if (want_format(c) == "csv") {
    std::string out = csv_header(c, {"slope: " + format_real(report.slope),
                                     "verdict: " + to_string(report.verdict)});
    out += "radius,norm,feasible,one_cells,interior_two_cells\n";
    for (const auto& row : report.rows)
      out += std::to_string(row.radius) + "," + format_real(row.norm) + "," +
             (row.feasible ? "true" : "false") + "," + std::to_string(row.one_cells) + "," +
             std::to_string(row.interior_two_cells) + "\n";
    return out;
  }
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r{{"radius", row.radius},
           {"norm", row.norm},
           {"feasible", row.feasible},
           {"one_cells", row.one_cells},
           {"interior_two_cells", row.interior_two_cells}};
    auto wc = make(row.radius);
    r["certificate"] = lp_certificate_to_json(p, wc.window, min_linf_primitive(wc.window, wc.z));
    rows.push_back(r);
  }
  return json_report(c, {{"rows", rows},
                         {"slope", report.slope},
                         {"verdict", to_string(report.verdict)}});
}

FreeAction load_action(const RunConfig& c, const PresentationDocument& doc) {
  if (c.action.empty()) throw ParseError("--action is required");
  auto action = parse_action(doc.presentation, read_file(c.action));
  for (std::size_t i = 0; i < action.automorphisms.size(); ++i) {
    auto rep = validate_relaut(doc.presentation, *doc.oracle, action.automorphisms[i]);
    if (!rep.ok)
      throw OracleError("automorphism " + std::to_string(i + 1) +
                        " is not a relative automorphism: " + rep.failures.front());
  }
  return action;
}

std::string cmd_flare(const RunConfig& c) {
  auto doc = load(c);
  const auto& p = doc.presentation;
  auto action = load_action(c, doc);
  auto ball = truncated_ball(p, *doc.oracle, c.max_g_length, c.rho);
  auto report = check_uniform_flare(p, *doc.oracle, action, ball.vertices, c.lambda, c.N, c.M);
  report.exhaustive = true;
  return json_report(c, separation_to_json(p, report));
}

std::string cmd_corridor(const RunConfig& c) {
  auto doc = load(c);
  const auto& p = doc.presentation;
  const auto& o = *doc.oracle;
  auto action = load_action(c, doc);
  const Word g = o.normal_form(p, parse_loop_literal(p, c.word));
  auto corridor = build_corridor(p, o, action, g, c.N);
  SeparationOptions sep;
  sep.center_radius = c.center_radius;
  auto report = check_separated(p, o, action, {g}, c.lambda, c.N, c.M, sep);
  auto sides = side_report(corridor, c.lambda_plus);
  json side_rows = json::array();
  for (const auto& r : sides.rows)
    side_rows.push_back({{"a", fn_to_string(r.a)},
                         {"b", fn_to_string(r.b)},
                         {"a_side_holds", r.a_side_holds},
                         {"b_side_holds", r.b_side_holds}});
  json j{{"corridor", corridor_to_json(p, corridor)},
         {"separation", separation_to_json(p, report)},
         {"sides", {{"all_hold", sides.all_hold}, {"rows", side_rows}}}};
  if (!c.u.empty() || !c.v.empty())
    j["pairing"] = pairing_to_json(corridor_cocycle_pairing(
        p, o, action, g, fn_reduce(fn_from_string(c.u)), fn_reduce(fn_from_string(c.v))));
  return json_report(c, j);
}

std::string dispatch(const RunConfig& c) {
  const auto& s = c.subcommand;
  if (s == "parse") return cmd_parse(c);
  if (s == "ball") return cmd_ball(c);
  if (s == "length") return cmd_length(c);
  if (s == "area") return cmd_area(c);
  if (s == "dehn-profile") return cmd_profile(c);
  if (s == "window-lp") return cmd_window_lp(c);
  if (s == "flare") return cmd_flare(c);
  if (s == "corridor") return cmd_corridor(c);
  throw ParseError("unknown subcommand '" + s + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = dispatch(config);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const OracleError& e) {
    err << "oracle error: " << e.what() << "\n";
    return kExitOracle;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  }
  if (config.output.empty()) {
    out << text;
    return out ? kExitOk : kExitOther;
  }
  std::ofstream file(config.output, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write '" << config.output << "'\n";
    return kExitOther;
  }
  return kExitOk;
}

}  // namespace relhyp
