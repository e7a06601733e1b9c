#include <iostream>

#include <CLI11.hpp>

#include "relhyp/cli.hpp"

int main(int argc, char** argv) {
  relhyp::RunConfig c;
  CLI::App app{"Relative presentations, relative Dehn profiles, l-infinity cochain windows and "
               "corridor checks"};
  app.set_version_flag("--version", relhyp::version());
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, const std::string& default_format) {
    sub->add_option("--input", c.input, "Presentation document (JSON)")->required();
    sub->add_option("--output", c.output, "Write the result here instead of stdout");
    sub->add_option("--seed", c.seed, "Seed recorded in the output and used for sampling");
    if (!default_format.empty())
      sub->add_option("--format", c.format, "Output format (json|csv), default " + default_format)
          ->check(CLI::IsMember({"json", "csv"}));
  };
  auto caps = [&](CLI::App* sub) {
    sub->add_option("--max-area", c.max_area, "Area cap of the filling search");
    sub->add_option("--max-len", c.max_len, "Cap on intermediate word length");
    sub->add_option("--max-states", c.max_states, "State cap of the filling search");
  };

  auto* parse = app.add_subcommand("parse", "Validate a presentation document");
  common(parse, "");

  auto* ball = app.add_subcommand("ball", "Truncated ball of the relative Cayley graph");
  common(ball, "csv");
  ball->add_option("--radius", c.radius, "Ball radius")->check(CLI::NonNegativeNumber);
  ball->add_option("--peripheral-bound", c.rho, "Max model-length of H letters")
      ->check(CLI::NonNegativeNumber);

  auto* length = app.add_subcommand("length", "Relative length of a word");
  common(length, "");
  length->add_option("--word", c.word, "Word in the loop grammar")->required();

  auto* area = app.add_subcommand("area", "Relative area of a trivial loop");
  common(area, "");
  area->add_option("--loop", c.word, "Loop in the loop grammar")->required();
  caps(area);

  auto* profile = app.add_subcommand("dehn-profile", "Relative Dehn profile");
  common(profile, "csv");
  profile->add_option("--n-max", c.n_max, "Largest loop length")->check(CLI::PositiveNumber);
  profile->add_option("--peripheral-bound", c.rho, "Max model-length of H letters")
      ->check(CLI::NonNegativeNumber);
  profile->add_option("--escalate", c.escalate, "Peripheral bounds to recompute at n-max")
      ->delimiter(',');
  profile->add_option("--max-loops", c.max_loops, "Enumerate up to this many loops, else sample");
  caps(profile);

  auto* lp = app.add_subcommand("window-lp", "Minimal l-infinity primitives on growing windows");
  common(lp, "csv");
  lp->add_option("--radii", c.radii, "Window sizes")->delimiter(',');
  lp->add_option("--window", c.window, "Window shape")->check(CLI::IsMember({"strip", "ball"}));
  lp->add_option("--cocycle", c.cocycle, "Cocycle family")
      ->check(CLI::IsMember({"ones", "zero", "coboundary"}));
  lp->add_option("--peripheral-bound", c.rho, "Max model-length of peripheral cells");
  lp->add_flag("--exact", c.exact, "Solve over exact rationals");

  auto* flare = app.add_subcommand("flare", "Uniform flare check over a ball of elements");
  common(flare, "");
  flare->add_option("--action", c.action, "F_n action document")->required();
  flare->add_option("--lambda", c.lambda, "Stretch factor");
  flare->add_option("--N", c.N, "F_n distance");
  flare->add_option("--M", c.M, "Length threshold");
  flare->add_option("--max-g-length", c.max_g_length, "Check every g of length up to this");
  flare->add_option("--peripheral-bound", c.rho, "Max model-length of H letters in the ball");

  auto* corridor = app.add_subcommand("corridor", "Corridor of one element under an F_n action");
  common(corridor, "");
  corridor->add_option("--action", c.action, "F_n action document")->required();
  corridor->add_option("--word", c.word, "Base element g")->required();
  corridor->add_option("--lambda", c.lambda, "Stretch factor");
  corridor->add_option("--N", c.N, "F_n distance");
  corridor->add_option("--M", c.M, "Length threshold");
  corridor->add_option("--center-radius", c.center_radius, "Centers w range over |w| <= this");
  corridor->add_option("--lambda-plus", c.lambda_plus, "Side report threshold factor");
  corridor->add_option("--u", c.u, "F_n word, e.g. \"a1 a1\"");
  corridor->add_option("--v", c.v, "F_n word, e.g. \"a1^-1\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : relhyp::kExitParse;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  return relhyp::run(c, std::cout, std::cerr);
}
