#include <CLI11.hpp>

#include <iostream>

#include "phimod/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Filtered isocrystals: weak admissibility, HN filtrations and Newton strata"};
  app.require_subcommand(1);

  phimod::JobSpec job;
  bool open = false;
  int d = 0, e = 0, f = 0;

  const auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* opt = sub->add_option("--input,-i", job.input, "JSON document: path, '-' for stdin, or inline text");
    if (needs_input) opt->required();
    sub->add_flag("--json", job.json, "emit JSON instead of text");
    sub->add_option("--seed", job.seed, "seed for sampled subspaces and flags");
  };

  struct Command {
    const char* name;
    const char* help;
    bool needs_input;
  };
  const Command commands[] = {
      {"mu-of-nu", "l-values, mu(nu) and stratum thresholds of a filtration type", true},
      {"stratum", "membership of a point of A/W in a Newton stratum", true},
      {"newton-polygon", "Newton polygon slopes and retraction of a point", true},
      {"check-wa", "decide weak admissibility of a filtered isocrystal", true},
      {"hn", "Harder-Narasimhan filtration of a filtered isocrystal", true},
      {"slope-decomp", "slope decomposition of an isocrystal", true},
      {"adjoint-image", "characteristic-polynomial valuations of an isocrystal", true},
      {"verify-theorem", "existence check for one point, or a sweep when no input is given", false},
      {"examples", "run the worked examples", false},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, c.needs_input);
    if (std::string(c.name) == "stratum") {
      auto* closed = sub->add_flag("--closed", job.closed, "closed stratum (default)");
      sub->add_flag("--open", open, "open stratum")->excludes(closed);
    }
    if (std::string(c.name) == "verify-theorem") {
      sub->add_option("--budget", job.budget, "seed budget for the witness search")->check(CLI::PositiveNumber);
      sub->add_option("--d", d, "sweep rank")->check(CLI::Range(1, 4));
      sub->add_option("--e", e, "sweep ramification index")->check(CLI::Range(1, 4));
      sub->add_option("--f", f, "sweep residue degree")->check(CLI::Range(1, 4));
      sub->add_option("--grid", job.grid, "largest denominator of sweep valuations")->check(CLI::Range(1, 12));
      sub->add_option("--cells", job.cells, "minimum number of sweep cells");
      sub->add_option("--threads", job.threads, "sweep workers (0: all cores)");
    }
    sub->callback([&job, sub] { job.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : phimod::kExitParse;
  }
  if (open) job.closed = false;
  if (d) job.d = d;
  if (e) job.e = e;
  if (f) job.f = f;

  const phimod::RunResult r = phimod::run(job);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
