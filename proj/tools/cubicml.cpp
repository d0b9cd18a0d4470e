#include <iostream>

#include "CLI11.hpp"
#include "cubicml/harness.hpp"

using cubicml::Error;
using cubicml::harness::Options;

namespace {

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--surface", opt.surface, "surface file, or builtin:<name>");
  cmd->add_option("--field", opt.field_q, "finite field size q");
  cmd->add_option("--precision", opt.precision, "2-adic working precision (bits, <= 64)");
  cmd->add_option("--depth", opt.depth, "tangent-limit experiment depth");
  cmd->add_option("--bound", opt.bound, "extension-degree bound for singularity scans");
  cmd->add_option("--samples", opt.samples, "number of random samples");
  cmd->add_option("--seed", opt.seed, "random seed");
  cmd->add_option("--jobs", opt.jobs, "worker thread count");
  cmd->add_option("--format", opt.format, "output format: text | tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubicml: equivalence and lifting toolkit for cubic surfaces"};
  app.require_subcommand(1);

  Options opt;
  std::string scenario, lift_mode;
  std::vector<std::string> points;

  CLI::App* analyze = app.add_subcommand("analyze", "point/line/class report for one surface");
  add_common(analyze, opt);

  CLI::App* census = app.add_subcommand("census", "full GF(2) coefficient-space census");
  add_common(census, opt);

  CLI::App* verify = app.add_subcommand("verify", "run a named verification scenario");
  add_common(verify, opt);
  verify->add_option("scenario", scenario, "scenario name (or 'list')")->required();

  CLI::App* lift = app.add_subcommand("lift", "2-adic lifting: point | line | triple | tangent-limit");
  add_common(lift, opt);
  lift->add_option("mode", lift_mode, "point | line | triple | tangent-limit")->required();
  lift->add_option("points", points, "comma-separated point coordinates");

  CLI::App* badlocus = app.add_subcommand("badlocus", "sampled bounds suite over GF(q)");
  add_common(badlocus, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) {
      if (opt.surface.empty()) throw Error("analyze needs --surface");
      return cubicml::harness::cmd_analyze(opt, std::cout);
    }
    if (*census) return cubicml::harness::cmd_census(opt, std::cout);
    if (*verify) {
      if (scenario == "list") {
        for (const std::string& n : cubicml::harness::scenario_names()) std::cout << n << "\n";
        return 0;
      }
      return cubicml::harness::cmd_verify(scenario, std::cout);
    }
    if (*lift) return cubicml::harness::cmd_lift(opt, lift_mode, points, std::cout);
    if (*badlocus) return cubicml::harness::cmd_badlocus(opt, std::cout);
  } catch (const Error& e) {
    // Malformed inputs are usage errors; anything raised past argument
    // validation is an assertion failure.
    std::cerr << "error: " << e.what() << "\n";
    std::string w = e.what();
    bool usage = w.find("cannot open") != std::string::npos ||
                 w.find("unknown") != std::string::npos ||
                 w.find("needs") != std::string::npos ||
                 w.find("must be") != std::string::npos ||
                 w.find("supports") != std::string::npos ||
                 w.find("unsupported") != std::string::npos;
    return usage ? 2 : 1;
  }
  return 2;
}
