#pragma once

#include <iosfwd>

#include "cubicml/builtin.hpp"
#include "cubicml/census.hpp"

namespace cubicml {
namespace harness {

struct Options {
  std::string surface;       // file path, or builtin:<name>
  unsigned field_q = 2;      // target field for integer-domain surfaces
  unsigned precision = 64;   // 2-adic working precision
  unsigned depth = 10;       // tangent-limit experiment depth
  unsigned bound = 4;        // singularity scan bound
  unsigned samples = 100;    // sampling count for the bounds suite
  uint64_t seed = 2026;      // sampling seed
  unsigned jobs = 1;
  std::string format = "text";  // text | tsv
};

/// Load a surface from a file or the builtin registry.
ParsedForm load_surface(const std::string& spec_string);

/// Exit codes: 0 all checks pass, 1 assertion failure, 2 usage error.
int cmd_analyze(const Options& opt, std::ostream& out);
int cmd_census(const Options& opt, std::ostream& out);
int cmd_verify(const std::string& scenario, std::ostream& out);
int cmd_lift(const Options& opt, const std::string& mode,
             const std::vector<std::string>& point_args, std::ostream& out);
int cmd_badlocus(const Options& opt, std::ostream& out);

std::vector<std::string> scenario_names();

}  // namespace harness
}  // namespace cubicml
