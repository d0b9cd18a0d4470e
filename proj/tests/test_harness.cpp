#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <sstream>

#include "cubicml/harness.hpp"
#include "doctest.h"

using namespace cubicml;
using harness::Options;

TEST_CASE("load_surface resolves builtins and rejects junk") {
  ParsedForm pf = harness::load_surface("builtin:diagonal");
  CHECK(pf.domain == Domain::Integer);
  CHECK(pf.int_form->coefficient({3, 0, 0, 0}) == BigInt(1));

  ParsedForm pg = harness::load_surface("builtin:manin-gf4");
  CHECK(pg.domain == Domain::Field);
  CHECK(pg.field->q() == 4);

  CHECK_THROWS_AS(harness::load_surface("builtin:nope"), Error);
  CHECK_THROWS_AS(harness::load_surface("/no/such/file.surface"), Error);
}

TEST_CASE("analyze report: golden lines for the four-point surface") {
  Options opt;
  opt.surface = "builtin:v1-mod2";
  std::ostringstream out;
  CHECK(harness::cmd_analyze(opt, out) == 0);
  std::string r = out.str();
  CHECK(r.find("field: GF(2)\n") != std::string::npos);
  CHECK(r.find("points: 4 smooth, 1 singular") != std::string::npos);
  CHECK(r.find("smooth: (1:0:0:0) (1:0:0:1) (1:0:1:0) (1:0:1:1)") != std::string::npos);
  CHECK(r.find("lines: 0\n") != std::string::npos);
  CHECK(r.find("hessian mod 2: nonzero") != std::string::npos);
  CHECK(r.find("universal classes: 2\n") != std::string::npos);
  CHECK(r.find("class 0: (1:0:0:0)\n") != std::string::npos);
  CHECK(r.find("class 1: (1:0:0:1) (1:0:1:0) (1:0:1:1)\n") != std::string::npos);
  CHECK(r.find("U2 classes: 2") != std::string::npos);
  CHECK(r.find("U3 classes: 1") != std::string::npos);
  CHECK(r.find("identity=1 latin=1 commutative=1 moufang=1") != std::string::npos);
  CHECK(r.find("base independent: 1") != std::string::npos);
}

TEST_CASE("analyze report: nine-point surface over GF(4)") {
  Options opt;
  opt.surface = "builtin:manin-gf4";
  std::ostringstream out;
  CHECK(harness::cmd_analyze(opt, out) == 0);
  std::string r = out.str();
  CHECK(r.find("field: GF(4)\n") != std::string::npos);
  CHECK(r.find("points: 9 smooth, 0 singular") != std::string::npos);
  CHECK(r.find("lines: 0\n") != std::string::npos);
  CHECK(r.find("eckardt points: 9") != std::string::npos);
  CHECK(r.find("universal classes: 9\n") != std::string::npos);
  CHECK(r.find("hessian mod 2: n/a") != std::string::npos);
}

TEST_CASE("verify: every scenario passes, unknown name is a usage error") {
  for (const std::string& name : harness::scenario_names()) {
    CAPTURE(name);
    std::ostringstream out;
    CHECK(harness::cmd_verify(name, out) == 0);
    CHECK(out.str().find("FAIL") == std::string::npos);
  }
  std::ostringstream out;
  CHECK(harness::cmd_verify("no-such-scenario", out) == 2);
}

TEST_CASE("lift command: golden outputs on the integer diagonal surface") {
  Options opt;
  opt.surface = "builtin:diagonal";
  opt.precision = 16;

  std::ostringstream out;
  CHECK(harness::cmd_lift(opt, "point", {"1,1,0,0"}, out) == 0);
  // 1 + y^3 = 0 mod 2^16 forces y = -1 = 65535.
  CHECK(out.str().find("lifted point: 1 65535 0 0") != std::string::npos);

  std::ostringstream out2;
  CHECK(harness::cmd_lift(opt, "line", {"1,1,0,0", "0,0,1,1"}, out2) == 0);
  CHECK(out2.str().find("coefficients: 65535 0 0 65535") != std::string::npos);

  std::ostringstream out3;
  CHECK(harness::cmd_lift(opt, "triple", {"1,1,0,0", "1,0,1,0", "0,1,1,0"}, out3) == 0);
  CHECK(out3.str().find("precision loss: 0") != std::string::npos);

  CHECK_THROWS_AS(harness::cmd_lift(opt, "point", {}, out), Error);
  CHECK_THROWS_AS(harness::cmd_lift(opt, "warp", {"1,1,0,0"}, out), Error);
  CHECK_THROWS_AS(harness::cmd_lift(opt, "point", {"1,2,0,0"}, out), Error);
}

TEST_CASE("lift tangent-limit: TSV rows match the closed-form profile") {
  Options opt;
  opt.precision = 40;
  opt.depth = 5;
  std::ostringstream out;
  CHECK(harness::cmd_lift(opt, "tangent-limit", {}, out) == 0);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "i\tv_min(r_i - R)\trational_line(bool)\tloss_bits");
  for (unsigned i = 1; i <= 5; ++i) {
    std::getline(in, line);
    std::ostringstream want;
    want << i << "\t" << i << "\t1\t" << 3 * i;
    CHECK(line == want.str());
  }
  std::getline(in, line);
  CHECK(line == "nondecreasing: 1");
}

TEST_CASE("badlocus: seeded suite passes for q = 2 and q = 4") {
  for (unsigned q : {2u, 4u}) {
    CAPTURE(q);
    Options opt;
    opt.field_q = q;
    opt.samples = 25;
    opt.seed = 99;
    std::ostringstream out;
    CHECK(harness::cmd_badlocus(opt, out) == 0);
    CHECK(out.str().find("FAIL") == std::string::npos);
  }
  Options opt;
  opt.field_q = 5;
  std::ostringstream out;
  CHECK_THROWS_AS(harness::cmd_badlocus(opt, out), Error);
}

TEST_CASE("census: records are job-count independent and match the slow analyzer") {
  std::vector<CensusRecord> rec1, rec3;
  CensusSummary s1 = run_census(4, 1, &rec1);
  CensusSummary s3 = run_census(4, 3, &rec3);
  CHECK(s1.smooth_count == s3.smooth_count);
  CHECK(s1.exceptional_count == s3.exceptional_count);
  CHECK(s1.dichotomy_violations == 0);
  CHECK(s3.dichotomy_violations == 0);
  CHECK(s1.exceptional_masks == s3.exceptional_masks);
  REQUIRE(rec1.size() == rec3.size());
  CHECK(rec1.size() == (1u << 20) - 1);

  bool equal = true;
  for (size_t i = 0; i < rec1.size(); ++i) {
    const CensusRecord &a = rec1[i], &b = rec3[i];
    equal = equal && a.mask == b.mask && a.smooth == b.smooth && a.n == b.n &&
            a.line_count == b.line_count && a.all_eckardt == b.all_eckardt &&
            a.class_count == b.class_count && a.exceptional == b.exceptional;
  }
  CHECK(equal);

  // Re-verify a random sample of records against the direct scanner.
  std::mt19937_64 rng(20260826);
  unsigned mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    const CensusRecord& r = rec1[rng() % rec1.size()];
    CensusRecord slow = analyze_mask_slow(r.mask, 4);
    bool same = slow.smooth == r.smooth &&
                (!r.smooth || (slow.n == r.n && slow.line_count == r.line_count &&
                               slow.all_eckardt == r.all_eckardt &&
                               slow.class_count == r.class_count &&
                               slow.exceptional == r.exceptional));
    if (!same) ++mismatches;
  }
  CHECK(mismatches == 0);

  // Exceptional surfaces: three singleton classes, line-free, all Eckardt.
  for (uint32_t mask : s1.exceptional_masks) {
    const CensusRecord& r = rec1[mask - 1];
    CHECK(r.n == 3);
    CHECK(r.class_count == 3);
    CHECK(r.line_count == 0);
    CHECK(r.all_eckardt);
  }
  CHECK(s1.exceptional_count > 0);
}
