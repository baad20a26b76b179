#include <string>

#include "doctest.h"

#include "awd/cfg.hpp"
#include "awd/parser.hpp"
#include "awd/paths.hpp"
#include "support/corpus.hpp"

using namespace awd;

namespace {

const char* kCheckSum = R"(input x: real in [0, 10];

let integral = floor(x);
let decimal = x - integral;
let sum = 0;
for (let i = 1; i <= integral; i = i + 1) {
  sum = sum + i;
}
if (sum + decimal == 11) {
  reach("Unexpected");
}
)";

const char* kCot = R"(input x: real in [-2, 2];

fn safe_reciprocal(t) {
  let r = 0;
  if (t != 0) {
    r = 1 / t;
  }
  return r;
}

let y = safe_reciprocal(tan(x));
if (y == 0) {
  reach("reach 0");
}
)";

SynthesisResult run(const char* text, const std::string& target,
                    SynthesisConfig config = {}) {
  SourceProgram prog = parse_program(text);
  Cfg cfg = lower_to_cfg(prog);
  return synthesize_paths(cfg, target, config);
}

}  // namespace

TEST_CASE("nested equality guards give exactly one path") {
  SynthesisResult r = run(
      "input day: int in [-2147483648, 2147483647];\n"
      "input month: int in [-2147483648, 2147483647];\n"
      "\n"
      "if (day == 20 && month == 10) {\n"
      "  reach(\"reached\");\n"
      "}\n",
      "reached");
  CHECK_FALSE(r.truncated);
  REQUIRE(r.paths.size() == 1);
  const PartialPath& p = r.paths[0];
  REQUIRE(p.steps.size() == 2);
  CHECK(p.steps[0] == BranchStep{0, true});
  CHECK(p.steps[1] == BranchStep{1, true});
}

TEST_CASE("loop headers are skipped instead of enumerated") {
  SynthesisResult r = run(kCheckSum, "Unexpected");
  CHECK_FALSE(r.truncated);
  REQUIRE(r.paths.size() == 1);
  REQUIRE(r.paths[0].steps.size() == 1);
  CHECK(r.paths[0].steps[0] == BranchStep{1, true});
}

TEST_CASE("an inlined guard doubles the route count") {
  SynthesisResult r = run(kCot, "reach 0");
  CHECK_FALSE(r.truncated);
  REQUIRE(r.paths.size() == 2);
  // Same length, so the all-false-first order puts the skip route first.
  REQUIRE(r.paths[0].steps.size() == 2);
  REQUIRE(r.paths[1].steps.size() == 2);
  CHECK(r.paths[0].steps[0].taken == false);
  CHECK(r.paths[0].steps[1].taken == true);
  CHECK(r.paths[1].steps[0].taken == true);
  CHECK(r.paths[1].steps[1].taken == true);
}

TEST_CASE("unknown and in-loop targets are rejected") {
  try {
    run(kCheckSum, "missing");
    FAIL("expected a synthesis error");
  } catch (const SynthesisError& ex) {
    CHECK(ex.kind() == SynthesisError::Kind::UnknownTarget);
  }
  try {
    run(
        "input n: int in [0, 5];\n"
        "\n"
        "let i = 0;\n"
        "while (i < n) {\n"
        "  reach(\"inside\");\n"
        "  i = i + 1;\n"
        "}\n",
        "inside");
    FAIL("expected a synthesis error");
  } catch (const SynthesisError& ex) {
    CHECK(ex.kind() == SynthesisError::Kind::TargetInsideLoop);
  }
}

TEST_CASE("path caps set the truncation flag") {
  SynthesisConfig tight;
  tight.max_paths = 1;
  SynthesisResult capped = run(kCot, "reach 0", tight);
  CHECK(capped.truncated);
  CHECK(capped.paths.size() == 1);

  SynthesisConfig shallow;
  shallow.max_depth = 1;
  SynthesisResult cut = run(kCot, "reach 0", shallow);
  CHECK(cut.truncated);
  CHECK(cut.paths.empty());
}

TEST_CASE("results are sorted by length then direction") {
  SynthesisResult r = run(
      "input x: real in [-4, 4];\n"
      "\n"
      "if (x < 0) {\n"
      "  reach(\"neg\");\n"
      "}\n"
      "if (x < 1) {\n"
      "  let a = x;\n"
      "} else {\n"
      "  let b = x;\n"
      "}\n"
      "reach(\"end\");\n",
      "end");
  REQUIRE(r.paths.size() == 4);
  for (const auto& p : r.paths) REQUIRE(p.steps.size() == 2);
  CHECK(r.paths[0].steps[0].taken == false);
  CHECK(r.paths[0].steps[1].taken == false);
  CHECK(r.paths[1].steps[0].taken == false);
  CHECK(r.paths[1].steps[1].taken == true);
  CHECK(r.paths[2].steps[0].taken == true);
  CHECK(r.paths[2].steps[1].taken == false);
  CHECK(r.paths[3].steps[0].taken == true);
  CHECK(r.paths[3].steps[1].taken == true);
}

TEST_CASE("breadth-first walk matches plain recursive enumeration") {
  SynthesisConfig config;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SourceProgram prog = parse_program(testsupport::generate_source(seed));
    Cfg cfg = lower_to_cfg(prog);
    for (const auto& label : prog.reach_labels) {
      SynthesisResult bfs = synthesize_paths(cfg, label, config);
      auto dfs = testsupport::enumerate_paths_dfs(
          cfg, label, static_cast<std::size_t>(config.max_depth));
      CHECK_FALSE(bfs.truncated);
      REQUIRE(bfs.paths.size() == dfs.size());
      for (std::size_t i = 0; i < dfs.size(); ++i) {
        CHECK(bfs.paths[i].steps == dfs[i].steps);
        CHECK(bfs.paths[i].target == label);
      }
    }
  }
}
