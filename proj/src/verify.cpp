#include "awd/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "awd/cfg.hpp"

namespace awd {

namespace {

double operand_gap_value(const SourceProgram& prog, const PartialPath& path,
                         const ExecLimits& limits,
                         std::span<const double> x) {
  AwdOutcome out = awd_evaluate(prog, path, x, limits);
  return damp(out.affinity.v_raw);
}

void collect_constants(const Expr& e, std::vector<double>& out) {
  if (const auto* n = std::get_if<NumberExpr>(&e.node)) {
    out.push_back(n->value);
  } else if (const auto* u = std::get_if<NegExpr>(&e.node)) {
    collect_constants(*u->operand, out);
  } else if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
    collect_constants(*b->lhs, out);
    collect_constants(*b->rhs, out);
  } else if (const auto* c = std::get_if<CallExpr>(&e.node)) {
    for (const auto& a : c->args) collect_constants(*a, out);
  }
}

void collect_constants(const Block& body, std::vector<double>& out);

void collect_constants(const Stmt& s, std::vector<double>& out) {
  if (const auto* let = std::get_if<LetStmt>(&s.node)) {
    collect_constants(*let->value, out);
  } else if (const auto* asg = std::get_if<AssignStmt>(&s.node)) {
    collect_constants(*asg->value, out);
  } else if (const auto* iff = std::get_if<IfStmt>(&s.node)) {
    collect_constants(*iff->cond.lhs, out);
    collect_constants(*iff->cond.rhs, out);
    collect_constants(iff->then_body, out);
    collect_constants(iff->else_body, out);
  } else if (const auto* wh = std::get_if<WhileStmt>(&s.node)) {
    collect_constants(*wh->cond.lhs, out);
    collect_constants(*wh->cond.rhs, out);
    collect_constants(wh->body, out);
  }
}

void collect_constants(const Block& body, std::vector<double>& out) {
  for (const auto& s : body) collect_constants(s, out);
}

// Grid coordinates for one input dimension: a uniform sweep plus probe
// values derived from the program's constants, which is what makes equality
// guards findable by brute force.
std::vector<double> axis_values(const SourceProgram& prog, double lo,
                                double hi, long long grid) {
  std::vector<double> values;
  if (grid <= 1) {
    values.push_back(lo + 0.5 * (hi - lo));
  } else {
    for (long long k = 0; k < grid; ++k) {
      double t = static_cast<double>(k) / static_cast<double>(grid - 1);
      values.push_back(lo + t * (hi - lo));
    }
  }

  std::vector<double> consts;
  collect_constants(prog.body, consts);
  std::sort(consts.begin(), consts.end());
  consts.erase(std::unique(consts.begin(), consts.end()), consts.end());
  if (consts.size() > 24) consts.resize(24);

  std::vector<double> probes = {0.0, 1.0, -1.0, lo, hi};
  auto add = [&](double v) { probes.push_back(v); };
  for (double c : consts) {
    add(c);
    add(-c);
    for (double off : {0.5, 1.0, 2.0}) {
      add(c - off);
      add(c + off);
    }
    add(std::nextafter(c, std::numeric_limits<double>::infinity()));
    add(std::nextafter(c, -std::numeric_limits<double>::infinity()));
  }
  for (double a : consts) {
    for (double b : consts) {
      add(a + b);
      add(a - b);
      add(a * b);
      if (b != 0.0) add(a / b);
    }
  }
  for (double v : probes) {
    if (std::isfinite(v) && v >= lo && v <= hi) values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

const char* to_string(Verdict v) {
  return v == Verdict::Reachable ? "REA" : "UNR";
}

Box input_box(const SourceProgram& prog) {
  Box box;
  box.lo.reserve(prog.inputs.size());
  box.hi.reserve(prog.inputs.size());
  for (const auto& in : prog.inputs) {
    box.lo.push_back(in.lo);
    box.hi.push_back(in.hi);
  }
  return box;
}

Objective make_awd_objective(const SourceProgram& prog, PartialPath path,
                             ExecLimits limits) {
  double penalty =
      static_cast<double>(path.steps.size() + 1) * kDepthWeight;
  return [&prog, path = std::move(path), limits,
          penalty](std::span<const double> x) -> double {
    try {
      return awd_evaluate(prog, path, x, limits).d;
    } catch (const EvalError&) {
      return penalty;
    }
  };
}

Objective make_operand_gap_objective(const SourceProgram& prog,
                                     PartialPath path, ExecLimits limits) {
  return [&prog, path = std::move(path),
          limits](std::span<const double> x) -> double {
    try {
      return operand_gap_value(prog, path, limits, x);
    } catch (const EvalError&) {
      return kDepthWeight;
    }
  };
}

Objective make_guard_gap_objective(const SourceProgram& prog, int site,
                                   ExecLimits limits) {
  return [&prog, site, limits](std::span<const double> x) -> double {
    try {
      RunResult run = run_program(prog, x, limits);
      auto it = run.last_operands.find(site);
      if (it == run.last_operands.end()) {
        return std::numeric_limits<double>::infinity();
      }
      double gap = it->second.first - it->second.second;
      return gap * gap;
    } catch (const EvalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
}

VerifyReport verify(const SourceProgram& prog, const std::string& target,
                    const VerifyOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Cfg cfg = lower_to_cfg(prog);
  SynthesisResult synth = synthesize_paths(cfg, target, opts.synth);
  if (synth.paths.empty()) {
    if (synth.truncated) {
      throw VerifyError("path budget exhausted before reaching \"" + target +
                        "\"; raise the depth or path limits");
    }
    throw VerifyError("no control-flow route reaches \"" + target + "\"");
  }

  VerifyReport report;
  report.truncated = synth.truncated;
  report.min_value = std::numeric_limits<double>::infinity();
  Box box = input_box(prog);

  for (std::size_t i = 0; i < synth.paths.size(); ++i) {
    const PartialPath& path = synth.paths[i];
    OptimizerConfig cfg_opt = opts.opt;
    cfg_opt.rng_seed = derive_seed(opts.opt.rng_seed, 0x50A7, i);
    Objective objective = make_awd_objective(prog, path, opts.limits);
    MinimizationResult res = basinhopping(objective, box, cfg_opt);
    report.min_value = std::min(report.min_value, res.best_value);
    report.per_path.push_back(PathOutcome{path, res});
    report.paths_explored = i + 1;
    if (res.best_value == 0.0) {
      bool confirmed = false;
      try {
        confirmed = replay(prog, res.best_x, target, opts.limits);
      } catch (const EvalError&) {
        confirmed = false;
      }
      if (!confirmed) {
        throw SoundnessError(
            "zero minimum whose witness does not replay to \"" + target +
            "\"");
      }
      report.verdict = Verdict::Reachable;
      report.witness = std::move(res.best_x);
      report.caveat = false;
      break;  // one witness settles the target
    }
  }

  auto t1 = std::chrono::steady_clock::now();
  report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  return report;
}

VerifyReport oracle_verify(const SourceProgram& prog,
                           const std::string& target, long long grid_per_dim,
                           const ExecLimits& limits) {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t dims = prog.inputs.size();
  if (dims > 2) {
    throw std::invalid_argument(
        "grid check supports at most 2 inputs, got " + std::to_string(dims));
  }
  double requested = std::pow(static_cast<double>(std::max<long long>(
                                  grid_per_dim, 1)),
                              static_cast<double>(dims));
  if (requested > 1e7) {
    throw std::invalid_argument("grid of " + std::to_string(grid_per_dim) +
                                " per dimension exceeds the 1e7 point cap");
  }
  if (!prog.has_reach_label(target)) {
    throw SynthesisError(SynthesisError::Kind::UnknownTarget,
                         "unknown reach label \"" + target + "\"");
  }

  VerifyReport report;
  report.min_value = std::numeric_limits<double>::infinity();

  auto try_point = [&](std::vector<double> x) -> bool {
    try {
      if (!replay(prog, x, target, limits)) return false;
    } catch (const EvalError&) {
      return false;
    }
    report.verdict = Verdict::Reachable;
    report.witness = std::move(x);
    report.caveat = false;
    report.min_value = 0.0;
    return true;
  };

  bool found = false;
  if (dims == 0) {
    found = try_point({});
  } else if (dims == 1) {
    for (double v :
         axis_values(prog, prog.inputs[0].lo, prog.inputs[0].hi,
                     grid_per_dim)) {
      if (try_point({v})) {
        found = true;
        break;
      }
    }
  } else {
    std::vector<double> xs = axis_values(prog, prog.inputs[0].lo,
                                         prog.inputs[0].hi, grid_per_dim);
    std::vector<double> ys = axis_values(prog, prog.inputs[1].lo,
                                         prog.inputs[1].hi, grid_per_dim);
    for (double vx : xs) {
      for (double vy : ys) {
        if (try_point({vx, vy})) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }
  (void)found;

  auto t1 = std::chrono::steady_clock::now();
  report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  return report;
}

nlohmann::json report_json(const VerifyReport& report, bool include_timings) {
  nlohmann::json j;
  j["verdict"] = to_string(report.verdict);
  if (std::isfinite(report.min_value)) {
    j["min_value"] = report.min_value;
  } else {
    j["min_value"] = nullptr;
  }
  if (report.verdict == Verdict::Reachable) {
    j["witness"] = report.witness;
  }
  j["caveat"] = report.caveat;
  j["paths_explored"] = report.paths_explored;
  j["truncated"] = report.truncated;
  if (include_timings) {
    j["wall_time_s"] = report.wall_time_s;
  }
  return j;
}

}  // namespace awd
