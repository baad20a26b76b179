#include "awd/exec.hpp"

#include <algorithm>
#include <cmath>

#include "awd/compare.hpp"

namespace awd {

namespace {

class Interpreter {
 public:
  Interpreter(const SourceProgram& prog, const ExecLimits& limits,
              const PartialPath* path)
      : prog_(prog), limits_(limits), path_(path) {
    env_.assign(static_cast<std::size_t>(prog.slot_count), 0.0);
    if (path_ != nullptr && !path_->steps.empty()) {
      sentinel_armed_ = true;
    } else if (path_ != nullptr) {
      fully_matched_ = true;  // an empty expected path matches trivially
    }
  }

  void run(std::span<const double> x) {
    std::vector<double> boxed = clamp_to_box(prog_, x);
    for (const auto& in : prog_.inputs) {
      double value = boxed[static_cast<std::size_t>(in.slot)];
      if (in.kind == InputKind::Int) value = std::floor(value);
      env_[static_cast<std::size_t>(in.slot)] = value;
    }
    exec_block(prog_.body);
    finalize();
  }

  AwdOutcome take_outcome() {
    AwdOutcome out;
    out.d = d_;
    out.fully_matched = fully_matched_;
    out.affinity = affinity_;
    out.fork = fork_;
    out.realized = std::move(realized_);
    return out;
  }

  RunResult take_run_result() {
    RunResult out;
    out.realized = std::move(realized_);
    out.reached = std::move(reached_);
    out.last_operands = std::move(last_operands_);
    return out;
  }

 private:
  const SourceProgram& prog_;
  ExecLimits limits_;
  const PartialPath* path_;
  std::vector<double> env_;
  long long steps_ = 0;

  std::vector<BranchStep> realized_;
  std::set<std::string> reached_;
  std::map<int, std::pair<double, double>> last_operands_;

  bool sentinel_armed_ = false;
  std::size_t beats_ = 0;
  double d_ = 0.0;
  bool fully_matched_ = false;
  Affinity affinity_;
  std::optional<Fork> fork_;

  [[noreturn]] void trap(const std::string& msg) {
    throw EvalError(EvalError::Kind::DomainError, msg, realized_);
  }

  void count_step() {
    if (++steps_ > limits_.max_steps) {
      throw EvalError(EvalError::Kind::StepBudget,
                      "evaluation step budget exceeded", realized_);
    }
  }

  double eval(const Expr& e) {
    if (const auto* n = std::get_if<NumberExpr>(&e.node)) {
      return n->value;
    }
    if (const auto* v = std::get_if<VarExpr>(&e.node)) {
      return env_[static_cast<std::size_t>(v->slot)];
    }
    if (const auto* u = std::get_if<NegExpr>(&e.node)) {
      return -eval(*u->operand);
    }
    if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
      double l = eval(*b->lhs);
      double r = eval(*b->rhs);
      switch (b->op) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
        case BinOp::Div: return l / r;  // IEEE: inf/NaN propagate quietly
      }
    }
    const auto& c = std::get<CallExpr>(e.node);
    double a0 = eval(*c.args[0]);
    switch (c.builtin) {
      case Builtin::Sin: return std::sin(a0);
      case Builtin::Cos: return std::cos(a0);
      case Builtin::Tan: return std::tan(a0);
      case Builtin::Fabs: return std::fabs(a0);
      case Builtin::Floor: return std::floor(a0);
      case Builtin::Ceil: return std::ceil(a0);
      case Builtin::Sqrt:
        if (std::isfinite(a0) && a0 < 0.0) trap("sqrt of a negative value");
        return std::sqrt(a0);
      case Builtin::Log:
        if (a0 <= 0.0) trap("log of a non-positive value");
        return std::log(a0);
      case Builtin::Exp:
        return std::exp(a0);
      case Builtin::Pow: {
        double a1 = eval(*c.args[1]);
        if (a0 < 0.0 && std::isfinite(a1) && a1 != std::floor(a1)) {
          trap("pow of a negative base to a non-integer exponent");
        }
        if (a0 == 0.0 && a1 < 0.0) trap("pow of zero to a negative exponent");
        return std::pow(a0, a1);
      }
    }
    return 0.0;
  }

  void sentinel(const Condition& cond, double lhs, double rhs, bool realized) {
    if (!sentinel_armed_) return;
    const BranchStep& expected = path_->steps[beats_];
    if (expected.label != cond.label) {
      throw std::logic_error("sentinel fired at an unexpected branch site");
    }
    if (realized == expected.taken) {
      ++beats_;
      if (beats_ == path_->steps.size()) {
        d_ = 0.0;
        fully_matched_ = true;
        affinity_ = Affinity{0, 0};
        sentinel_armed_ = false;
      }
      return;
    }
    // Fork: distance toward flipping this branch into the expected direction,
    // weighted by how much of the path (from here, inclusive) is unmatched.
    std::uint64_t u = path_->steps.size() - beats_;
    Cmp wanted = expected.taken ? cond.op : negate(cond.op);
    std::uint64_t v_raw = kMaxOperandDistance;
    if (std::isfinite(lhs) && std::isfinite(rhs)) {
      v_raw = operand_distance(wanted, lhs, rhs);
    }
    d_ = encode(u, damp(v_raw));
    affinity_ = Affinity{u, v_raw};
    fork_ = Fork{beats_, cond.label, lhs, rhs};
    sentinel_armed_ = false;
  }

  bool eval_condition(const Condition& cond) {
    double lhs = eval(*cond.lhs);
    double rhs = eval(*cond.rhs);
    last_operands_[cond.label] = {lhs, rhs};
    bool realized = eval_compare(cond.op, lhs, rhs);
    if (!cond.in_loop) {
      sentinel(cond, lhs, rhs, realized);
      realized_.push_back(BranchStep{cond.label, realized});
    }
    return realized;
  }

  void exec_block(const Block& body) {
    for (const auto& s : body) {
      exec_stmt(s);
    }
  }

  void exec_stmt(const Stmt& s) {
    count_step();
    if (const auto* let = std::get_if<LetStmt>(&s.node)) {
      env_[static_cast<std::size_t>(let->slot)] = eval(*let->value);
    } else if (const auto* asg = std::get_if<AssignStmt>(&s.node)) {
      env_[static_cast<std::size_t>(asg->slot)] = eval(*asg->value);
    } else if (const auto* iff = std::get_if<IfStmt>(&s.node)) {
      if (eval_condition(iff->cond)) {
        exec_block(iff->then_body);
      } else {
        exec_block(iff->else_body);
      }
    } else if (const auto* wh = std::get_if<WhileStmt>(&s.node)) {
      while (true) {
        count_step();
        if (!eval_condition(wh->cond)) break;
        exec_block(wh->body);
      }
    } else if (const auto* r = std::get_if<ReachStmt>(&s.node)) {
      reached_.insert(r->label);
    }
  }

  void finalize() {
    if (path_ == nullptr || fully_matched_ || fork_.has_value()) return;
    // Execution ended with expected steps still unmatched: score it as a
    // fork at the termination point with maximal operand distance.
    std::uint64_t u = path_->steps.size() - beats_;
    d_ = encode(u, damp(kMaxOperandDistance));
    affinity_ = Affinity{u, kMaxOperandDistance};
  }
};

}  // namespace

std::vector<double> clamp_to_box(const SourceProgram& prog,
                                 std::span<const double> x) {
  std::vector<double> out(prog.inputs.size(), 0.0);
  for (std::size_t i = 0; i < prog.inputs.size(); ++i) {
    const InputDecl& in = prog.inputs[i];
    double v = i < x.size() ? x[i] : 0.0;
    if (std::isnan(v)) v = in.lo;
    out[i] = std::min(std::max(v, in.lo), in.hi);
  }
  return out;
}

AwdOutcome awd_evaluate(const SourceProgram& prog, const PartialPath& path,
                        std::span<const double> x, const ExecLimits& limits) {
  Interpreter interp(prog, limits, &path);
  interp.run(x);
  return interp.take_outcome();
}

RunResult run_program(const SourceProgram& prog, std::span<const double> x,
                      const ExecLimits& limits) {
  Interpreter interp(prog, limits, nullptr);
  interp.run(x);
  return interp.take_run_result();
}

bool replay(const SourceProgram& prog, std::span<const double> x,
            const std::string& target, const ExecLimits& limits) {
  return run_program(prog, x, limits).reached.count(target) != 0;
}

}  // namespace awd
