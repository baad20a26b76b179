#include "support/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace awd::testsupport {
namespace {

// All randomness goes through these helpers so the generated text does not
// depend on the standard library's distribution implementations.
std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

bool coin(std::mt19937_64& rng, int percent) {
  return pick(rng, 100) < static_cast<std::uint64_t>(percent);
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::string run() {
    int inputs = coin(rng_, 50) ? 2 : 1;
    for (int i = 0; i < inputs; ++i) {
      double bound = 1.0 + static_cast<double>(pick(rng_, 8));
      out_ << "input " << kInputs[i] << ": real in [-" << bound << ", "
           << bound << "];\n";
      vars_.push_back(kInputs[i]);
    }
    out_ << "\n";

    int lets = 1 + static_cast<int>(pick(rng_, 3));
    for (int i = 0; i < lets; ++i) {
      std::string name(1, static_cast<char>('a' + i));
      out_ << "let " << name << " = " << expr(2) << ";\n";
      vars_.push_back(name);
    }

    int depth = 1 + static_cast<int>(pick(rng_, 3));
    emit_if(depth, 0);
    return out_.str();
  }

 private:
  static constexpr const char* kInputs[2] = {"x", "y"};

  std::string constant() {
    double value = static_cast<double>(pick(rng_, 17)) * 0.5 - 4.0;
    std::ostringstream text;
    if (value < 0) {
      text << "(0 - " << -value << ")";
    } else {
      text << value;
    }
    return text.str();
  }

  std::string leaf() {
    if (coin(rng_, 55)) return vars_[pick(rng_, vars_.size())];
    return constant();
  }

  std::string expr(int fuel) {
    if (fuel == 0 || coin(rng_, 25)) return leaf();
    switch (pick(rng_, 6)) {
      case 0: return expr(fuel - 1) + " + " + expr(fuel - 1);
      case 1: return expr(fuel - 1) + " - " + expr(fuel - 1);
      case 2: return "(" + expr(fuel - 1) + ") * (" + expr(fuel - 1) + ")";
      case 3: return "fabs(" + expr(fuel - 1) + ")";
      case 4: return "floor(" + expr(fuel - 1) + ")";
      default: return "sin(" + expr(fuel - 1) + ")";
    }
  }

  std::string condition() {
    static constexpr const char* kCmps[] = {"<", "<=", ">", ">=", "!="};
    const std::string var = vars_[pick(rng_, vars_.size())];
    // Equality tests sit on floor plateaus so they cut out full-measure
    // regions rather than knife edges.
    if (coin(rng_, 15)) {
      return "floor(" + var + ") == " +
             std::to_string(static_cast<long long>(pick(rng_, 7)) - 3);
    }
    return var + " " + kCmps[pick(rng_, 5)] + " " + constant();
  }

  void indent(int level) {
    for (int i = 0; i < level; ++i) out_ << "  ";
  }

  void emit_leaf(int level, bool force_reach) {
    if (force_reach || coin(rng_, 70)) {
      indent(level);
      out_ << "reach(\"t" << label_count_++ << "\");\n";
    } else {
      indent(level);
      out_ << "let f" << filler_count_++ << " = " << expr(1) << ";\n";
    }
  }

  void emit_arm(int depth, int level, bool force_reach) {
    if (depth > 1 && coin(rng_, 55)) {
      emit_if(depth - 1, level);
      if (force_reach && label_count_ == 0) emit_leaf(level, true);
    } else {
      emit_leaf(level, force_reach && label_count_ == 0);
    }
  }

  void emit_if(int depth, int level) {
    indent(level);
    out_ << "if (" << condition() << ") {\n";
    emit_arm(depth, level + 1, false);
    indent(level);
    out_ << "} else {\n";
    emit_arm(depth, level + 1, level == 0);
    indent(level);
    out_ << "}\n";
  }

  std::mt19937_64 rng_;
  std::ostringstream out_;
  std::vector<std::string> vars_;
  int label_count_ = 0;
  int filler_count_ = 0;
};

}  // namespace

std::string generate_source(std::uint64_t seed) {
  return Generator(seed).run();
}

std::optional<std::uint64_t> nextafter_steps(double a, double b,
                                             std::uint64_t cap) {
  if (std::isnan(a) || std::isnan(b)) return std::nullopt;
  double toward = b;
  std::uint64_t steps = 0;
  double cur = a;
  while (cur != b) {
    if (steps == cap) return std::nullopt;
    double next = std::nextafter(cur, toward);
    if (next == cur) return std::nullopt;
    cur = next;
    ++steps;
  }
  return steps;
}

namespace {

void dfs(const Cfg& cfg, int node, const std::string& target,
         std::size_t max_depth, std::vector<BranchStep>& steps,
         std::vector<PartialPath>& out) {
  if (node == kExitId) return;
  const CfgNode& block = cfg.nodes[static_cast<std::size_t>(node)];
  for (const auto& label : block.reaches) {
    if (label == target) {
      out.push_back(PartialPath{target, steps});
      return;
    }
  }
  switch (block.term) {
    case CfgNode::Term::Exit:
      return;
    case CfgNode::Term::Jump:
      dfs(cfg, block.next, target, max_depth, steps, out);
      return;
    case CfgNode::Term::Branch:
      if (block.in_loop) {
        dfs(cfg, block.on_false, target, max_depth, steps, out);
        return;
      }
      if (steps.size() >= max_depth) return;
      for (bool taken : {false, true}) {
        steps.push_back(BranchStep{block.site, taken});
        dfs(cfg, taken ? block.on_true : block.on_false, target, max_depth,
            steps, out);
        steps.pop_back();
      }
      return;
  }
}

}  // namespace

std::vector<PartialPath> enumerate_paths_dfs(const Cfg& cfg,
                                             const std::string& target,
                                             std::size_t max_depth) {
  std::vector<PartialPath> out;
  std::vector<BranchStep> steps;
  dfs(cfg, cfg.entry, target, max_depth, steps, out);
  std::sort(out.begin(), out.end(), [](const PartialPath& a,
                                       const PartialPath& b) {
    if (a.steps.size() != b.steps.size()) {
      return a.steps.size() < b.steps.size();
    }
    return a.steps < b.steps;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const PartialPath& a, const PartialPath& b) {
                          return a.steps == b.steps;
                        }),
            out.end());
  return out;
}

}  // namespace awd::testsupport
