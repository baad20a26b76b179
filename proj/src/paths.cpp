#include "awd/paths.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <utility>

namespace awd {

namespace {

// Guards against walk explosion on adversarial graphs; far above anything the
// bundled programs produce.
constexpr std::size_t kMaxWalkStates = 1u << 20;

}  // namespace

SynthesisResult synthesize_paths(const Cfg& cfg, const std::string& target,
                                 const SynthesisConfig& config) {
  auto node_it = cfg.reach_nodes.find(target);
  if (node_it == cfg.reach_nodes.end()) {
    throw SynthesisError(SynthesisError::Kind::UnknownTarget,
                         "unknown reach label \"" + target + "\"");
  }
  if (cfg.reach_in_loop.count(target)) {
    throw SynthesisError(SynthesisError::Kind::TargetInsideLoop,
                         "reach label \"" + target +
                             "\" sits inside a loop body");
  }

  SynthesisResult result;
  std::set<std::vector<BranchStep>> seen;
  struct State {
    int node;
    std::vector<BranchStep> steps;
  };
  std::deque<State> queue;
  queue.push_back(State{cfg.entry, {}});
  std::size_t processed = 0;

  while (!queue.empty()) {
    if (++processed > kMaxWalkStates) {
      result.truncated = true;
      break;
    }
    State st = std::move(queue.front());
    queue.pop_front();
    if (st.node == kExitId) continue;
    const CfgNode& node = cfg.nodes[static_cast<std::size_t>(st.node)];

    bool hits_target = std::find(node.reaches.begin(), node.reaches.end(),
                                 target) != node.reaches.end();
    if (hits_target) {
      if (result.paths.size() >=
          static_cast<std::size_t>(config.max_paths)) {
        result.truncated = true;
        break;
      }
      if (seen.insert(st.steps).second) {
        result.paths.push_back(PartialPath{target, std::move(st.steps)});
      }
      continue;
    }

    switch (node.term) {
      case CfgNode::Term::Exit:
        break;
      case CfgNode::Term::Jump:
        queue.push_back(State{node.next, std::move(st.steps)});
        break;
      case CfgNode::Term::Branch:
        if (node.in_loop) {
          // Pass over the loop without conditioning on its header.
          queue.push_back(State{node.on_false, std::move(st.steps)});
          break;
        }
        if (st.steps.size() + 1 >
            static_cast<std::size_t>(config.max_depth)) {
          result.truncated = true;
          break;
        }
        {
          std::vector<BranchStep> f = st.steps;
          f.push_back(BranchStep{node.site, false});
          queue.push_back(State{node.on_false, std::move(f)});
          st.steps.push_back(BranchStep{node.site, true});
          queue.push_back(State{node.on_true, std::move(st.steps)});
        }
        break;
    }
  }

  std::sort(result.paths.begin(), result.paths.end(),
            [](const PartialPath& a, const PartialPath& b) {
              if (a.steps.size() != b.steps.size()) {
                return a.steps.size() < b.steps.size();
              }
              return a.steps < b.steps;
            });
  return result;
}

nlohmann::json path_to_json(const PartialPath& path) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : path.steps) {
    steps.push_back({{"label", s.label}, {"taken", s.taken}});
  }
  return steps;
}

}  // namespace awd
