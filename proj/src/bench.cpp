#include "awd/bench.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "awd/diagnostics.hpp"
#include "awd/optimize.hpp"
#include "awd/parser.hpp"
#include "awd/text.hpp"

namespace awd {
namespace {

Verdict parse_verdict(const std::string& text) {
  if (text == "REA") return Verdict::Reachable;
  if (text == "UNR") return Verdict::Unreachable;
  throw std::runtime_error("expected verdict \"REA\" or \"UNR\", got \"" +
                           text + "\"");
}

BenchEntry parse_entry(const nlohmann::json& obj) {
  if (!obj.is_object()) throw std::runtime_error("manifest line is not an object");
  BenchEntry entry;
  entry.file = obj.at("file").get<std::string>();
  entry.target = obj.at("target").get<std::string>();
  if (obj.contains("name")) {
    entry.name = obj.at("name").get<std::string>();
  } else {
    entry.name = std::filesystem::path(entry.file).stem().string();
  }
  if (obj.contains("expected")) {
    entry.expected = parse_verdict(obj.at("expected").get<std::string>());
  }
  if (obj.contains("box")) {
    for (const auto& [input, range] : obj.at("box").items()) {
      if (!range.is_array() || range.size() != 2) {
        throw std::runtime_error("box override for \"" + input +
                                 "\" must be [lo, hi]");
      }
      entry.box_overrides[input] = {range[0].get<double>(),
                                    range[1].get<double>()};
    }
  }
  return entry;
}

void apply_overrides(SourceProgram& prog, const BenchEntry& entry) {
  for (const auto& [name, range] : entry.box_overrides) {
    bool found = false;
    for (auto& input : prog.inputs) {
      if (input.name != name) continue;
      found = true;
      auto [lo, hi] = range;
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw std::runtime_error("invalid box override for input \"" + name +
                                 "\"");
      }
      if (input.kind == InputKind::Int &&
          (lo != std::floor(lo) || hi != std::floor(hi))) {
        throw std::runtime_error("box override for int input \"" + name +
                                 "\" must have integral bounds");
      }
      input.lo = lo;
      input.hi = hi;
    }
    if (!found) {
      throw std::runtime_error("box override names unknown input \"" + name +
                               "\"");
    }
  }
}

void run_entry(const BenchmarkManifest& manifest, std::size_t index,
               const VerifyOptions& base, std::uint64_t base_seed,
               SuiteEntryResult& out) {
  const BenchEntry& entry = manifest.entries[index];
  out.name = entry.name;
  out.expected = entry.expected;
  try {
    std::filesystem::path file(entry.file);
    if (file.is_relative()) {
      file = std::filesystem::path(manifest.base_dir) / file;
    }
    SourceProgram prog = parse_program(read_file(file.string()));
    apply_overrides(prog, entry);
    VerifyOptions opts = base;
    opts.opt.rng_seed = derive_seed(base_seed, 0xBE4C, index);
    VerifyReport report = verify(prog, entry.target, opts);
    out.verdict = report.verdict;
    out.min_value = report.min_value;
    out.witness = report.witness;
    out.paths_explored = report.paths_explored;
    out.truncated = report.truncated;
    out.wall_time_s = report.wall_time_s;
  } catch (const SoundnessError& ex) {
    out.soundness_failure = true;
    out.error = ex.what();
  } catch (const std::exception& ex) {
    out.error = ex.what();
  }
}

}  // namespace

BenchmarkManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  BenchmarkManifest manifest;
  manifest.base_dir =
      std::filesystem::absolute(std::filesystem::path(path)).parent_path().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      manifest.entries.push_back(parse_entry(nlohmann::json::parse(line)));
    } catch (const std::exception& ex) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": " + ex.what());
    }
  }
  return manifest;
}

SuiteReport run_suite(const BenchmarkManifest& manifest,
                      const VerifyOptions& base, int jobs,
                      std::uint64_t base_seed) {
  SuiteReport report;
  report.entries.resize(manifest.entries.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= manifest.entries.size()) break;
      run_entry(manifest, i, base, base_seed, report.entries[i]);
    }
  };

  int pool = std::max(1, jobs);
  if (pool == 1 || manifest.entries.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }

  double time_sum = 0.0;
  std::size_t timed = 0;
  for (const auto& entry : report.entries) {
    if (entry.expected && entry.verdict) {
      ++report.with_expectation;
      if (*entry.expected == *entry.verdict) ++report.correct;
    } else if (entry.expected) {
      ++report.with_expectation;  // failed entries count against accuracy
    }
    if (entry.verdict) {
      time_sum += entry.wall_time_s;
      ++timed;
    }
  }
  report.accuracy_defined = report.with_expectation > 0;
  if (report.accuracy_defined) {
    report.accuracy =
        static_cast<double>(report.correct) / report.with_expectation;
  }
  if (timed > 0) report.mean_wall_time_s = time_sum / static_cast<double>(timed);
  return report;
}

std::string suite_table(const SuiteReport& report) {
  std::ostringstream out;
  auto cell = [](const std::string& text, std::size_t width) {
    std::string padded = text;
    if (padded.size() < width) padded.append(width - padded.size(), ' ');
    return padded;
  };
  std::size_t name_width = 4;
  for (const auto& entry : report.entries) {
    name_width = std::max(name_width, entry.name.size());
  }
  out << cell("name", name_width) << "  expect  verdict  "
      << cell("min", 12) << "  paths  time\n";
  for (const auto& entry : report.entries) {
    std::string expect = entry.expected ? to_string(*entry.expected) : "-";
    std::string verdict = entry.verdict ? to_string(*entry.verdict) : "ERROR";
    std::ostringstream min_text;
    if (entry.verdict) {
      min_text.precision(6);
      min_text << entry.min_value;
    } else {
      min_text << "-";
    }
    std::ostringstream time_text;
    time_text.precision(3);
    time_text << std::fixed << entry.wall_time_s << "s";
    out << cell(entry.name, name_width) << "  " << cell(expect, 6) << "  "
        << cell(verdict, 7) << "  " << cell(min_text.str(), 12) << "  "
        << cell(std::to_string(entry.paths_explored), 5) << "  "
        << time_text.str();
    if (!entry.error.empty()) out << "  [" << entry.error << "]";
    out << "\n";
  }
  out << "accuracy: ";
  if (report.accuracy_defined) {
    out << report.correct << "/" << report.with_expectation;
  } else {
    out << "undefined (no expectations)";
  }
  std::ostringstream mean_text;
  mean_text.precision(3);
  mean_text << std::fixed << report.mean_wall_time_s;
  out << "  mean time: " << mean_text.str() << "s\n";
  return out.str();
}

nlohmann::json suite_json(const SuiteReport& report, bool include_timings) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : report.entries) {
    nlohmann::json obj;
    obj["name"] = entry.name;
    if (entry.expected) obj["expected"] = to_string(*entry.expected);
    if (entry.verdict) {
      obj["verdict"] = to_string(*entry.verdict);
      if (std::isfinite(entry.min_value)) {
        obj["min_value"] = entry.min_value;
      } else {
        obj["min_value"] = nullptr;
      }
      if (*entry.verdict == Verdict::Reachable) obj["witness"] = entry.witness;
      obj["paths_explored"] = entry.paths_explored;
      obj["truncated"] = entry.truncated;
    } else {
      obj["error"] = entry.error;
      obj["soundness_failure"] = entry.soundness_failure;
    }
    if (include_timings) obj["wall_time_s"] = entry.wall_time_s;
    entries.push_back(std::move(obj));
  }
  nlohmann::json summary;
  summary["total"] = report.entries.size();
  summary["with_expectation"] = report.with_expectation;
  summary["correct"] = report.correct;
  if (report.accuracy_defined) {
    summary["accuracy"] = report.accuracy;
  } else {
    summary["accuracy"] = nullptr;
  }
  if (include_timings) summary["mean_wall_time_s"] = report.mean_wall_time_s;
  return nlohmann::json{{"entries", std::move(entries)},
                        {"summary", std::move(summary)}};
}

}  // namespace awd
