#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "awd/bench.hpp"
#include "awd/diagnostics.hpp"
#include "awd/parser.hpp"
#include "awd/text.hpp"
#include "awd/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSoundness = 2;

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

int run_verify(const std::string& file, const std::string& target,
               const awd::VerifyOptions& opts,
               const std::optional<std::string>& json_path, bool timings) {
  awd::SourceProgram prog = awd::parse_program(awd::read_file(file));
  awd::VerifyReport report = awd::verify(prog, target, opts);

  std::cout << "verdict: " << awd::to_string(report.verdict) << "\n";
  std::cout << "min AWD: " << awd::format_double(report.min_value) << "\n";
  if (report.verdict == awd::Verdict::Reachable) {
    std::cout << "witness:";
    for (std::size_t i = 0; i < report.witness.size(); ++i) {
      std::cout << " " << prog.inputs[i].name << "="
                << awd::format_double(report.witness[i]);
    }
    std::cout << "\n";
  }
  std::cout << "paths explored: " << report.paths_explored
            << (report.truncated ? " (truncated)" : "") << "\n";
  if (report.verdict == awd::Verdict::Unreachable && report.caveat) {
    std::cout << "note: no witness found within budget; the target may still "
                 "be reachable\n";
  }
  if (timings) {
    std::cout << "wall time: " << awd::format_double(report.wall_time_s)
              << "s\n";
  }
  if (json_path) write_json(*json_path, awd::report_json(report, timings));
  return kExitOk;
}

int run_bench(const std::string& manifest_path, int jobs, std::uint64_t seed,
              const std::optional<std::string>& json_path, bool timings) {
  awd::BenchmarkManifest manifest = awd::load_manifest(manifest_path);
  awd::VerifyOptions opts;
  awd::SuiteReport report = awd::run_suite(manifest, opts, jobs, seed);
  std::cout << awd::suite_table(report);
  if (json_path) write_json(*json_path, awd::suite_json(report, timings));
  for (const auto& entry : report.entries) {
    if (entry.soundness_failure) {
      std::cerr << "soundness failure in " << entry.name << ": " << entry.error
                << "\n";
      return kExitSoundness;
    }
  }
  return kExitOk;
}

int run_oracle(const std::string& file, const std::string& target, int grid) {
  awd::SourceProgram prog = awd::parse_program(awd::read_file(file));
  awd::VerifyReport report = awd::oracle_verify(prog, target, grid);
  std::cout << "verdict: " << awd::to_string(report.verdict) << "\n";
  if (report.verdict == awd::Verdict::Reachable) {
    std::cout << "witness:";
    for (std::size_t i = 0; i < report.witness.size(); ++i) {
      std::cout << " " << prog.inputs[i].name << "="
                << awd::format_double(report.witness[i]);
    }
    std::cout << "\n";
  } else if (report.caveat) {
    std::cout << "note: exhaustive up to grid resolution only\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floating-point reachability checker"};
  app.require_subcommand(1);

  std::string file;
  std::string target;
  std::string manifest_path;
  std::optional<std::string> json_path;
  awd::VerifyOptions opts;
  int jobs = 1;
  int grid = 1000;
  std::uint64_t bench_seed = 0;
  bool timings = false;

  auto* verify = app.add_subcommand("verify", "decide one reach target");
  verify->add_option("file", file, "program source")->required();
  verify->add_option("--target", target, "reach label to decide")->required();
  verify->add_option("--max-depth", opts.synth.max_depth, "path length cap");
  verify->add_option("--max-paths", opts.synth.max_paths, "path count cap");
  verify->add_option("--hops", opts.opt.hops, "basin hops per restart");
  verify->add_option("--restarts", opts.opt.restarts, "optimizer restarts");
  verify->add_option("--seed", opts.opt.rng_seed, "RNG seed");
  verify->add_option("--json", json_path, "write a JSON report here");
  verify->add_flag("--timings", timings, "include wall time in output");

  auto* bench = app.add_subcommand("bench", "run a benchmark manifest");
  bench->add_option("manifest", manifest_path, "JSONL manifest")->required();
  bench->add_option("--jobs", jobs, "worker threads");
  bench->add_option("--seed", bench_seed, "base RNG seed");
  bench->add_option("--json", json_path, "write a JSON report here");
  bench->add_flag("--timings", timings, "include wall times in JSON");

  auto* oracle = app.add_subcommand("oracle", "grid-check one reach target");
  oracle->add_option("file", file, "program source")->required();
  oracle->add_option("--target", target, "reach label to decide")->required();
  oracle->add_option("--grid", grid, "grid points per input")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    int code = app.exit(ex);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      return run_verify(file, target, opts, json_path, timings);
    }
    if (bench->parsed()) {
      return run_bench(manifest_path, jobs, bench_seed, json_path, timings);
    }
    return run_oracle(file, target, grid);
  } catch (const awd::SoundnessError& ex) {
    std::cerr << "soundness failure: " << ex.what() << "\n";
    return kExitSoundness;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
}
