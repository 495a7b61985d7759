#ifndef SSTFT_PIPELINE_HPP
#define SSTFT_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "sstft/config.hpp"
#include "sstft/oracle.hpp"

namespace sstft {

inline constexpr const char* kToolVersion = "sstft 1.0.0";

/// Options shared by the pipeline subcommands. Paths are read before
/// processing so the manifest can record their hashes.
struct RunOptions {
  std::string config_path;
  std::string sut_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::optional<double> idle_override;   // s
  std::optional<double> guard;           // Hz, ghost suppression guard
  std::optional<double> cutoff;          // Hz, demod low-pass (default step/2)
  double tolerance = 60e6;               // Hz, oracle comparison
  double boundary_guard = 0.0;           // Hz, oracle comparison
  bool suppress_ghosts = false;
  std::optional<double> oracle_rate;     // Hz (default 2.1x analysis band)
  std::optional<std::string> plan_json;  // plan subcommand JSON output path
};

int cmd_plan(const RunOptions& opt);
int cmd_simulate(const RunOptions& opt);
int cmd_reconstruct(const RunOptions& opt, const std::string& pd_path);
int cmd_oracle(const RunOptions& opt);
int cmd_compare(const RunOptions& opt, const std::string& recon_path,
                const std::string& tracks_path, const std::string& report_path);
int cmd_run(const RunOptions& opt);

/// Applies the idle override, if any, and revalidates.
SystemConfig effective_config(const SystemConfig& base, const RunOptions& opt);

std::string report_to_json(const ComparisonReport& report);
void print_report_summary(const ComparisonReport& report);

}  // namespace sstft

#endif
