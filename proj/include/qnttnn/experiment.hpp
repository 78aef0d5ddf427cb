#ifndef QNTTNN_EXPERIMENT_HPP
#define QNTTNN_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qnttnn/solver.hpp"

namespace qnttnn {

inline constexpr const char* kConvergenceHeader = "iter,objective,rel_change,decrease_margin,elapsed_s";
inline constexpr const char* kReportHeader =
    "rate,activation,alpha,beta,r,iters,rse,psnr,ssim,runtime_s,structure_dev";

/// Ground truth for an experiment: either a frame directory or a synthetic spec
/// of the form "synth:N1xN2xN3:RANK[:SEED]".
struct ExperimentInput {
  QTensor3 truth;
  bool from_frames = false;
  std::string description;
};

/// Throws DataError for unreadable frames and InvalidArgument for a malformed synth spec.
ExperimentInput load_input(const std::string& input);

struct ExperimentRecord {
  double rate = 0.0;
  std::string activation;
  double alpha = 0.0;
  double beta = 0.0;
  Index r = 0;
  int iters = 0;
  double rse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  double runtime_s = 0.0;
  double structure_dev = 0.0;
  bool converged = false;
  std::uint64_t mask_hash = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRecord> records;
  /// Index of the record with the highest PSNR.
  std::size_t best = 0;
};

struct ExperimentOptions {
  std::string input;
  double rate = 0.1;
  std::uint64_t seed = 0;
  SolverConfig solver;
  std::optional<std::filesystem::path> out_dir;
  bool grid = false;
};

/// Solves one completion problem and scores it against the ground truth.
/// SSIM is reported as NaN when frames are smaller than the 11x11 window.
struct SingleRun {
  ExperimentRecord record;
  PamResult pam;
};
SingleRun run_single(const QTensor3& truth, const Mask& mask, double rate, const SolverConfig& cfg);

/// Grid search cells: alpha, beta in {1, 10, 100} and r in {3, ..., 10}
/// clipped to r <= n3.
std::vector<SolverConfig> grid_configs(const SolverConfig& base, Index n3);

/// Samples the mask, runs the solver (or the grid), and writes report.csv,
/// convergence CSVs and, for frame input, the recovered frames of the best cell.
ExperimentReport run_experiment(const ExperimentOptions& opts);

/// One run per activation with the same mask and parameters; writes report.csv.
ExperimentReport ablation_sweep(const ExperimentOptions& opts);

void write_report_csv(std::ostream& os, const ExperimentReport& report);
void write_report_csv(const std::filesystem::path& path, const ExperimentReport& report);
void write_convergence_csv(std::ostream& os, const std::vector<IterationRecord>& history);
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<IterationRecord>& history);

/// Shortest round-trip decimal form; "inf" / "nan" for non-finite values.
std::string format_number(double v);

}  // namespace qnttnn

#endif  // QNTTNN_EXPERIMENT_HPP
