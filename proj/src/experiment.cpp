#include "qnttnn/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <regex>

#include "qnttnn/errors.hpp"
#include "qnttnn/frames.hpp"
#include "qnttnn/metrics.hpp"
#include "qnttnn/random.hpp"
#include "qnttnn/synth.hpp"

namespace qnttnn {

namespace fs = std::filesystem;

namespace {

constexpr double kGridPenalties[] = {1.0, 10.0, 100.0};
constexpr Index kGridRankMin = 3;
constexpr Index kGridRankMax = 10;

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string cell_suffix(const SolverConfig& cfg) {
  return "a" + format_number(cfg.alpha) + "_b" + format_number(cfg.beta) + "_r" +
         std::to_string(cfg.rank);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ExperimentInput load_input(const std::string& input) {
  static const std::regex synth(R"(synth:(\d+)x(\d+)x(\d+):(\d+)(?::(\d+))?)");
  std::smatch m;
  if (input.rfind("synth:", 0) == 0) {
    if (!std::regex_match(input, m, synth)) {
      throw InvalidArgument("malformed synth spec '" + input +
                            "' (expected synth:N1xN2xN3:RANK[:SEED])");
    }
    const std::uint64_t seed = m[5].matched ? std::stoull(m[5].str()) : 0;
    return {synth_lowrank(std::stoll(m[1].str()), std::stoll(m[2].str()), std::stoll(m[3].str()),
                          std::stoll(m[4].str()), seed),
            false, input};
  }
  return {frames_to_tensor(load_frames(input)), true, input};
}

SingleRun run_single(const QTensor3& truth, const Mask& mask, double rate, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SingleRun run;
  run.pam = run_pam(project_mask(QTensor3(truth.n1(), truth.n2(), truth.n3()), truth, mask), mask,
                    cfg);
  ExperimentRecord& rec = run.record;
  rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.rate = rate;
  rec.activation = cfg.activation.name();
  rec.alpha = cfg.alpha;
  rec.beta = cfg.beta;
  rec.r = cfg.rank;
  rec.iters = run.pam.iterations;
  rec.rse = rse(run.pam.x, truth);
  rec.psnr = psnr(run.pam.x, truth);
  rec.ssim = (truth.n1() >= 11 && truth.n2() >= 11) ? ssim(run.pam.x, truth)
                                                     : std::numeric_limits<double>::quiet_NaN();
  rec.structure_dev = run.pam.structure_dev;
  rec.converged = run.pam.converged;
  rec.mask_hash = mask.hash();
  return run;
}

std::vector<SolverConfig> grid_configs(const SolverConfig& base, Index n3) {
  std::vector<SolverConfig> cells;
  for (double a : kGridPenalties) {
    for (double b : kGridPenalties) {
      for (Index r = kGridRankMin; r <= std::min(kGridRankMax, n3); ++r) {
        SolverConfig cfg = base;
        cfg.alpha = a;
        cfg.beta = b;
        cfg.rank = r;
        cells.push_back(cfg);
      }
    }
  }
  if (cells.empty()) {
    throw InvalidArgument("grid search needs n3 >= " + std::to_string(kGridRankMin));
  }
  return cells;
}

namespace {

void finish_report(ExperimentReport& report) {
  report.best = 0;
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    if (report.records[i].psnr > report.records[report.best].psnr) report.best = i;
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentOptions& opts) {
  const ExperimentInput input = load_input(opts.input);
  const QTensor3& truth = input.truth;
  const Mask mask = sample_mask(truth.n1(), truth.n2(), truth.n3(), opts.rate, opts.seed);
  const std::vector<SolverConfig> cells =
      opts.grid ? grid_configs(opts.solver, truth.n3()) : std::vector<SolverConfig>{opts.solver};

  ExperimentReport report;
  std::optional<QTensor3> best_x;
  for (const SolverConfig& cfg : cells) {
    SingleRun run = run_single(truth, mask, opts.rate, cfg);
    if (opts.out_dir) {
      const std::string name =
          opts.grid ? "convergence_" + cell_suffix(cfg) + ".csv" : std::string("convergence.csv");
      write_convergence_csv(*opts.out_dir / name, run.pam.history);
    }
    const bool is_best = report.records.empty() || run.record.psnr > report.records[report.best].psnr;
    report.records.push_back(run.record);
    if (is_best) {
      report.best = report.records.size() - 1;
      best_x = std::move(run.pam.x);
    }
  }
  if (opts.out_dir) {
    write_report_csv(*opts.out_dir / "report.csv", report);
    if (input.from_frames && best_x) {
      save_frames(tensor_to_frames(*best_x), *opts.out_dir / "recovered");
    }
  }
  return report;
}

ExperimentReport ablation_sweep(const ExperimentOptions& opts) {
  const ExperimentInput input = load_input(opts.input);
  const QTensor3& truth = input.truth;
  const Mask mask = sample_mask(truth.n1(), truth.n2(), truth.n3(), opts.rate, opts.seed);
  ExperimentReport report;
  for (Activation::Kind kind : Activation::kAll) {
    SolverConfig cfg = opts.solver;
    cfg.activation = Activation(kind, opts.solver.activation.elu_alpha());
    SingleRun run = run_single(truth, mask, opts.rate, cfg);
    if (opts.out_dir) {
      write_convergence_csv(*opts.out_dir / ("convergence_" + cfg.activation.name() + ".csv"),
                            run.pam.history);
    }
    report.records.push_back(run.record);
  }
  finish_report(report);
  if (opts.out_dir) write_report_csv(*opts.out_dir / "report.csv", report);
  return report;
}

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
  os << kReportHeader << '\n';
  for (const ExperimentRecord& r : report.records) {
    os << format_number(r.rate) << ',' << r.activation << ',' << format_number(r.alpha) << ','
       << format_number(r.beta) << ',' << r.r << ',' << r.iters << ',' << format_number(r.rse)
       << ',' << format_number(r.psnr) << ',' << format_number(r.ssim) << ','
       << format_number(r.runtime_s) << ',' << format_number(r.structure_dev) << '\n';
  }
}

void write_report_csv(const fs::path& path, const ExperimentReport& report) {
  std::ofstream out = open_for_write(path);
  write_report_csv(out, report);
}

void write_convergence_csv(std::ostream& os, const std::vector<IterationRecord>& history) {
  os << kConvergenceHeader << '\n';
  for (const IterationRecord& r : history) {
    os << r.iter << ',' << format_number(r.objective) << ',' << format_number(r.rel_change) << ','
       << format_number(r.decrease_margin) << ',' << format_number(r.elapsed_s) << '\n';
  }
}

void write_convergence_csv(const fs::path& path, const std::vector<IterationRecord>& history) {
  std::ofstream out = open_for_write(path);
  write_convergence_csv(out, history);
}

}  // namespace qnttnn
