// qnttnn: quaternion tensor completion from the command line.
//
//   qnttnn synth    --n1 20 --n2 20 --n3 10 --rank 2 --seed 0 --out frames/
//   qnttnn complete --input frames/ --rate 0.3 --seed 1 --out run/
//   qnttnn complete --input synth:20x20x10:2 --rate 0.5 --grid --out run/
//   qnttnn metrics  --recovered run/recovered --reference frames/
//   qnttnn ablate   --input synth:20x20x10:2 --rate 0.1 --seed 1 --out ablation/
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver divergence.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qnttnn/errors.hpp"
#include "qnttnn/experiment.hpp"
#include "qnttnn/frames.hpp"
#include "qnttnn/metrics.hpp"
#include "qnttnn/synth.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kDivergence = 3 };

struct SolverFlags {
  double alpha = qnttnn::SolverConfig{}.alpha;
  double beta = qnttnn::SolverConfig{}.beta;
  double rho = 1e-3;
  long long rank = qnttnn::SolverConfig{}.rank;
  double eps = qnttnn::SolverConfig{}.eps;
  int max_iters = qnttnn::SolverConfig{}.max_iters;
  int newton_iters = qnttnn::SolverConfig{}.newton_iters;
  std::string activation = "tanh";
  double elu_alpha = 1.0;
  bool assert_decrease = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "Transform-consistency penalty")->capture_default_str();
    cmd->add_option("--beta", beta, "Nonlinear splitting penalty")->capture_default_str();
    cmd->add_option("--rho", rho, "Proximal parameter shared by all four blocks")
        ->capture_default_str();
    cmd->add_option("--r", rank, "Transform row dimension (r <= n3)")->capture_default_str();
    cmd->add_option("--eps", eps, "Stopping tolerance on the relative change of X")
        ->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
    cmd->add_option("--newton-iters", newton_iters, "Newton steps per Z update")
        ->capture_default_str();
    cmd->add_option("--activation", activation, "tanh | sigmoid | relu | elu | swish")
        ->capture_default_str();
    cmd->add_option("--elu-alpha", elu_alpha, "ELU negative-branch scale")->capture_default_str();
    cmd->add_flag("--assert-decrease", assert_decrease,
                  "Abort with exit code 3 if the sufficient-decrease monitor fails");
  }

  qnttnn::SolverConfig config() const {
    qnttnn::SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.rho = {rho, rho, rho, rho};
    cfg.rank = static_cast<qnttnn::Index>(rank);
    cfg.eps = eps;
    cfg.max_iters = max_iters;
    cfg.newton_iters = newton_iters;
    cfg.activation = qnttnn::Activation::from_name(activation, elu_alpha);
    cfg.assert_invariants = assert_decrease;
    return cfg;
  }
};

void print_best(const qnttnn::ExperimentReport& report) {
  const qnttnn::ExperimentRecord& b = report.records[report.best];
  std::cerr << "best: activation=" << b.activation << " alpha=" << qnttnn::format_number(b.alpha)
            << " beta=" << qnttnn::format_number(b.beta) << " r=" << b.r
            << " psnr=" << qnttnn::format_number(b.psnr) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion tensor completion with a nonlinear-transform nuclear norm"};
  app.require_subcommand(1);

  long long n1 = 0, n2 = 0, n3 = 0, rank = 1;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic low-rank tensor as PPM frames");
  synth->add_option("--n1", n1, "Frame height")->required();
  synth->add_option("--n2", n2, "Frame width")->required();
  synth->add_option("--n3", n3, "Frame count")->required();
  synth->add_option("--rank", rank, "Quaternion rank of every frontal slice")->required();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->required();

  qnttnn::ExperimentOptions complete_opts;
  complete_opts.rate = 0.5;
  SolverFlags complete_flags;
  std::string complete_out;
  CLI::App* complete = app.add_subcommand("complete", "Recover missing entries of a tensor");
  complete->add_option("--input", complete_opts.input,
                       "Frame directory or synth:N1xN2xN3:RANK[:SEED]")
      ->required();
  complete->add_option("--rate", complete_opts.rate, "Sampling rate in (0, 1]")
      ->capture_default_str();
  complete->add_option("--seed", complete_opts.seed, "Mask seed")->capture_default_str();
  complete->add_option("--out", complete_out, "Output directory");
  complete->add_flag("--grid", complete_opts.grid,
                     "Sweep alpha, beta in {1,10,100} and r in {3..10}; keep the best PSNR");
  complete_flags.add_to(complete);

  std::string recovered_dir, reference_dir;
  CLI::App* metrics = app.add_subcommand("metrics", "Score recovered frames against a reference");
  metrics->add_option("--recovered", recovered_dir, "Recovered frame directory")->required();
  metrics->add_option("--reference", reference_dir, "Reference frame directory")->required();

  qnttnn::ExperimentOptions ablate_opts;
  ablate_opts.rate = 0.1;
  SolverFlags ablate_flags;
  std::string ablate_out;
  CLI::App* ablate = app.add_subcommand("ablate", "Run every activation on the same problem");
  ablate->add_option("--input", ablate_opts.input,
                     "Frame directory or synth:N1xN2xN3:RANK[:SEED]")
      ->required();
  ablate->add_option("--rate", ablate_opts.rate, "Sampling rate in (0, 1]")->capture_default_str();
  ablate->add_option("--seed", ablate_opts.seed, "Mask seed")->capture_default_str();
  ablate->add_option("--out", ablate_out, "Output directory");
  ablate_flags.add_to(ablate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) {
      const qnttnn::QTensor3 t = qnttnn::synth_lowrank(n1, n2, n3, rank, synth_seed);
      qnttnn::save_frames(qnttnn::tensor_to_frames(t), synth_out);
      std::cerr << "wrote " << n3 << " frames to " << synth_out << '\n';
    } else if (*complete) {
      complete_opts.solver = complete_flags.config();
      if (!complete_out.empty()) complete_opts.out_dir = complete_out;
      const qnttnn::ExperimentReport report = qnttnn::run_experiment(complete_opts);
      qnttnn::write_report_csv(std::cout, report);
      if (complete_opts.grid) print_best(report);
    } else if (*metrics) {
      const qnttnn::QTensor3 rec = qnttnn::frames_to_tensor(qnttnn::load_frames(recovered_dir));
      const qnttnn::QTensor3 ref = qnttnn::frames_to_tensor(qnttnn::load_frames(reference_dir));
      if (!rec.same_shape(ref)) {
        throw qnttnn::DataError("recovered and reference frames differ in shape");
      }
      std::cout << "rse,psnr,ssim\n"
                << qnttnn::format_number(qnttnn::rse(rec, ref)) << ','
                << qnttnn::format_number(qnttnn::psnr(rec, ref)) << ','
                << qnttnn::format_number(qnttnn::ssim(rec, ref)) << '\n';
    } else if (*ablate) {
      ablate_opts.solver = ablate_flags.config();
      if (!ablate_out.empty()) ablate_opts.out_dir = ablate_out;
      const qnttnn::ExperimentReport report = qnttnn::ablation_sweep(ablate_opts);
      qnttnn::write_report_csv(std::cout, report);
      std::cerr << "mask hash: " << std::hex << report.records.front().mask_hash << std::dec
                << '\n';
      print_best(report);
    }
  } catch (const qnttnn::SolverDivergence& e) {
    std::cerr << "solver diverged: " << e.what() << '\n';
    return kDivergence;
  } catch (const qnttnn::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const qnttnn::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
