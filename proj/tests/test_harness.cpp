#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <unistd.h>

#include "qnttnn/errors.hpp"
#include "qnttnn/experiment.hpp"
#include "qnttnn/frames.hpp"
#include "qnttnn/metrics.hpp"
#include "qnttnn/spectral.hpp"
#include "qnttnn/synth.hpp"
#include "support.hpp"

using namespace qnttnn;
using namespace qnttnn::testing;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("qnttnn_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

// Drops the given zero-based column from every CSV line.
std::string drop_column(const std::string& csv, std::size_t column) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(cells, cell, ',')) {
      if (c++ != column) out += cell + ',';
    }
    out += '\n';
  }
  return out;
}

FrameSequence random_frames(Index h, Index w, Index n, SplitMix64& rng) {
  FrameSequence f;
  f.height = h;
  f.width = w;
  for (Index k = 0; k < n; ++k) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(3 * h * w));
    for (auto& b : rgb) b = static_cast<std::uint8_t>(rng.next() & 0xFF);
    f.rgb.push_back(std::move(rgb));
  }
  return f;
}

}  // namespace

TEST_CASE("SplitMix64") {
  SplitMix64 a(0);
  CHECK(a.next() == 0xE220A8397B1DCDAFULL);
  SplitMix64 b(42), c(42);
  for (int n = 0; n < 100; ++n) CHECK(b.next() == c.next());
  SplitMix64 u(7);
  double lo = 1.0, hi = 0.0, mean = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const double v = u.uniform();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v / 10000.0;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sample_mask") {
  CHECK(sample_mask(4, 4, 3, 1.0, 5).count() == 48);
  const Mask m = sample_mask(100, 100, 10, 0.3, 11);
  CHECK(std::abs(static_cast<double>(m.count()) / 1e5 - 0.3) < 0.01);
  CHECK(m == sample_mask(100, 100, 10, 0.3, 11));
  CHECK(m.hash() != sample_mask(100, 100, 10, 0.3, 12).hash());
  CHECK_THROWS_AS(sample_mask(2, 2, 2, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_mask(2, 2, 2, 1.5, 1), InvalidArgument);
}

TEST_CASE("PPM frames") {
  TempDir tmp;
  SplitMix64 rng(307);
  SUBCASE("directory round trip is byte-identical") {
    const FrameSequence f = random_frames(5, 7, 3, rng);
    save_frames(f, tmp.path() / "a");
    CHECK(fs::exists(tmp.path() / "a" / "frame_0001.ppm"));
    const FrameSequence g = load_frames(tmp.path() / "a");
    CHECK(g.height == 5);
    CHECK(g.width == 7);
    CHECK(g.rgb == f.rgb);
    save_frames(g, tmp.path() / "b");
    CHECK(slurp(tmp.path() / "a" / "frame_0002.ppm") == slurp(tmp.path() / "b" / "frame_0002.ppm"));
  }
  SUBCASE("tensor encoding round trip") {
    const FrameSequence f = random_frames(4, 3, 2, rng);
    const QTensor3 t = frames_to_tensor(f);
    CHECK(t.s.values().isZero(0.0));
    CHECK(t.x.values().maxCoeff() <= 1.0);
    CHECK(tensor_to_frames(t).rgb == f.rgb);
  }
  SUBCASE("black and white frames") {
    FrameSequence f;
    f.height = 2;
    f.width = 2;
    f.rgb.emplace_back(12, 0);
    f.rgb.emplace_back(12, 255);
    const QTensor3 t = frames_to_tensor(f);
    CHECK(t.at(1, 1, 0) == Quaternion{});
    CHECK(t.at(0, 1, 1) == (Quaternion{0, 1, 1, 1}));
    QTensor3 out = t;
    out.x.values().array() += 0.7;
    CHECK(tensor_to_frames(out).rgb[1][0] == 255);
  }
  SUBCASE("header comments are accepted") {
    write_bytes(tmp.path() / "c.ppm", std::string("P6\n# note\n1 1\n255\n") + "abc");
    Index h = 0, w = 0;
    const std::vector<std::uint8_t> rgb = read_ppm(tmp.path() / "c.ppm", h, w);
    CHECK(h == 1);
    CHECK(w == 1);
    CHECK(rgb == std::vector<std::uint8_t>{'a', 'b', 'c'});
  }
  SUBCASE("malformed files") {
    Index h = 0, w = 0;
    write_bytes(tmp.path() / "p3.ppm", "P3\n1 1\n255\n0 0 0\n");
    CHECK_THROWS_AS(read_ppm(tmp.path() / "p3.ppm", h, w), DataError);
    write_bytes(tmp.path() / "max.ppm", std::string("P6\n1 1\n65535\n") + "abcdef");
    CHECK_THROWS_AS(read_ppm(tmp.path() / "max.ppm", h, w), DataError);
    write_bytes(tmp.path() / "short.ppm", std::string("P6\n2 2\n255\n") + "abc");
    CHECK_THROWS_AS(read_ppm(tmp.path() / "short.ppm", h, w), DataError);
    CHECK_THROWS_AS(read_ppm(tmp.path() / "missing.ppm", h, w), DataError);
  }
  SUBCASE("directory errors") {
    CHECK_THROWS_AS(load_frames(tmp.path() / "nope"), DataError);
    fs::create_directories(tmp.path() / "empty");
    CHECK_THROWS_AS(load_frames(tmp.path() / "empty"), DataError);
    const FrameSequence f = random_frames(2, 2, 3, rng);
    save_frames(f, tmp.path() / "gap");
    fs::remove(tmp.path() / "gap" / "frame_0002.ppm");
    CHECK_THROWS_AS(load_frames(tmp.path() / "gap"), DataError);
    save_frames(f, tmp.path() / "ragged");
    const std::vector<std::uint8_t> px(27, 9);
    write_ppm(tmp.path() / "ragged" / "frame_0003.ppm", px.data(), 3, 3);
    CHECK_THROWS_AS(load_frames(tmp.path() / "ragged"), DataError);
  }
  CHECK(frame_filename(7) == "frame_0007.ppm");
}

TEST_CASE("rse and psnr") {
  SplitMix64 rng(311);
  const QTensor3 ref = frames_to_tensor(random_frames(6, 5, 3, rng));
  CHECK(rse(ref, ref) == 0.0);
  CHECK(rse(QTensor3(6, 5, 3), ref) == 1.0);
  CHECK(rse(2.0 * ref, ref) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psnr(ref, ref) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(rse(ref, QTensor3(6, 5, 3)), InvalidArgument);
  CHECK_THROWS_AS(psnr(ref, QTensor3(6, 5, 2)), DimensionError);

  SUBCASE("zero dB when the error matches the peak") {
    QTensor3 r(2, 2, 1), x(2, 2, 1);
    r.x.values() << 0, 1, 0, 1;
    x.x.values() << 1, 0, 1, 0;
    CHECK(psnr(x, r) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("halving the error adds 6.0206 dB") {
    const QTensor3 noise = 0.01 * random_qtensor(6, 5, 3, rng);
    const QTensor3 a = ref - noise;
    const QTensor3 b = ref - 0.5 * noise;
    CHECK(psnr(b, ref) - psnr(a, ref) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
  }
  SUBCASE("psnr agrees with rse") {
    for (int n = 0; n < 20; ++n) {
      const QTensor3 x = ref - 0.1 * random_qtensor(6, 5, 3, rng);
      const double e = rse(x, ref);
      double m1 = -1e300, m2 = 1e300;
      for (int c = 1; c <= 3; ++c) {
        m1 = std::max(m1, ref.plane(c).values().maxCoeff());
        m2 = std::min(m2, ref.plane(c).values().minCoeff());
      }
      const double want = 10.0 * std::log10(90.0 * (m1 - m2) * (m1 - m2) / (e * e * ref.squared_norm()));
      CHECK(std::abs(psnr(x, ref) - want) < 1e-9);
    }
  }
  SUBCASE("bit-identical repeat") {
    const QTensor3 x = ref - 0.1 * random_qtensor(6, 5, 3, rng);
    CHECK(psnr(x, ref) == psnr(x, ref));
    CHECK(rse(x, ref) == rse(x, ref));
  }
}

TEST_CASE("ssim") {
  SplitMix64 rng(313);
  const QTensor3 ref = frames_to_tensor(random_frames(13, 14, 2, rng));
  CHECK(ssim(ref, ref) == doctest::Approx(1.0).epsilon(1e-12));

  QTensor3 inv = ref;
  for (int c = 1; c <= 3; ++c) inv.plane(c).values() = 1.0 - ref.plane(c).values().array();
  CHECK(ssim(inv, ref) < 1.0);

  SUBCASE("window") {
    const Eigen::MatrixXd w = ssim_window();
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w(5, 5) == w.maxCoeff());
    CHECK(w(4, 5) / w(5, 5) == doctest::Approx(std::exp(-1.0 / 4.5)).epsilon(1e-12));
  }
  SUBCASE("constant shift leaves only the luminance term") {
    Eigen::MatrixXd a(13, 13);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = 0.9 * rng.uniform();
    const Eigen::MatrixXd b = a.array() + 0.1;
    double weights[11][11];
    double wsum = 0.0;
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j) {
        weights[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2.0 * 1.5 * 1.5));
        wsum += weights[i][j];
      }
    const double c1 = 0.01 * 0.01;
    double total = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double mu = 0.0;
        for (int i = 0; i < 11; ++i)
          for (int j = 0; j < 11; ++j) mu += weights[i][j] / wsum * a(r + i, c + j);
        const double nu = mu + 0.1;
        total += (2.0 * mu * nu + c1) / (mu * mu + nu * nu + c1);
      }
    CHECK(ssim_channel(b, a) == doctest::Approx(total / 9.0).epsilon(1e-10));
  }
  SUBCASE("small frames") {
    CHECK_THROWS_AS(ssim_channel(Eigen::MatrixXd::Zero(10, 12), Eigen::MatrixXd::Zero(10, 12)),
                    InvalidArgument);
  }
}

TEST_CASE("synth_lowrank") {
  SUBCASE("slice rank one") {
    const QTensor3 t = synth_lowrank(6, 5, 3, 1, 17);
    for (Index k = 0; k < 3; ++k) {
      const Eigen::VectorXd sv = singular_values(embed_full(t.frontal_slice(k)));
      for (Index i = 4; i < sv.size(); ++i) CHECK(sv[i] < 1e-8 * sv[0]);
    }
  }
  SUBCASE("slice rank two and mode-3 mixtures") {
    SplitMix64 rng(317);
    const QTensor3 t = synth_lowrank(8, 7, 5, 2, 3);
    const QTensor3 mixed = mode3_product(t, random_matrix(2, 5, rng));
    for (const QTensor3* x : {&t, &mixed}) {
      for (Index k = 0; k < x->n3(); ++k) {
        const Eigen::VectorXd sv = singular_values(embed_full(x->frontal_slice(k)));
        CHECK(sv[7] > 1e-6 * sv[0]);
        CHECK(sv[8] < 1e-8 * sv[0]);
      }
    }
  }
  SUBCASE("seeded and rescaled") {
    const QTensor3 a = synth_lowrank(5, 5, 4, 2, 9);
    CHECK(max_abs_diff(a, synth_lowrank(5, 5, 4, 2, 9)) == 0.0);
    CHECK(max_abs_diff(a, synth_lowrank(5, 5, 4, 2, 10)) > 0.0);
    double lo = 1.0, hi = 0.0;
    for (int c = 0; c < 4; ++c) {
      lo = std::min(lo, a.plane(c).values().minCoeff());
      hi = std::max(hi, a.plane(c).values().maxCoeff());
    }
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
  }
  CHECK_THROWS_AS(synth_lowrank(4, 3, 2, 4, 0), InvalidArgument);
}

TEST_CASE("experiment runner") {
  TempDir tmp;
  ExperimentOptions opts;
  opts.input = "synth:12x12x5:2:3";
  opts.solver.rank = 3;
  opts.solver.max_iters = 15;
  SUBCASE("fully observed") {
    opts.rate = 1.0;
    const ExperimentReport r = run_experiment(opts);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].rse == 0.0);
    CHECK(r.records[0].psnr == std::numeric_limits<double>::infinity());
    CHECK(std::isfinite(r.records[0].ssim));
  }
  SUBCASE("same seed gives identical CSVs apart from timing") {
    opts.rate = 0.5;
    opts.seed = 4;
    opts.out_dir = tmp.path() / "a";
    run_experiment(opts);
    opts.out_dir = tmp.path() / "b";
    run_experiment(opts);
    const std::string ra = slurp(tmp.path() / "a" / "report.csv");
    CHECK(ra.rfind(std::string(kReportHeader) + "\n", 0) == 0);
    CHECK(drop_column(ra, 9) == drop_column(slurp(tmp.path() / "b" / "report.csv"), 9));
    const std::string ca = slurp(tmp.path() / "a" / "convergence.csv");
    CHECK(ca.rfind(std::string(kConvergenceHeader) + "\n", 0) == 0);
    CHECK(drop_column(ca, 4) == drop_column(slurp(tmp.path() / "b" / "convergence.csv"), 4));
  }
  SUBCASE("frame input writes recovered frames") {
    SplitMix64 rng(331);
    save_frames(random_frames(6, 6, 4, rng), tmp.path() / "in");
    opts.input = (tmp.path() / "in").string();
    opts.out_dir = tmp.path() / "out";
    opts.rate = 0.6;
    const ExperimentReport r = run_experiment(opts);
    CHECK(std::isnan(r.records[0].ssim));
    CHECK(load_frames(tmp.path() / "out" / "recovered").frame_count() == 4);
  }
  SUBCASE("ablation uses one mask for all activations") {
    opts.rate = 0.5;
    opts.solver.max_iters = 5;
    opts.out_dir = tmp.path() / "abl";
    const ExperimentReport r = ablation_sweep(opts);
    REQUIRE(r.records.size() == 5);
    const char* names[] = {"tanh", "sigmoid", "relu", "elu", "swish"};
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(r.records[i].activation == names[i]);
      CHECK(r.records[i].mask_hash == r.records[0].mask_hash);
    }
    CHECK(r.records[0].structure_dev < 1e-10);
    CHECK(r.records[1].structure_dev > 0.0);
    CHECK(fs::exists(tmp.path() / "abl" / "convergence_swish.csv"));
  }
  SUBCASE("input errors") {
    CHECK_THROWS_AS(load_input("synth:12x12:2"), InvalidArgument);
    CHECK_THROWS_AS(load_input((tmp.path() / "missing").string()), DataError);
    CHECK(load_input("synth:4x5x6:2").truth.n3() == 6);
  }
}

TEST_CASE("grid cells") {
  SolverConfig base;
  base.eps = 1e-3;
  const std::vector<SolverConfig> cells = grid_configs(base, 10);
  CHECK(cells.size() == 72);
  CHECK(cells.front().alpha == 1.0);
  CHECK(cells.front().rank == 3);
  CHECK(cells.back().beta == 100.0);
  CHECK(cells.back().rank == 10);
  for (const SolverConfig& c : cells) CHECK(c.eps == 1e-3);
  CHECK(grid_configs(base, 5).size() == 27);
}

TEST_CASE("format_number") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(10.0) == "10");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_number(v)) == v);
}
