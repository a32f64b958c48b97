#include "mcf/config.hpp"
#include "mcf/io.hpp"
#include "mcf/run.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace mcf;

namespace {

std::filesystem::path temp_dir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("mcf_config_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string small_config(const std::string &mobilities = "pairs = [[1, 2, 1.0], [1, 3, 1.0], [2, 3, 0.25]]",
                         const std::string &numerics = "n_steps = 20",
                         const std::string &tensions = "uniform = 1.0") {
  return R"(
[grid]
dim = 2
sizes = [32, 32]

[phases]
count = 3

[tensions]
)" + tensions + R"(

[mobilities]
)" + mobilities + R"(

[numerics]
epsilon = "1.5/K"
dt = "0.25/K^2"
)" + numerics + R"(

[output]
snapshot_every = 10
diagnostic_every = 5

[[shapes]]
type = "ball"
center = [-0.25, 0.0]
radius = 0.2

[[shapes]]
type = "ball"
center = [0.25, 0.0]
radius = 0.2
)";
}

std::string config_error(const std::string &text) {
  try {
    parse_config(text);
  } catch (const ConfigInvalid &e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_quiet(const RunConfig &cfg, const std::filesystem::path &dir, std::string *err_text = nullptr) {
  RunOptions opt;
  opt.output_dir = dir;
  opt.quiet = true;
  std::ostringstream out, err;
  const int rc = run(cfg, opt, out, err);
  if (err_text)
    *err_text = err.str();
  return rc;
}

} // namespace

TEST(ScaledValue, Forms) {
  EXPECT_EQ(parse_scaled_value("1.5/K").resolve(256), 0.005859375);
  EXPECT_EQ(parse_scaled_value("0.25/K^2").resolve(256), 0.25 / 65536);
  EXPECT_EQ(parse_scaled_value("0.25/K\xc2\xb2").resolve(256), 0.25 / 65536);
  EXPECT_EQ(parse_scaled_value(" 1 / K ").power, 1);
  EXPECT_EQ(parse_scaled_value("0.004").resolve(256), 0.004);
  EXPECT_EQ(parse_scaled_value("2/K").describe(), "2/K");
  EXPECT_THROW(parse_scaled_value("1/N"), InvalidArgument);
  EXPECT_THROW(parse_scaled_value("abc"), InvalidArgument);
  EXPECT_THROW(parse_scaled_value("1.5x/K"), InvalidArgument);
}

TEST(Config, ParsesSmallConfig) {
  const auto cfg = parse_config(small_config());
  EXPECT_EQ(cfg.dim, 2);
  EXPECT_EQ(cfg.sizes, (std::vector<int>{32, 32}));
  EXPECT_EQ(cfg.lengths, (std::vector<double>{1, 1}));
  EXPECT_EQ(cfg.n_phases, 3u);
  EXPECT_EQ(cfg.mobility_pairs(1, 2), 0.25);
  EXPECT_EQ(cfg.mobility_pairs(2, 1), 0.25);
  EXPECT_EQ(cfg.sigma_pairs(0, 2), 1.0);
  EXPECT_EQ(cfg.resolved_epsilon(), 1.5 / 32);
  EXPECT_EQ(cfg.resolved_steps(), 20);
  EXPECT_EQ(cfg.shapes.size(), 2u);
}

TEST(Config, TEndRoundsUp) {
  auto cfg = parse_config(small_config(
      "uniform = 1.0", "t_end = 0.012"));
  cfg.sizes = {256, 256};
  EXPECT_EQ(cfg.resolved_steps(), 3146);
  cfg = parse_config(small_config("uniform = 1.0", "t_end = 0.000244140625"));
  EXPECT_EQ(cfg.resolved_steps(), 1);
}

TEST(Config, MatrixForm) {
  const auto cfg = parse_config(
      small_config("matrix = [[0, 1, 1], [1, 0, 0.25], [1, 0.25, 0]]\ndecomposition = \"sparse\""));
  EXPECT_EQ(cfg.mobility_pairs(1, 2), 0.25);
  EXPECT_EQ(cfg.decomposition, DecompositionMode::sparse);
  EXPECT_NE(config_error(small_config("matrix = [[0, 1, 1], [1, 0, 0.5], [1, 0.25, 0]]"))
                .find("not symmetric"),
            std::string::npos);
}

TEST(Config, ErrorsNameTheEntry) {
  EXPECT_NE(config_error(small_config("pairs = [[1, 2, 1.0], [1, 3, -1.0], [2, 3, 0.25]]"))
                .find("mobilities.pairs[1]"),
            std::string::npos);
  EXPECT_NE(config_error(small_config("pairs = [[1, 2, 1.0], [1, 4, 1.0], [2, 3, 0.25]]"))
                .find("outside 1..3"),
            std::string::npos);
  EXPECT_NE(config_error(small_config("pairs = [[1, 2, 1.0], [2, 3, 0.25]]"))
                .find("missing pair (1, 3)"),
            std::string::npos);
  EXPECT_NE(config_error(small_config("uniform = 1.0", "n_steps = 20\nt_end = 1.0"))
                .find("numerics"),
            std::string::npos);
  EXPECT_NE(config_error(small_config("uniform = 1.0", "")).find("numerics"), std::string::npos);
  EXPECT_NE(config_error(small_config("uniform = 1.0\ndecomposition = \"greedy\""))
                .find("mobilities.decomposition"),
            std::string::npos);
  EXPECT_NE(config_error("[grid\n").find("<toml>"), std::string::npos);
  auto text = small_config();
  text.replace(text.find("sizes = [32, 32]"), 16, "sizes = [31, 32]");
  EXPECT_NE(config_error(text).find("grid.sizes[0]"), std::string::npos);
  text = small_config();
  text = text.substr(0, text.rfind("[[shapes]]"));
  EXPECT_NE(config_error(text).find("expected 2 shapes"), std::string::npos);
  text = small_config();
  text.replace(text.find("type = \"ball\""), 13, "type = \"blob\"");
  EXPECT_NE(config_error(text).find("shapes[0].type"), std::string::npos);
}

TEST(Config, ExplicitComponentsAndCsgShapes) {
  std::string text = small_config(
      "uniform = 1.0\ndecomposition = \"explicit\"\ncomponents = [[2, 2, 2]]");
  text = text.substr(0, text.find("[[shapes]]")) + R"(
[[shapes]]
type = "intersection"
parts = [
  { type = "ball", center = [-0.1, 0.0], radius = 0.25 },
  { type = "complement", shape = { type = "ball", center = [0.2, 0.0], radius = 0.2 } },
]

[[shapes]]
type = "ball"
center = [0.2, 0.0]
radius = 0.2
)";
  const auto cfg = parse_config(text);
  ASSERT_EQ(cfg.explicit_components.size(), 1u);
  const auto r = resolve(cfg);
  EXPECT_EQ(r.decomposition.n_components(), 1u);
  EXPECT_TRUE(std::holds_alternative<Intersection>(cfg.shapes[0].node));

  // a component list that does not reproduce the matrix is rejected
  const auto bad = parse_config(small_config(
      "uniform = 1.0\ndecomposition = \"explicit\"\ncomponents = [[2, 2, 0]]"));
  EXPECT_THROW(resolve(bad), ConfigInvalid);
}

TEST(Validate, SparseFallbackReport) {
  auto cfg = parse_config(small_config(
      "pairs = [[1, 2, 1.0], [1, 3, 1.0], [2, 3, 0.25]]\ndecomposition = \"sparse\""));
  const auto rep = validate_config(cfg);
  EXPECT_TRUE(rep.ok);
  std::ostringstream os;
  rep.print(os);
  EXPECT_NE(os.str().find("P = 3 (fallback to canonical"), std::string::npos) << os.str();
  EXPECT_NE(os.str().find("sigma_k = (0.5, 0.5, 0.5)"), std::string::npos);
}

TEST(Validate, ResolvedEpsilon) {
  auto cfg = parse_config(small_config());
  cfg.sizes = {256, 256};
  std::ostringstream os;
  validate_config(cfg).print(os);
  EXPECT_NE(os.str().find("epsilon = 0.005859375 (1.5/K)"), std::string::npos) << os.str();
}

TEST(Validate, CarriesFailures) {
  auto cfg = parse_config(small_config("uniform = 1.0", "n_steps = 1",
                                       "pairs = [[1, 2, 1.0], [1, 3, 1.0], [2, 3, 3.0]]"));
  const auto rep = validate_config(cfg);
  EXPECT_FALSE(rep.ok);
  ASSERT_EQ(rep.errors.size(), 1u);
  EXPECT_NE(rep.errors[0].find("not additive"), std::string::npos);
  EXPECT_THROW(resolve(cfg), TensionsNotAdditive);
  EXPECT_EQ(run_quiet(cfg, temp_dir("nonadditive")), kExitInvalid);
}

TEST(Run, ZeroStepsWritesInitialStateOnly) {
  const auto dir = temp_dir("zero");
  const auto cfg = parse_config(small_config("uniform = 1.0", "n_steps = 0"));
  ASSERT_EQ(run_quiet(cfg, dir), kExitOk);
  std::vector<std::string> names;
  for (const auto &e : std::filesystem::directory_iterator(dir))
    names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{
                       "composite_000000.pgm", "diagnostics.csv", "fields_000000_1.json",
                       "fields_000000_1.raw", "fields_000000_2.json", "fields_000000_2.raw",
                       "fields_000000_3.json", "fields_000000_3.raw"}));
  std::ifstream csv(dir / "diagnostics.csv");
  std::string line;
  int rows = 0;
  while (std::getline(csv, line))
    ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Run, DeterministicOutputsAndImageSize) {
  const auto a = temp_dir("det_a");
  const auto b = temp_dir("det_b");
  const auto cfg = parse_config(small_config());
  ASSERT_EQ(run_quiet(cfg, a), kExitOk);
  ASSERT_EQ(run_quiet(cfg, b), kExitOk);
  int compared = 0;
  for (const auto &e : std::filesystem::directory_iterator(a)) {
    const auto name = e.path().filename();
    ASSERT_TRUE(std::filesystem::exists(b / name)) << name;
    EXPECT_EQ(slurp(e.path()), slurp(b / name)) << name;
    ++compared;
  }
  // csv + 3 snapshots x (3 raw + 3 json + 1 pgm)
  EXPECT_EQ(compared, 1 + 3 * 7);
  const auto img = io::read_pgm(a / "composite_000020.pgm");
  EXPECT_EQ(img.width, 32);
  EXPECT_EQ(img.height, 32);
}

TEST(Run, SnapshotOverride) {
  const auto dir = temp_dir("override");
  const auto cfg = parse_config(small_config());
  RunOptions opt;
  opt.output_dir = dir;
  opt.snapshot_every = 0;
  opt.quiet = true;
  std::ostringstream out, err;
  ASSERT_EQ(run(cfg, opt, out, err), kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "fields_000000_1.raw"));
  EXPECT_FALSE(std::filesystem::exists(dir / "fields_000010_1.raw"));
  EXPECT_TRUE(std::filesystem::exists(dir / "fields_000020_1.raw"));
}

TEST(Run, NonFiniteFieldExitCode) {
  // dt far beyond the explicit stability limit of the reaction term blows up
  auto cfg = parse_config(small_config("uniform = 1.0", "n_steps = 200"));
  cfg.dt = ScaledValue{1e4, 0};
  std::string err;
  EXPECT_EQ(run_quiet(cfg, temp_dir("blowup"), &err), kExitNonFinite);
  EXPECT_NE(err.find("non-finite"), std::string::npos);
}

TEST(Run, ThreeDimensionalSlices) {
  const auto dir = temp_dir("slices");
  std::string text = R"(
[grid]
dim = 3
size = 16

[phases]
count = 2

[tensions]
uniform = 1.0

[mobilities]
uniform = 1.0

[numerics]
epsilon = "1.5/K"
dt = "0.25/K^2"
n_steps = 2

[output]
axis_slices = true

[[shapes]]
type = "ball"
center = [0.0, 0.0, 0.0]
radius = 0.25
)";
  const auto cfg = parse_config(text);
  ASSERT_EQ(run_quiet(cfg, dir), kExitOk);
  for (const char *name : {"composite_000002.pgm", "composite_000002_axis0.pgm",
                           "composite_000002_axis1.pgm", "composite_000002_axis2.pgm"}) {
    const auto img = io::read_pgm(dir / name);
    EXPECT_EQ(img.width, 16) << name;
    EXPECT_EQ(img.height, 16) << name;
  }
}

#ifdef MCF_CLI_PATH
namespace {

int cli(const std::string &args) {
  const int status = std::system((std::string(MCF_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

} // namespace

TEST(Cli, ExitCodesAndSimdAgreement) {
  const auto dir = temp_dir("cli");
  {
    std::ofstream(dir / "ok.toml") << small_config();
    std::ofstream(dir / "bad.toml") << small_config("pairs = [[1, 2, 1.0], [1, 3, -1.0], [2, 3, 0.25]]");
  }
  EXPECT_EQ(cli("validate " + (dir / "ok.toml").string()), 0);
  EXPECT_EQ(cli("validate " + (dir / "bad.toml").string()), 2);
  EXPECT_EQ(cli("run " + (dir / "bad.toml").string()), 2);
  EXPECT_EQ(cli("validate " + (dir / "missing.toml").string()), 2);
  EXPECT_NE(cli("frobnicate"), 0);

  const auto s = dir / "scalar";
  const auto v = dir / "avx2";
  ASSERT_EQ(std::system(("MCF_SIMD=scalar " + std::string(MCF_CLI_PATH) + " run " +
                         (dir / "ok.toml").string() + " --quiet --output-dir " + s.string())
                            .c_str()),
            0);
  ASSERT_EQ(std::system(("MCF_SIMD=avx2 " + std::string(MCF_CLI_PATH) + " run " +
                         (dir / "ok.toml").string() + " --quiet --output-dir " + v.string())
                            .c_str()),
            0);
  for (int k = 1; k <= 3; ++k) {
    const auto name = "fields_000020_" + std::to_string(k) + ".raw";
    EXPECT_EQ(slurp(s / name), slurp(v / name)) << name;
  }
}
#endif
