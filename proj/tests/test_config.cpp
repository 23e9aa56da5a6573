#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "shockloop/config.hpp"
#include "shockloop/run.hpp"

using namespace shockloop;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(# closed loop around alpha = 0.4
mode = closed-loop
t_end = 10
alpha = 0.4
epsilon = 0.005
nu = 1.2
)";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string error_text(std::string_view config) {
  try {
    parse_config(config);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

ErrorCode error_code(std::string_view config) {
  try {
    parse_config(config);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("shockloop_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal closed-loop config gets defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.mode == RunMode::ClosedLoop);
  CHECK(c.cfl == 0.5);
  CHECK(c.snapshot_every == doctest::Approx(10.0 / 50.0));
  CHECK(c.n_cells == 400);
  CHECK(c.flux == "burgers");
  CHECK(c.alpha == 0.4);
  CHECK(c.u0 == InitialKind::Target);
}

TEST_CASE("window outside the domain is a validation error") {
  const std::string text = std::string(kMinimal) + "delta = 0.1\n";
  const std::string bad = "mode = closed-loop\nalpha = 1.5\n";
  CHECK(error_code(bad) == ErrorCode::ValidationError);
  CHECK(error_text(bad).find("[alpha-delta, alpha+delta] inside (0, L) violated") != std::string::npos);
  CHECK_NOTHROW(parse_config(text));
}

TEST_CASE("syntax problems are parse errors, all reported with line numbers") {
  const std::string dup = "mode = closed-loop\nnu = 1.2\nnu = 1.3\n";
  CHECK(error_code(dup) == ErrorCode::ParseError);
  CHECK(error_text(dup).find("line 3: duplicate key 'nu' (first set on line 2)") != std::string::npos);

  const std::string many = "mode = closed-loop\nbogus = 1\nnu = fast\njust words\n";
  const auto text = error_text(many);
  CHECK(text.find("line 2: unknown key 'bogus'") != std::string::npos);
  CHECK(text.find("line 3: nu:") != std::string::npos);
  CHECK(text.find("line 4: expected 'key = value'") != std::string::npos);

  const std::string invalid = "mode = closed-loop\ncfl = 2\nt_end = -1\n";
  const auto v = error_text(invalid);
  CHECK(v.find("cfl must lie in (0, 1]") != std::string::npos);
  CHECK(v.find("t_end must be positive") != std::string::npos);
}

TEST_CASE("render_config round trips for every mode") {
  const std::vector<std::string> configs = {
      std::string(kMinimal) + "u0 = perturbed\nu0_beta = 0.45\nperturb_kind = random\nperturb_amplitude = 0.05\n",
      "mode = open-loop\nt_end = 2\nleft_datum = 0.9\nu0 = shifted\nu0_beta = 0.3\n",
      "mode = sweep\nt_end = 5\nsweep_epsilon = 0.005, 0.01\nsweep_nu = 1.2, 2\nsweep_seeds = 1, 2\n"
      "u0 = perturbed\nu0_beta = 0.6\nperturb_kind = random\nperturb_amplitude = 0.02\n",
      "mode = convergence-study\nconv_cells = 100, 200\nconv_left = -0.5\nconv_right = 1\n",
      "mode = delay-ode-verify\ndde_tau_min = 1\ndde_tau_max = 1.2\ndde_random_systems = 3\n",
  };
  for (const auto& text : configs) {
    CAPTURE(text);
    const auto a = parse_config(text);
    const auto rendered = render_config(a);
    const auto b = parse_config(rendered);
    CHECK(render_config(b) == rendered);
  }
}

TEST_CASE("seed override replaces every seed") {
  auto c = parse_config("mode = sweep\nt_end = 5\nsweep_epsilon = 0.01\nsweep_nu = 1.2\nsweep_seeds = 1, 2, 3\n"
                        "u0 = perturbed\nu0_beta = 0.6\nperturb_kind = random\nperturb_amplitude = 0.02\n");
  override_seeds(c, 99);
  for (auto s : c.sweep_seeds) CHECK(s == 99);
  CHECK(c.perturbation.seed == 99);

  auto d = parse_config("mode = delay-ode-verify\ndde_random_systems = 2\ndde_seed = 4\n");
  ::setenv("SHOCKLOOP_SEED", "12", 1);
  apply_seed_environment(d);
  CHECK(d.dde_seed == 12);
  ::setenv("SHOCKLOOP_SEED", "twelve", 1);
  CHECK_THROWS_AS(apply_seed_environment(d), Error);
  ::unsetenv("SHOCKLOOP_SEED");
}

TEST_CASE("identical configs produce byte-identical artifacts") {
  const auto text = std::string(kMinimal) + "n_cells = 100\nu0 = shifted\nu0_beta = 0.6\n";
  const auto c = parse_config(text);
  const auto a = scratch("det_a"), b = scratch("det_b");
  run(c, a);
  run(c, b);
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    CAPTURE(rel.string());
    REQUIRE(fs::exists(b / rel));
    CHECK(read_file(entry.path()) == read_file(b / rel));
    ++files;
  }
  CHECK(files > 5);
  CHECK(read_file(a / "config.snapshot") == render_config(c));
  const auto summary = read_file(a / "summary.txt");
  CHECK(summary.find("converged = ") != std::string::npos);
  CHECK(summary.find("C_fit = ") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("error families map to distinct exit codes") {
  CHECK(static_cast<int>(Error(ErrorCode::ParseError, "").family()) == 2);
  CHECK(static_cast<int>(Error(ErrorCode::ValidationError, "").family()) == 2);
  CHECK(static_cast<int>(Error(ErrorCode::InvalidRegime, "").family()) == 3);
  CHECK(static_cast<int>(Error(ErrorCode::BoundViolated, "").family()) == 4);
  CHECK(static_cast<int>(Error(ErrorCode::IoError, "").family()) == 5);
  CHECK(std::string(Error(ErrorCode::NoShock, "x").what()).starts_with("NoShock"));
}
