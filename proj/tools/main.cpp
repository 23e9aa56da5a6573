// shockloop command-line driver.
//
//   shockloop simulate   --config run.ini --out out/
//   shockloop sweep      --config sweep.ini --out out/ --jobs 4
//   shockloop converge   --config conv.ini --out out/
//   shockloop verify-dde --config dde.ini --out out/
//
// Exit codes: 0 success, 2 configuration error, 3 precondition violated,
// 4 numerical failure, 5 i/o error, 1 anything else.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "shockloop/config.hpp"
#include "shockloop/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw shockloop::Error(shockloop::ErrorCode::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool mode_allowed(const std::string& command, shockloop::RunMode mode) {
  using shockloop::RunMode;
  if (command == "simulate") return mode == RunMode::ClosedLoop || mode == RunMode::OpenLoop;
  if (command == "sweep") return mode == RunMode::Sweep;
  if (command == "converge") return mode == RunMode::ConvergenceStudy;
  return mode == RunMode::DelayOdeVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-feedback shock stabilization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  for (const char* name : {"simulate", "sweep", "converge", "verify-dde"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "INI run description")->required();
    sub->add_option("--out", out_dir, "artifact directory")->required();
    sub->add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    shockloop::RunConfig config = shockloop::parse_config(read_file(config_path));
    shockloop::apply_seed_environment(config);
    if (!mode_allowed(command, config.mode)) {
      throw shockloop::Error(shockloop::ErrorCode::ValidationError,
                             "mode '" + std::string(shockloop::to_string(config.mode)) +
                                 "' cannot be run by '" + command + "'");
    }
    shockloop::run(config, out_dir, jobs);
  } catch (const shockloop::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.family());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
