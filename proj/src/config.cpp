#include "shockloop/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "shockloop/controller.hpp"
#include "shockloop/csv.hpp"

namespace shockloop {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_integer(std::string_view s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <class T, class Conv>
std::optional<std::vector<T>> to_list(std::string_view s, Conv conv) {
  std::vector<T> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = conv(trim(s.substr(0, comma)));
    if (!item) return std::nullopt;
    out.push_back(*item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<std::string(std::string_view, RunConfig&)>;

Setter real(double RunConfig::*field) {
  return [field](std::string_view v, RunConfig& c) -> std::string {
    const auto x = to_double(v);
    if (!x) return "expected a finite number";
    c.*field = *x;
    return {};
  };
}

Setter optional_real(std::optional<double> RunConfig::*field) {
  return [field](std::string_view v, RunConfig& c) -> std::string {
    const auto x = to_double(v);
    if (!x) return "expected a finite number";
    c.*field = *x;
    return {};
  };
}

Setter count(std::size_t RunConfig::*field) {
  return [field](std::string_view v, RunConfig& c) -> std::string {
    const auto x = to_integer<std::size_t>(v);
    if (!x) return "expected a nonnegative integer";
    c.*field = *x;
    return {};
  };
}

Setter dde_real(double TanhSystemSpec::*field) {
  return [field](std::string_view v, RunConfig& c) -> std::string {
    const auto x = to_double(v);
    if (!x) return "expected a finite number";
    c.dde.*field = *x;
    return {};
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    t["mode"] = [](std::string_view v, RunConfig& c) -> std::string {
      for (RunMode m : {RunMode::ClosedLoop, RunMode::OpenLoop, RunMode::ConvergenceStudy,
                        RunMode::DelayOdeVerify, RunMode::Sweep}) {
        if (v == to_string(m)) {
          c.mode = m;
          return {};
        }
      }
      return "expected closed-loop, open-loop, convergence-study, delay-ode-verify or sweep";
    };
    t["flux"] = [](std::string_view v, RunConfig& c) -> std::string {
      if (v != "burgers" && v != "cosh") return "expected burgers or cosh";
      c.flux = std::string(v);
      return {};
    };
    t["flux_scale"] = real(&RunConfig::flux_scale);
    t["L"] = real(&RunConfig::L);
    t["n_cells"] = count(&RunConfig::n_cells);
    t["cfl"] = real(&RunConfig::cfl);
    t["t_end"] = real(&RunConfig::t_end);
    t["snapshot_every"] = real(&RunConfig::snapshot_every);
    t["trace_stride"] = count(&RunConfig::trace_stride);
    t["alpha"] = real(&RunConfig::alpha);
    t["delta"] = real(&RunConfig::delta);
    t["epsilon"] = real(&RunConfig::epsilon);
    t["nu"] = real(&RunConfig::nu);
    t["m"] = real(&RunConfig::m);
    t["converge_tol"] = real(&RunConfig::converge_tol);
    t["u0"] = [](std::string_view v, RunConfig& c) -> std::string {
      if (v == "target") c.u0 = InitialKind::Target;
      else if (v == "shifted") c.u0 = InitialKind::Shifted;
      else if (v == "perturbed") c.u0 = InitialKind::Perturbed;
      else return "expected target, shifted or perturbed";
      return {};
    };
    t["u0_beta"] = optional_real(&RunConfig::u0_beta);
    t["perturb_kind"] = [](std::string_view v, RunConfig& c) -> std::string {
      if (v == "sine") c.perturbation.kind = Perturbation::Kind::Sine;
      else if (v == "random") c.perturbation.kind = Perturbation::Kind::Random;
      else return "expected sine or random";
      return {};
    };
    t["perturb_amplitude"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_double(v);
      if (!x) return "expected a finite number";
      c.perturbation.amplitude = *x;
      return {};
    };
    t["perturb_wavenumber"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_integer<int>(v);
      if (!x) return "expected an integer";
      c.perturbation.wavenumber = *x;
      return {};
    };
    t["perturb_seed"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_integer<std::uint64_t>(v);
      if (!x) return "expected a nonnegative integer";
      c.perturbation.seed = *x;
      return {};
    };
    t["left_datum"] = optional_real(&RunConfig::left_datum);
    t["right_datum"] = optional_real(&RunConfig::right_datum);
    t["sweep_epsilon"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_list<double>(v, to_double);
      if (!x) return "expected a comma-separated list of numbers";
      c.sweep_epsilon = *x;
      return {};
    };
    t["sweep_nu"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_list<double>(v, to_double);
      if (!x) return "expected a comma-separated list of numbers";
      c.sweep_nu = *x;
      return {};
    };
    t["sweep_seeds"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_list<std::uint64_t>(v, to_integer<std::uint64_t>);
      if (!x) return "expected a comma-separated list of nonnegative integers";
      c.sweep_seeds = *x;
      return {};
    };
    t["conv_left"] = real(&RunConfig::conv_left);
    t["conv_right"] = real(&RunConfig::conv_right);
    t["conv_jump"] = real(&RunConfig::conv_jump);
    t["conv_time"] = real(&RunConfig::conv_time);
    t["conv_cells"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_list<std::size_t>(v, to_integer<std::size_t>);
      if (!x) return "expected a comma-separated list of cell counts";
      c.conv_cells = *x;
      return {};
    };
    t["conv_window_lo"] = real(&RunConfig::conv_window_lo);
    t["conv_window_hi"] = real(&RunConfig::conv_window_hi);
    t["conv_eta"] = real(&RunConfig::conv_eta);
    t["dde_c0"] = dde_real(&TanhSystemSpec::c0);
    t["dde_kappa"] = dde_real(&TanhSystemSpec::kappa);
    t["dde_tau_min"] = dde_real(&TanhSystemSpec::tau_min);
    t["dde_tau_max"] = dde_real(&TanhSystemSpec::tau_max);
    t["dde_tau_omega"] = dde_real(&TanhSystemSpec::tau_omega);
    t["dde_tau_phase"] = dde_real(&TanhSystemSpec::tau_phase);
    t["dde_history_amplitude"] = dde_real(&TanhSystemSpec::history_amplitude);
    t["dde_history_frequency"] = dde_real(&TanhSystemSpec::history_frequency);
    t["dde_history_phase"] = dde_real(&TanhSystemSpec::history_phase);
    t["dde_history_offset"] = dde_real(&TanhSystemSpec::history_offset);
    t["dde_bound_factor"] = dde_real(&TanhSystemSpec::bound_factor);
    t["dde_dt"] = real(&RunConfig::dde_dt);
    t["dde_t_end"] = real(&RunConfig::dde_t_end);
    t["dde_t_start"] = real(&RunConfig::dde_t_start);
    t["dde_random_systems"] = count(&RunConfig::dde_random_systems);
    t["dde_seed"] = [](std::string_view v, RunConfig& c) -> std::string {
      const auto x = to_integer<std::uint64_t>(v);
      if (!x) return "expected a nonnegative integer";
      c.dde_seed = *x;
      return {};
    };
    return t;
  }();
  return table;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

void resolve_defaults(RunConfig& c) {
  if (c.snapshot_every == 0.0) c.snapshot_every = c.t_end / 50.0;
  if (c.conv_eta == 0.0) c.conv_eta = 1e-3 * std::abs(c.conv_left - c.conv_right);
  if (c.dde_dt == 0.0) c.dde_dt = c.dde.tau_min / 100.0;
  if (c.dde_t_start == 0.0) c.dde_t_start = 3.0 * c.dde.tau_max;
  if (c.dde_t_end == 0.0) c.dde_t_end = 33.0 * c.dde.tau_max;
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::ClosedLoop:
      return "closed-loop";
    case RunMode::OpenLoop:
      return "open-loop";
    case RunMode::ConvergenceStudy:
      return "convergence-study";
    case RunMode::DelayOdeVerify:
      return "delay-ode-verify";
    case RunMode::Sweep:
      return "sweep";
  }
  return "?";
}

FluxModel configured_flux(const RunConfig& c) {
  const FluxModel base = FluxModel::by_name(c.flux, c.flux_scale);
  if (c.mode == RunMode::ConvergenceStudy) {
    const double w = std::max({std::abs(c.conv_left), std::abs(c.conv_right), 1e-3});
    return base.with_working_interval(-3.0 * w, 3.0 * w);
  }
  return base.for_level(c.m);
}

GridState initial_state(const RunConfig& c, const FluxModel& flux) {
  switch (c.u0) {
    case InitialKind::Target:
      return stationary_shock(c.L, c.n_cells, c.alpha, c.m, flux);
    case InitialKind::Shifted:
      return shifted_shock(c.L, c.n_cells, c.u0_beta.value_or(c.alpha), c.m, flux);
    case InitialKind::Perturbed: {
      const GridState base = shifted_shock(c.L, c.n_cells, c.u0_beta.value_or(c.alpha), c.m, flux);
      return perturbed_shock(base, c.perturbation, flux).state;
    }
  }
  return {};
}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> errors;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };

  need(c.flux_scale > 0.0, "flux_scale must be positive");
  if (c.mode == RunMode::DelayOdeVerify) {
    const auto& d = c.dde;
    need(d.tau_min > 0.0 && d.tau_min <= d.tau_max, "need 0 < dde_tau_min <= dde_tau_max");
    need(d.bound_factor >= 1.0, "dde_bound_factor must be at least 1");
    need(c.dde_dt > 0.0 && c.dde_dt <= d.tau_min / 10.0, "dde_dt must lie in (0, dde_tau_min / 10]");
    need(c.dde_t_start >= 3.0 * d.tau_max, "dde_t_start must be at least 3 dde_tau_max");
    need(c.dde_t_end > c.dde_t_start, "dde_t_end must exceed dde_t_start");
    if (c.dde_random_systems == 0)
      need(d.c0 > 0.0 && d.kappa >= 0.0, "need dde_c0 > 0 and dde_kappa >= 0");
    return errors;
  }

  need(c.L > 0.0, "L must be positive");
  need(c.n_cells >= 4, "n_cells must be at least 4");
  need(c.cfl > 0.0 && c.cfl <= 1.0, "cfl must lie in (0, 1]");
  need(c.t_end > 0.0, "t_end must be positive");
  need(c.snapshot_every > 0.0, "snapshot_every must be positive");
  need(c.trace_stride >= 1, "trace_stride must be at least 1");
  if (!errors.empty()) return errors;

  if (c.mode == RunMode::ConvergenceStudy) {
    need(!c.conv_cells.empty(), "conv_cells must list at least one mesh");
    need(std::is_sorted(c.conv_cells.begin(), c.conv_cells.end()), "conv_cells must be ascending");
    for (std::size_t n : c.conv_cells) need(n >= 4, "every conv_cells entry must be at least 4");
    need(c.conv_jump > 0.0 && c.conv_jump < c.L, "conv_jump must lie in (0, L)");
    need(c.conv_time > 0.0, "conv_time must be positive");
    need(c.conv_window_lo >= 0.0 && c.conv_window_lo < c.conv_window_hi && c.conv_window_hi <= c.L,
         "need 0 <= conv_window_lo < conv_window_hi <= L");
    need(c.conv_eta > 0.0, "conv_eta must be positive");
    return errors;
  }

  need(c.m > 0.0, "m must be positive");
  if (!errors.empty()) return errors;
  try {
    const FluxModel flux = configured_flux(c);
    const ShockStates s = shock_state_pair(flux, c.m);
    need(c.alpha - c.delta > 0.0 && c.alpha + c.delta < c.L,
         "[alpha-delta, alpha+delta] inside (0, L) violated");
    need(c.delta > 0.0 && c.epsilon > 0.0 && c.nu > 0.0, "delta, epsilon and nu must be positive");
    need(2.0 * c.delta >= 4.0 * c.L / static_cast<double>(c.n_cells),
         "observation window must cover at least 4 cells");
    need(c.converge_tol > 0.0, "converge_tol must be positive");
    if (c.mode == RunMode::Sweep) {
      need(!c.sweep_epsilon.empty() && !c.sweep_nu.empty(),
           "sweep needs sweep_epsilon and sweep_nu lists");
      for (double e : c.sweep_epsilon) need(e > 0.0 && e < s.left, "sweep_epsilon entries must lie in (0, u_l(m))");
      for (double n : c.sweep_nu) need(n > 0.0, "sweep_nu entries must be positive");
    } else if (c.mode == RunMode::ClosedLoop) {
      need(c.epsilon < s.left, "epsilon must be below u_l(m)");
    } else {
      need(flux.contains(c.left_datum.value_or(s.left)), "left_datum outside working interval");
      need(flux.contains(c.right_datum.value_or(s.right)), "right_datum outside working interval");
    }
    if (c.u0 != InitialKind::Target) {
      const double beta = c.u0_beta.value_or(c.alpha);
      need(beta > 0.0 && beta < c.L, "u0_beta must lie in (0, L)");
    }
    if (c.u0 == InitialKind::Perturbed) {
      need(c.perturbation.amplitude >= 0.0, "perturb_amplitude must be nonnegative");
      if (c.perturbation.kind == Perturbation::Kind::Sine)
        need(c.perturbation.wavenumber != 0, "perturb_wavenumber must be nonzero");
    }
    if (errors.empty()) (void)initial_state(c, flux);
  } catch (const Error& e) {
    errors.push_back(e.what());
  }
  return errors;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::vector<std::string> problems;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::ostringstream where;
    where << "line " << line_no << ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(where.str() + "expected 'key = value'");
      continue;
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      problems.push_back(where.str() + "unknown key '" + std::string(key) + "'");
      continue;
    }
    if (const auto prev = seen.find(key); prev != seen.end()) {
      problems.push_back(where.str() + "duplicate key '" + std::string(key) + "' (first set on line " +
                         std::to_string(prev->second) + ")");
      continue;
    }
    seen.emplace(std::string(key), line_no);
    const std::string err = it->second(value, c);
    if (!err.empty()) problems.push_back(where.str() + std::string(key) + ": " + err);
  }
  if (!problems.empty()) throw Error(ErrorCode::ParseError, join_lines(problems));

  resolve_defaults(c);
  const auto errors = validate_config(c);
  if (!errors.empty()) throw Error(ErrorCode::ValidationError, join_lines(errors));
  return c;
}

std::string render_config(const RunConfig& c) {
  KeyValueWriter w;
  auto list = [](const auto& xs) {
    std::string out;
    for (const auto& x : xs) {
      if (!out.empty()) out += ", ";
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>)
        out += format_double(x);
      else
        out += std::to_string(x);
    }
    return out;
  };
  w.add("mode", to_string(c.mode));
  w.add("flux", c.flux);
  w.add("flux_scale", c.flux_scale);
  if (c.mode == RunMode::DelayOdeVerify) {
    w.add("dde_c0", c.dde.c0);
    w.add("dde_kappa", c.dde.kappa);
    w.add("dde_tau_min", c.dde.tau_min);
    w.add("dde_tau_max", c.dde.tau_max);
    w.add("dde_tau_omega", c.dde.tau_omega);
    w.add("dde_tau_phase", c.dde.tau_phase);
    w.add("dde_history_amplitude", c.dde.history_amplitude);
    w.add("dde_history_frequency", c.dde.history_frequency);
    w.add("dde_history_phase", c.dde.history_phase);
    w.add("dde_history_offset", c.dde.history_offset);
    w.add("dde_bound_factor", c.dde.bound_factor);
    w.add("dde_dt", c.dde_dt);
    w.add("dde_t_end", c.dde_t_end);
    w.add("dde_t_start", c.dde_t_start);
    w.add("dde_random_systems", static_cast<long long>(c.dde_random_systems));
    w.add("dde_seed", std::to_string(c.dde_seed));
    return w.str();
  }
  w.add("L", c.L);
  w.add("n_cells", static_cast<long long>(c.n_cells));
  w.add("cfl", c.cfl);
  w.add("t_end", c.t_end);
  w.add("snapshot_every", c.snapshot_every);
  w.add("trace_stride", static_cast<long long>(c.trace_stride));
  if (c.mode == RunMode::ConvergenceStudy) {
    w.add("conv_left", c.conv_left);
    w.add("conv_right", c.conv_right);
    w.add("conv_jump", c.conv_jump);
    w.add("conv_time", c.conv_time);
    w.add("conv_cells", list(c.conv_cells));
    w.add("conv_window_lo", c.conv_window_lo);
    w.add("conv_window_hi", c.conv_window_hi);
    w.add("conv_eta", c.conv_eta);
    return w.str();
  }
  w.add("alpha", c.alpha);
  w.add("delta", c.delta);
  w.add("epsilon", c.epsilon);
  w.add("nu", c.nu);
  w.add("m", c.m);
  w.add("converge_tol", c.converge_tol);
  w.add("u0", c.u0 == InitialKind::Target ? "target"
              : c.u0 == InitialKind::Shifted ? "shifted"
                                             : "perturbed");
  if (c.u0_beta) w.add("u0_beta", *c.u0_beta);
  if (c.u0 == InitialKind::Perturbed) {
    w.add("perturb_kind", c.perturbation.kind == Perturbation::Kind::Sine ? "sine" : "random");
    w.add("perturb_amplitude", c.perturbation.amplitude);
    w.add("perturb_wavenumber", static_cast<long long>(c.perturbation.wavenumber));
    w.add("perturb_seed", std::to_string(c.perturbation.seed));
  }
  if (c.mode == RunMode::OpenLoop) {
    if (c.left_datum) w.add("left_datum", *c.left_datum);
    if (c.right_datum) w.add("right_datum", *c.right_datum);
  }
  if (c.mode == RunMode::Sweep) {
    w.add("sweep_epsilon", list(c.sweep_epsilon));
    w.add("sweep_nu", list(c.sweep_nu));
    if (!c.sweep_seeds.empty()) w.add("sweep_seeds", list(c.sweep_seeds));
  }
  return w.str();
}

void override_seeds(RunConfig& c, std::uint64_t seed) {
  c.perturbation.seed = seed;
  c.dde_seed = seed;
  if (!c.sweep_seeds.empty()) c.sweep_seeds.assign(1, seed);
}

}  // namespace shockloop
