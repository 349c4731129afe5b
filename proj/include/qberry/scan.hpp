#pragma once

#include "qberry/checks.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace qberry {

inline constexpr const char* library_version = "0.1.0";

using json = nlohmann::json;

/// Shared configuration for every experiment driver. Arrays select the scan
/// grid; scalar model fields apply to the single-point checks.
struct ScanConfig {
  std::string experiment;
  std::uint64_t seed = 7;
  std::int64_t shots = 8192;
  std::string readout = "analytic";  // analytic | shots | ipea
  int r_iterations = 4;
  std::string out;  // defaults to <experiment>.csv

  // Schedule; dt empty means the per-experiment default.
  int n_steps = -1;  // -1: per-experiment default
  std::optional<double> dt;
  int n_trotter = -1;  // -1: per-experiment default
  std::string split = "half_forward_half_backward";
  std::string grid;  // "", "midpoint", "endpoint"; "" = per-model default

  // Two-band chain scan.
  double ssh_w = 1.0;
  std::vector<double> ssh_ratios = {0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0};

  // Spin-ring scan.
  int heis_n_spins = 4;
  double heis_coupling = 1.0;
  std::vector<double> heis_dimerizations = {-0.5, -0.4, -0.3, -0.2, -0.1, 0.0,
                                            0.1,  0.2,  0.3,  0.4,  0.5};
  int heis_twisted_bond = -1;
  bool heis_periodic = true;

  // Finite-size study.
  std::vector<int> fs_sizes = {4, 6, 8};
  std::vector<double> fs_dimerizations = {0.1, 0.2, 0.3, -0.1, -0.2, -0.3, 0.0};

  // Energy / parity checks.
  double check_dimerization = 0.5;
  int energy_r_iterations = 8;
  std::vector<double> energy_t_grid;  // empty: automatic
};

namespace detail {

inline LoopSplit parse_split(const std::string& s) {
  if (s == "half_forward_half_backward") return LoopSplit::half_forward_half_backward;
  if (s == "single_direction") return LoopSplit::single_direction;
  if (s == "double_loop") return LoopSplit::double_loop;
  throw std::invalid_argument("config: unknown split '" + s + "'");
}

inline GridKind parse_grid(const std::string& s, GridKind fallback) {
  if (s.empty()) return fallback;
  if (s == "midpoint") return GridKind::midpoint;
  if (s == "endpoint") return GridKind::endpoint;
  throw std::invalid_argument("config: unknown grid '" + s + "'");
}

inline void validate_readout(const std::string& s) {
  if (s != "analytic" && s != "shots" && s != "ipea")
    throw std::invalid_argument("config: unknown readout '" + s + "'");
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

/// Deterministic per-row seed stream.
inline std::uint64_t row_seed(std::uint64_t base, std::size_t index) {
  return base + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1);
}

inline std::uint64_t ipea_seed(std::uint64_t row) { return row ^ 0xD1B54A32D192ED03ull; }

/// FNV-1a 64-bit over the canonical config serialization.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// 12-significant-digit float formatting, the CSV-wide convention.
inline std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline int worker_count() {
  if (const char* env = std::getenv("QBERRY_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw std::invalid_argument("QBERRY_WORKERS must be a positive integer");
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Index-ordered parallel map; rethrows the first worker exception.
template <typename Fn>
void parallel_for(std::size_t n_tasks, Fn fn) {
  const int workers = std::min<std::size_t>(worker_count(), n_tasks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Parses the JSON config document; unknown experiments and malformed values
/// raise invalid_argument (exit code 2 at the CLI boundary).
inline ScanConfig config_from_json(const json& j) {
  ScanConfig c;
  detail::read_field(j, "seed", c.seed);
  detail::read_field(j, "shots", c.shots);
  detail::read_field(j, "readout", c.readout);
  detail::read_field(j, "r_iterations", c.r_iterations);
  detail::read_field(j, "out", c.out);
  detail::read_field(j, "grid", c.grid);
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    detail::read_field(s, "n_steps", c.n_steps);
    if (s.contains("dt") && !s.at("dt").is_null()) c.dt = s.at("dt").get<double>();
    detail::read_field(s, "n_trotter", c.n_trotter);
    detail::read_field(s, "split", c.split);
  }
  if (j.contains("ssh")) {
    const json& s = j.at("ssh");
    detail::read_field(s, "w", c.ssh_w);
    detail::read_field(s, "ratios", c.ssh_ratios);
  }
  if (j.contains("heisenberg")) {
    const json& s = j.at("heisenberg");
    detail::read_field(s, "n_spins", c.heis_n_spins);
    detail::read_field(s, "coupling", c.heis_coupling);
    detail::read_field(s, "dimerizations", c.heis_dimerizations);
    detail::read_field(s, "twisted_bond", c.heis_twisted_bond);
    detail::read_field(s, "periodic", c.heis_periodic);
  }
  if (j.contains("finite_size")) {
    const json& s = j.at("finite_size");
    detail::read_field(s, "sizes", c.fs_sizes);
    detail::read_field(s, "dimerizations", c.fs_dimerizations);
  }
  if (j.contains("energy")) {
    const json& s = j.at("energy");
    detail::read_field(s, "dimerization", c.check_dimerization);
    detail::read_field(s, "r_iterations", c.energy_r_iterations);
    detail::read_field(s, "t_grid", c.energy_t_grid);
  }
  if (j.contains("parity")) {
    detail::read_field(j.at("parity"), "dimerization", c.check_dimerization);
  }
  detail::validate_readout(c.readout);
  if (c.shots < 1) throw std::invalid_argument("config: shots must be >= 1");
  if (c.r_iterations < 1 || c.r_iterations > 20)
    throw std::invalid_argument("config: r_iterations out of range [1, 20]");
  return c;
}

/// Canonical resolved-config document; its dump is what gets hashed, so two
/// runs with the same physics always share a config hash.
inline json resolved_config_json(const ScanConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["shots"] = c.shots;
  j["readout"] = c.readout;
  j["r_iterations"] = c.r_iterations;
  j["schedule"] = {{"n_steps", c.n_steps},
                   {"dt", c.dt ? json(*c.dt) : json()},
                   {"n_trotter", c.n_trotter},
                   {"split", c.split}};
  j["grid"] = c.grid;
  if (c.experiment == "ssh-scan") {
    j["ssh"] = {{"w", c.ssh_w}, {"ratios", c.ssh_ratios}};
  } else if (c.experiment == "heisenberg-scan") {
    j["heisenberg"] = {{"n_spins", c.heis_n_spins},
                       {"coupling", c.heis_coupling},
                       {"dimerizations", c.heis_dimerizations},
                       {"twisted_bond", c.heis_twisted_bond},
                       {"periodic", c.heis_periodic}};
  } else if (c.experiment == "finite-size") {
    j["heisenberg"] = {{"coupling", c.heis_coupling}};
    j["finite_size"] = {{"sizes", c.fs_sizes}, {"dimerizations", c.fs_dimerizations}};
  } else if (c.experiment == "energy-check" || c.experiment == "parity-check") {
    j["heisenberg"] = {{"n_spins", c.heis_n_spins},
                       {"coupling", c.heis_coupling},
                       {"twisted_bond", c.heis_twisted_bond},
                       {"periodic", c.heis_periodic}};
    j["dimerization"] = c.check_dimerization;
    if (c.experiment == "energy-check") {
      j["energy"] = {{"r_iterations", c.energy_r_iterations}, {"t_grid", c.energy_t_grid}};
    }
  }
  return j;
}

/// A finished experiment: CSV-ready cells plus the JSON summary.
struct ScanOutput {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json summary;
  json resolved_config;
  std::string config_hash;
};

namespace detail {

inline void init_output(ScanOutput& out, const ScanConfig& c) {
  out.resolved_config = resolved_config_json(c);
  out.config_hash = hex64(fnv1a64(out.resolved_config.dump()));
}

}  // namespace detail

/// Writes `<path>` as CSV and `<path>.json` as the sidecar with the resolved
/// config, config hash, and summary.
inline void write_scan_output(const ScanOutput& out, const std::string& path) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot open output file: " + path);
  for (std::size_t i = 0; i < out.columns.size(); ++i)
    csv << out.columns[i] << (i + 1 < out.columns.size() ? "," : "\n");
  for (const auto& row : out.rows) {
    if (row.size() != out.columns.size())
      throw std::logic_error("write_scan_output: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i)
      csv << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
  if (!csv.flush()) throw std::runtime_error("failed writing output file: " + path);

  json sidecar;
  sidecar["library_version"] = library_version;
  sidecar["config"] = out.resolved_config;
  sidecar["config_hash"] = out.config_hash;
  sidecar["columns"] = out.columns;
  sidecar["row_count"] = out.rows.size();
  sidecar["summary"] = out.summary;
  std::ofstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot open sidecar file: " + path + ".json");
  side << sidecar.dump(2) << "\n";
  if (!side.flush()) throw std::runtime_error("failed writing sidecar: " + path + ".json");
}

/// Momentum-space topology scan over v/w ratios. Every row reports all three
/// readout families; the `phase`/`phase_err` pair mirrors the family selected
/// by `readout`.
inline ScanOutput run_ssh_scan(const ScanConfig& config) {
  ScanConfig c = config;
  c.experiment = "ssh-scan";
  if (c.n_steps < 0) c.n_steps = 64;
  if (c.n_trotter < 0) c.n_trotter = 1;
  if (!c.dt) c.dt = 2.0 / c.ssh_w;
  const GridKind grid = detail::parse_grid(c.grid, ssh_default_grid());
  c.grid = grid == GridKind::midpoint ? "midpoint" : "endpoint";

  AdiabaticSchedule schedule{c.n_steps, *c.dt, c.n_trotter, detail::parse_split(c.split)};
  validate_schedule(schedule);

  ScanOutput out;
  detail::init_output(out, c);
  out.columns = {"index",         "v",          "w",
                 "ratio",         "analytic_phase", "noiseless_phase",
                 "p0_phase",      "sampled_phase",  "shot_error",
                 "ipea_phase",    "ipea_circ_std",  "fidelity",
                 "readout",       "phase",          "phase_err",
                 "seed",          "config_hash",    "flags"};
  out.rows.resize(c.ssh_ratios.size());

  detail::parallel_for(c.ssh_ratios.size(), [&](std::size_t i) {
    const double ratio = c.ssh_ratios[i];
    const double w = c.ssh_w;
    const double v = ratio * w;
    std::string flags;
    auto add_flag = [&flags](const char* f) {
      if (!flags.empty()) flags += ';';
      flags += f;
    };

    double analytic = std::numeric_limits<double>::quiet_NaN();
    try {
      analytic = ssh_berry_phase_analytic(v, w);
    } catch (const std::domain_error&) {
      add_flag("phase_boundary");
    }

    const LoopCircuit loop = build_ssh_loop(v, w, schedule, grid);
    const Eigen::Vector2cd psi0 = ssh_initial_state(v, w);
    const complexd amplitude = circuit_loop_amplitude(loop, psi0);
    const double noiseless = fold_phase(std::arg(amplitude));
    const double fidelity = std::norm(amplitude);
    if (fidelity < 0.99) add_flag("low_fidelity");

    const std::uint64_t rs = detail::row_seed(c.seed, i);
    const HadamardTestResult ht = hadamard_test(loop, psi0, c.shots, rs);
    const IpeaResult est = ipea(loop, psi0, c.r_iterations, c.shots, detail::ipea_seed(rs));
    if (est.tie_warning) add_flag("ipea_tie");
    const double ipea_phase = fold_phase(est.phase_estimate);
    const double ipea_std = est.stats.infinite_dispersion
                                ? std::numeric_limits<double>::infinity()
                                : 2.0 * pi * est.stats.std;

    double phase = noiseless, err = 0.0;
    if (c.readout == "shots") {
      phase = ht.phase_sampled;
      err = ht.shot_error;
    } else if (c.readout == "ipea") {
      phase = ipea_phase;
      err = ipea_std;
    }

    out.rows[i] = {std::to_string(i),
                   detail::g12(v),
                   detail::g12(w),
                   detail::g12(ratio),
                   detail::g12(analytic),
                   detail::g12(noiseless),
                   detail::g12(ht.phase_exact),
                   detail::g12(ht.phase_sampled),
                   detail::g12(ht.shot_error),
                   detail::g12(ipea_phase),
                   detail::g12(ipea_std),
                   detail::g12(fidelity),
                   c.readout,
                   detail::g12(phase),
                   detail::g12(err),
                   std::to_string(rs),
                   out.config_hash,
                   flags};
  });

  out.summary = {{"n_rows", c.ssh_ratios.size()},
                 {"schedule", out.resolved_config["schedule"]},
                 {"grid", c.grid}};
  return out;
}

/// Twist-loop scan over the dimerization grid: compiled-circuit phase against
/// the exact-propagator reference, both folded to [0, pi].
inline ScanOutput run_heisenberg_scan(const ScanConfig& config) {
  ScanConfig c = config;
  c.experiment = "heisenberg-scan";
  if (c.n_steps < 0) c.n_steps = 100;
  if (c.n_trotter < 0) c.n_trotter = 10;
  if (!c.dt) c.dt = 0.6 / std::abs(c.heis_coupling);
  const GridKind grid = detail::parse_grid(c.grid, heisenberg_default_grid());
  c.grid = grid == GridKind::midpoint ? "midpoint" : "endpoint";

  AdiabaticSchedule schedule{c.n_steps, *c.dt, c.n_trotter, detail::parse_split(c.split)};
  validate_schedule(schedule);

  ScanOutput out;
  detail::init_output(out, c);
  out.columns = {"index",           "delta",          "circuit_phase",
                 "reference_phase", "abs_difference", "circuit_fidelity",
                 "reference_fidelity", "sampled_phase", "shot_error",
                 "ipea_phase",      "ipea_circ_std",  "readout",
                 "phase",           "phase_err",      "seed",
                 "config_hash",     "flags"};
  out.rows.resize(c.heis_dimerizations.size());

  detail::parallel_for(c.heis_dimerizations.size(), [&](std::size_t i) {
    const double delta = c.heis_dimerizations[i];
    HeisenbergParams params;
    params.n_spins = c.heis_n_spins;
    params.coupling = c.heis_coupling;
    params.dimerization = delta;
    params.twisted_bond = c.heis_twisted_bond;
    params.periodic = c.heis_periodic;

    std::string flags;
    auto add_flag = [&flags](const char* f) {
      if (!flags.empty()) flags += ';';
      flags += f;
    };

    const SpectralData spectral = heisenberg_initial_spectral(params);
    if (spectral.near_degenerate) add_flag("near_degenerate");
    const Eigen::VectorXcd psi0 = ground_state(spectral);

    const LoopCircuit loop = build_heisenberg_loop(params, schedule, grid);
    const complexd amplitude = circuit_loop_amplitude(loop, psi0);
    const double circuit_phase = fold_phase(std::arg(amplitude));
    const double circuit_fidelity = std::norm(amplitude);

    const LoopPhaseResult ref = heisenberg_reference_loop(params, schedule, grid);
    const double reference_phase = fold_phase(ref.phase);
    if (circuit_fidelity < 0.99 || ref.fidelity < 0.99) add_flag("low_fidelity");

    const std::uint64_t rs = detail::row_seed(c.seed, i);
    double sampled = std::numeric_limits<double>::quiet_NaN();
    double shot_err = std::numeric_limits<double>::quiet_NaN();
    double ipea_phase = std::numeric_limits<double>::quiet_NaN();
    double ipea_std = std::numeric_limits<double>::quiet_NaN();
    double phase = circuit_phase, err = 0.0;
    if (c.readout == "shots") {
      const HadamardTestResult ht = hadamard_test(loop, psi0, c.shots, rs);
      sampled = ht.phase_sampled;
      shot_err = ht.shot_error;
      phase = sampled;
      err = shot_err;
    } else if (c.readout == "ipea") {
      const IpeaResult est =
          ipea(loop, psi0, c.r_iterations, c.shots, detail::ipea_seed(rs));
      if (est.tie_warning) add_flag("ipea_tie");
      ipea_phase = fold_phase(est.phase_estimate);
      ipea_std = est.stats.infinite_dispersion ? std::numeric_limits<double>::infinity()
                                               : 2.0 * pi * est.stats.std;
      phase = ipea_phase;
      err = ipea_std;
    }

    out.rows[i] = {std::to_string(i),
                   detail::g12(delta),
                   detail::g12(circuit_phase),
                   detail::g12(reference_phase),
                   detail::g12(std::abs(circuit_phase - reference_phase)),
                   detail::g12(circuit_fidelity),
                   detail::g12(ref.fidelity),
                   detail::g12(sampled),
                   detail::g12(shot_err),
                   detail::g12(ipea_phase),
                   detail::g12(ipea_std),
                   c.readout,
                   detail::g12(phase),
                   detail::g12(err),
                   std::to_string(rs),
                   out.config_hash,
                   flags};
  });

  out.summary = {{"n_rows", c.heis_dimerizations.size()},
                 {"schedule", out.resolved_config["schedule"]},
                 {"grid", c.grid}};
  return out;
}

/// Ring-size study of the twist-loop phase deviation from pi (reference
/// propagators, no gate compilation). The sidecar records, per dimerization,
/// whether |pi - phase| strictly decreases with the ring size.
inline ScanOutput run_finite_size(const ScanConfig& config) {
  ScanConfig c = config;
  c.experiment = "finite-size";
  if (c.n_steps < 0) c.n_steps = 64;
  if (c.n_trotter < 0) c.n_trotter = 1;
  if (!c.dt) c.dt = 2.0 / std::abs(c.heis_coupling);
  const GridKind grid = detail::parse_grid(c.grid, heisenberg_default_grid());
  c.grid = grid == GridKind::midpoint ? "midpoint" : "endpoint";

  AdiabaticSchedule schedule{c.n_steps, *c.dt, c.n_trotter, detail::parse_split(c.split)};
  validate_schedule(schedule);
  for (int n : c.fs_sizes)
    if (n < 2 || n % 2 != 0 || n > 12)
      throw std::invalid_argument("finite-size: sizes must be even and within [2, 12]");

  ScanOutput out;
  detail::init_output(out, c);
  out.columns = {"index", "n_spins", "delta",       "phase",      "deviation",
                 "fidelity", "seed", "config_hash", "flags"};
  const std::size_t n_rows = c.fs_sizes.size() * c.fs_dimerizations.size();
  out.rows.resize(n_rows);

  detail::parallel_for(n_rows, [&](std::size_t task) {
    const std::size_t di = task / c.fs_sizes.size();
    const std::size_t ni = task % c.fs_sizes.size();
    const double delta = c.fs_dimerizations[di];
    const int n = c.fs_sizes[ni];

    std::string flags;
    if (delta == 0.0) flags = "undimerized";

    HeisenbergParams params;
    params.n_spins = n;
    params.coupling = c.heis_coupling;
    params.dimerization = delta;
    const LoopPhaseResult ref = heisenberg_reference_loop(params, schedule, grid);
    const double phase = fold_phase(ref.phase);
    const double deviation = std::abs(pi - phase);
    if (ref.fidelity < 0.99) {
      if (!flags.empty()) flags += ';';
      flags += "low_fidelity";
    }

    out.rows[task] = {std::to_string(task), std::to_string(n),
                      detail::g12(delta),   detail::g12(phase),
                      detail::g12(deviation), detail::g12(ref.fidelity),
                      std::to_string(c.seed), out.config_hash,
                      flags};
  });

  json monotonic = json::object();
  for (std::size_t di = 0; di < c.fs_dimerizations.size(); ++di) {
    bool strict = c.fs_sizes.size() > 1;
    for (std::size_t ni = 1; ni < c.fs_sizes.size(); ++ni) {
      const double prev = std::stod(out.rows[di * c.fs_sizes.size() + ni - 1][4]);
      const double curr = std::stod(out.rows[di * c.fs_sizes.size() + ni][4]);
      if (!(curr < prev)) strict = false;
    }
    monotonic[detail::g12(c.fs_dimerizations[di])] = strict;
  }
  out.summary = {{"n_rows", n_rows},
                 {"deviation_strictly_decreasing", monotonic},
                 {"schedule", out.resolved_config["schedule"]},
                 {"grid", c.grid}};
  return out;
}

/// Ground-state energy regression through IPEA on the controlled propagator.
inline ScanOutput run_energy_check(const ScanConfig& config) {
  ScanConfig c = config;
  c.experiment = "energy-check";

  HeisenbergParams params;
  params.n_spins = c.heis_n_spins;
  params.coupling = c.heis_coupling;
  params.dimerization = c.check_dimerization;
  params.twisted_bond = c.heis_twisted_bond;
  params.periodic = c.heis_periodic;

  const EnergyCheckResult r =
      energy_check(params, c.energy_r_iterations, c.shots, c.seed, c.energy_t_grid);

  ScanOutput out;
  detail::init_output(out, c);
  out.columns = {"index", "t", "phase_fraction", "phase_unwrapped", "seed", "config_hash"};
  for (std::size_t i = 0; i < r.points.size(); ++i)
    out.rows.push_back({std::to_string(i), detail::g12(r.points[i].t),
                        detail::g12(r.points[i].phase_fraction),
                        detail::g12(r.points[i].phase_unwrapped), std::to_string(c.seed),
                        out.config_hash});
  out.summary = {{"slope", r.slope},
                 {"energy_estimate", r.energy_estimate},
                 {"reference_energy", r.reference_energy},
                 {"standard_error", r.standard_error},
                 {"resolution_bound", r.resolution_bound},
                 {"passed", r.passed}};
  return out;
}

/// Occupation-parity fan-in check on the prepared ring ground state.
inline ScanOutput run_parity_check(const ScanConfig& config) {
  ScanConfig c = config;
  c.experiment = "parity-check";

  HeisenbergParams params;
  params.n_spins = c.heis_n_spins;
  params.coupling = c.heis_coupling;
  params.dimerization = c.check_dimerization;
  params.twisted_bond = c.heis_twisted_bond;
  params.periodic = c.heis_periodic;

  const SpectralData spectral =
      exact_diagonalize(hamiltonian_matrix(heisenberg_terms(params), params.n_spins),
                        params.coupling);
  const Eigen::VectorXcd gs = ground_state(spectral);
  const PrepReport prep = prepare_state(gs);
  StateVector reg(params.n_spins);
  run_circuit(reg, prep.circuit);

  const ParityCheckResult r = parity_check(reg.amplitudes(), c.shots, c.seed);

  ScanOutput out;
  detail::init_output(out, c);
  out.columns = {"index",       "p_zero",       "zeros",         "ones",
                 "expected_bit", "measured_bit", "definite",      "passed",
                 "seed",        "config_hash"};
  out.rows.push_back({"0", detail::g12(r.p_zero_exact), std::to_string(r.counts.zeros),
                      std::to_string(r.counts.ones), std::to_string(r.expected_bit),
                      std::to_string(r.measured_bit), r.definite ? "1" : "0",
                      r.passed ? "1" : "0", std::to_string(c.seed), out.config_hash});
  out.summary = {{"expected_bit", r.expected_bit},
                 {"measured_bit", r.measured_bit},
                 {"definite", r.definite},
                 {"passed", r.passed},
                 {"prep_cnot_fraction", prep.cnot_fraction}};
  return out;
}

/// Dispatch by experiment name (the CLI subcommand names).
inline ScanOutput run_experiment(const ScanConfig& config) {
  const std::string& e = config.experiment;
  if (e == "ssh-scan") return run_ssh_scan(config);
  if (e == "heisenberg-scan") return run_heisenberg_scan(config);
  if (e == "finite-size") return run_finite_size(config);
  if (e == "energy-check") return run_energy_check(config);
  if (e == "parity-check") return run_parity_check(config);
  throw std::invalid_argument("unknown experiment: " + e);
}

}  // namespace qberry
