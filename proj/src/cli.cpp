// Copyright 2026 The PulseForge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pulseforge/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pulseforge/csv.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/fidelity_scan.hpp"
#include "pulseforge/grape.hpp"
#include "pulseforge/pulse_sequences.hpp"

namespace pulseforge::cli {

namespace fs = std::filesystem;

namespace {

// Raised for bad flag values discovered after parsing (unknown scheme, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optimization did not reach the required fidelity.
struct OptimizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("PULSEFORGE_OUT"); env != nullptr && *env != '\0') return env;
  return ".";
}

// "6pi", "1.5pi", "pi" or a plain number.
double parse_time(const std::string& text) {
  std::string t(csv::trim(text));
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    const std::string factor = t.substr(0, t.size() - 2);
    return (factor.empty() ? 1.0 : csv::parse_number(factor)) * kPi;
  }
  return csv::parse_number(t);
}

std::string fmt(double v, int digits = 6) { return csv::format_number(v, digits); }

std::string fixed(double v, int decimals) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::fixed << std::setprecision(decimals) << v;
  return s.str();
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw IoError(dir, "cannot create output directory");
  return p;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(path.string(), "cannot open for writing");
  writer(f);
  f.flush();
  if (!f) throw IoError(path.string(), "write failed");
}

grape::LoadedPulse load_pulse(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path, "cannot open pulse file");
  try {
    return grape::read_pulse_csv(f);
  } catch (const ArgumentError& e) {
    throw IoError(path, e.what());
  }
}

CompositeAngles parse_angles(const std::string& name) {
  if (name == "closed-form") return CompositeAngles::ClosedForm;
  if (name == "printed") return CompositeAngles::Printed;
  throw UsageError("unknown --composite-angles value '" + name + "'");
}

// One named gate construction plus its total duration (units of 1/Lambda).
struct NamedScheme {
  Scheme scheme;
  double duration = 0.0;
};

NamedScheme grape_scheme(const std::string& label, const std::string& path) {
  auto loaded = load_pulse(path);
  const double duration = loaded.schedule.total_time();
  return {{label,
           [s = std::move(loaded.schedule)](const ErrorModel& e) { return grape::evolve(s, e); }},
          duration};
}

std::vector<NamedScheme> parse_schemes(const std::string& list, CompositeAngles angles) {
  std::vector<NamedScheme> out;
  std::size_t grape_count = 0;
  for (const auto& raw : csv::split_line(list)) {
    if (raw == "sequential") {
      auto seq = sequential_segments();
      const double d = seq.duration();
      out.push_back({sequence_scheme(std::move(seq)), d});
    } else if (raw == "bb1") {
      auto seq = bb1_sequence(angles);
      const double d = seq.duration();
      out.push_back({sequence_scheme(std::move(seq)), d});
    } else if (raw == "corpse") {
      auto seq = corpse_sequence(angles);
      const double d = seq.duration();
      out.push_back({sequence_scheme(std::move(seq)), d});
    } else if (raw.rfind("grape:", 0) == 0 && raw.size() > 6) {
      ++grape_count;
      const std::string label = grape_count == 1 ? "grape" : "grape" + std::to_string(grape_count);
      out.push_back(grape_scheme(label, raw.substr(6)));
    } else {
      throw UsageError("unknown scheme '" + raw +
                       "' (expected sequential, bb1, corpse or grape:<pulse-file>)");
    }
  }
  if (out.empty()) throw UsageError("--schemes is empty");
  return out;
}

ErrorKind grid_kind(const std::string& name) {
  const ErrorKind k = parse_error_kind(name);
  if (k == ErrorKind::None) throw UsageError("--error must be ple or ore for a scan");
  return k;
}

struct GridFlags {
  double min = -1.0;
  double max = 1.0;
  std::size_t points = 81;
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--grid-min", g.min, "Smallest error fraction")->capture_default_str();
  cmd->add_option("--grid-max", g.max, "Largest error fraction")->capture_default_str();
  cmd->add_option("--grid-points", g.points, "Number of grid points")->capture_default_str();
}

ScanResult run_scan(const std::vector<NamedScheme>& named, const ErrorGrid& grid) {
  std::vector<Scheme> schemes;
  for (const auto& n : named) schemes.push_back(n.scheme);
  return scan(schemes, grid);
}

void print_windows(std::ostream& out, const ScanResult& r) {
  out << "good-fidelity windows (F >= 0.9, largest symmetric sampled interval):\n";
  for (std::size_t k = 0; k < r.labels.size(); ++k) {
    const auto w = good_fidelity_half_width(r.grid.points, r.fidelity[k]);
    out << "  " << std::left << std::setw(12) << r.labels[k];
    if (w) {
      out << "[-" << fmt(*w) << ", " << fmt(*w) << "]";
    } else {
      out << "none";
    }
    out << "  mean F = " << fixed(mean(r.fidelity[k]), 6) << '\n';
  }
}

// Grid points where `lower` scores below `upper`.
void note_ordering(std::ostream& out, const ScanResult& r, const std::string& lower,
                   const std::string& upper) {
  const auto& lo = r.series(lower);
  const auto& hi = r.series(upper);
  std::size_t below = 0;
  std::optional<double> first;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] < hi[i] - 1e-9) {
      ++below;
      if (!first || std::abs(r.grid.points[i]) < std::abs(*first)) first = r.grid.points[i];
    }
  }
  out << "note: " << lower << " is below " << upper << " at " << below << " of " << lo.size()
      << " grid points";
  if (first) out << " (closest to zero: eps = " << fmt(*first) << ")";
  out << '\n';
}

void write_scan_outputs(std::ostream& out, const ScanResult& result, const fs::path& dir,
                        const std::string& prefix, const std::string& stem) {
  const fs::path csv_path = dir / (prefix + "_" + stem + ".csv");
  export_csv(result, csv_path);
  const fs::path gp_path = dir / (prefix + "_" + stem + ".gp");
  write_file(gp_path, [&](std::ostream& f) { write_plot_script(f, result, csv_path.filename()); });
  out << "wrote " << csv_path.string() << '\n';
}

// ----------------------------------------------------------------------------

struct ScanOptions {
  std::string error = "ple";
  std::string schemes = "sequential,bb1,corpse";
  GridFlags grid;
  std::string angles = "closed-form";
};

void cmd_scan(const ScanOptions& o, const fs::path& dir, const std::string& prefix,
              std::ostream& out) {
  const ErrorKind kind = grid_kind(o.error);
  const auto named = parse_schemes(o.schemes, parse_angles(o.angles));
  const auto grid = ErrorGrid::uniform(kind, o.grid.min, o.grid.max, o.grid.points);
  const auto result = run_scan(named, grid);
  write_scan_outputs(out, result, dir, prefix, "scan");
  out << "error: " << to_string(kind) << ", " << grid.points.size() << " points on ["
      << fmt(grid.points.front()) << ", " << fmt(grid.points.back()) << "]\n";
  print_windows(out, result);
  const auto has = [&](const std::string& l) {
    return std::find(result.labels.begin(), result.labels.end(), l) != result.labels.end();
  };
  if (kind == ErrorKind::OffResonance && has("corpse") && has("sequential")) {
    note_ordering(out, result, "corpse", "sequential");
  }
  if (kind == ErrorKind::PulseLength && has("bb1") && has("sequential")) {
    note_ordering(out, result, "bb1", "sequential");
  }
}

struct GrapeOptions {
  std::string error = "ple";
  double train_min = -0.2;
  double train_max = 0.2;
  std::size_t train_points = 5;
  std::size_t bins = 400;
  std::string time = "6pi";
  std::uint64_t seed = 1;
  std::size_t restarts = 5;
  std::size_t max_iterations = 5000;
  double step_size = grape::GrapeConfig{}.step_size;
  double penalty = grape::GrapeConfig{}.penalty;
  double init_scale = grape::GrapeConfig{}.init_scale;
  double lambda_hz = 1e6;
};

void cmd_grape(const GrapeOptions& o, const fs::path& dir, const std::string& prefix,
               std::ostream& out) {
  grape::GrapeConfig cfg;
  cfg.error_kind = parse_error_kind(o.error);
  cfg.total_time = parse_time(o.time);
  cfg.bins = o.bins;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  cfg.max_iterations = o.max_iterations;
  cfg.step_size = o.step_size;
  cfg.penalty = o.penalty;
  cfg.init_scale = o.init_scale;
  cfg.training = cfg.error_kind == ErrorKind::None
                     ? std::vector<double>{}
                     : uniform_points(o.train_min, o.train_max, o.train_points);
  cfg.validate();

  const grape::OptimizedPulse pulse = grape::optimize(cfg);

  const fs::path pulse_path = dir / (prefix + "_pulse.csv");
  const fs::path trace_path = dir / (prefix + "_trace.csv");
  write_file(pulse_path, [&](std::ostream& f) { grape::write_checkpoint(f, pulse, o.lambda_hz); });
  write_file(trace_path, [&](std::ostream& f) { grape::write_trace_csv(f, pulse); });

  // Trained range checked on a 21-point grid, which contains the training points
  // for the default 5-point set.
  const auto check = cfg.error_kind == ErrorKind::None
                         ? std::vector<double>{0.0}
                         : uniform_points(o.train_min, o.train_max,
                                          o.train_points > 1 ? 21 : 1);
  const auto f = grape::fidelities(pulse.schedule, cfg.target, cfg.error_kind, check);
  const double min_f = *std::min_element(f.begin(), f.end());

  out << "wrote " << pulse_path.string() << '\n'
      << "wrote " << trace_path.string() << '\n'
      << "run: restart " << pulse.restart << " (seed " << pulse.seed << "), " << pulse.iterations
      << " iterations, stop=" << grape::to_string(pulse.stop) << '\n'
      << "performance " << fixed(pulse.performance, 9) << " / 9, objective "
      << fixed(pulse.objective, 9) << '\n'
      << "duration T = " << fmt(cfg.total_time / kPi) << " pi / Lambda = "
      << fmt(cfg.total_time / o.lambda_hz) << " s, max Rabi "
      << fmt(pulse.schedule.max_rabi() * o.lambda_hz) << " Hz\n"
      << "trained-range minimum fidelity: " << fixed(min_f, 6) << '\n';
  if (min_f < 0.9) {
    std::ostringstream msg;
    msg << "trained-range minimum fidelity " << fixed(min_f, 6) << " < 0.9 after "
        << cfg.restarts << " restart(s); best performance " << fixed(pulse.performance, 6)
        << " / 9, stop=" << grape::to_string(pulse.stop);
    throw OptimizationFailure(msg.str());
  }
}

struct CompareOptions {
  std::string error = "ple";
  std::string grape_pulse;
  GridFlags grid{-0.5, 0.5, 41};
  std::string angles = "closed-form";
  double lambda_hz = 1e6;
};

void cmd_compare(const CompareOptions& o, const fs::path& dir, const std::string& prefix,
                 std::ostream& out) {
  const ErrorKind kind = grid_kind(o.error);
  std::string list = "sequential,bb1,corpse";
  if (!o.grape_pulse.empty()) list += ",grape:" + o.grape_pulse;
  const auto named = parse_schemes(list, parse_angles(o.angles));
  const auto grid = ErrorGrid::uniform(kind, o.grid.min, o.grid.max, o.grid.points);
  const auto result = run_scan(named, grid);
  write_scan_outputs(out, result, dir, prefix, "compare");

  const double t_sq = sequential_segments().duration();
  out << "error: " << to_string(kind) << ", " << grid.points.size() << " points on ["
      << fmt(grid.points.front()) << ", " << fmt(grid.points.back()) << "]\n"
      << std::left << std::setw(12) << "scheme" << std::setw(12) << "mean F" << std::setw(14)
      << "duration/pi" << std::setw(12) << "vs seq" << "seconds\n";
  for (std::size_t k = 0; k < named.size(); ++k) {
    const double d = named[k].duration;
    out << std::left << std::setw(12) << result.labels[k] << std::setw(12)
        << fixed(mean(result.fidelity[k]), 6) << std::setw(14) << fixed(d / kPi, 2)
        << std::setw(12) << fixed(d / t_sq, 2) << fmt(d / o.lambda_hz) << '\n';
  }
  if (o.grape_pulse.empty()) out << "no --grape-pulse given; GRAPE column omitted\n";
  print_windows(out, result);
}

void print_matrix(std::ostream& out, const ComplexMatrix3& m) {
  for (int r = 0; r < 3; ++r) {
    out << "  [";
    for (int c = 0; c < 3; ++c) {
      const Complex z = m(r, c);
      std::string re = fixed(z.real(), 6);
      if (re == "-0.000000") re = "0.000000";
      out << (c ? ", " : "") << std::right << std::setw(9) << re;
      if (std::abs(z.imag()) > 1e-12) out << (z.imag() < 0 ? " - " : " + ") << fixed(std::abs(z.imag()), 6) << "i";
    }
    out << "]\n";
  }
}

void cmd_info(std::ostream& out) {
  out << "three-level effective model of an NV electron spin + 13C nuclear spin\n"
      << "basis (row/column order): |0> = |0>e|0>n, |2> = |1>e|0>n, |3> = |1>e|1>n\n"
      << "drives: MW on |0> <-> |2>, RF on |2> <-> |3>\n"
      << "H = (delta/3) Z - (u_m/2)(cos th_m sx20 + sin th_m sy20)"
         " - (u_r/2)(cos th_r sx23 + sin th_r sy23),  Z = diag(-1, 2, -1)\n"
      << "target U_sq = U_r U_m (Bell-state gate, |0> -> (|0> - |3>)/sqrt2):\n";
  print_matrix(out, sequential_gate());
  out << "physical constants:\n"
      << "  omega_02 = " << fmt(PhysicalConstants::omega_02_hz) << " Hz\n"
      << "  omega_03 = " << fmt(PhysicalConstants::omega_03_hz) << " Hz\n"
      << "  omega_01 = " << fmt(PhysicalConstants::omega_01_hz) << " Hz\n"
      << "units: amplitudes and detunings in Lambda (max Rabi amplitude), times in 1/Lambda;\n"
      << "  physical columns use Lambda = 1e6 s^-1 unless --lambda-hz is given\n"
      << "fidelity: F = |Tr(U_a^dag U_i) / Tr(U_i^dag U_i)|^(1/2)\n"
      << "durations: sequential " << fixed(sequential_segments().duration() / kPi, 2)
      << " pi, bb1 " << fixed(bb1_sequence().duration() / kPi, 2) << " pi, corpse "
      << fixed(corpse_sequence().duration() / kPi, 2) << " pi\n";
}

// Expands `--config <file>` into `--key=value` arguments placed right after
// the subcommand name.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    std::ifstream f(path);
    if (!f) throw IoError(path, "cannot open config file");
    std::string line;
    while (std::getline(f, line)) {
      const auto text = csv::trim(line);
      if (text.empty() || text.front() == '#') continue;
      const auto eq = text.find('=');
      if (eq == std::string_view::npos) throw UsageError("config line without '=': " + line);
      std::string key(csv::trim(text.substr(0, eq)));
      while (!key.empty() && key.front() == '-') key.erase(0, 1);
      from_file.push_back("--" + key + "=" + std::string(csv::trim(text.substr(eq + 1))));
    }
  }
  if (from_file.empty() || rest.empty()) return rest;
  std::vector<std::string> merged{rest.front()};
  merged.insert(merged.end(), from_file.begin(), from_file.end());
  merged.insert(merged.end(), rest.begin() + 1, rest.end());
  return merged;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust entangling-gate control for an NV centre coupled to a 13C spin",
               "pulseforge"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_dir = default_out_dir();
  std::string prefix = "pulseforge";
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory ($PULSEFORGE_OUT)")->capture_default_str();
    cmd->add_option("--prefix", prefix, "Output file-name prefix")->capture_default_str();
  };

  auto* info = app.add_subcommand("info", "Print the model summary");

  ScanOptions scan_opts;
  auto* scan_cmd = app.add_subcommand("scan", "Fidelity versus error fraction per scheme");
  scan_cmd->add_option("--error", scan_opts.error, "ple or ore")->capture_default_str();
  scan_cmd->add_option("--schemes", scan_opts.schemes,
                       "Comma list of sequential, bb1, corpse, grape:<pulse-file>")
      ->capture_default_str();
  scan_cmd->add_option("--composite-angles", scan_opts.angles, "closed-form or printed")
      ->capture_default_str();
  add_grid_flags(scan_cmd, scan_opts.grid);
  add_common(scan_cmd);

  GrapeOptions g;
  auto* grape_cmd = app.add_subcommand("grape", "Optimize a robust GRAPE pulse");
  grape_cmd->add_option("--error", g.error, "none, ple or ore")->capture_default_str();
  grape_cmd->add_option("--train-min", g.train_min)->capture_default_str();
  grape_cmd->add_option("--train-max", g.train_max)->capture_default_str();
  grape_cmd->add_option("--train-points", g.train_points)->capture_default_str();
  grape_cmd->add_option("--bins", g.bins)->capture_default_str();
  grape_cmd->add_option("--time", g.time, "Total time in 1/Lambda, e.g. 18.85 or 6pi")
      ->capture_default_str();
  grape_cmd->add_option("--seed", g.seed)->capture_default_str();
  grape_cmd->add_option("--restarts", g.restarts)->capture_default_str();
  grape_cmd->add_option("--max-iterations", g.max_iterations)->capture_default_str();
  grape_cmd->add_option("--step-size", g.step_size)->capture_default_str();
  grape_cmd->add_option("--penalty", g.penalty, "Power penalty weight")->capture_default_str();
  grape_cmd->add_option("--init-scale", g.init_scale)->capture_default_str();
  grape_cmd->add_option("--lambda-hz", g.lambda_hz, "Physical Lambda for annotations")
      ->capture_default_str();
  add_common(grape_cmd);

  CompareOptions c;
  auto* compare_cmd = app.add_subcommand("compare", "Compare all schemes on one grid");
  compare_cmd->add_option("--error", c.error, "ple or ore")->capture_default_str();
  compare_cmd->add_option("--grape-pulse", c.grape_pulse, "Pulse CSV from `grape`");
  compare_cmd->add_option("--composite-angles", c.angles, "closed-form or printed")
      ->capture_default_str();
  compare_cmd->add_option("--lambda-hz", c.lambda_hz)->capture_default_str();
  add_grid_flags(compare_cmd, c.grid);
  add_common(compare_cmd);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kSuccess : kUsage;
    }

    if (info->parsed()) {
      cmd_info(out);
      return kSuccess;
    }
    const fs::path dir = prepare_out_dir(out_dir);
    if (scan_cmd->parsed()) cmd_scan(scan_opts, dir, prefix, out);
    if (grape_cmd->parsed()) cmd_grape(g, dir, prefix, out);
    if (compare_cmd->parsed()) cmd_compare(c, dir, prefix, out);
    return kSuccess;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const OptimizationFailure& e) {
    err << "optimization failed: " << e.what() << '\n';
    return kOptimizationFailure;
  } catch (const NumericError& e) {
    err << "optimization failed: " << e.what() << '\n';
    return kOptimizationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace pulseforge::cli
