#pragma once

// Monte Carlo harness: experiment specs, per-trial evaluation, sweeps,
// CSV output and built-in figure configurations.
//
// Random streams per trial (all derived from the master seed):
//   symbols  (trial, 0)                          shared by every grid point
//   channel  (trial, phi_idx, dM_idx, 1)         shared by every EsN0 point
//   noise    (trial, phi_idx, dM_idx, grid_idx, 2)
// Aggregation runs in trial order with compensated summation, so the output
// does not depend on the number of worker threads.

#include "oacsim/analytic.hpp"
#include "oacsim/channel.hpp"
#include "oacsim/estimators.hpp"
#include "oacsim/rng.hpp"
#include "oacsim/scenario.hpp"
#include "oacsim/spmap.hpp"
#include "oacsim/types.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace oacsim {

/// (1/L) sum_i |s_hat[i] - s[i]|^2.
inline double mse(const ComplexSequence& s_plus, const ComplexSequence& s_plus_hat) {
  detail::require(s_plus.size() == s_plus_hat.size() && s_plus.size() > 0, "mse: length mismatch");
  return (s_plus_hat - s_plus).squaredNorm() / static_cast<double>(s_plus.size());
}

/// N0 that makes compute_esn0(devices, phi, N0) equal `esn0_db`.
inline double calibrate_noise(std::span<const DeviceData> devices, const Eigen::VectorXd& phi, double esn0_db) {
  detail::require(std::isfinite(esn0_db), "calibrate_noise: EsN0 must be finite");
  const double es = received_symbol_energy(devices, phi);
  detail::require(es > 0.0, "calibrate_noise: zero received energy");
  return es / std::pow(10.0, esn0_db / 10.0);
}

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

enum class Mode { aligned, synchronous, asynchronous };
enum class GridKind { esn0_db, n0 };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::aligned: return "aligned";
    case Mode::synchronous: return "synchronous";
    case Mode::asynchronous: return "asynchronous";
  }
  return "?";
}

inline std::vector<Interval> default_ranges() { return {{-6.0, 0.0}, {-4.0, 2.0}, {-2.0, 4.0}, {0.0, 6.0}}; }

inline std::vector<double> default_esn0_grid() {
  std::vector<double> g;
  for (int x = -5; x <= 50; x += 5) g.push_back(x);
  return g;
}

struct ExperimentSpec {
  Mode mode = Mode::synchronous;
  Index M = 4;
  std::optional<Index> L;  // unset: 128 when lmmse_async is requested, else 1024
  std::vector<Interval> ranges = default_ranges();
  std::vector<double> phi_max{0.0};
  std::vector<double> d_M{1.0};
  double T = 1.0;
  GridKind grid_kind = GridKind::esn0_db;
  std::vector<double> grid = default_esn0_grid();
  int trials = 200;
  std::vector<Method> estimators;
  std::uint64_t seed = 1;
  SymbolKind symbols = SymbolKind::complex;
  bool analytic = true;

  [[nodiscard]] Index packet_length() const {
    if (L) return *L;
    const bool short_packets = std::find(estimators.begin(), estimators.end(), Method::lmmse_async) != estimators.end();
    return short_packets ? 128 : 1024;
  }

  void validate() const {
    detail::require(M >= 1, "spec: M must be positive");
    detail::require(static_cast<Index>(ranges.size()) == M, "spec: need one range per device");
    for (const auto& r : ranges) detail::require(r.hi > r.lo, "spec: every range needs hi > lo");
    detail::require(packet_length() >= 2, "spec: L must be at least 2");
    detail::require(T > 0.0, "spec: T must be positive");
    detail::require(trials >= 1, "spec: trials must be at least 1");
    detail::require(!grid.empty(), "spec: the noise grid is empty");
    detail::require(!phi_max.empty() && !d_M.empty(), "spec: phi_max and d_M need at least one value");
    detail::require(!estimators.empty(), "spec: no estimators requested");
    for (double g : grid) {
      detail::require(std::isfinite(g), "spec: non-finite grid value");
      if (grid_kind == GridKind::n0) detail::require(g > 0.0, "spec: N0 grid values must be positive");
    }
    for (double phi : phi_max)
      detail::require(phi >= 0.0 && phi <= 2.0 * std::numbers::pi + 1e-12, "spec: phi_max must be in [0, 2pi]");
    for (double d : d_M) detail::require(d > 0.0 && d <= 1.0, "spec: d_M must be in (0, 1]");

    for (Method m : estimators) {
      const bool sync_method = m == Method::ml || m == Method::lmmse;
      if (mode == Mode::asynchronous)
        detail::require(!sync_method, "spec: estimator '" + std::string(to_string(m)) + "' needs aligned or synchronous mode");
      else
        detail::require(sync_method, "spec: estimator '" + std::string(to_string(m)) + "' needs asynchronous mode");
    }
    if (mode == Mode::aligned)
      detail::require(phi_max.size() == 1 && phi_max[0] == 0.0, "spec: aligned mode has no phase misalignment");
    if (mode != Mode::asynchronous)
      for (double d : d_M) detail::require(d == 1.0, "spec: d_M must be 1 unless the mode is asynchronous");
    else {
      detail::require(M >= 2, "spec: asynchronous mode needs at least two devices");
      for (double d : d_M) detail::require(d < 1.0, "spec: asynchronous mode needs d_M < 1");
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline double parse_double(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("spec: bad number '" + s + "' for " + key);
  }
}

/// "pi/2", "2pi", "3pi/4", "pi", or a plain number of radians.
inline double parse_angle(const std::string& raw, const std::string& key) {
  std::string s = lower(raw);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  const auto p = s.find("pi");
  if (p == std::string::npos) return parse_double(s, key);
  std::string coef = s.substr(0, p);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double v = std::numbers::pi * (coef.empty() ? 1.0 : parse_double(coef, key));
  const std::string rest = s.substr(p + 2);
  if (!rest.empty()) {
    if (rest.front() != '/') throw InvalidInput("spec: bad angle '" + raw + "' for " + key);
    v /= parse_double(rest.substr(1), key);
  }
  return v;
}

/// "start:step:stop" or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& s, const std::string& key) {
  if (s.find(':') == std::string::npos) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_double(part, key));
    return out;
  }
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw InvalidInput("spec: " + key + " grid must be start:step:stop");
  const double start = parse_double(parts[0], key);
  const double step = parse_double(parts[1], key);
  const double stop = parse_double(parts[2], key);
  if (!(step > 0.0) || stop < start) throw InvalidInput("spec: " + key + " grid needs step > 0 and stop >= start");
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (long j = 0; j < count; ++j) out.push_back(start + static_cast<double>(j) * step);
  return out;
}

}  // namespace detail

/// Parses the flat `key = value` format. `#` starts a comment; lists are
/// comma-separated; ranges are `lo:hi` pairs; grids are `start:step:stop`.
inline ExperimentSpec parse_spec(std::istream& in) {
  ExperimentSpec spec;
  std::map<std::string, bool> seen;
  std::string line;
  int lineno = 0;
  bool ranges_given = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("spec line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::lower(detail::trim(body.substr(0, eq)));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (seen[key]) throw InvalidInput("spec line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    seen[key] = true;

    if (key == "mode") {
      const std::string v = detail::lower(value);
      if (v == "aligned") spec.mode = Mode::aligned;
      else if (v == "synchronous" || v == "sync") spec.mode = Mode::synchronous;
      else if (v == "asynchronous" || v == "async") spec.mode = Mode::asynchronous;
      else throw InvalidInput("spec: unknown mode '" + value + "'");
    } else if (key == "m") {
      spec.M = static_cast<Index>(detail::parse_double(value, key));
    } else if (key == "l") {
      spec.L = static_cast<Index>(detail::parse_double(value, key));
    } else if (key == "ranges") {
      spec.ranges.clear();
      for (const auto& part : detail::split(value, ',')) {
        const auto lohi = detail::split(part, ':');
        if (lohi.size() != 2) throw InvalidInput("spec: range '" + part + "' must be lo:hi");
        spec.ranges.push_back({detail::parse_double(lohi[0], key), detail::parse_double(lohi[1], key)});
      }
      ranges_given = true;
    } else if (key == "phi_max") {
      spec.phi_max.clear();
      for (const auto& part : detail::split(value, ',')) spec.phi_max.push_back(detail::parse_angle(part, key));
    } else if (key == "d_m") {
      spec.d_M.clear();
      for (const auto& part : detail::split(value, ',')) spec.d_M.push_back(detail::parse_double(part, key));
    } else if (key == "t") {
      spec.T = detail::parse_double(value, key);
    } else if (key == "esn0_grid" || key == "n0_grid") {
      if (seen["esn0_grid"] && seen["n0_grid"]) throw InvalidInput("spec: give EsN0_grid or N0_grid, not both");
      spec.grid_kind = key == "n0_grid" ? GridKind::n0 : GridKind::esn0_db;
      spec.grid = detail::parse_grid(value, key);
    } else if (key == "trials") {
      spec.trials = static_cast<int>(detail::parse_double(value, key));
    } else if (key == "seed") {
      try {
        spec.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw InvalidInput("spec: bad seed '" + value + "'");
      }
    } else if (key == "estimators") {
      spec.estimators.clear();
      for (const auto& part : detail::split(value, ','))
        if (!part.empty()) spec.estimators.push_back(parse_method(detail::lower(part)));
    } else if (key == "symbols") {
      const std::string v = detail::lower(value);
      if (v == "complex") spec.symbols = SymbolKind::complex;
      else if (v == "real") spec.symbols = SymbolKind::real;
      else throw InvalidInput("spec: symbols must be complex or real");
    } else if (key == "analytic") {
      const std::string v = detail::lower(value);
      if (v != "true" && v != "false") throw InvalidInput("spec: analytic must be true or false");
      spec.analytic = v == "true";
    } else {
      throw InvalidInput("spec line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!ranges_given && spec.M != 4)
    throw InvalidInput("spec: ranges must be given when M != 4");
  spec.validate();
  return spec;
}

inline ExperimentSpec parse_spec(const std::string& text) {
  std::istringstream in(text);
  return parse_spec(in);
}

inline ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file '" + path + "'");
  return parse_spec(in);
}

/// Squared error (and analytic MSE, when defined) of one estimator at one
/// sweep point in one trial.
struct PointOutcome {
  double squared_error = 0.0;
  std::optional<double> analytic;
  double esn0_db = 0.0;  // realized EsN0 for this trial
  std::vector<std::string> flags;
  bool failed = false;
};

/// Outcomes of one trial, indexed [phi][d_M][grid][estimator].
struct TrialResult {
  std::vector<PointOutcome> outcomes;
};

namespace detail {

inline size_t point_index(const ExperimentSpec& spec, size_t phi, size_t dm, size_t g, size_t est) {
  return ((phi * spec.d_M.size() + dm) * spec.grid.size() + g) * spec.estimators.size() + est;
}

struct TrialContext {
  std::vector<DeviceData> devices;
  ComplexSequence s_plus;
  PriorMoments prior;
};

inline void evaluate(const ExperimentSpec& spec, const TrialContext& ctx, const ChannelConfig& cfg, Rng& noise,
                     size_t base, TrialResult& out) {
  const Index L = ctx.s_plus.size();
  const double nv_sync = cfg.N0 / cfg.T;
  std::optional<SampleSet> ss;
  std::optional<ComplexSequence> r;
  std::optional<LinearModel> lm;
  std::optional<AsyncPrior> ap;
  if (spec.mode == Mode::asynchronous) {
    ss = sample_asynchronous(ctx.devices, cfg, noise);
  } else {
    r = sample_synchronous(ctx.devices, cfg, noise);
  }
  const auto need_model = [&] {
    if (!lm) lm = build_linear_model(cfg, L);
    if (!ap) ap = build_async_prior(ctx.prior, L);
  };

  for (size_t e = 0; e < spec.estimators.size(); ++e) {
    PointOutcome& po = out.outcomes[base + e];
    try {
      Estimate est;
      switch (spec.estimators[e]) {
        case Method::ml:
          est = ml_aligned(*r);
          if (spec.analytic) po.analytic = mse_ml_sync(cfg.h, ctx.prior.v_mat, nv_sync);
          break;
        case Method::lmmse:
          est = lmmse_synchronous(*r, cfg.h, ctx.prior, nv_sync);
          if (spec.analytic) po.analytic = mse_lmmse_sync(cfg.h, ctx.prior, nv_sync);
          break;
        case Method::pml:
          est = pml_async(*ss);
          if (spec.analytic)
            po.analytic = mse_p_estimators(cfg.h, ctx.prior, cfg.N0, cfg.T, ss->d(ss->M - 1)).pml;
          break;
        case Method::plmmse:
          est = plmmse_async(*ss, cfg.h, ctx.prior, cfg.N0, cfg.T);
          if (spec.analytic)
            po.analytic = mse_p_estimators(cfg.h, ctx.prior, cfg.N0, cfg.T, ss->d(ss->M - 1)).plmmse;
          break;
        case Method::ml_async:
          need_model();
          est = ml_async(*ss, *lm);
          if (spec.analytic) po.analytic = mse_ml_async(*lm);
          break;
        case Method::lmmse_async:
          need_model();
          est = lmmse_async(*ss, *lm, *ap);
          if (spec.analytic) po.analytic = mse_lmmse_async(*lm, *ap);
          break;
        case Method::spmap:
          est = spmap_async(*ss, cfg, ctx.prior);
          break;
      }
      po.squared_error = mse(ctx.s_plus, est.s_plus_hat);
      po.flags = std::move(est.flags);
      if (!std::isfinite(po.squared_error)) {
        po.failed = true;
        po.flags.emplace_back(std::string(to_string(spec.estimators[e])) + ":non_finite");
      }
    } catch (const std::exception&) {
      po.failed = true;
      po.analytic.reset();
      po.flags.emplace_back(std::string(to_string(spec.estimators[e])) + ":failed");
    }
  }
}

}  // namespace detail

/// Runs every sweep point of one trial. Deterministic in (spec.seed, trial).
inline TrialResult run_trial(const ExperimentSpec& spec, std::uint64_t trial) {
  const Index L = spec.packet_length();
  const auto n_est = spec.estimators.size();
  TrialResult out;
  out.outcomes.resize(spec.phi_max.size() * spec.d_M.size() * spec.grid.size() * n_est);

  detail::TrialContext ctx;
  Rng sym_rng = derive_stream(spec.seed, {trial, 0});
  ctx.devices = generate_symbols(spec.ranges, L, sym_rng, spec.symbols);
  ctx.s_plus = sum_sequence(ctx.devices);
  ctx.prior = build_prior(std::span<const DeviceData>(ctx.devices));

  for (size_t pi = 0; pi < spec.phi_max.size(); ++pi) {
    for (size_t di = 0; di < spec.d_M.size(); ++di) {
      Rng ch_rng = derive_stream(spec.seed, {trial, pi, di, 1});
      const double phi = spec.mode == Mode::aligned ? 0.0 : spec.phi_max[pi];
      ChannelConfig cfg = draw_channel(spec.M, phi, spec.d_M[di], spec.T, 0.0, ch_rng);
      const Eigen::VectorXd ph = phases(cfg);
      for (size_t gi = 0; gi < spec.grid.size(); ++gi) {
        Rng noise = derive_stream(spec.seed, {trial, pi, di, gi, 2});
        cfg.N0 = spec.grid_kind == GridKind::n0 ? spec.grid[gi] : calibrate_noise(ctx.devices, ph, spec.grid[gi]);
        const double esn0 = compute_esn0(ctx.devices, ph, cfg.N0);
        const size_t base = detail::point_index(spec, pi, di, gi, 0);
        for (size_t e = 0; e < n_est; ++e) out.outcomes[base + e].esn0_db = esn0;
        detail::evaluate(spec, ctx, cfg, noise, base, out);
      }
    }
  }
  return out;
}

struct ResultRow {
  Method estimator = Method::ml;
  double esn0_db = 0.0;  // grid value, or mean realized EsN0 for an N0 grid
  double n0 = 0.0;       // grid value for an N0 grid, else 0
  double phi_max = 0.0;
  double d_M = 1.0;
  Index L = 0;
  Index M = 0;
  int trials = 0;        // trials that produced an estimate
  double empirical_mse = 0.0;
  std::optional<double> analytic_mse;
  std::string flags;
  std::uint64_t seed = 0;
};

/// Runs all trials (on `threads` workers) and aggregates per sweep point.
inline std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, unsigned threads = 1) {
  spec.validate();
  const auto n_trials = static_cast<size_t>(spec.trials);
  std::vector<TrialResult> results(n_trials);
  std::vector<std::exception_ptr> errors(n_trials);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t t = next++; t < n_trials; t = next++) {
      try {
        results[t] = run_trial(spec, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_trials)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<ResultRow> rows;
  const Index L = spec.packet_length();
  for (size_t pi = 0; pi < spec.phi_max.size(); ++pi)
    for (size_t di = 0; di < spec.d_M.size(); ++di)
      for (size_t gi = 0; gi < spec.grid.size(); ++gi)
        for (size_t e = 0; e < spec.estimators.size(); ++e) {
          const size_t idx = detail::point_index(spec, pi, di, gi, e);
          CompensatedSum emp, ana, esn0;
          int ok = 0;
          int with_analytic = 0;
          std::map<std::string, int> flag_counts;
          for (const auto& tr : results) {
            const PointOutcome& po = tr.outcomes[idx];
            esn0.add(po.esn0_db);
            for (const auto& f : po.flags) ++flag_counts[f];
            if (po.failed) continue;
            ++ok;
            emp.add(po.squared_error);
            if (po.analytic) {
              ++with_analytic;
              ana.add(*po.analytic);
            }
          }
          ResultRow row;
          row.estimator = spec.estimators[e];
          row.esn0_db = spec.grid_kind == GridKind::esn0_db ? spec.grid[gi] : esn0.value() / spec.trials;
          row.n0 = spec.grid_kind == GridKind::n0 ? spec.grid[gi] : 0.0;
          row.phi_max = spec.phi_max[pi];
          row.d_M = spec.d_M[di];
          row.L = L;
          row.M = spec.M;
          row.trials = ok;
          row.empirical_mse = ok > 0 ? emp.value() / ok : std::nan("");
          if (with_analytic > 0 && with_analytic == ok) row.analytic_mse = ana.value() / with_analytic;
          for (const auto& [name, count] : flag_counts) {
            if (!row.flags.empty()) row.flags += ';';
            row.flags += name + "=" + std::to_string(count);
          }
          row.seed = spec.seed;
          rows.push_back(std::move(row));
        }
  return rows;
}

inline constexpr std::string_view kCsvHeader =
    "estimator,esn0_db,phi_max,d_M,L,M,trials,empirical_mse,analytic_mse,flags";

namespace detail {

inline std::string fmt(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.estimator) << ',' << detail::fmt(r.esn0_db) << ',' << detail::fmt(r.phi_max) << ','
       << detail::fmt(r.d_M) << ',' << r.L << ',' << r.M << ',' << r.trials << ',' << detail::fmt(r.empirical_mse)
       << ',' << (r.analytic_mse ? detail::fmt(*r.analytic_mse) : std::string()) << ',' << r.flags << '\n';
  }
}

/// `key = value` description of how a CSV was produced.
inline void write_metadata(std::ostream& os, const ExperimentSpec& spec) {
  os << "mode = " << to_string(spec.mode) << '\n';
  os << "M = " << spec.M << '\n';
  os << "L = " << spec.packet_length() << '\n';
  os << "ranges = ";
  for (size_t i = 0; i < spec.ranges.size(); ++i)
    os << (i ? "," : "") << detail::fmt(spec.ranges[i].lo) << ':' << detail::fmt(spec.ranges[i].hi);
  os << '\n';
  os << "symbols = " << (spec.symbols == SymbolKind::complex ? "complex" : "real") << '\n';
  os << "T = " << detail::fmt(spec.T) << '\n';
  os << (spec.grid_kind == GridKind::esn0_db ? "EsN0_grid = " : "N0_grid = ");
  for (size_t i = 0; i < spec.grid.size(); ++i) os << (i ? "," : "") << detail::fmt(spec.grid[i]);
  os << '\n';
  os << "phi_max = ";
  for (size_t i = 0; i < spec.phi_max.size(); ++i) os << (i ? "," : "") << detail::fmt(spec.phi_max[i]);
  os << '\n';
  os << "d_M = ";
  for (size_t i = 0; i < spec.d_M.size(); ++i) os << (i ? "," : "") << detail::fmt(spec.d_M[i]);
  os << '\n';
  os << "trials = " << spec.trials << '\n';
  os << "seed = " << spec.seed << '\n';
  os << "estimators = ";
  for (size_t i = 0; i < spec.estimators.size(); ++i) os << (i ? "," : "") << to_string(spec.estimators[i]);
  os << '\n';
  os << "rng = mt19937_64, seed_seq(seed, trial, ...): symbols (trial,0), channel (trial,phi,dM,1), "
        "noise (trial,phi,dM,grid,2)\n";
  os << "noise = N0 calibrated per trial from realized EsN0 (phases of that trial)\n";
  os << "phase_offset_draws = redrawn every trial\n";
}

/// Built-in sweeps for the figures of the simulation study.
inline ExperimentSpec figure_spec(std::string_view name) {
  ExperimentSpec s;
  const double pi = std::numbers::pi;
  const std::vector<double> async_phi{0.0, pi / 2, pi, 2 * pi};
  const std::vector<double> async_dm{0.99, 0.01};
  if (name == "fig4") {
    s.mode = Mode::synchronous;
    s.phi_max = {0.0, pi / 2};
    s.estimators = {Method::ml, Method::lmmse};
    s.L = 1024;
  } else if (name == "fig6") {
    s.mode = Mode::asynchronous;
    s.phi_max = async_phi;
    s.d_M = async_dm;
    s.estimators = {Method::pml, Method::plmmse};
    s.L = 1024;
  } else if (name == "fig7") {
    s.mode = Mode::asynchronous;
    s.phi_max = async_phi;
    s.d_M = async_dm;
    s.estimators = {Method::ml_async};
    s.L = 1024;
  } else if (name == "fig8") {
    s.mode = Mode::asynchronous;
    s.phi_max = async_phi;
    s.d_M = async_dm;
    s.estimators = {Method::spmap};
    s.L = 1024;
  } else if (name == "fig9") {
    s.mode = Mode::asynchronous;
    s.phi_max = async_phi;
    s.d_M = async_dm;
    s.estimators = {Method::lmmse_async};
    s.L = 128;
  } else if (name == "fig10") {
    s.mode = Mode::asynchronous;
    s.phi_max = async_phi;
    s.d_M = async_dm;
    s.estimators = {Method::spmap, Method::lmmse_async};
    s.L = 128;
    s.analytic = false;
  } else {
    throw InvalidInput("unknown figure '" + std::string(name) + "' (fig4, fig6, fig7, fig8, fig9, fig10)");
  }
  s.trials = 100;
  return s;
}

}  // namespace oacsim
