#pragma once

// Seeded L-sweeps over random Hamiltonian instances with order-deterministic
// aggregation. Trials run on a bounded worker pool; per-trial seeds are
// base_seed + trial_index so results are independent of scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hamrec/io.hpp"
#include "hamrec/pipeline.hpp"

namespace hamrec {

struct SweepConfig {
  ModelKind kind = ModelKind::H2;
  std::vector<int> profile{2};
  int l_min = 2;
  int l_max = 10;
  int trials = 200;
  std::uint64_t base_seed = 1;
  double success_threshold = 1e-8;
  int workers = 0;  // 0 = hardware concurrency
  static constexpr int kHardLengthCap = 12;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("sweep: trials >= 1 required");
    if (l_min > l_max) throw std::invalid_argument("sweep: empty L range");
    if (l_max > kHardLengthCap)
      throw std::invalid_argument("sweep: L above hard cap");
  }
};

struct SweepRow {
  int length = 0;
  int trials = 0;
  double delta_median = std::numeric_limits<double>::quiet_NaN();
  double delta_p10 = std::numeric_limits<double>::quiet_NaN();
  double delta_p90 = std::numeric_limits<double>::quiet_NaN();
  double success_fraction = 0.0;
  std::int64_t s_count = 0;
  int n_terms = 0;
  bool predicted_recoverable = false;
};

namespace detail {

// linear-interpolation percentile on a sorted copy
inline double percentile(std::vector<double> v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = p / 100.0 * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

template <typename Fn>
inline void parallel_for(int count, int workers, Fn&& fn) {
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline SweepRow sweep_one_length(const SweepConfig& cfg, int length) {
  SweepRow row;
  row.length = length;
  row.trials = cfg.trials;
  row.n_terms = term_count(cfg.kind, length);
  const DegeneracyProfile prof{cfg.profile, length};
  row.s_count = predicted_lie_count(prof);
  row.predicted_recoverable = row.s_count >= row.n_terms - 1;

  std::vector<double> deltas(cfg.trials,
                             std::numeric_limits<double>::quiet_NaN());
  std::vector<char> ok(cfg.trials, 0);
  detail::parallel_for(cfg.trials, cfg.workers, [&](int t) {
    try {
      const TrialResult r =
          run_trial(cfg.kind, length, cfg.profile, cfg.base_seed + t);
      deltas[t] = r.report.delta;
      ok[t] = r.report.success && r.report.delta < cfg.success_threshold;
    } catch (const std::exception&) {
      // trial failure (e.g. eigensolver non-convergence): excluded from the
      // percentiles, counted as unsuccessful
    }
  });

  std::vector<double> finite;
  int successes = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    if (std::isfinite(deltas[t])) finite.push_back(deltas[t]);
    if (ok[t]) ++successes;
  }
  row.delta_median = detail::percentile(finite, 50.0);
  row.delta_p10 = detail::percentile(finite, 10.0);
  row.delta_p90 = detail::percentile(finite, 90.0);
  row.success_fraction =
      static_cast<double>(successes) / static_cast<double>(cfg.trials);
  return row;
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  std::int64_t total = 0;
  for (int qm : cfg.profile) total += qm;
  for (int length = std::max(cfg.l_min, model_min_length(cfg.kind));
       length <= cfg.l_max; ++length) {
    if (total > (std::int64_t{1} << length)) continue;  // profile does not fit
    rows.push_back(sweep_one_length(cfg, length));
  }
  return rows;
}

inline std::string sweep_csv_header() {
  return "L,trials,delta_median,delta_p10,delta_p90,success_fraction,S,N,"
         "predicted_recoverable";
}

inline std::string sweep_csv_row(const SweepRow& r) {
  std::ostringstream os;
  os << r.length << ',' << r.trials << ',' << format_float(r.delta_median)
     << ',' << format_float(r.delta_p10) << ',' << format_float(r.delta_p90)
     << ',' << format_float(r.success_fraction) << ',' << r.s_count << ','
     << r.n_terms << ',' << (r.predicted_recoverable ? 1 : 0);
  return os.str();
}

inline nlohmann::json to_json(const SweepRow& r) {
  return {{"L", r.length},
          {"trials", r.trials},
          {"delta_median", r.delta_median},
          {"delta_p10", r.delta_p10},
          {"delta_p90", r.delta_p90},
          {"success_fraction", r.success_fraction},
          {"S", r.s_count},
          {"N", r.n_terms},
          {"predicted_recoverable", r.predicted_recoverable}};
}

}  // namespace hamrec
