#include "aircont/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include "aircont/csv.hpp"
#include "aircont/scaling.hpp"

namespace aircont {

namespace {

// Stream-key coordinates; the scheme is deliberately not part of the key so
// both schemes see the same channel and gain realizations per trial.
enum SweepAxis : std::uint64_t { kPowerAxis = 0, kNoiseAxis = 1 };

struct Welford {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stderr_mean() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

}  // namespace

Vector sample_channel(RngStream& stream, int sensors) {
  if (sensors < 1) {
    throw ValidationError("sensor count must be >= 1");
  }
  Vector h(sensors);
  for (int i = 0; i < sensors; ++i) h(i) = stream.rayleigh_unit();
  return h;
}

Vector sample_gain(RngStream& stream, int sensors) {
  if (sensors < 1) {
    throw ValidationError("sensor count must be >= 1");
  }
  Vector k(sensors);
  for (int i = 0; i < sensors; ++i) k(i) = stream.uniform(0.0, 100.0);
  return k;
}

SweepRow average_control_mse(Scheme scheme, int sensors, double p_bar,
                             double sigma2, long trials, RngStream stream) {
  if (trials < 1) {
    throw ValidationError("trial count must be >= 1");
  }
  if (scheme == Scheme::ideal) {
    throw ValidationError("the ideal scheme has no scaling to average");
  }

  SweepRow row;
  row.scheme = scheme;
  row.sensors = sensors;
  row.p_bar = p_bar;
  row.sigma2 = sigma2;

  Welford acc;
  for (long t = 0; t < trials; ++t) {
    // Fixed draw order per trial: h, h_a, k. Both schemes consume the same
    // draws even though air ignores h_a.
    const Vector h = sample_channel(stream, sensors);
    const double h_a = stream.rayleigh_unit();
    const Vector k = sample_gain(stream, sensors);

    const double k_norm2 = k.squaredNorm();
    if (h.minCoeff() <= 0.0 || h_a <= 0.0 || k_norm2 <= 0.0) {
      ++row.skipped;
      continue;
    }
    const ChannelRealization ch =
        make_channel(h, h_a, sigma2, sigma2, sigma2, p_bar);
    double mse = 0.0;
    if (scheme == Scheme::air) {
      const AirScaling s = optimize_air_scaling(ch, k);
      mse = mse_air(s, ch, k);
    } else {
      const SotaScaling s = optimize_sota_scaling(ch, k);
      mse = mse_sota(s, ch, k);
    }
    acc.add(mse / k_norm2);
  }

  row.trials = acc.n;
  row.avg_control_mse = acc.mean;
  row.stderr_mean = acc.stderr_mean();
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int threads) {
  if (cfg.trials < 1) {
    throw ValidationError("sweep trials must be >= 1");
  }
  if (cfg.sensor_counts.empty()) {
    throw ValidationError("sweep needs at least one sensor count");
  }
  for (int n : cfg.sensor_counts) {
    if (n < 1) throw ValidationError("sensor counts must be >= 1");
  }
  for (double v : cfg.p_bar_values) {
    if (!(v > 0.0)) throw ValidationError("peak power values must be > 0");
  }
  for (double v : cfg.sigma2_values) {
    if (!(v > 0.0)) throw ValidationError("noise variance values must be > 0");
  }
  if (!(cfg.p_bar_fixed > 0.0) || !(cfg.sigma2_fixed > 0.0)) {
    throw ValidationError("fixed sweep parameters must be > 0");
  }

  struct Point {
    SweepAxis axis;
    int sensors;
    std::size_t value_index;
    double p_bar;
    double sigma2;
  };
  std::vector<Point> points;
  for (std::size_t ni = 0; ni < cfg.sensor_counts.size(); ++ni) {
    for (std::size_t vi = 0; vi < cfg.p_bar_values.size(); ++vi) {
      points.push_back({kPowerAxis, cfg.sensor_counts[ni], vi,
                        cfg.p_bar_values[vi], cfg.sigma2_fixed});
    }
  }
  for (std::size_t ni = 0; ni < cfg.sensor_counts.size(); ++ni) {
    for (std::size_t vi = 0; vi < cfg.sigma2_values.size(); ++vi) {
      points.push_back({kNoiseAxis, cfg.sensor_counts[ni], vi,
                        cfg.p_bar_fixed, cfg.sigma2_values[vi]});
    }
  }

  // Two rows per point, air before sota, in point order.
  std::vector<SweepRow> rows(2 * points.size());
  auto evaluate = [&](std::size_t p) {
    const Point& pt = points[p];
    const std::uint64_t key = derive_stream_key(
        cfg.seed, {static_cast<std::uint64_t>(pt.axis),
                   static_cast<std::uint64_t>(pt.sensors),
                   static_cast<std::uint64_t>(pt.value_index)});
    rows[2 * p] = average_control_mse(Scheme::air, pt.sensors, pt.p_bar,
                                      pt.sigma2, cfg.trials, RngStream(key));
    rows[2 * p + 1] = average_control_mse(Scheme::sota, pt.sensors, pt.p_bar,
                                          pt.sigma2, cfg.trials, RngStream(key));
  };

  int workers = threads;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), points.size()));

  if (workers <= 1) {
    for (std::size_t p = 0; p < points.size(); ++p) evaluate(p);
  } else {
    std::vector<std::exception_ptr> failures(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const std::size_t chunk = (points.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(points.size(), lo + chunk);
        try {
          for (std::size_t p = lo; p < hi; ++p) evaluate(p);
        } catch (...) {
          failures[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "scheme,N,p_bar,sigma2,trials,avg_control_mse,stderr\n";
  for (const SweepRow& row : rows) {
    os << scheme_name(row.scheme) << ',' << row.sensors << ','
       << fmt9(row.p_bar) << ',' << fmt9(row.sigma2) << ',' << row.trials
       << ',' << fmt9(row.avg_control_mse) << ',' << fmt9(row.stderr_mean)
       << '\n';
  }
}

}  // namespace aircont
