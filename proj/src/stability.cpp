#include "aircont/stability.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include "aircont/csv.hpp"
#include "aircont/linalg.hpp"

namespace aircont {

namespace {

// Absolute slack for the tau-vs-slot-boundary comparisons so that grid
// points landing exactly on a feasibility boundary are classified
// consistently regardless of rounding in the grid arithmetic.
constexpr double kFeasibilityEps = 1e-12;

double grid_value(double lo, double hi, int steps, int index) {
  if (steps == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(index) /
                  static_cast<double>(steps - 1);
}

void validate_spec(const StabilityGridSpec& spec) {
  if (spec.delta_steps < 1 || spec.ratio_steps < 1) {
    throw ValidationError("grid must have at least one step per axis");
  }
  if (!(spec.delta_min > 0.0) || spec.delta_max < spec.delta_min) {
    throw ValidationError("delta range [" + std::to_string(spec.delta_min) +
                          ", " + std::to_string(spec.delta_max) +
                          "] is empty or non-positive");
  }
  if (spec.ratio_min < 0.0 || spec.ratio_max > 1.0 ||
      spec.ratio_max < spec.ratio_min) {
    throw ValidationError("ratio range must be a nonempty subset of [0, 1]");
  }
  if (!(spec.timing.slot_duration > 0.0) || spec.timing.sensors < 1) {
    throw ValidationError("network timing needs slot_duration > 0 and >= 1 sensor");
  }
  if (spec.effective_gain.size() != spec.plant.size()) {
    throw DimensionError("effective gain length " +
                         std::to_string(spec.effective_gain.size()) +
                         " does not match plant dimension " +
                         std::to_string(spec.plant.size()));
  }
  if (spec.timing.sensors != spec.plant.size()) {
    throw ValidationError("network has " + std::to_string(spec.timing.sensors) +
                          " sensors but the plant has " +
                          std::to_string(spec.plant.size()) + " states");
  }
}

}  // namespace

double min_feasible_delay(Scheme scheme, const NetworkTiming& timing) {
  switch (scheme) {
    case Scheme::ideal: return 0.0;
    case Scheme::air: return timing.slot_duration;
    case Scheme::sota: return (timing.sensors + 1) * timing.slot_duration;
  }
  return 0.0;
}

std::vector<StabilityCell> sweep_stability(const StabilityGridSpec& spec,
                                           int threads) {
  validate_spec(spec);

  const long total =
      static_cast<long>(spec.delta_steps) * static_cast<long>(spec.ratio_steps);
  std::vector<StabilityCell> cells(static_cast<size_t>(total));

  const double min_tau_air = min_feasible_delay(Scheme::air, spec.timing);
  const double min_tau_sota = min_feasible_delay(Scheme::sota, spec.timing);

  auto evaluate = [&](long flat) {
    const int di = static_cast<int>(flat / spec.ratio_steps);
    const int rj = static_cast<int>(flat % spec.ratio_steps);
    StabilityCell cell;
    cell.delta = grid_value(spec.delta_min, spec.delta_max, spec.delta_steps, di);
    cell.ratio = grid_value(spec.ratio_min, spec.ratio_max, spec.ratio_steps, rj);
    cell.tau = cell.ratio * cell.delta;
    const std::string where = "cell (delta=" + std::to_string(cell.delta) +
                              ", ratio=" + std::to_string(cell.ratio) + "): ";
    try {
      const DiscretizedPlant disc = discretize(spec.plant, cell.delta, cell.tau);
      const AugmentedSystem aug = augment(disc, spec.effective_gain);
      cell.rho = spectral_radius(aug.transition);
    } catch (const NumericalError& e) {
      throw NumericalError(where + e.what());
    } catch (const Error& e) {
      throw ValidationError(where + e.what());
    }
    cell.max_stable = cell.rho < 1.0 - spec.stability_margin;
    const bool within_period = cell.tau <= cell.delta + kFeasibilityEps;
    cell.achievable_air = cell.max_stable && within_period &&
                          cell.tau >= min_tau_air - kFeasibilityEps;
    cell.achievable_sota = cell.max_stable && within_period &&
                           cell.tau >= min_tau_sota - kFeasibilityEps;
    cells[static_cast<size_t>(flat)] = cell;
  };

  int workers = threads;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = static_cast<int>(std::min<long>(workers, total));

  if (workers <= 1) {
    for (long flat = 0; flat < total; ++flat) evaluate(flat);
  } else {
    // Contiguous chunks; each worker writes its own slots, so the result is
    // identical to the sequential pass. The lowest-chunk error wins so
    // failures are also deterministic.
    std::vector<std::exception_ptr> failures(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const long chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const long lo = w * chunk;
        const long hi = std::min(total, lo + chunk);
        try {
          for (long flat = lo; flat < hi; ++flat) evaluate(flat);
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
  return cells;
}

RegionArea region_area(std::span<const StabilityCell> cells, RegionKind kind) {
  if (cells.empty()) {
    throw ValidationError("region_area needs a nonempty cell list");
  }
  long count = 0;
  for (const StabilityCell& cell : cells) {
    const bool flagged = kind == RegionKind::max_stable ? cell.max_stable
                         : kind == RegionKind::achievable_air
                             ? cell.achievable_air
                             : cell.achievable_sota;
    count += flagged ? 1 : 0;
  }
  return {count, static_cast<double>(count) / static_cast<double>(cells.size())};
}

void write_stability_csv(std::ostream& os,
                         std::span<const StabilityCell> cells) {
  os << "delta,ratio,tau,rho,max_stable,achievable_air,achievable_sota\n";
  for (const StabilityCell& cell : cells) {
    os << fmt9(cell.delta) << ',' << fmt9(cell.ratio) << ',' << fmt9(cell.tau)
       << ',' << fmt9(cell.rho) << ',' << (cell.max_stable ? 1 : 0) << ','
       << (cell.achievable_air ? 1 : 0) << ',' << (cell.achievable_sota ? 1 : 0)
       << '\n';
  }
}

}  // namespace aircont
