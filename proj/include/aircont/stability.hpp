#ifndef AIRCONT_STABILITY_HPP
#define AIRCONT_STABILITY_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "aircont/plant.hpp"
#include "aircont/types.hpp"

namespace aircont {

/// Slot duration and sensor count of the wireless network. The air scheme
/// needs one slot per sampling instant; the multi-hop baseline needs one
/// slot per sensor plus one for the controller-to-actuator hop.
struct NetworkTiming {
  double slot_duration = 0.01;  // seconds
  int sensors = 1;
};

/// Smallest sampling-to-actuation delay the network can deliver:
/// one slot for air, (sensors + 1) slots for sota, zero for ideal.
double min_feasible_delay(Scheme scheme, const NetworkTiming& timing);

struct StabilityGridSpec {
  double delta_min = 0.005;
  double delta_max = 0.30;
  int delta_steps = 60;
  double ratio_min = 0.0;  // tau / delta
  double ratio_max = 1.0;
  int ratio_steps = 50;
  Vector effective_gain;
  PlantModel plant;
  NetworkTiming timing;
  /// Cells count as stable when rho < 1 - margin; default is the strict
  /// rho < 1 threshold.
  double stability_margin = 0.0;
};

struct StabilityCell {
  double delta = 0.0;
  double ratio = 0.0;
  double tau = 0.0;
  double rho = 0.0;
  bool max_stable = false;       // rho < 1 (minus margin)
  bool achievable_air = false;   // max_stable and air can deliver tau
  bool achievable_sota = false;  // max_stable and sota can deliver tau
};

/// Evaluates the closed-loop spectral radius on the (delta, tau/delta) grid
/// and classifies each cell. Output is row-major by delta then ratio and is
/// identical for any thread count. threads <= 0 picks the hardware count.
std::vector<StabilityCell> sweep_stability(const StabilityGridSpec& spec,
                                           int threads = 1);

enum class RegionKind { max_stable, achievable_air, achievable_sota };

struct RegionArea {
  long cell_count = 0;
  double normalized_area = 0.0;  // cell_count / total cells
};

RegionArea region_area(std::span<const StabilityCell> cells, RegionKind kind);

/// CSV: delta,ratio,tau,rho,max_stable,achievable_air,achievable_sota
void write_stability_csv(std::ostream& os,
                         std::span<const StabilityCell> cells);

}  // namespace aircont

#endif  // AIRCONT_STABILITY_HPP
