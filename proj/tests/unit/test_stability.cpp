#include <doctest.h>

#include <sstream>

#include "aircont/oracles.hpp"
#include "aircont/stability.hpp"
#include "helpers.hpp"

using namespace aircont;
using testing::random_matrix;
using testing::random_vector;

namespace {

const Vector kDefaultGain = (Vector(4) << 6.67, 11.09, 41.15, 11.27).finished();

StabilityGridSpec default_spec() {
  StabilityGridSpec spec;
  spec.effective_gain = kDefaultGain;
  spec.plant = default_ball_and_beam();
  spec.timing = {0.01, 4};
  return spec;
}

}  // namespace

TEST_CASE("minimum feasible delay per scheme") {
  const NetworkTiming timing{0.01, 4};
  CHECK(min_feasible_delay(Scheme::air, timing) == 0.01);
  CHECK(min_feasible_delay(Scheme::sota, timing) == doctest::Approx(0.05));
  CHECK(min_feasible_delay(Scheme::ideal, timing) == 0.0);
  CHECK(min_feasible_delay(Scheme::sota, {0.02, 1}) == doctest::Approx(0.04));
}

TEST_CASE("single-cell sweep reproduces the scalar closed form") {
  StabilityGridSpec spec;
  spec.plant = make_plant(Matrix::Zero(1, 1), Vector::Ones(1));
  spec.effective_gain = Vector::Constant(1, 0.5);
  spec.timing = {0.01, 1};
  spec.delta_min = spec.delta_max = 1.0;
  spec.delta_steps = 1;
  spec.ratio_min = spec.ratio_max = 0.0;
  spec.ratio_steps = 1;
  const auto cells = sweep_stability(spec);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].rho == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cells[0].max_stable);
  CHECK_FALSE(cells[0].achievable_air);  // tau = 0 < one slot
  CHECK_FALSE(cells[0].achievable_sota);
}

TEST_CASE("open-loop unstable plant yields no stable cells") {
  StabilityGridSpec spec;
  spec.plant = make_plant(Matrix::Identity(2, 2), Vector::Ones(2));
  spec.effective_gain = Vector::Zero(2);
  spec.timing = {0.001, 2};
  spec.delta_min = 0.01;
  spec.delta_max = 0.2;
  spec.delta_steps = 8;
  spec.ratio_steps = 6;
  for (const StabilityCell& cell : sweep_stability(spec)) {
    CHECK_FALSE(cell.max_stable);
    CHECK_FALSE(cell.achievable_air);
    CHECK_FALSE(cell.achievable_sota);
  }
}

TEST_CASE("stability flags agree with the iteration-decay oracle") {
  const auto cells = sweep_stability(default_spec());
  RngStream stream(derive_stream_key(303, {1}));
  const DiscretizedPlant prototype =
      discretize(default_ball_and_beam(), 0.01, 0.0);
  (void)prototype;

  int checked = 0;
  while (checked < 100) {
    const size_t index =
        static_cast<size_t>(stream.uniform01() * static_cast<double>(cells.size()));
    const StabilityCell& cell = cells[index];
    // Near the rho = 1 boundary the finite-step decay test is inconclusive
    // by construction; skip a thin band.
    if (std::abs(cell.rho - 1.0) < 2e-3) continue;
    const DiscretizedPlant disc =
        discretize(default_ball_and_beam(), cell.delta, cell.tau);
    const AugmentedSystem aug = augment(disc, kDefaultGain);
    const Vector z0 = random_vector(stream, 5);
    const double growth = iterate_log_growth(aug.transition, z0, 10000);
    if (cell.max_stable) {
      CHECK(growth < std::log(1e-6));
    } else {
      CHECK(growth > std::log(1e-6));
    }
    ++checked;
  }
}

TEST_CASE("sweep output is deterministic across thread counts") {
  StabilityGridSpec spec = default_spec();
  spec.delta_steps = 20;
  spec.ratio_steps = 15;
  const auto seq = sweep_stability(spec, 1);
  const auto par = sweep_stability(spec, 4);
  REQUIRE(seq.size() == par.size());
  for (size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].rho == par[i].rho);
    CHECK(seq[i].delta == par[i].delta);
    CHECK(seq[i].max_stable == par[i].max_stable);
  }
}

TEST_CASE("sweep order is row-major by delta then ratio") {
  StabilityGridSpec spec = default_spec();
  spec.delta_steps = 3;
  spec.ratio_steps = 2;
  const auto cells = sweep_stability(spec);
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].delta == cells[1].delta);
  CHECK(cells[0].ratio < cells[1].ratio);
  CHECK(cells[1].delta < cells[2].delta);
}

TEST_CASE("achievable sota cells are always achievable for air") {
  RngStream stream(derive_stream_key(303, {2}));
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(stream.uniform01() * 3.0);
    StabilityGridSpec spec;
    spec.plant = make_plant(random_matrix(stream, n), random_vector(stream, n));
    spec.effective_gain = random_vector(stream, n, 0.0, 3.0);
    spec.timing = {stream.uniform(0.001, 0.02), n};
    spec.delta_min = 0.01;
    spec.delta_max = 0.3;
    spec.delta_steps = 10;
    spec.ratio_steps = 8;
    long air_count = 0, sota_count = 0;
    for (const StabilityCell& cell : sweep_stability(spec)) {
      if (cell.achievable_sota) CHECK(cell.achievable_air);
      if (cell.achievable_air) CHECK(cell.max_stable);
      air_count += cell.achievable_air;
      sota_count += cell.achievable_sota;
    }
    CHECK(air_count >= sota_count);
  }
}

TEST_CASE("region area counts and normalizes") {
  std::vector<StabilityCell> cells(4);
  cells[0].max_stable = true;
  cells[1].max_stable = true;
  const RegionArea area = region_area(cells, RegionKind::max_stable);
  CHECK(area.cell_count == 2);
  CHECK(area.normalized_area == doctest::Approx(0.5));
  CHECK(region_area(cells, RegionKind::achievable_air).cell_count == 0);

  for (auto& cell : cells) cell.max_stable = true;
  CHECK(region_area(cells, RegionKind::max_stable).normalized_area == 1.0);

  CHECK_THROWS_AS((void)region_area({}, RegionKind::max_stable), ValidationError);
}

TEST_CASE("grid refinement changes the area by less than the boundary share") {
  StabilityGridSpec coarse = default_spec();
  coarse.delta_steps = 30;
  coarse.ratio_steps = 25;
  StabilityGridSpec fine = coarse;
  fine.delta_steps = 60;
  fine.ratio_steps = 50;

  const auto coarse_cells = sweep_stability(coarse);
  const auto fine_cells = sweep_stability(fine);
  const double coarse_area =
      region_area(coarse_cells, RegionKind::max_stable).normalized_area;
  const double fine_area =
      region_area(fine_cells, RegionKind::max_stable).normalized_area;

  // Fraction of coarse cells sitting on the stability boundary (a 4-neighbor
  // disagrees), plus a one-row slack for cells the fine grid introduces.
  long boundary = 0;
  auto flag = [&](int d, int r) {
    return coarse_cells[static_cast<size_t>(d) * coarse.ratio_steps + r].max_stable;
  };
  for (int d = 0; d < coarse.delta_steps; ++d) {
    for (int r = 0; r < coarse.ratio_steps; ++r) {
      const bool self = flag(d, r);
      const bool edge =
          (d > 0 && flag(d - 1, r) != self) ||
          (d + 1 < coarse.delta_steps && flag(d + 1, r) != self) ||
          (r > 0 && flag(d, r - 1) != self) ||
          (r + 1 < coarse.ratio_steps && flag(d, r + 1) != self);
      boundary += edge ? 1 : 0;
    }
  }
  const double boundary_share = static_cast<double>(boundary) /
                                static_cast<double>(coarse_cells.size());
  CHECK(std::abs(fine_area - coarse_area) <= boundary_share + 0.01);
}

TEST_CASE("the sweep detects delay-nonmonotone stability columns") {
  // For this plant there are sampling periods where a SHORT delay loses
  // stability but a longer one within the same period restores it. The
  // sweep must expose such pockets rather than assume monotonicity in tau.
  const auto cells = sweep_stability(default_spec());
  bool pocket_found = false;
  for (int d = 0; d < 60 && !pocket_found; ++d) {
    bool unstable_seen = false;
    for (int r = 0; r < 50; ++r) {
      const StabilityCell& cell = cells[static_cast<size_t>(d) * 50 + r];
      if (!cell.max_stable) unstable_seen = true;
      if (cell.max_stable && unstable_seen) pocket_found = true;
    }
  }
  CHECK(pocket_found);
}

TEST_CASE("a stability margin shrinks the stable set") {
  StabilityGridSpec spec = default_spec();
  const auto strict = sweep_stability(spec);
  spec.stability_margin = 0.05;
  const auto margined = sweep_stability(spec);
  const long strict_count =
      region_area(strict, RegionKind::max_stable).cell_count;
  const long margined_count =
      region_area(margined, RegionKind::max_stable).cell_count;
  CHECK(margined_count < strict_count);
  for (size_t i = 0; i < strict.size(); ++i) {
    if (margined[i].max_stable) CHECK(strict[i].max_stable);
    CHECK(margined[i].rho == strict[i].rho);
  }
}

TEST_CASE("stability csv format") {
  StabilityGridSpec spec;
  spec.plant = make_plant(Matrix::Zero(1, 1), Vector::Ones(1));
  spec.effective_gain = Vector::Constant(1, 0.5);
  spec.timing = {0.25, 1};
  spec.delta_min = spec.delta_max = 1.0;
  spec.delta_steps = 1;
  spec.ratio_min = spec.ratio_max = 0.5;
  spec.ratio_steps = 1;
  // Phi-tilde = [[0.75, 0.5], [-0.5, 0]]: complex pair with modulus
  // sqrt(det) = 0.5, feasible for both schemes at tau = 0.5.
  std::ostringstream os;
  write_stability_csv(os, sweep_stability(spec));
  CHECK(os.str() ==
        "delta,ratio,tau,rho,max_stable,achievable_air,achievable_sota\n"
        "1,0.5,0.5,0.5,1,1,1\n");
}

TEST_CASE("cell failures carry grid coordinates") {
  // Exponentials of this plant overflow at the larger sampling periods; the
  // sweep must say which cell broke.
  StabilityGridSpec spec;
  spec.plant = make_plant(2000.0 * Matrix::Identity(2, 2), Vector::Ones(2));
  spec.effective_gain = Vector::Zero(2);
  spec.timing = {0.001, 2};
  spec.delta_min = 0.01;
  spec.delta_max = 0.5;
  spec.delta_steps = 6;
  spec.ratio_steps = 3;
  try {
    (void)sweep_stability(spec);
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("cell (delta=") != std::string::npos);
    CHECK(std::string(e.what()).find("overflowed") != std::string::npos);
  }
  // Parallel execution reports the same first failure.
  try {
    (void)sweep_stability(spec, 4);
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("cell (delta=") != std::string::npos);
  }
}

TEST_CASE("sweep validates its spec") {
  StabilityGridSpec spec = default_spec();
  spec.ratio_max = 1.5;
  CHECK_THROWS_AS((void)sweep_stability(spec), ValidationError);
  spec = default_spec();
  spec.delta_min = -0.1;
  CHECK_THROWS_AS((void)sweep_stability(spec), ValidationError);
  spec = default_spec();
  spec.effective_gain = Vector::Zero(3);
  CHECK_THROWS_AS((void)sweep_stability(spec), DimensionError);
  spec = default_spec();
  spec.timing.sensors = 5;
  CHECK_THROWS_AS((void)sweep_stability(spec), ValidationError);
}
