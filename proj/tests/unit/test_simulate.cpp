#include <doctest.h>

#include <sstream>

#include "aircont/linalg.hpp"
#include "aircont/simulate.hpp"
#include "helpers.hpp"

using namespace aircont;
using testing::random_matrix;
using testing::random_vector;

namespace {

const Vector kDefaultGain = (Vector(4) << 6.67, 11.09, 41.15, 11.27).finished();

SimConfig base_config() {
  SimConfig cfg;
  cfg.plant = default_ball_and_beam();
  cfg.timing = {0.01, 4};
  cfg.x0 = (Vector(4) << 0.1, 0.0, 0.0, 0.0).finished();
  cfg.gain = kDefaultGain;
  cfg.channel = make_channel((Vector(4) << 0.9, 1.1, 0.8, 1.2).finished(), 1.0,
                             0.5, 0.5, 0.5, 2.5);
  return cfg;
}

}  // namespace

TEST_CASE("no dynamics and no feedback keeps the state put") {
  SimConfig cfg = base_config();
  cfg.plant = make_plant(Matrix::Zero(4, 4), (Vector(4) << 0, 0, 0, 1).finished());
  cfg.scheme = Scheme::ideal;
  cfg.gain = Vector::Zero(4);
  cfg.horizon = 1.0;
  const Trajectory traj = simulate_closed_loop(cfg);
  REQUIRE(traj.times.size() == 101);
  for (size_t k = 0; k < traj.times.size(); ++k) {
    CHECK((traj.states[k] - cfg.x0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(traj.controls[k] == 0.0);
  }
}

TEST_CASE("ideal closed loop contracts the ball-and-beam state") {
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::ideal;
  cfg.sampling_period = 0.01;
  cfg.x0 = Vector::Zero(4);
  cfg.x0(3) = 1.0;
  cfg.horizon = 10.0;
  const Trajectory traj = simulate_closed_loop(cfg);
  const double final_norm = traj.states.back().norm();
  CHECK(final_norm < 1e-3);

  // Decay is consistent with the spectral radius of the augmented matrix.
  const DiscretizedPlant disc = discretize(cfg.plant, 0.01, 0.0);
  const double rho = spectral_radius(augment(disc, kDefaultGain).transition);
  CHECK(rho < 1.0);
}

TEST_CASE("noise-free air equals delayed linear feedback with its own gain") {
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::air;
  cfg.noise_enabled = false;
  cfg.horizon = 3.0;
  const Trajectory air = simulate_closed_loop(cfg);

  const AirScaling s = optimize_air_scaling(cfg.channel, cfg.gain);
  const Vector g = effective_gain_air(s, cfg.channel);
  const Trajectory ref =
      simulate_linear_feedback(cfg.plant, g, 0.01, 0.01, cfg.x0, 300);
  REQUIRE(air.times.size() == ref.times.size());
  for (size_t k = 0; k < air.times.size(); ++k) {
    CHECK((air.states[k] - ref.states[k]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(air.controls[k] == ref.controls[k]);
  }
}

TEST_CASE("noise-free air with ample power tracks the delayed target law") {
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::air;
  cfg.noise_enabled = false;
  cfg.channel.sigma2 = 0.0;  // optimizer returns an exact inversion
  cfg.channel.p_bar = 1e6;
  cfg.horizon = 3.0;
  const Trajectory air = simulate_closed_loop(cfg);
  const Trajectory ref =
      simulate_linear_feedback(cfg.plant, cfg.gain, 0.01, 0.01, cfg.x0, 300);
  for (size_t k = 0; k < air.times.size(); ++k) {
    CHECK((air.states[k] - ref.states[k]).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("superposition of noise-free trajectories") {
  RngStream stream(derive_stream_key(606, {1}));
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::air;
  cfg.noise_enabled = false;
  cfg.horizon = 2.0;
  const Vector a = random_vector(stream, 4);
  const Vector b = random_vector(stream, 4);

  cfg.x0 = a + b;
  const Trajectory whole = simulate_closed_loop(cfg);
  cfg.x0 = a;
  const Trajectory first = simulate_closed_loop(cfg);
  cfg.x0 = b;
  const Trajectory second = simulate_closed_loop(cfg);
  for (size_t k = 0; k < whole.times.size(); ++k) {
    const Vector sum = first.states[k] + second.states[k];
    CHECK((whole.states[k] - sum).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("noise-free runs match the augmented-matrix iteration") {
  RngStream stream(derive_stream_key(606, {2}));
  int done = 0;
  while (done < 5) {
    const int n = 2 + static_cast<int>(stream.uniform01() * 3.0);
    SimConfig cfg;
    cfg.plant = make_plant(random_matrix(stream, n, 1.0), random_vector(stream, n));
    cfg.scheme = Scheme::air;
    cfg.noise_enabled = false;
    cfg.timing = {0.05, n};
    cfg.sampling_period = 0.1;
    cfg.horizon = 10.0 * cfg.sampling_period;
    cfg.x0 = random_vector(stream, n);
    cfg.gain = random_vector(stream, n, 0.0, 2.0);
    Vector h(n);
    for (int i = 0; i < n; ++i) h(i) = 0.3 + stream.rayleigh_unit();
    cfg.channel = make_channel(h, 1.0, 0.2, 0.2, 0.2, 4.0);

    const AirScaling s = optimize_air_scaling(cfg.channel, cfg.gain);
    const Vector g = effective_gain_air(s, cfg.channel);
    const DiscretizedPlant disc =
        discretize(cfg.plant, cfg.sampling_period, cfg.timing.slot_duration);
    const AugmentedSystem aug = augment(disc, g);
    if (spectral_radius(aug.transition) >= 0.999) continue;

    const Trajectory traj = simulate_closed_loop(cfg);
    Vector z = Vector::Zero(n + 1);
    z.head(n) = cfg.x0;
    for (size_t k = 0; k < traj.times.size(); ++k) {
      CHECK((traj.states[k] - z.head(n)).cwiseAbs().maxCoeff() <= 1e-12);
      z = aug.transition * z;
    }
    ++done;
  }
}

TEST_CASE("air tracks the ideal response better than sota") {
  SimConfig cfg = base_config();
  cfg.horizon = 10.0;
  cfg.seed = 1;

  cfg.scheme = Scheme::ideal;
  cfg.sampling_period = 0.01;
  const Trajectory ideal = simulate_closed_loop(cfg);

  cfg.scheme = Scheme::air;
  const Trajectory air = simulate_closed_loop(cfg);

  cfg.scheme = Scheme::sota;
  cfg.sampling_period = 0.05;
  const Trajectory sota = simulate_closed_loop(cfg);

  const double rmse_air = tracking_error(air, ideal);
  const double rmse_sota = tracking_error(sota, subsample(ideal, 5));
  CHECK(rmse_air < rmse_sota);
}

TEST_CASE("tracking error basics") {
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::ideal;
  cfg.horizon = 1.0;
  const Trajectory traj = simulate_closed_loop(cfg);
  CHECK(tracking_error(traj, traj) == 0.0);

  Trajectory offset = traj;
  Vector d = (Vector(4) << 0.3, -0.4, 0.0, 1.2).finished();
  for (auto& x : offset.states) x += d;
  CHECK(tracking_error(offset, traj) == doctest::Approx(d.norm()).epsilon(1e-12));

  Trajectory short_traj = traj;
  short_traj.times.pop_back();
  short_traj.states.pop_back();
  short_traj.controls.pop_back();
  CHECK_THROWS_AS((void)tracking_error(short_traj, traj), ValidationError);
}

TEST_CASE("subsample keeps every stride-th sample") {
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::ideal;
  cfg.horizon = 1.0;
  const Trajectory traj = simulate_closed_loop(cfg);
  const Trajectory sub = subsample(traj, 5);
  REQUIRE(sub.times.size() == 21);
  CHECK(sub.times[1] == doctest::Approx(0.05));
  CHECK((sub.states[1] - traj.states[5]).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS((void)subsample(traj, 0), ValidationError);
}

TEST_CASE("infeasible timing is rejected before stepping") {
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::sota;
  cfg.sampling_period = 0.02;  // needs 5 slots = 0.05 s
  CHECK_THROWS_AS((void)simulate_closed_loop(cfg), ConfigError);

  cfg = base_config();
  cfg.scheme = Scheme::air;
  cfg.horizon = 0.0;
  CHECK_THROWS_AS((void)simulate_closed_loop(cfg), ConfigError);
}

TEST_CASE("noisy runs are reproducible from the seed") {
  SimConfig cfg = base_config();
  cfg.scheme = Scheme::air;
  cfg.horizon = 1.0;
  cfg.seed = 77;
  const Trajectory a = simulate_closed_loop(cfg);
  const Trajectory b = simulate_closed_loop(cfg);
  for (size_t k = 0; k < a.times.size(); ++k) {
    CHECK(a.controls[k] == b.controls[k]);
  }
  cfg.seed = 78;
  const Trajectory c = simulate_closed_loop(cfg);
  bool any_different = false;
  for (size_t k = 0; k < a.times.size(); ++k) {
    any_different = any_different || a.controls[k] != c.controls[k];
  }
  CHECK(any_different);
}

TEST_CASE("trajectory csv layout") {
  SimConfig cfg = base_config();
  cfg.plant = make_plant(Matrix::Zero(1, 1), Vector::Ones(1));
  cfg.scheme = Scheme::ideal;
  cfg.x0 = Vector::Ones(1);
  cfg.gain = Vector::Zero(1);
  cfg.sampling_period = 0.5;
  cfg.horizon = 1.0;
  const Trajectory traj = simulate_closed_loop(cfg);
  std::ostringstream os;
  const std::vector<Trajectory> all = {traj};
  write_trajectory_csv(os, all, 1);
  CHECK(os.str() ==
        "t,scheme,u,x1\n"
        "0,ideal,0,1\n"
        "0.5,ideal,0,1\n"
        "1,ideal,0,1\n");
}
