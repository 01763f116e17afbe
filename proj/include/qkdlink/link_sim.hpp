#pragma once

#include <array>
#include <cstdint>

#include "qkdlink/counts.hpp"
#include "qkdlink/poincare.hpp"

namespace qkdlink {

/// Faint-pulse source. The pattern generator picks one of the six states
/// per pulse slot, uniformly, from a seeded pseudo-random pattern.
struct SourceConfig {
  double mean_photon_number = 0.07;
  double repetition_rate_hz = 2.5e8;
  std::uint64_t pattern_seed = 0;
  /// Per-state optical power multipliers, ordered like state_index.
  std::array<double, 6> power_imbalance{1, 1, 1, 1, 1, 1};
};

/// One block's worth of channel: a static axial rotation, residual
/// birefringence from the steering optics, end-to-end transmission
/// (geometric coupling, filters and detector efficiency folded into one
/// scalar), and an isotropic depolarization knob that sets the intrinsic
/// error floor: a state's Born overlap is damped by 1 - 2*intrinsic_error,
/// so a perfectly aligned link still shows that error rate in every basis.
struct ChannelState {
  double axial_angle_deg = 0.0;
  double retardance_deg = 0.0;
  /// Azimuth of the equatorial birefringence axis on the sphere.
  double retardance_axis_azimuth_deg = 0.0;
  double transmission = 0.03;
  double intrinsic_error_rate = 0.05;
  double duration_s = 0.5;

  /// Composite channel rotation: axial first, then birefringence.
  [[nodiscard]] Rotation3 rotation() const;
};

struct BackgroundConfig {
  double dark_rate_hz = 370.0;
  double ambient_rate_hz = 600.0;
  double beacon_rate_hz = 570.0;

  [[nodiscard]] double total_rate_hz() const {
    return dark_rate_hz + ambient_rate_hz + beacon_rate_hz;
  }
};

enum class Backend {
  /// Exact slot-by-slot Monte Carlo, OpenMP-sharded over fixed-size slices.
  per_pulse,
  /// Per-(state, channel) binomial/multinomial sampling of the same model.
  aggregated,
};

/// Detection model shared by the simulator backends and the oracle.
/// Within one slot with prepared state A the six receiver channels see
/// independent Poisson photon processes with intensities
///   lambda_sig = mu * imbalance_A * transmission * (1/3) * p_born
///   lambda_bg  = background_rate * slot_period
/// and the receiver gates at most one event per slot: the slot records a
/// click with probability 1 - exp(-sum lambda), attributed to channel d
/// with weight lambda_d. Per-slot click probabilities and attribution
/// weights are precomputed here.
struct SlotModel {
  std::array<double, 6> click_prob{};          // per prepared state
  std::array<std::array<double, 6>, 6> p_signal{};  // joint per slot
  std::array<std::array<double, 6>, 6> p_background{};
  double slot_period_s = 0.0;

  [[nodiscard]] static SlotModel build(const SourceConfig& src,
                                       const ChannelState& ch,
                                       const BackgroundConfig& bg);
};

/// Simulate one transmission block. Deterministic for a fixed seed and
/// backend at any shard/thread count. Throws std::invalid_argument for
/// non-positive duration, and for mu*transmission > 1 on the aggregated
/// backend.
[[nodiscard]] CountMatrix simulate_block(const SourceConfig& src,
                                         const ChannelState& ch,
                                         const BackgroundConfig& bg,
                                         std::uint64_t seed,
                                         Backend backend = Backend::aggregated);

/// Single-threaded reference for the per-pulse backend: same slice/stream
/// contract, plain loop. The parallel path must reproduce it bit-for-bit.
[[nodiscard]] CountMatrix simulate_block_reference(const SourceConfig& src,
                                                   const ChannelState& ch,
                                                   const BackgroundConfig& bg,
                                                   std::uint64_t seed);

/// Closed-form per-second expectations of the same model; the oracle the
/// Monte Carlo backends are validated against.
[[nodiscard]] ExpectedRates expected_count_rates(const SourceConfig& src,
                                                 const ChannelState& ch,
                                                 const BackgroundConfig& bg);

/// Probability that a detected pulse carried more than one photon,
/// P(n > 1 | n >= 1) for Poisson n with mean mu. The small-mu limit is the
/// familiar mu/2. Throws for mu <= 0.
[[nodiscard]] double multiphoton_fraction(double mean_photon_number);

}  // namespace qkdlink
