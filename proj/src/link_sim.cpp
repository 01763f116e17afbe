#include "qkdlink/link_sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qkdlink {

namespace {

// Pulses per Monte Carlo slice. Fixed so that results do not depend on the
// number of threads, only on (seed, slice index).
constexpr std::uint64_t kSlicePulses = 1ULL << 22;

void validate(const SourceConfig& src, const ChannelState& ch,
              const BackgroundConfig& bg) {
  if (src.mean_photon_number <= 0.0)
    throw std::invalid_argument("mean_photon_number must be > 0");
  if (src.repetition_rate_hz <= 0.0)
    throw std::invalid_argument("repetition_rate_hz must be > 0");
  for (double w : src.power_imbalance)
    if (w <= 0.0)
      throw std::invalid_argument("power imbalance multipliers must be > 0");
  if (ch.transmission < 0.0 || ch.transmission > 1.0)
    throw std::invalid_argument("transmission must be in [0, 1]");
  if (ch.intrinsic_error_rate < 0.0 || ch.intrinsic_error_rate > 0.5)
    throw std::invalid_argument("intrinsic_error_rate must be in [0, 0.5]");
  if (ch.duration_s <= 0.0)
    throw std::invalid_argument("duration must be > 0");
  if (bg.dark_rate_hz < 0.0 || bg.ambient_rate_hz < 0.0 ||
      bg.beacon_rate_hz < 0.0)
    throw std::invalid_argument("background rates must be >= 0");
}

// Per-state cumulative category table for slot sampling: 6 signal channels
// then 6 background channels, cumulative joint probabilities.
struct SlotTables {
  std::array<std::array<double, 12>, 6> cum{};
  std::array<double, 6> click_prob{};
};

SlotTables build_tables(const SlotModel& model) {
  SlotTables t;
  t.click_prob = model.click_prob;
  for (int a = 0; a < 6; ++a) {
    double acc = 0.0;
    for (int d = 0; d < 6; ++d) {
      acc += model.p_signal[a][d];
      t.cum[a][d] = acc;
    }
    for (int d = 0; d < 6; ++d) {
      acc += model.p_background[a][d];
      t.cum[a][6 + d] = acc;
    }
  }
  return t;
}

CountMatrix simulate_slice(const SlotTables& tables, std::uint64_t n_pulses,
                           std::uint64_t pattern_seed, std::uint64_t seed,
                           std::uint64_t slice_index) {
  CountMatrix counts;
  auto pattern = detail::make_stream(pattern_seed, detail::kPatternStream,
                                     slice_index);
  auto detect = detail::make_stream(seed, detail::kDetectionStream,
                                    slice_index);
  std::uniform_int_distribution<int> pick_state(0, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t i = 0; i < n_pulses; ++i) {
    const int a = pick_state(pattern);
    ++counts.emitted[a];
    const double u = unit(detect);
    if (u >= tables.click_prob[a]) continue;
    // u is uniform on [0, click_prob): walk the cumulative table.
    const auto& cum = tables.cum[a];
    int k = 0;
    while (k < 11 && u >= cum[k]) ++k;
    const int d = k % 6;
    ++counts.m[a][d];
    if (k >= 6) ++counts.background[d];
  }
  return counts;
}

CountMatrix simulate_aggregated(const SourceConfig& src, const SlotModel& model,
                                std::uint64_t n_pulses, std::uint64_t seed) {
  CountMatrix counts;
  auto pattern = detail::make_stream(src.pattern_seed, detail::kPatternStream);
  auto detect = detail::make_stream(seed, detail::kDetectionStream);

  // Emitted totals: multinomial over the six states via chained binomials.
  std::uint64_t remaining = n_pulses;
  for (int a = 0; a < 5; ++a) {
    const double p = 1.0 / static_cast<double>(6 - a);
    std::binomial_distribution<std::uint64_t> bin(remaining, p);
    counts.emitted[a] = bin(pattern);
    remaining -= counts.emitted[a];
  }
  counts.emitted[5] = remaining;

  const SlotTables tables = build_tables(model);
  for (int a = 0; a < 6; ++a) {
    const double pc = tables.click_prob[a];
    if (pc <= 0.0 || counts.emitted[a] == 0) continue;
    std::binomial_distribution<std::uint64_t> clicks_dist(counts.emitted[a],
                                                          pc);
    std::uint64_t clicks = clicks_dist(detect);
    // Distribute clicks over the 12 categories, again chained binomials.
    double rem_prob = pc;
    double prev = 0.0;
    for (int k = 0; k < 12 && clicks > 0; ++k) {
      const double cat = tables.cum[a][k] - prev;
      prev = tables.cum[a][k];
      std::uint64_t n_k;
      if (k == 11 || cat >= rem_prob) {
        n_k = clicks;
      } else {
        double p = cat / rem_prob;
        p = p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
        std::binomial_distribution<std::uint64_t> bin(clicks, p);
        n_k = bin(detect);
      }
      const int d = k % 6;
      counts.m[a][d] += n_k;
      if (k >= 6) counts.background[d] += n_k;
      clicks -= n_k;
      rem_prob -= cat;
    }
  }
  return counts;
}

}  // namespace

Rotation3 ChannelState::rotation() const {
  const Rotation3 axial = axial_rotation(axial_angle_deg);
  if (retardance_deg == 0.0) return axial;
  const double az = deg_to_rad(retardance_axis_azimuth_deg);
  const PoincareVector axis{std::cos(az), std::sin(az), 0.0};
  return axial.then(birefringence_rotation(retardance_deg, axis));
}

SlotModel SlotModel::build(const SourceConfig& src, const ChannelState& ch,
                           const BackgroundConfig& bg) {
  SlotModel model;
  model.slot_period_s = 1.0 / src.repetition_rate_hz;
  const Rotation3 channel = ch.rotation();
  const double visibility = 1.0 - 2.0 * ch.intrinsic_error_rate;
  const double lambda_bg = bg.total_rate_hz() * model.slot_period_s;

  for (int a = 0; a < 6; ++a) {
    const PoincareVector prep =
        channel.apply(prep_direction(state_basis(a), state_sign(a)));
    std::array<double, 6> lambda{};
    double total = 0.0;
    for (int d = 0; d < 6; ++d) {
      const PoincareVector meas =
          detector_direction(state_basis(d), state_sign(d));
      const double born = 0.5 * (1.0 + visibility * dot(prep, meas));
      const double sig = src.mean_photon_number * src.power_imbalance[a] *
                         ch.transmission * (1.0 / 3.0) * born;
      lambda[d] = sig;
      total += sig + lambda_bg;
    }
    if (total <= 0.0) continue;
    const double click = -std::expm1(-total);
    model.click_prob[a] = click;
    for (int d = 0; d < 6; ++d) {
      model.p_signal[a][d] = click * lambda[d] / total;
      model.p_background[a][d] = click * lambda_bg / total;
    }
  }
  return model;
}

CountMatrix simulate_block(const SourceConfig& src, const ChannelState& ch,
                           const BackgroundConfig& bg, std::uint64_t seed,
                           Backend backend) {
  validate(src, ch, bg);
  const std::uint64_t n_pulses = static_cast<std::uint64_t>(
      std::llround(src.repetition_rate_hz * ch.duration_s));
  const SlotModel model = SlotModel::build(src, ch, bg);

  CountMatrix counts;
  counts.duration_s = ch.duration_s;
  if (n_pulses == 0) return counts;

  if (backend == Backend::aggregated) {
    if (src.mean_photon_number * ch.transmission > 1.0)
      throw std::invalid_argument(
          "aggregated backend requires mu * transmission <= 1");
    CountMatrix sampled = simulate_aggregated(src, model, n_pulses, seed);
    sampled.duration_s = ch.duration_s;
    return sampled;
  }

  const SlotTables tables = build_tables(model);
  const std::uint64_t n_slices = (n_pulses + kSlicePulses - 1) / kSlicePulses;
  std::vector<CountMatrix> partial(n_slices);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(n_slices); ++s) {
    const std::uint64_t begin = static_cast<std::uint64_t>(s) * kSlicePulses;
    const std::uint64_t count = std::min(kSlicePulses, n_pulses - begin);
    partial[s] = simulate_slice(tables, count, src.pattern_seed, seed,
                                static_cast<std::uint64_t>(s));
  }
  for (const auto& p : partial) counts.merge(p);
  return counts;
}

CountMatrix simulate_block_reference(const SourceConfig& src,
                                     const ChannelState& ch,
                                     const BackgroundConfig& bg,
                                     std::uint64_t seed) {
  validate(src, ch, bg);
  const std::uint64_t n_pulses = static_cast<std::uint64_t>(
      std::llround(src.repetition_rate_hz * ch.duration_s));
  const SlotTables tables = build_tables(SlotModel::build(src, ch, bg));
  CountMatrix counts;
  counts.duration_s = ch.duration_s;
  for (std::uint64_t begin = 0, s = 0; begin < n_pulses;
       begin += kSlicePulses, ++s) {
    const std::uint64_t count = std::min(kSlicePulses, n_pulses - begin);
    counts.merge(simulate_slice(tables, count, src.pattern_seed, seed, s));
  }
  return counts;
}

ExpectedRates expected_count_rates(const SourceConfig& src,
                                   const ChannelState& ch,
                                   const BackgroundConfig& bg) {
  validate(src, ch, bg);
  const SlotModel model = SlotModel::build(src, ch, bg);
  const double state_rate = src.repetition_rate_hz / 6.0;
  ExpectedRates rates;
  for (int a = 0; a < 6; ++a) {
    rates.emitted[a] = state_rate;
    for (int d = 0; d < 6; ++d) {
      rates.m[a][d] =
          state_rate * (model.p_signal[a][d] + model.p_background[a][d]);
      rates.background[d] += state_rate * model.p_background[a][d];
    }
  }
  return rates;
}

double multiphoton_fraction(double mean_photon_number) {
  if (mean_photon_number <= 0.0)
    throw std::invalid_argument("mean photon number must be > 0");
  const double mu = mean_photon_number;
  const double p_ge1 = -std::expm1(-mu);
  const double p_ge2 = p_ge1 - mu * std::exp(-mu);
  return p_ge2 / p_ge1;
}

}  // namespace qkdlink
