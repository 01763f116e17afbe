#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qkdlink/counts.hpp"

namespace qkdlink {

/// One correlator entry. `defined` is false when the four contributing
/// cells are all empty, which is distinct from a correlator of zero.
struct Correlator {
  double value = 0.0;
  double stddev = 0.0;
  std::uint64_t n = 0;
  bool defined = false;
};

/// The nine correlation functions C_AB, A row (prepared basis), B column
/// (detected basis): C = (m++ + m-- - m+- - m-+) / (4-cell sum), with
/// binomial standard deviation sqrt((1 - C^2) / N).
struct CorrelatorSet {
  std::array<std::array<Correlator, 3>, 3> c{};

  [[nodiscard]] const Correlator& at(Basis prep, Basis det) const {
    return c[static_cast<int>(prep)][static_cast<int>(det)];
  }
  [[nodiscard]] Correlator& at(Basis prep, Basis det) {
    return c[static_cast<int>(prep)][static_cast<int>(det)];
  }
  [[nodiscard]] bool all_defined() const;
};

struct Marginal {
  double p = 0.0;
  double stddev = 0.0;
  bool defined = false;
};

/// Detected-event marginals: the probability that a detected photon was
/// prepared in a given state, and that it landed in a given channel.
struct MarginalSet {
  std::array<Marginal, 6> prepared{};
  std::array<Marginal, 6> detected{};
};

struct ErrorRate {
  double value = 0.0;
  double stddev = 0.0;
  bool defined = false;
};

[[nodiscard]] CorrelatorSet correlators(const CountMatrix& counts);
[[nodiscard]] MarginalSet marginals(const CountMatrix& counts);

/// Key-basis error rate E_ZZ = (m[Z+][Z-] + m[Z-][Z+]) / (ZZ total),
/// equivalently (1 - C_ZZ) / 2. Undefined when the ZZ cells are empty.
[[nodiscard]] ErrorRate zz_error_rate(const CountMatrix& counts);

/// Relative frame angle between transmitter and receiver, estimated as the
/// circular median of the four equivalent correlator combinations
///   atan2(C_XY, C_XX) + 45     atan2(C_YX, C_XX) + 45
///   -atan2(C_YX, C_YY) - 135   -atan2(C_XY, C_YY) - 135
/// mapped to (-180, 180]. Under this library's frame conventions the four
/// branches coincide on an ideal channel and the estimate equals
/// 45 - 2 * theta_physical. Returns nullopt ("insufficient data") when any
/// contributing correlator is undefined or entered by fewer than
/// `min_counts` events.
[[nodiscard]] std::optional<double> axial_angle(const CorrelatorSet& c,
                                                std::uint64_t min_counts = 500);

/// Everything the per-block summary CSV row carries.
struct BlockSummary {
  double time_s = 0.0;
  CorrelatorSet correlators;
  ErrorRate e_zz;
  std::optional<double> omega_deg;
};

/// One row per block: time, 9 correlators, 9 deltas, E_ZZ, omega, flags.
void write_block_summary_header(std::ostream& os);
void write_block_summary_row(std::ostream& os, const BlockSummary& row);

}  // namespace qkdlink
