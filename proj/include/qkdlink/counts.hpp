#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "qkdlink/poincare.hpp"

namespace qkdlink {

/// Detection tallies for one transmission block. Rows are prepared states,
/// columns receiver channels, both ordered X+,X-,Y+,Y-,Z+,Z-.
///
/// `m` holds every recorded event attributed to the slot's prepared state,
/// whether the photon came from the source or from background light; the
/// receiver cannot tell them apart. `background` is the simulator's
/// bookkeeping of how many events per channel were background-caused (a
/// subset of the column sums of `m`). At most one event is recorded per
/// pulse slot, so row sums never exceed the emitted totals.
struct CountMatrix {
  std::array<std::array<std::uint64_t, 6>, 6> m{};
  std::array<std::uint64_t, 6> emitted{};
  std::array<std::uint64_t, 6> background{};
  double duration_s = 0.0;

  [[nodiscard]] std::uint64_t total_detected() const;
  [[nodiscard]] std::uint64_t total_emitted() const;
  [[nodiscard]] std::uint64_t row_sum(int prep) const;
  [[nodiscard]] std::uint64_t col_sum(int det) const;
  /// Sum of the four Z-prepared, Z-detected cells (the sifted events).
  [[nodiscard]] std::uint64_t sifted_count() const;
  /// Detected events divided by emitted photons (mu * pulses).
  [[nodiscard]] double transmission(double mean_photon_number) const;

  CountMatrix& merge(const CountMatrix& other);

  bool operator==(const CountMatrix&) const = default;
};

/// Real-valued per-second expectations under the same detection model the
/// simulator samples from; the analytic oracle for simulate_block.
struct ExpectedRates {
  std::array<std::array<double, 6>, 6> m{};
  std::array<double, 6> emitted{};
  std::array<double, 6> background{};

  [[nodiscard]] double total_detected() const;
};

/// CSV layout (one block per file):
///   optional leading '#' comment lines
///   duration_s,<seconds>
///   emitted,<state>,<count>            x6
///   count,<prep>,<det>,<count>         x36
///   background,<det>,<count>           x6
void write_count_matrix_csv(std::ostream& os, const CountMatrix& counts);
void write_count_matrix_csv(const std::string& path, const CountMatrix& counts,
                            const std::string& comment = "");
[[nodiscard]] CountMatrix read_count_matrix_csv(std::istream& is);
[[nodiscard]] CountMatrix read_count_matrix_csv(const std::string& path);

}  // namespace qkdlink
