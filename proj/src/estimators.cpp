#include "qkdlink/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace qkdlink {

namespace {

double atan2_deg(double y, double x) {
  return rad_to_deg(std::atan2(y, x));
}

// Circular distance in degrees, in [0, 180].
double circ_dist(double a, double b) {
  return std::abs(wrap_angle_deg(a - b));
}

// Median of angles on the circle: for each candidate cut point, unwrap the
// sample around it and take the ordinary median; keep the result with the
// smallest total circular deviation.
double circular_median_deg(const std::array<double, 4>& angles) {
  double best = angles[0];
  double best_cost = 1e300;
  for (double ref : angles) {
    std::array<double, 4> unwrapped;
    for (int i = 0; i < 4; ++i)
      unwrapped[i] = ref + wrap_angle_deg(angles[i] - ref);
    std::sort(unwrapped.begin(), unwrapped.end());
    const double med = 0.5 * (unwrapped[1] + unwrapped[2]);
    double cost = 0.0;
    for (double a : angles) cost += circ_dist(a, med);
    if (cost < best_cost) {
      best_cost = cost;
      best = med;
    }
  }
  return wrap_angle_deg(best);
}

}  // namespace

bool CorrelatorSet::all_defined() const {
  for (const auto& row : c)
    for (const auto& e : row)
      if (!e.defined) return false;
  return true;
}

CorrelatorSet correlators(const CountMatrix& counts) {
  CorrelatorSet set;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const auto pp = counts.m[2 * a][2 * b];
      const auto pm = counts.m[2 * a][2 * b + 1];
      const auto mp = counts.m[2 * a + 1][2 * b];
      const auto mm = counts.m[2 * a + 1][2 * b + 1];
      const std::uint64_t n = pp + pm + mp + mm;
      Correlator& e = set.c[a][b];
      e.n = n;
      if (n == 0) continue;
      e.defined = true;
      e.value = (static_cast<double>(pp) + static_cast<double>(mm) -
                 static_cast<double>(pm) - static_cast<double>(mp)) /
                static_cast<double>(n);
      e.stddev = std::sqrt(std::max(0.0, 1.0 - e.value * e.value) /
                           static_cast<double>(n));
    }
  }
  return set;
}

MarginalSet marginals(const CountMatrix& counts) {
  MarginalSet set;
  const double total = static_cast<double>(counts.total_detected());
  if (total == 0.0) return set;
  for (int i = 0; i < 6; ++i) {
    const double pp = static_cast<double>(counts.row_sum(i)) / total;
    set.prepared[i] = {pp, std::sqrt(pp * (1.0 - pp) / total), true};
    const double pd = static_cast<double>(counts.col_sum(i)) / total;
    set.detected[i] = {pd, std::sqrt(pd * (1.0 - pd) / total), true};
  }
  return set;
}

ErrorRate zz_error_rate(const CountMatrix& counts) {
  const int zp = state_index(Basis::Z, Sign::plus);
  const int zm = state_index(Basis::Z, Sign::minus);
  const std::uint64_t err = counts.m[zp][zm] + counts.m[zm][zp];
  const std::uint64_t n = counts.sifted_count();
  if (n == 0) return {};
  const double e = static_cast<double>(err) / static_cast<double>(n);
  return {e, std::sqrt(std::max(0.0, e * (1.0 - e)) / static_cast<double>(n)),
          true};
}

std::optional<double> axial_angle(const CorrelatorSet& c,
                                  std::uint64_t min_counts) {
  const Correlator& cxx = c.at(Basis::X, Basis::X);
  const Correlator& cxy = c.at(Basis::X, Basis::Y);
  const Correlator& cyx = c.at(Basis::Y, Basis::X);
  const Correlator& cyy = c.at(Basis::Y, Basis::Y);
  for (const Correlator* e : {&cxx, &cxy, &cyx, &cyy})
    if (!e->defined || e->n < min_counts) return std::nullopt;

  const std::array<double, 4> branches = {
      atan2_deg(cxy.value, cxx.value) + 45.0,
      atan2_deg(cyx.value, cxx.value) + 45.0,
      -atan2_deg(cyx.value, cyy.value) - 135.0,
      -atan2_deg(cxy.value, cyy.value) - 135.0,
  };
  return circular_median_deg(branches);
}

void write_block_summary_header(std::ostream& os) {
  os << "time_s";
  static constexpr const char* bases = "XYZ";
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) os << ",C_" << bases[a] << bases[b];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) os << ",dC_" << bases[a] << bases[b];
  os << ",E_ZZ,dE_ZZ,omega_deg,flags\n";
}

void write_block_summary_row(std::ostream& os, const BlockSummary& row) {
  os << row.time_s;
  std::string flags;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto& e = row.correlators.c[a][b];
      if (e.defined) {
        os << "," << e.value;
      } else {
        os << ",nan";
        flags = "undefined_correlator";
      }
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const auto& e = row.correlators.c[a][b];
      os << "," << (e.defined ? e.stddev : 0.0);
    }
  if (row.e_zz.defined)
    os << "," << row.e_zz.value << "," << row.e_zz.stddev;
  else
    os << ",nan,nan";
  if (row.omega_deg) {
    os << "," << *row.omega_deg;
  } else {
    os << ",nan";
    flags = flags.empty() ? "insufficient_data" : flags + ";insufficient_data";
  }
  os << "," << (flags.empty() ? "ok" : flags) << "\n";
}

}  // namespace qkdlink
