#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "qkdlink/counts.hpp"
#include "qkdlink/estimators.hpp"

namespace qkdlink {

/// Direction parametrized by azimuth and polar angle (radians), polar
/// measured from +s3.
struct ModelDirection {
  double azimuth_rad = 0.0;
  double polar_rad = 0.0;

  [[nodiscard]] PoincareVector vector() const;
  [[nodiscard]] static ModelDirection from_vector(const PoincareVector& v);
};

/// The 34-parameter device-and-channel model the security minimization
/// searches over: 6 preparation directions (Z+ and Z- pinned to the poles,
/// X and Y free: 8 parameters), 6 detection directions (12), one relative
/// efficiency per preparation and per detection channel (12, normalized to
/// mean 1 as a gauge), and the two channel weights (lambda1, lambda2) of a
/// Bell-diagonal family whose remaining weight splits evenly: in
/// prepare-and-measure form the channel contracts the sphere by
/// diag(d, d, 2s - 1) with d = lambda1 - lambda2 and s = lambda1 + lambda2.
struct DeviceModel {
  std::array<ModelDirection, 6> prep{};  // Z entries always pinned
  std::array<ModelDirection, 6> det{};
  std::array<double, 6> prep_efficiency{1, 1, 1, 1, 1, 1};
  std::array<double, 6> det_efficiency{1, 1, 1, 1, 1, 1};
  double lambda1 = 1.0;
  double lambda2 = 0.0;

  /// Canonical directions (receiver Y mirrored), unit efficiencies,
  /// lambda1 = 1: the noiseless fixed point.
  [[nodiscard]] static DeviceModel ideal();
  /// Re-pin the Z preparations to the poles (called after any edit).
  void pin_z_preparations();
};

/// Joint detection-event distribution predicted by a device model,
/// normalized over all 36 (prepared, detected) pairs.
using ModelProbabilities = std::array<std::array<double, 6>, 6>;

[[nodiscard]] ModelProbabilities model_probabilities(const DeviceModel& dm);

/// The 21 constraint functions evaluated on a joint distribution:
/// indices 0..8 the nine correlators (XX, XY, XZ, YX, ..., ZZ), 9..14 the
/// prepared-state marginals, 15..20 the detection-channel marginals.
constexpr int kNumConstraints = 21;
[[nodiscard]] std::array<double, kNumConstraints> constraint_values(
    const ModelProbabilities& q);

/// Observed constraint set: value, standard deviation and the confidence
/// multiplier sigma that widens each interval to [f - sigma*delta,
/// f + sigma*delta].
struct ConstraintSet {
  std::array<double, kNumConstraints> value{};
  std::array<double, kNumConstraints> delta{};
  double sigma = 5.0;

  [[nodiscard]] static ConstraintSet from_counts(const CountMatrix& counts,
                                                 double sigma);
};

/// Adversary-limited entropy of the key bit for channel weights
/// (lambda1, lambda2): 1 - h(lambda2 + (1 - lambda1 - lambda2) / 2).
/// Throws outside the unit simplex.
[[nodiscard]] double usable_entropy(double lambda1, double lambda2);

struct MinimizeOptions {
  int starts = 32;
  std::uint64_t seed = 1;
  int nm_iterations = 4000;
  int bisection_steps = 22;
  double feasibility_tol = 1e-6;
};

struct MinimizeResult {
  bool feasible = false;
  double s_min = 0.0;
  DeviceModel argmin{};
  /// Largest absolute constraint violation at the reported point.
  double max_violation = 0.0;
};

/// Worst-case usable entropy over every device model consistent with the
/// observations: multi-start penalty minimization over the 34 parameters,
/// then a bisection polish on the channel contrast. Deterministic for a
/// fixed options.seed at any thread count. An infeasible constraint set
/// (no model fits the data) is reported explicitly, not as zero key.
[[nodiscard]] MinimizeResult minimize_usable_entropy(
    const ConstraintSet& cs, const MinimizeOptions& options = {});

/// Secret key fraction r = S_min - h((1 - C_ZZ + sigma*dC_ZZ) / 2),
/// clamped to [0, 1]; the entropy argument is clamped to [0, 1/2].
[[nodiscard]] double secret_key_fraction(double s_min, double c_zz,
                                         double dc_zz, double sigma);

/// Closed-form rotation-invariant key fraction from the nine correlators:
/// with C = C_XX^2 + C_XY^2 + C_YX^2 + C_YY^2 and E = (1 - C_ZZ) / 2,
///   u = min(sqrt(C/2) / (1 - E), 1)
///   v = sqrt(C/2 - (1-E)^2 u^2) / E   (0 when E = 0)
///   r = 1 - h(E) - (1-E) h((1+u)/2) - E h((1+v)/2), clamped to [0, 1].
/// sigma > 0 applies the finite-key pessimism: C_ZZ is lowered and the
/// X/Y correlator magnitudes shrunk by sigma standard deviations. Throws
/// if a needed correlator is undefined.
[[nodiscard]] double rfi_closed_form_rate(const CorrelatorSet& c,
                                          double sigma = 0.0);

/// Two-basis comparator at the same counts, assuming perfectly orthogonal
/// polarizations: r = 1 - h(E_ZZ) - h(E_XX) with E_AA = (1 - C_AA) / 2,
/// clamped at 0. Throws if C_ZZ or C_XX is undefined.
[[nodiscard]] double bb84_fraction(const CorrelatorSet& c);

struct SecureRate {
  double sifted_rate_bps = 0.0;
  double secure_rate_bps = 0.0;
  double multiphoton_penalty = 0.0;
};

/// Rate accounting: sifted rate is the Z-prepared Z-detected count rate;
/// the secure rate grants the adversary the multiphoton fraction of the
/// sifted bits, max(0, r - p_multi) * sifted. Throws on zero duration.
[[nodiscard]] SecureRate secure_key_rate(double r, const CountMatrix& counts,
                                         double mean_photon_number);

enum class KeyRateMethod { closed_form, device_model, bb84 };
[[nodiscard]] const char* to_string(KeyRateMethod m);

struct KeyRateReport {
  KeyRateMethod method = KeyRateMethod::closed_form;
  double s_min = 0.0;
  double secret_fraction = 0.0;
  double sifted_rate_bps = 0.0;
  double secure_rate_bps = 0.0;
  double multiphoton_penalty = 0.0;
  double sigma = 0.0;
  bool feasible = true;
};

void write_key_rate_report_header(std::ostream& os);
void write_key_rate_report_row(std::ostream& os, const KeyRateReport& report);

}  // namespace qkdlink
