#pragma once

#include <cstdint>

#include "bdsource/polarization.hpp"

namespace bdsource {

// Coincidence counts at one analyzer pair (m, n) and its orthogonal
// companions. "perp" projects the orthogonal polarization onto the same
// transmitted port, realized as HWP angle + 45 degrees.
struct CountQuadruple {
  std::int64_t c_mn = 0;
  std::int64_t c_mn_perp = 0;
  std::int64_t c_mperp_n = 0;
  std::int64_t c_mperp_nperp = 0;

  std::int64_t total() const { return c_mn + c_mn_perp + c_mperp_n + c_mperp_nperp; }
  void validate() const;
};

// (c_mn + c_mperp_nperp - c_mn_perp - c_mperp_n) / total. Throws
// ValidationError on all-zero counts.
double visibility_from_counts(const CountQuadruple& q);

// Same normalized combination, in CHSH correlator terms.
double chsh_correlator(const CountQuadruple& q);

enum class VisibilityBasis { hv, da };
enum class SignMode { literal, magnitude };

// Visibility predicted from a state at the standard HWP settings:
// H/V uses (0, 45 deg), D/A uses (22.5, -22.5 deg); QWPs at 0.
double predict_visibility(const DensityMatrix& rho, VisibilityBasis basis,
                          SignMode mode = SignMode::magnitude);

// Two HWP settings per arm; analysis is pi/2-periodic so angles are reduced
// mod 90 degrees. The perpendicular setting of an angle is angle + 45 deg
// (mod 90 deg).
struct ChshSettings {
  double m1_rad = 0.0;
  double m2_rad = 0.0;
  double n1_rad = 0.0;
  double n2_rad = 0.0;

  static double reduce(double angle_rad);          // into [0, pi/2)
  static double perpendicular(double angle_rad);   // + pi/4, reduced
  ChshSettings reduced() const;
};

// Default analyzer angles for a CHSH run (degrees: 0, 22.5, 11.25, 33.75).
ChshSettings default_chsh_settings();

// S = E(m1,n1) + E(m2,n2) + E(m1,n2) - E(m2,n1), each correlator predicted
// through coincidence probabilities at the four port combinations.
double chsh_s(const DensityMatrix& rho, const ChshSettings& settings);

struct ChshMaximum {
  ChshSettings settings;
  double s = 0.0;  // signed value at the optimum of |S|
};

// Numeric maximization of |S| over the four analyzer angles (coarse grid +
// Nelder-Mead refinement). The returned value is re-evaluated through
// chsh_s at the optimum.
ChshMaximum maximize_chsh(const DensityMatrix& rho);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2. Inputs must be PSD within
// `psd_tolerance` (eigenvalues >= -psd_tolerance, else ValidationError);
// negative eigenvalues are clipped to zero before the square roots. The
// default tolerance admits tomographic reconstructions that are PSD only up
// to counting noise.
double fidelity(const DensityMatrix& a, const DensityMatrix& b,
                double psd_tolerance = 5e-2);

}  // namespace bdsource
