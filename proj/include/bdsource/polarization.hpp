#pragma once

#include <complex>
#include <iosfwd>

#include <Eigen/Dense>

#include "bdsource/error.hpp"

namespace bdsource {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Two-qubit amplitude ordering used everywhere, including serialization:
// index 0 = HH, 1 = HV, 2 = VH, 3 = VV (signal qubit first).
inline constexpr const char* kBasisOrder = "HH HV VH VV";

enum class Port { transmitted, reflected };
enum class WaveplateKind { half, quarter };

// Pure two-qubit polarization ket. Construction enforces unit norm
// within 1e-12; use normalized() to build from unnormalized amplitudes.
class PolarizationState {
 public:
  explicit PolarizationState(const Vector4c& amplitudes);
  static PolarizationState normalized(const Vector4c& amplitudes);

  const Vector4c& amplitudes() const { return amps_; }
  std::complex<double> overlap(const PolarizationState& other) const {
    return amps_.dot(other.amps_);  // <this|other>
  }

 private:
  Vector4c amps_;
};

// |Phi-> = (|HH> - |VV>)/sqrt(2)
PolarizationState bell_phi_minus();

// 4x4 Hermitian unit-trace matrix in the (HH, HV, VH, VV) basis.
//
// Validation modes:
//   strict   - Hermitian within 1e-10, trace 1 within 1e-10, eigenvalues
//              >= -1e-8. The default for anything produced by the library.
//   measured - same Hermitian/trace checks but eigenvalues >= -5e-2, admitting
//              tomographic reconstructions that are PSD only up to
//              measurement noise.
//   raw      - Hermitian/trace checks only. Used for intermediate results
//              (e.g. linear tomographic inversion before projection).
class DensityMatrix {
 public:
  enum class Validation { strict, measured, raw };

  static DensityMatrix from_matrix(const Matrix4c& m,
                                   Validation mode = Validation::strict);
  static DensityMatrix from_state(const PolarizationState& psi);
  static DensityMatrix maximally_mixed();

  const Matrix4c& matrix() const { return m_; }
  Eigen::Vector4d eigenvalues() const;
  double min_eigenvalue() const;
  // True when all eigenvalues >= -tolerance.
  bool is_physical(double tolerance = 1e-8) const;

 private:
  explicit DensityMatrix(const Matrix4c& m) : m_(m) {}
  Matrix4c m_;
};

// One arm's measurement configuration. Waveplate angles are interpreted
// modulo pi (the Jones operators below are exactly pi-periodic).
struct AnalyzerSetting {
  double hwp_angle_rad = 0.0;
  double qwp_angle_rad = 0.0;
  Port port = Port::transmitted;
};

// Jones matrices with fast axis at `angle_rad` from horizontal.
//   HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]]          (det = -1)
//   QWP(t) = R(t) diag(1, i) R(-t)                          (retardance +pi/2)
Matrix2c waveplate_operator(WaveplateKind kind, double angle_rad);

// Rank-1 projector onto the state the analyzer transmits to its detector:
// <v| = <H| QWP(q) HWP(h) for the transmitted port, <V| ... for reflected.
Matrix2c analyzer_projector(const AnalyzerSetting& setting);

// Tr[rho (Pi_s (x) Pi_i)], clamped to [0, 1].
double coincidence_probability(const DensityMatrix& rho, const AnalyzerSetting& signal,
                               const AnalyzerSetting& idler);

// p rho + (1 - p) I/4
DensityMatrix werner_mix(const DensityMatrix& rho, double p);

// (U_s (x) U_i) rho (U_s (x) U_i)^dagger; both inputs must be unitary
// within 1e-10.
DensityMatrix apply_local(const DensityMatrix& rho, const Matrix2c& u_signal,
                          const Matrix2c& u_idler);

// Plain-text density matrix format: a header line naming the basis order,
// then four rows of four "re(+/-)imj" entries.
void write_density_matrix(std::ostream& out, const Matrix4c& m);
std::string density_matrix_to_string(const Matrix4c& m);
Matrix4c read_density_matrix(std::istream& in);

}  // namespace bdsource
