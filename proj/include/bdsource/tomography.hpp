#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bdsource/metrics.hpp"
#include "bdsource/polarization.hpp"

namespace bdsource {

enum class PolLabel { H, V, D, A, R, L };

PolLabel pol_label_from_string(const std::string& s);
std::string to_string(PolLabel label);

// Frozen label -> (HWP, QWP) mapping: H=(0,0), V=(45,0), D=(22.5,0),
// A=(-22.5,0), R=(0,45), L=(0,-45) degrees; transmitted port.
AnalyzerSetting analyzer_for(PolLabel label);

struct TomographySetting {
  PolLabel signal;
  PolLabel idler;

  bool operator==(const TomographySetting&) const = default;
};

// The 16 signal/idler combinations measured for reconstruction, in protocol
// order: (H,H),(H,D),(H,V),(H,L),(V,H),(V,D),(V,V),(V,L),
//        (D,H),(D,D),(D,V),(D,R),(R,H),(R,D),(R,V),(R,L).
std::array<TomographySetting, 16> standard_measurement_set();

// Projector Pi_s (x) Pi_i for one setting (transmitted ports).
Matrix4c measurement_operator(const TomographySetting& setting);

std::vector<double> forward_probabilities(const DensityMatrix& rho,
                                          const std::vector<TomographySetting>& settings);

struct CountRecord {
  TomographySetting setting;
  std::int64_t counts = 0;
  double integration_time_s = 1.0;
};

// CSV schema: setting_signal, setting_idler, counts, time_s. Extra columns
// are ignored on read.
std::vector<CountRecord> read_count_records_csv(std::istream& in);
std::vector<CountRecord> read_count_records_csv_file(const std::string& path);
void write_count_records_csv(std::ostream& out, const std::vector<CountRecord>& records,
                             std::uint64_t seed, bool include_seed);

// Solves Tr[rho Pi_k] = counts_k / time_k for Hermitian rho, then scales to
// unit trace. Requires each of the 16 standard settings exactly once.
// The result may be non-physical (negative eigenvalues); project with
// project_to_physical before using it as a state.
DensityMatrix linear_inversion(const std::vector<CountRecord>& records);

// Hermitizes, clips negative eigenvalues to zero and rescales to unit trace.
// Fixed point on already-physical matrices.
DensityMatrix project_to_physical(const Matrix4c& rho_raw);

struct MleOptions {
  int max_iterations = 500;
  // Applied to the infinity norm of the per-count-normalized gradient.
  double gradient_tolerance = 1e-8;
  // Eigenvalue floor used when seeding from the linear inversion.
  double eigenvalue_floor = 1e-6;
};

struct MleResult {
  Matrix4c rho;
  int iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;
  double gradient_inf_norm = 0.0;
  double rate = 0.0;  // fitted overall detection-rate nuisance
  std::vector<double> log_likelihood_trace;

  DensityMatrix state() const { return DensityMatrix::from_matrix(rho); }
};

// Thrown when the optimizer can neither reach tolerance nor make further
// progress; carries the best iterate and its diagnostics.
class MleNonConvergence : public FitError {
 public:
  MleNonConvergence(const std::string& msg, MleResult best_result)
      : FitError(msg), best(std::move(best_result)) {}
  MleResult best;
};

// Maximum-likelihood reconstruction under Poisson counting statistics.
// rho is parametrized as T^dag T / Tr(T^dag T) with T lower-triangular
// (16 real parameters); the overall detection rate is profiled out in
// closed form each evaluation. Ascent is BFGS with backtracking.
MleResult mle_reconstruct(const std::vector<CountRecord>& records,
                          const MleOptions& options = {});

// Poisson log-likelihood sum_k [c_k ln(lambda_k) - lambda_k] at the given
// 16-vector of T parameters, with the rate nuisance profiled out, and its
// analytic gradient. Exposed so the gradient can be checked against finite
// differences.
double mle_log_likelihood(const std::vector<CountRecord>& records,
                          const Eigen::VectorXd& params);
Eigen::VectorXd mle_gradient(const std::vector<CountRecord>& records,
                             const Eigen::VectorXd& params);
Matrix4c mle_rho_from_params(const Eigen::VectorXd& params);
Eigen::VectorXd mle_params_from_rho(const Matrix4c& rho, double eigenvalue_floor);

// Bundled reference reconstruction of this source type's two-qubit
// polarization state, used as a regression fixture. The raw variant is the
// matrix exactly as tabulated (slightly non-Hermitian); the default variant
// is its Hermitian part (M + M^dag)/2.
Matrix4c reference_reconstruction_raw();
DensityMatrix reference_reconstruction();

}  // namespace bdsource
