#pragma once

#include <string>
#include <vector>

#include "bdsource/error.hpp"

namespace bdsource {

enum class Axis { ordinary, extraordinary };

// Two-pole Sellmeier dispersion n^2 = K + Q1 l2/(l2-P1) + Q2 l2/(l2-P2)
// with l2 the squared wavelength in um^2. P1, P2 are in um^2.
struct SellmeierCoefficients {
  double K = 0.0;
  double Q1 = 0.0;
  double P1 = 0.0;
  double Q2 = 0.0;
  double P2 = 0.0;
};

// Uniaxial birefringent medium with per-axis dispersion and a shared
// validity window (in um, inclusive).
struct UniaxialMaterial {
  std::string name;
  SellmeierCoefficients ordinary;
  SellmeierCoefficients extraordinary;
  double lambda_min_um = 0.2;
  double lambda_max_um = 2.5;
  std::string provenance;
};

// Beam displacer: a uniaxial crystal cut at `cut_angle_rad` between the optic
// axis and the propagation direction.
struct BeamDisplacerSpec {
  UniaxialMaterial material;
  double cut_angle_rad = 0.0;  // in (0, pi/2)
  double length_m = 0.0;       // > 0
};

// Wavelengths within this band (in um^2) of a Sellmeier pole are rejected.
inline constexpr double kPoleGuardUm2 = 1e-6;

// Evaluates the Sellmeier curve at `wavelength_m` (meters). Throws
// DomainError outside [lambda_min_um, lambda_max_um] or within the pole
// guard band of P1/P2.
double sellmeier_index(const SellmeierCoefficients& c, double wavelength_m,
                       double lambda_min_um, double lambda_max_um);

double refractive_index(const UniaxialMaterial& m, Axis axis, double wavelength_m);

// Index seen by the extraordinary wave propagating at angle `theta_rad` to
// the optic axis: 1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
double extraordinary_index_at_angle(double n_o, double n_e, double theta_rad);
double extraordinary_index_at_angle(const UniaxialMaterial& m, double wavelength_m,
                                    double theta_rad);

// Walk-off angle between ordinary and extraordinary rays:
//   tan(alpha) = ((n_o/n_e)^2 - 1) tan(theta) / (1 + (n_o/n_e)^2 tan^2(theta)).
// Returns 0 exactly at theta = 0 and theta = pi/2.
double walkoff_angle(double n_o, double n_e, double theta_rad);
double walkoff_angle(const UniaxialMaterial& m, double wavelength_m, double theta_rad);

// Alternate walk-off form kept for cross-checking only:
//   tan(alpha) = ((1 - n_o^2)/n_e^2) tan(theta) / ((1 + n_o^2/n_e^2) tan^2(theta)).
// Not used for design; it diverges as theta -> 0 and its sign differs.
double walkoff_angle_alt(double n_o, double n_e, double theta_rad);

// Transverse separation after traversing the displacer: d = L tan(alpha).
double displacement(const BeamDisplacerSpec& spec, double wavelength_m);

// Crystal length producing `target_d_m` of separation at the given cut angle.
// Throws NoSolutionError when the walk-off vanishes.
double solve_length_for_displacement(const UniaxialMaterial& m, double wavelength_m,
                                     double theta_rad, double target_d_m);

// Total separation after two displacers with optic axes rotated 90 degrees:
// the two in-plane displacements are orthogonal, so sqrt(2) d.
double double_bd_separation(double d_m);

// The two cut angles that realize tan(alpha) = target_d / length, one on each
// side of the walk-off maximum. Throws NoSolutionError when the target
// exceeds the achievable walk-off.
struct CutAngleSolution {
  double shallow_rad;  // below the walk-off peak
  double steep_rad;    // above the walk-off peak
};
CutAngleSolution solve_cut_angle(const UniaxialMaterial& m, double wavelength_m,
                                 double target_d_m, double length_m);

// Materials bundled as a JSON file; see data/materials.json.
class MaterialDatabase {
 public:
  static MaterialDatabase load(const std::string& path);
  static std::string default_path();

  const UniaxialMaterial& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<UniaxialMaterial> materials_;
};

}  // namespace bdsource
