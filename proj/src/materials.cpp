#include "bdsource/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace bdsource {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_pole(double l2_um2, double pole_um2, const std::string& which) {
  if (std::fabs(l2_um2 - pole_um2) < kPoleGuardUm2) {
    throw DomainError("sellmeier: wavelength^2 = " + std::to_string(l2_um2) +
                      " um^2 is within the guard band of pole " + which);
  }
}

}  // namespace

double sellmeier_index(const SellmeierCoefficients& c, double wavelength_m,
                       double lambda_min_um, double lambda_max_um) {
  if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m)) {
    throw DomainError("sellmeier: wavelength must be positive and finite");
  }
  const double lam_um = wavelength_m * 1e6;
  if (lam_um < lambda_min_um || lam_um > lambda_max_um) {
    throw DomainError("sellmeier: wavelength " + std::to_string(lam_um) +
                      " um outside validity window [" + std::to_string(lambda_min_um) +
                      ", " + std::to_string(lambda_max_um) + "] um");
  }
  const double l2 = lam_um * lam_um;
  check_pole(l2, c.P1, "P1");
  check_pole(l2, c.P2, "P2");
  const double n2 = c.K + c.Q1 * l2 / (l2 - c.P1) + c.Q2 * l2 / (l2 - c.P2);
  if (!(n2 > 1.0)) {
    throw DomainError("sellmeier: n^2 = " + std::to_string(n2) +
                      " <= 1 at " + std::to_string(lam_um) + " um");
  }
  return std::sqrt(n2);
}

double refractive_index(const UniaxialMaterial& m, Axis axis, double wavelength_m) {
  const SellmeierCoefficients& c =
      (axis == Axis::ordinary) ? m.ordinary : m.extraordinary;
  return sellmeier_index(c, wavelength_m, m.lambda_min_um, m.lambda_max_um);
}

double extraordinary_index_at_angle(double n_o, double n_e, double theta_rad) {
  if (theta_rad < 0.0 || theta_rad > kPi / 2.0) {
    throw DomainError("extraordinary_index_at_angle: theta must be in [0, pi/2]");
  }
  const double c = std::cos(theta_rad);
  const double s = std::sin(theta_rad);
  const double inv_n2 = c * c / (n_o * n_o) + s * s / (n_e * n_e);
  return 1.0 / std::sqrt(inv_n2);
}

double extraordinary_index_at_angle(const UniaxialMaterial& m, double wavelength_m,
                                    double theta_rad) {
  return extraordinary_index_at_angle(refractive_index(m, Axis::ordinary, wavelength_m),
                                      refractive_index(m, Axis::extraordinary, wavelength_m),
                                      theta_rad);
}

double walkoff_angle(double n_o, double n_e, double theta_rad) {
  if (theta_rad < 0.0 || theta_rad > kPi / 2.0) {
    throw DomainError("walkoff_angle: theta must be in [0, pi/2]");
  }
  if (theta_rad == 0.0 || theta_rad == kPi / 2.0) return 0.0;
  const double r2 = (n_o / n_e) * (n_o / n_e);
  const double t = std::tan(theta_rad);
  return std::atan((r2 - 1.0) * t / (1.0 + r2 * t * t));
}

double walkoff_angle(const UniaxialMaterial& m, double wavelength_m, double theta_rad) {
  return walkoff_angle(refractive_index(m, Axis::ordinary, wavelength_m),
                       refractive_index(m, Axis::extraordinary, wavelength_m),
                       theta_rad);
}

double walkoff_angle_alt(double n_o, double n_e, double theta_rad) {
  const double t = std::tan(theta_rad);
  const double num = (1.0 - n_o * n_o) / (n_e * n_e) * t;
  const double den = (1.0 + n_o * n_o / (n_e * n_e)) * t * t;
  return std::atan(num / den);
}

double displacement(const BeamDisplacerSpec& spec, double wavelength_m) {
  if (!(spec.length_m >= 0.0)) {
    throw DomainError("displacement: length must be nonnegative");
  }
  if (!(spec.cut_angle_rad > 0.0) || !(spec.cut_angle_rad < kPi / 2.0)) {
    throw DomainError("displacement: cut angle must be in (0, pi/2)");
  }
  const double alpha = walkoff_angle(spec.material, wavelength_m, spec.cut_angle_rad);
  return spec.length_m * std::tan(alpha);
}

double solve_length_for_displacement(const UniaxialMaterial& m, double wavelength_m,
                                     double theta_rad, double target_d_m) {
  if (!(target_d_m > 0.0)) {
    throw DomainError("solve_length_for_displacement: target displacement must be > 0");
  }
  const double alpha = walkoff_angle(m, wavelength_m, theta_rad);
  const double t = std::tan(alpha);
  if (t <= 0.0) {
    throw NoSolutionError("solve_length_for_displacement: walk-off vanishes at this cut angle");
  }
  return target_d_m / t;
}

double double_bd_separation(double d_m) {
  if (d_m < 0.0) throw DomainError("double_bd_separation: d must be >= 0");
  return std::sqrt(2.0) * d_m;
}

CutAngleSolution solve_cut_angle(const UniaxialMaterial& m, double wavelength_m,
                                 double target_d_m, double length_m) {
  if (!(target_d_m > 0.0) || !(length_m > 0.0)) {
    throw DomainError("solve_cut_angle: target displacement and length must be > 0");
  }
  const double n_o = refractive_index(m, Axis::ordinary, wavelength_m);
  const double n_e = refractive_index(m, Axis::extraordinary, wavelength_m);
  const double r2 = (n_o / n_e) * (n_o / n_e);
  const double g = target_d_m / length_m;  // tan(alpha) to realize
  // g (1 + r2 t^2) = (r2 - 1) t  =>  g r2 t^2 - (r2 - 1) t + g = 0
  const double a = g * r2;
  const double b = -(r2 - 1.0);
  const double disc = b * b - 4.0 * a * g;
  if (r2 <= 1.0) {
    throw NoSolutionError("solve_cut_angle: material has no positive walk-off (n_o <= n_e)");
  }
  if (disc < 0.0) {
    throw NoSolutionError("solve_cut_angle: target walk-off tan(alpha) = " +
                          std::to_string(g) + " exceeds the material maximum " +
                          std::to_string((r2 - 1.0) / (2.0 * std::sqrt(r2))));
  }
  const double sq = std::sqrt(disc);
  const double t_small = (-b - sq) / (2.0 * a);
  const double t_large = (-b + sq) / (2.0 * a);
  return CutAngleSolution{std::atan(t_small), std::atan(t_large)};
}

MaterialDatabase MaterialDatabase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("material database: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("material database: parse error in " + path + ": " + e.what());
  }
  if (!doc.contains("materials") || !doc["materials"].is_array()) {
    throw ValidationError("material database: missing 'materials' array in " + path);
  }
  auto read_coeffs = [&](const nlohmann::json& j, const std::string& ctx) {
    SellmeierCoefficients c;
    for (const char* key : {"K", "Q1", "P1", "Q2", "P2"}) {
      if (!j.contains(key)) {
        throw ValidationError("material database: " + ctx + " missing '" + key + "'");
      }
    }
    c.K = j["K"].get<double>();
    c.Q1 = j["Q1"].get<double>();
    c.P1 = j["P1"].get<double>();
    c.Q2 = j["Q2"].get<double>();
    c.P2 = j["P2"].get<double>();
    return c;
  };
  MaterialDatabase db;
  for (const auto& jm : doc["materials"]) {
    UniaxialMaterial m;
    if (!jm.contains("name")) throw ValidationError("material database: entry missing 'name'");
    m.name = jm["name"].get<std::string>();
    if (!jm.contains("ordinary") || !jm.contains("extraordinary")) {
      throw ValidationError("material database: '" + m.name + "' needs both axes");
    }
    m.ordinary = read_coeffs(jm["ordinary"], m.name + ".ordinary");
    m.extraordinary = read_coeffs(jm["extraordinary"], m.name + ".extraordinary");
    if (jm.contains("validity_um")) {
      const auto& v = jm["validity_um"];
      if (!v.is_array() || v.size() != 2) {
        throw ValidationError("material database: '" + m.name + "' validity_um must be [min, max]");
      }
      m.lambda_min_um = v[0].get<double>();
      m.lambda_max_um = v[1].get<double>();
      if (!(m.lambda_min_um > 0.0) || !(m.lambda_max_um > m.lambda_min_um)) {
        throw ValidationError("material database: '" + m.name + "' has an empty validity window");
      }
    }
    if (jm.contains("provenance")) m.provenance = jm["provenance"].get<std::string>();
    // Both coefficient sets must evaluate across the declared window.
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double lam_um = m.lambda_min_um + f * (m.lambda_max_um - m.lambda_min_um);
      sellmeier_index(m.ordinary, lam_um * 1e-6, m.lambda_min_um, m.lambda_max_um);
      sellmeier_index(m.extraordinary, lam_um * 1e-6, m.lambda_min_um, m.lambda_max_um);
    }
    db.materials_.push_back(std::move(m));
  }
  return db;
}

std::string MaterialDatabase::default_path() {
  return std::string(BDSOURCE_DATA_DIR) + "/materials.json";
}

const UniaxialMaterial& MaterialDatabase::get(const std::string& name) const {
  for (const auto& m : materials_) {
    if (m.name == name) return m;
  }
  throw ValidationError("material database: no material named '" + name + "'");
}

bool MaterialDatabase::contains(const std::string& name) const {
  return std::any_of(materials_.begin(), materials_.end(),
                     [&](const UniaxialMaterial& m) { return m.name == name; });
}

std::vector<std::string> MaterialDatabase::names() const {
  std::vector<std::string> out;
  out.reserve(materials_.size());
  for (const auto& m : materials_) out.push_back(m.name);
  return out;
}

}  // namespace bdsource
