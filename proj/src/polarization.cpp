#include "bdsource/polarization.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace bdsource {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

void check_hermitian_trace(const Matrix4c& m) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-10) {
        throw ValidationError("density matrix: not Hermitian at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  if (std::abs(m.trace() - complex<double>(1.0, 0.0)) > 1e-10) {
    throw ValidationError("density matrix: trace != 1 (got " +
                          std::to_string(m.trace().real()) + ")");
  }
}

Eigen::Vector4d eigenvalues_of(const Matrix4c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (m + m.adjoint()),
                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

PolarizationState::PolarizationState(const Vector4c& amplitudes) : amps_(amplitudes) {
  if (std::fabs(amps_.norm() - 1.0) > 1e-12) {
    throw ValidationError("polarization state: amplitudes not normalized (norm = " +
                          std::to_string(amps_.norm()) + ")");
  }
}

PolarizationState PolarizationState::normalized(const Vector4c& amplitudes) {
  const double n = amplitudes.norm();
  if (n <= 0.0) throw ValidationError("polarization state: zero amplitude vector");
  return PolarizationState(Vector4c(amplitudes / n));
}

PolarizationState bell_phi_minus() {
  Vector4c a = Vector4c::Zero();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  a(0) = inv_sqrt2;
  a(3) = -inv_sqrt2;
  return PolarizationState(a);
}

DensityMatrix DensityMatrix::from_matrix(const Matrix4c& m, Validation mode) {
  check_hermitian_trace(m);
  if (mode != Validation::raw) {
    const double floor = (mode == Validation::strict) ? -1e-8 : -5e-2;
    const double min_ev = eigenvalues_of(m).minCoeff();
    if (min_ev < floor) {
      throw ValidationError("density matrix: eigenvalue " + std::to_string(min_ev) +
                            " below tolerance " + std::to_string(floor));
    }
  }
  return DensityMatrix(Matrix4c(0.5 * (m + m.adjoint())));
}

DensityMatrix DensityMatrix::from_state(const PolarizationState& psi) {
  const Vector4c& a = psi.amplitudes();
  return DensityMatrix(Matrix4c(a * a.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Matrix4c(0.25 * Matrix4c::Identity()));
}

Eigen::Vector4d DensityMatrix::eigenvalues() const { return eigenvalues_of(m_); }

double DensityMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

bool DensityMatrix::is_physical(double tolerance) const {
  return min_eigenvalue() >= -tolerance;
}

Matrix2c waveplate_operator(WaveplateKind kind, double angle_rad) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  Matrix2c out;
  if (kind == WaveplateKind::half) {
    const double c2 = std::cos(2.0 * angle_rad);
    const double s2 = std::sin(2.0 * angle_rad);
    out << c2, s2, s2, -c2;
  } else {
    // R(t) diag(1, i) R(-t)
    out << c * c + kI * s * s, (1.0 - kI) * s * c,
           (1.0 - kI) * s * c, s * s + kI * c * c;
  }
  return out;
}

Matrix2c analyzer_projector(const AnalyzerSetting& setting) {
  const Matrix2c u = waveplate_operator(WaveplateKind::quarter, setting.qwp_angle_rad) *
                     waveplate_operator(WaveplateKind::half, setting.hwp_angle_rad);
  const int row = (setting.port == Port::transmitted) ? 0 : 1;
  // <v| is the selected row of U; the projector is |v><v|.
  Eigen::Vector2cd v = u.row(row).adjoint();
  return v * v.adjoint();
}

double coincidence_probability(const DensityMatrix& rho, const AnalyzerSetting& signal,
                               const AnalyzerSetting& idler) {
  const Matrix2c ps = analyzer_projector(signal);
  const Matrix2c pi = analyzer_projector(idler);
  Matrix4c op;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      op.block<2, 2>(2 * i, 2 * j) = ps(i, j) * pi;
    }
  }
  const double p = (rho.matrix() * op).trace().real();
  return std::min(1.0, std::max(0.0, p));
}

DensityMatrix werner_mix(const DensityMatrix& rho, double p) {
  if (p < 0.0 || p > 1.0) {
    throw DomainError("werner_mix: p must be in [0, 1]");
  }
  Matrix4c m = p * rho.matrix() + (1.0 - p) * 0.25 * Matrix4c::Identity();
  return DensityMatrix::from_matrix(m);
}

DensityMatrix apply_local(const DensityMatrix& rho, const Matrix2c& u_signal,
                          const Matrix2c& u_idler) {
  for (const Matrix2c* u : {&u_signal, &u_idler}) {
    if (((*u) * u->adjoint() - Matrix2c::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
      throw ValidationError("apply_local: operator is not unitary");
    }
  }
  Matrix4c u;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      u.block<2, 2>(2 * i, 2 * j) = u_signal(i, j) * u_idler;
    }
  }
  Matrix4c m = u * rho.matrix() * u.adjoint();
  return DensityMatrix::from_matrix(m, DensityMatrix::Validation::raw);
}

void write_density_matrix(std::ostream& out, const Matrix4c& m) {
  out << "# basis: " << kBasisOrder << "\n";
  char buf[64];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::snprintf(buf, sizeof(buf), "%+.12e%+.12ej", m(i, j).real(), m(i, j).imag());
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

std::string density_matrix_to_string(const Matrix4c& m) {
  std::ostringstream ss;
  write_density_matrix(ss, m);
  return ss.str();
}

Matrix4c read_density_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.find("# basis:") != 0) {
    throw ValidationError("density matrix: missing '# basis:' header");
  }
  if (header.find(kBasisOrder) == std::string::npos) {
    throw ValidationError("density matrix: unexpected basis order: " + header);
  }
  Matrix4c m;
  for (int i = 0; i < 4; ++i) {
    std::string line;
    if (!std::getline(in, line)) {
      throw ValidationError("density matrix: expected 4 rows, got " + std::to_string(i));
    }
    std::istringstream ls(line);
    for (int j = 0; j < 4; ++j) {
      std::string tok;
      if (!(ls >> tok)) {
        throw ValidationError("density matrix: row " + std::to_string(i + 1) +
                              " has fewer than 4 entries");
      }
      // Entry format: <re><+/-><im>j with explicit signs, e.g. +1.0e-01-2.5e-03j
      if (tok.empty() || tok.back() != 'j') {
        throw ValidationError("density matrix: bad entry '" + tok + "'");
      }
      tok.pop_back();
      // The imaginary part starts at the last sign that is not an exponent sign.
      std::size_t split = std::string::npos;
      for (std::size_t k = tok.size(); k-- > 1;) {
        if ((tok[k] == '+' || tok[k] == '-') &&
            tok[k - 1] != 'e' && tok[k - 1] != 'E') {
          split = k;
          break;
        }
      }
      if (split == std::string::npos) {
        throw ValidationError("density matrix: bad entry '" + tok + "j'");
      }
      try {
        m(i, j) = std::complex<double>(std::stod(tok.substr(0, split)),
                                       std::stod(tok.substr(split)));
      } catch (const std::exception&) {
        throw ValidationError("density matrix: bad entry '" + tok + "j'");
      }
    }
  }
  return m;
}

}  // namespace bdsource
