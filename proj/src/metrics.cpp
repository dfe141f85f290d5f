#include "bdsource/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bdsource {

namespace {

constexpr double kPi = 3.14159265358979323846;

double correlator_impl(double a, double b, double c, double d) {
  const double total = a + b + c + d;
  if (total <= 0.0) {
    throw ValidationError("correlator: all four counts are zero, ratio undefined");
  }
  return (a + d - b - c) / total;
}

double predicted_correlator(const DensityMatrix& rho, double m_rad, double n_rad) {
  auto setting = [](double angle) {
    return AnalyzerSetting{angle, 0.0, Port::transmitted};
  };
  const double mp = m_rad + kPi / 4.0;
  const double np = n_rad + kPi / 4.0;
  const double c_mn = coincidence_probability(rho, setting(m_rad), setting(n_rad));
  const double c_mn_perp = coincidence_probability(rho, setting(m_rad), setting(np));
  const double c_mperp_n = coincidence_probability(rho, setting(mp), setting(n_rad));
  const double c_mperp_nperp = coincidence_probability(rho, setting(mp), setting(np));
  return correlator_impl(c_mn, c_mn_perp, c_mperp_n, c_mperp_nperp);
}

}  // namespace

void CountQuadruple::validate() const {
  if (c_mn < 0 || c_mn_perp < 0 || c_mperp_n < 0 || c_mperp_nperp < 0) {
    throw ValidationError("count quadruple: counts must be nonnegative");
  }
}

double visibility_from_counts(const CountQuadruple& q) {
  q.validate();
  return correlator_impl(static_cast<double>(q.c_mn), static_cast<double>(q.c_mn_perp),
                         static_cast<double>(q.c_mperp_n),
                         static_cast<double>(q.c_mperp_nperp));
}

double chsh_correlator(const CountQuadruple& q) { return visibility_from_counts(q); }

double predict_visibility(const DensityMatrix& rho, VisibilityBasis basis, SignMode mode) {
  const double m = (basis == VisibilityBasis::hv) ? 0.0 : kPi / 8.0;
  const double m_perp = (basis == VisibilityBasis::hv) ? kPi / 4.0 : -kPi / 8.0;
  auto setting = [](double angle) {
    return AnalyzerSetting{angle, 0.0, Port::transmitted};
  };
  const double c_mm = coincidence_probability(rho, setting(m), setting(m));
  const double c_mp = coincidence_probability(rho, setting(m), setting(m_perp));
  const double c_pm = coincidence_probability(rho, setting(m_perp), setting(m));
  const double c_pp = coincidence_probability(rho, setting(m_perp), setting(m_perp));
  const double v = correlator_impl(c_mm, c_mp, c_pm, c_pp);
  return (mode == SignMode::magnitude) ? std::fabs(v) : v;
}

double ChshSettings::reduce(double angle_rad) {
  const double period = kPi / 2.0;
  double a = std::fmod(angle_rad, period);
  if (a < 0.0) a += period;
  return a;
}

double ChshSettings::perpendicular(double angle_rad) {
  return reduce(angle_rad + kPi / 4.0);
}

ChshSettings ChshSettings::reduced() const {
  return ChshSettings{reduce(m1_rad), reduce(m2_rad), reduce(n1_rad), reduce(n2_rad)};
}

ChshSettings default_chsh_settings() {
  const double deg = kPi / 180.0;
  return ChshSettings{0.0, 22.5 * deg, 11.25 * deg, 33.75 * deg};
}

double chsh_s(const DensityMatrix& rho, const ChshSettings& settings) {
  const ChshSettings s = settings.reduced();
  return predicted_correlator(rho, s.m1_rad, s.n1_rad) +
         predicted_correlator(rho, s.m2_rad, s.n2_rad) +
         predicted_correlator(rho, s.m1_rad, s.n2_rad) -
         predicted_correlator(rho, s.m2_rad, s.n1_rad);
}

namespace {

// For HWP-only analysis the +/-1 observable at angle m is
// cos(4m) sz + sin(4m) sx, so S depends on rho only through the 2x2
// correlation block T = [[Tzz, Tzx], [Txz, Txx]]. Precomputing T makes the
// angle search cheap; the final value is re-checked through chsh_s.
struct CorrelationBlock {
  double zz, zx, xz, xx;
};

CorrelationBlock correlation_block(const DensityMatrix& rho) {
  Matrix2c sz, sx;
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  auto expect = [&rho](const Matrix2c& a, const Matrix2c& b) {
    Matrix4c op;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) op.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return (rho.matrix() * op).trace().real();
  };
  return CorrelationBlock{expect(sz, sz), expect(sz, sx), expect(sx, sz), expect(sx, sx)};
}

double s_fast(const CorrelationBlock& t, const double a[4]) {
  auto corr = [&t](double m, double n) {
    const double cm = std::cos(4.0 * m), sm = std::sin(4.0 * m);
    const double cn = std::cos(4.0 * n), sn = std::sin(4.0 * n);
    return cm * cn * t.zz + cm * sn * t.zx + sm * cn * t.xz + sm * sn * t.xx;
  };
  return corr(a[0], a[2]) + corr(a[1], a[3]) + corr(a[0], a[3]) - corr(a[1], a[2]);
}

// Nelder-Mead on |S| over the four angles.
double nelder_mead_abs_s(const CorrelationBlock& t, double x[4]) {
  constexpr int n = 4;
  double simplex[n + 1][n];
  double value[n + 1];
  auto f = [&t](const double* p) { return -std::fabs(s_fast(t, p)); };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) simplex[i][j] = x[j];
    if (i > 0) simplex[i][i - 1] += 0.05;
    value[i] = f(simplex[i]);
  }
  for (int iter = 0; iter < 4000; ++iter) {
    int lo = 0, hi = 0, second_hi = 0;
    for (int i = 1; i <= n; ++i) {
      if (value[i] < value[lo]) lo = i;
      if (value[i] > value[hi]) hi = i;
    }
    for (int i = 0; i <= n; ++i) {
      if (i != hi && value[i] > value[second_hi]) second_hi = i;
    }
    if (std::fabs(value[hi] - value[lo]) < 1e-14) break;
    double centroid[n] = {0, 0, 0, 0};
    for (int i = 0; i <= n; ++i) {
      if (i == hi) continue;
      for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
    }
    double refl[n];
    for (int j = 0; j < n; ++j) refl[j] = centroid[j] + (centroid[j] - simplex[hi][j]);
    const double f_refl = f(refl);
    if (f_refl < value[lo]) {
      double exp_[n];
      for (int j = 0; j < n; ++j) exp_[j] = centroid[j] + 2.0 * (centroid[j] - simplex[hi][j]);
      const double f_exp = f(exp_);
      const double* best = (f_exp < f_refl) ? exp_ : refl;
      const double fb = std::min(f_exp, f_refl);
      for (int j = 0; j < n; ++j) simplex[hi][j] = best[j];
      value[hi] = fb;
    } else if (f_refl < value[second_hi]) {
      for (int j = 0; j < n; ++j) simplex[hi][j] = refl[j];
      value[hi] = f_refl;
    } else {
      double contr[n];
      for (int j = 0; j < n; ++j) contr[j] = centroid[j] + 0.5 * (simplex[hi][j] - centroid[j]);
      const double f_contr = f(contr);
      if (f_contr < value[hi]) {
        for (int j = 0; j < n; ++j) simplex[hi][j] = contr[j];
        value[hi] = f_contr;
      } else {
        int lo2 = lo;
        for (int i = 0; i <= n; ++i) {
          if (i == lo2) continue;
          for (int j = 0; j < n; ++j) {
            simplex[i][j] = simplex[lo2][j] + 0.5 * (simplex[i][j] - simplex[lo2][j]);
          }
          value[i] = f(simplex[i]);
        }
      }
    }
  }
  int lo = 0;
  for (int i = 1; i <= n; ++i) {
    if (value[i] < value[lo]) lo = i;
  }
  for (int j = 0; j < n; ++j) x[j] = simplex[lo][j];
  return -value[lo];
}

}  // namespace

ChshMaximum maximize_chsh(const DensityMatrix& rho) {
  const CorrelationBlock t = correlation_block(rho);
  // Coarse grid over the pi/2 period, then local refinement of the best cells.
  constexpr int kGrid = 8;
  const double step = (kPi / 2.0) / kGrid;
  double best[4] = {0, 0, 0, 0};
  double best_val = -1.0;
  double a[4];
  for (int i0 = 0; i0 < kGrid; ++i0) {
    a[0] = i0 * step;
    for (int i1 = 0; i1 < kGrid; ++i1) {
      a[1] = i1 * step;
      for (int i2 = 0; i2 < kGrid; ++i2) {
        a[2] = i2 * step;
        for (int i3 = 0; i3 < kGrid; ++i3) {
          a[3] = i3 * step;
          const double v = std::fabs(s_fast(t, a));
          if (v > best_val) {
            best_val = v;
            std::copy(a, a + 4, best);
          }
        }
      }
    }
  }
  nelder_mead_abs_s(t, best);
  ChshSettings settings{best[0], best[1], best[2], best[3]};
  settings = settings.reduced();
  return ChshMaximum{settings, chsh_s(rho, settings)};
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b, double psd_tolerance) {
  auto clipped_sqrt = [psd_tolerance](const Matrix4c& m, const char* which) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
    Eigen::Vector4d ev = es.eigenvalues();
    if (ev.minCoeff() < -psd_tolerance) {
      throw ValidationError(std::string("fidelity: ") + which +
                            " is non-PSD beyond tolerance (min eigenvalue " +
                            std::to_string(ev.minCoeff()) + ")");
    }
    Eigen::Vector4d sq = ev.cwiseMax(0.0).cwiseSqrt();
    return Matrix4c(es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint());
  };
  const Matrix4c sqrt_a = clipped_sqrt(a.matrix(), "first argument");
  // PSD-check b as well; its square root is not needed explicitly.
  (void)clipped_sqrt(b.matrix(), "second argument");
  Matrix4c inner = sqrt_a * b.matrix() * sqrt_a;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(inner, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    sum += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  }
  return std::min(1.0, sum * sum);
}

}  // namespace bdsource
