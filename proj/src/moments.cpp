#include "ringsqueeze/moments.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "ringsqueeze/error.hpp"

namespace ringsqueeze {

double MomentKernels::trace_photons() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) sum += weights[k] * n(k, k).real();
  return sum;
}

namespace {

using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

}  // namespace

MomentKernels output_moments(const GreenTable& green, double gamma_coupling, double gamma_total,
                             const MomentOptions& options) {
  const std::size_t n = green.size();
  if (n > options.max_points && !options.allow_large) {
    std::ostringstream msg;
    msg << "grid of " << n << " points exceeds the kernel cap of " << options.max_points
        << " (dense n² kernels); set allow_large to override";
    throw invalid_parameter(msg.str());
  }
  if (!(gamma_coupling >= 0.0) || gamma_coupling > gamma_total * (1.0 + 1e-12)) {
    throw invalid_parameter("need 0 <= gamma_coupling <= gamma_total");
  }
  if (std::abs(gamma_total - green.gamma_total()) > 1e-12 * gamma_total) {
    throw invalid_parameter("gamma_total does not match the Green table");
  }

  const double h = green.grid().dt();
  const double gb = gamma_total;
  const auto& u = green.u();
  const auto& v = green.v();

  // Rows r_k = (u_k, v_k) of U_k and the columns a_k, c_k of U_k⁻¹:
  //   G11(t,s) = e^{-Γ̄(t-s)} r_t·a_s,  G12(t,s) = e^{-Γ̄(t-s)} r_t·c_s.
  std::vector<Vec2> r(n), a(n), c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double det = std::norm(u[k]) - std::norm(v[k]);
    r[k] = Vec2(u[k], v[k]);
    a[k] = Vec2(std::conj(u[k]), -std::conj(v[k])) / det;
    c[k] = Vec2(-v[k], u[k]) / det;
  }

  std::vector<double> decay(n);
  for (std::size_t m = 0; m < n; ++m) decay[m] = std::exp(-gb * h * static_cast<double>(m));

  // Derivatives from dU⁻¹/dt = -U⁻¹A: a' = -(iΔ̃a + g*c), c' = -(g a - iΔ̃c).
  const auto& det_t = green.detuning();
  const auto& g_t = green.g();
  std::vector<Vec2> da(n), dc(n);
  for (std::size_t k = 0; k < n; ++k) {
    da[k] = -(kI * det_t[k] * a[k] + std::conj(g_t[k]) * c[k]);
    dc[k] = -(g_t[k] * a[k] - kI * det_t[k] * c[k]);
  }

  // Running integrals ∫_{-∞}^{t_k} e^{-2Γ̄(t_k-s)} X(s) ds, stepped with the
  // end-corrected trapezoid rule h/2 (F0 + F1) + h²/12 (F0' - F1'). The tail
  // before t_start (pump off, U = I) contributes X(t_0)/(2Γ̄).
  // cn_r[k] = CN(k) r_k, cm_l[k] = r_kᵀ CM(k), cm_r[k] = CM(k) r_k.
  std::vector<Vec2> cn_r(n), cm_l(n), cm_r(n);
  {
    const double e2 = std::exp(-2.0 * gb * h);
    auto xn = [&](std::size_t k) -> Mat2 { return c[k].conjugate() * c[k].transpose(); };
    auto xm = [&](std::size_t k) -> Mat2 { return a[k] * c[k].transpose(); };
    auto dxn = [&](std::size_t k) -> Mat2 {
      return dc[k].conjugate() * c[k].transpose() + c[k].conjugate() * dc[k].transpose();
    };
    auto dxm = [&](std::size_t k) -> Mat2 { return da[k] * c[k].transpose() + a[k] * dc[k].transpose(); };
    auto step = [&](const Mat2& acc, const Mat2& x0, const Mat2& dx0, const Mat2& x1, const Mat2& dx1) -> Mat2 {
      // F(s) = e^{-2Γ̄(t_k - s)} X(s) on [t_{k-1}, t_k].
      const Mat2 f0 = e2 * x0;
      const Mat2 df0 = e2 * (2.0 * gb * x0 + dx0);
      const Mat2 df1 = 2.0 * gb * x1 + dx1;
      return e2 * acc + 0.5 * h * (f0 + x1) + (h * h / 12.0) * (df0 - df1);
    };
    Mat2 cn = xn(0) / (2.0 * gb);
    Mat2 cm = xm(0) / (2.0 * gb);
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) {
        cn = step(cn, xn(k - 1), dxn(k - 1), xn(k), dxn(k));
        cm = step(cm, xm(k - 1), dxm(k - 1), xm(k), dxm(k));
      }
      cn_r[k] = cn * r[k];
      cm_l[k] = (r[k].transpose() * cm).transpose();
      cm_r[k] = cm * r[k];
    }
  }

  MomentKernels out;
  out.grid = green.grid();
  out.weights = green.grid().weights();
  out.n.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.m_kink.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.m_kink[k] = (h * h / 6.0) * gamma_coupling * g_t[k];

  const double n_scale = 4.0 * gamma_coupling * gb;
  const double m_scale = 2.0 * gamma_coupling;
  double max_m = 0.0;
  double max_asym = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    for (std::size_t j = k; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double e = decay[j - k];
      // t_j >= t_k: min(t_j, t_k) = t_k.
      // Eigen's dot() conjugates its left operand: r_j^H CN(k) r_k.
      const cplx nval = n_scale * e * r[j].dot(cn_r[k]);
      out.n(jj, kk) = nval;
      out.n(kk, jj) = std::conj(nval);

      const cplx g12_jk = j == k ? cplx{} : e * (r[j].transpose() * c[k])(0);
      const cplx mval = m_scale * (g12_jk - 2.0 * gb * e * (cm_l[k].transpose() * r[j])(0));
      out.m(kk, jj) = mval;
      out.m(jj, kk) = mval;
      // Same entry evaluated with the later time first; agrees up to the
      // quadrature error only if the Θ-term placement is right.
      const cplx mval_swapped = -m_scale * 2.0 * gb * e * (r[j].transpose() * cm_r[k])(0);
      max_asym = std::max(max_asym, std::abs(mval - mval_swapped));
      max_m = std::max(max_m, std::abs(mval));
    }
  }

  const double tol = 1e-3 + 4.0 * (gb * h) * (gb * h);
  if (max_m > 0.0 && max_asym > tol * max_m) {
    std::ostringstream msg;
    msg << "M kernel ordering mismatch " << max_asym / max_m << " (relative) exceeds " << tol;
    throw physics_error("kernel-symmetry", msg.str());
  }
  return out;
}

MomentKernels bogoliubov_oracle(const CouplingMatrixSeries& series, double gamma_coupling,
                                double gamma_total) {
  series.validate();
  const std::size_t n = series.grid.n_points;
  const double h = series.grid.dt();
  const double gamma_scatter = gamma_total - gamma_coupling;
  const std::size_t n_modes = 1 + 2 * n;
  const auto nm = static_cast<Eigen::Index>(n_modes);

  // b = Σ_m (A_m a_m + B_m a_m†) over independent vacuum modes a_m:
  //   m = 0: resonator at t_0 - h/2;  1..n: channel cells;  n+1..2n: scattering cells.
  Eigen::VectorXcd coef_a = Eigen::VectorXcd::Zero(nm);
  Eigen::VectorXcd coef_b = Eigen::VectorXcd::Zero(nm);
  coef_a[0] = 1.0;

  Eigen::MatrixXcd out_a(static_cast<Eigen::Index>(n), nm);
  Eigen::MatrixXcd out_b(static_cast<Eigen::Index>(n), nm);

  const double in_c = std::sqrt(2.0 * gamma_coupling / h);
  const double in_s = std::sqrt(2.0 * std::max(gamma_scatter, 0.0) / h);
  const double out_c = std::sqrt(2.0 * gamma_coupling * h);

  for (std::size_t j = 0; j < n; ++j) {
    // Cell j spans [t_j - h/2, t_j + h/2] with M frozen at M(t_j).
    const Mat2 mj = series.at(j);
    const cplx kappa = std::sqrt(series.g[j] * std::conj(series.g[j]) - series.detuning[j] * series.detuning[j]);
    const Mat2 aj = series.traceless(j);
    const cplx sinhc = std::abs(kappa * h) < 1e-8 ? cplx(h) : std::sinh(kappa * h) / kappa;
    const Mat2 expm = std::exp(-gamma_total * h) * (std::cosh(kappa * h) * Mat2::Identity() + sinhc * aj);
    Mat2 integral;   // ∫_0^h e^{Mτ} dτ
    if (std::abs(mj.determinant()) * h * h > 1e-10) {
      integral = mj.inverse() * (expm - Mat2::Identity());
    } else {
      const Mat2 x = mj * h;
      integral = h * (Mat2::Identity() + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
    }

    const Eigen::VectorXcd prev_a = coef_a;
    const Eigen::VectorXcd prev_b = coef_b;
    coef_a = expm(0, 0) * prev_a + expm(0, 1) * prev_b.conjugate();
    coef_b = expm(0, 0) * prev_b + expm(0, 1) * prev_a.conjugate();
    const auto ch = static_cast<Eigen::Index>(1 + j);
    const auto sc = static_cast<Eigen::Index>(1 + n + j);
    coef_a[ch] += integral(0, 0) * (-kI * in_c);
    coef_b[ch] += integral(0, 1) * (kI * in_c);
    coef_a[sc] += integral(0, 0) * (-kI * in_s);
    coef_b[sc] += integral(0, 1) * (kI * in_s);

    // o_j = c_j - i sqrt(2Γ/h) ∫_cell b dt, cell integral by the trapezoid rule.
    const auto row = static_cast<Eigen::Index>(j);
    out_a.row(row) = (-kI * 0.5 * out_c) * (prev_a + coef_a).transpose();
    out_b.row(row) = (-kI * 0.5 * out_c) * (prev_b + coef_b).transpose();
    out_a(row, ch) += 1.0;
  }

  MomentKernels k;
  k.grid = series.grid;
  k.weights = series.grid.weights();
  k.m_kink.resize(n);
  for (std::size_t j = 0; j < n; ++j) k.m_kink[j] = (h * h / 6.0) * gamma_coupling * series.g[j];
  k.n = (out_b.conjugate() * out_b.transpose()) / h;
  const Eigen::MatrixXcd m = (out_a * out_b.transpose()) / h;
  k.m = 0.5 * (m + m.transpose());
  return k;
}

}  // namespace ringsqueeze
