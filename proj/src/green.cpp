#include "ringsqueeze/green.hpp"

#include <cmath>
#include <sstream>

#include "ringsqueeze/error.hpp"

namespace ringsqueeze {

namespace {

Eigen::Matrix2cd traceless_matrix(double detuning, cplx g) {
  Eigen::Matrix2cd a;
  a << kI * detuning, g, std::conj(g), -kI * detuning;
  return a;
}

}  // namespace

Eigen::Matrix2cd CouplingMatrixSeries::traceless(std::size_t k) const {
  return traceless_matrix(detuning[k], g[k]);
}

Eigen::Matrix2cd CouplingMatrixSeries::traceless_mid(std::size_t k) const {
  return traceless_matrix(detuning_mid[k], g_mid[k]);
}

Eigen::Matrix2cd CouplingMatrixSeries::at(std::size_t k) const {
  return traceless(k) - gamma_total * Eigen::Matrix2cd::Identity();
}

void CouplingMatrixSeries::validate() const {
  grid.validate();
  const std::size_t n = grid.n_points;
  if (detuning.size() != n || g.size() != n || detuning_mid.size() != n - 1 || g_mid.size() != n - 1) {
    throw invalid_parameter("coupling series does not match its grid");
  }
  if (!(gamma_total > 0.0)) throw invalid_parameter("signal damping must be > 0");
  auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(detuning[k]) || !finite(g[k])) throw invalid_parameter("coupling series not finite");
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!std::isfinite(detuning_mid[k]) || !finite(g_mid[k])) {
      throw invalid_parameter("coupling series not finite");
    }
  }
}

CouplingMatrixSeries coupling_matrix(const PumpSolution& pump, double delta_net, double coupling,
                                     double gamma_total_s) {
  CouplingMatrixSeries s;
  s.grid = pump.grid;
  s.gamma_total = gamma_total_s;
  s.g = pump.g;
  s.g_mid = pump.g_mid;
  const auto shift = [&](cplx beta) { return 0.5 * delta_net + 2.0 * coupling * std::norm(beta); };
  s.detuning.reserve(pump.beta_p.size());
  for (const auto& b : pump.beta_p) s.detuning.push_back(shift(b));
  s.detuning_mid.reserve(pump.beta_p_mid.size());
  for (const auto& b : pump.beta_p_mid) s.detuning_mid.push_back(shift(b));
  s.validate();
  return s;
}

CouplingMatrixSeries constant_coupling(const TimeGrid& grid, double gamma_total, cplx g, double detuning) {
  CouplingMatrixSeries s;
  s.grid = grid;
  s.gamma_total = gamma_total;
  s.detuning.assign(grid.n_points, detuning);
  s.detuning_mid.assign(grid.n_points - 1, detuning);
  s.g.assign(grid.n_points, g);
  s.g_mid.assign(grid.n_points - 1, g);
  s.validate();
  return s;
}

GreenTable::GreenTable(TimeGrid grid, double gamma_total, std::vector<double> detuning, std::vector<cplx> g,
                       std::vector<cplx> u, std::vector<cplx> v)
    : grid_(grid),
      gamma_total_(gamma_total),
      detuning_(std::move(detuning)),
      g_(std::move(g)),
      u_(std::move(u)),
      v_(std::move(v)) {
  const std::size_t n = grid_.n_points;
  if (detuning_.size() != n || g_.size() != n || u_.size() != n || v_.size() != n) {
    throw invalid_parameter("Green table arrays do not match the grid");
  }
  g11_.resize(n * (n + 1) / 2);
  g12_.resize(n * (n + 1) / 2);
  const double h = grid_.dt();

  std::vector<double> det(n);
  for (std::size_t k = 0; k < n; ++k) det[k] = std::norm(u_[k]) - std::norm(v_[k]);

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const double decay = std::exp(-gamma_total_ * h * static_cast<double>(j - k)) / det[k];
      g11_[index(j, k)] = decay * (u_[j] * std::conj(u_[k]) - v_[j] * std::conj(v_[k]));
      g12_[index(j, k)] = decay * (v_[j] * u_[k] - u_[j] * v_[k]);
    }
    g11_[index(j, j)] = 1.0;
    g12_[index(j, j)] = 0.0;
  }
}

Eigen::Matrix2cd GreenTable::operator()(std::size_t j, std::size_t k) const {
  Eigen::Matrix2cd m;
  m << g11(j, k), g12(j, k), g21(j, k), g22(j, k);
  return m;
}

Eigen::Matrix2cd GreenTable::propagator(std::size_t k) const {
  Eigen::Matrix2cd m;
  m << u_[k], v_[k], std::conj(v_[k]), std::conj(u_[k]);
  return m;
}

double GreenTable::su11_drift() const {
  double drift = 0.0;
  for (std::size_t k = 0; k < u_.size(); ++k) {
    drift = std::max(drift, std::abs(std::norm(u_[k]) - std::norm(v_[k]) - 1.0));
  }
  return drift;
}

GreenTable solve_green(const CouplingMatrixSeries& series, const GreenOptions& options) {
  series.validate();
  const std::size_t n = series.grid.n_points;
  const double h = series.grid.dt();

  // Fourth-order Magnus step on the traceless part: Ω = h/6 (A₀ + 4A_m + A₁) − h²/12 [A₀, A₁].
  // Ω = [[ia, b], [b*, −ia]] so Ω² = (|b|² − a²) I and exp(Ω) = c I + d Ω with c, d real.
  // Only the first row (u, v) of U is kept; the second row is its conjugate swap.
  std::vector<cplx> u(n), v(n);
  u[0] = 1.0;
  v[0] = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double d0 = series.detuning[k];
    const double d1 = series.detuning[k + 1];
    const cplx g0 = series.g[k];
    const cplx g1 = series.g[k + 1];
    const double a = h / 6.0 * (d0 + 4.0 * series.detuning_mid[k] + d1) -
                     h * h / 6.0 * std::imag(g0 * std::conj(g1));
    const cplx b = h / 6.0 * (g0 + 4.0 * series.g_mid[k] + g1) - kI * (h * h / 6.0) * (d0 * g1 - d1 * g0);
    const double s = std::norm(b) - a * a;
    const double r = std::sqrt(std::abs(s));
    double c = 1.0;
    double d = 1.0;
    if (r > 1e-6) {
      c = s > 0.0 ? std::cosh(r) : std::cos(r);
      d = (s > 0.0 ? std::sinh(r) : std::sin(r)) / r;
    } else {
      c = 1.0 + s / 2.0;
      d = 1.0 + s / 6.0;
    }
    const cplx diag{c, d * a};
    u[k + 1] = diag * u[k] + d * b * std::conj(v[k]);
    v[k + 1] = diag * v[k] + d * b * std::conj(u[k]);
    if (!(std::abs(u[k + 1]) <= options.max_propagator_entry)) {
      throw solver_error("propagator-overflow",
                         "signal propagator exceeds 1e12; the gain is above threshold or diverging");
    }
  }

  GreenTable table(series.grid, series.gamma_total, series.detuning, series.g, std::move(u), std::move(v));
  const double drift = table.su11_drift();
  if (drift > options.su11_tolerance) {
    std::ostringstream msg;
    msg << "SU(1,1) norm drift " << drift << " exceeds " << options.su11_tolerance
        << "; refine the grid (suggest " << 2 * (n - 1) + 1 << " points)";
    throw solver_error("solver-accuracy", msg.str());
  }
  return table;
}

}  // namespace ringsqueeze
