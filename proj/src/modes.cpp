#include "ringsqueeze/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ringsqueeze/error.hpp"
#include "ringsqueeze/linalg.hpp"

namespace ringsqueeze {

namespace {

Eigen::VectorXd sqrt_weights(const MomentKernels& kernels) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(kernels.weights.size()));
  for (std::size_t k = 0; k < kernels.weights.size(); ++k) s[static_cast<Eigen::Index>(k)] = std::sqrt(kernels.weights[k]);
  return s;
}

Eigen::MatrixXcd weighted(const Eigen::MatrixXcd& kernel, const Eigen::VectorXd& sw) {
  return sw.asDiagonal() * kernel * sw.asDiagonal();
}

// W^{1/2} M W^{1/2} plus the diagonal slope-jump correction.
Eigen::MatrixXcd weighted_m(const MomentKernels& kernels, const Eigen::VectorXd& sw) {
  Eigen::MatrixXcd out = weighted(kernels.m, sw);
  for (std::size_t k = 0; k < kernels.m_kink.size(); ++k) {
    out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += kernels.m_kink[k];
  }
  return out;
}

Eigen::Index peak_index(const Eigen::VectorXcd& f) {
  Eigen::Index idx = 0;
  f.cwiseAbs2().maxCoeff(&idx);
  return idx;
}

}  // namespace

void fix_phase(Eigen::VectorXcd& profile) {
  if (profile.size() == 0) return;
  const cplx peak = profile[peak_index(profile)];
  if (std::abs(peak) > 0.0) profile *= std::abs(peak) / peak;
}

SchmidtModes schmidt_modes(const MomentKernels& kernels, std::size_t count) {
  const Eigen::VectorXd sw = sqrt_weights(kernels);
  const auto eig = linalg::hermitian_eigen(weighted(kernels.n, sw));
  const Eigen::Index n = eig.values.size();

  SchmidtModes out;
  out.photons.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.photons[static_cast<std::size_t>(i)] = eig.values[n - 1 - i];

  const double top = n > 0 ? std::max(out.photons.front(), 0.0) : 0.0;
  if (n > 0 && out.photons.back() < -1e-10 * top) {
    std::ostringstream msg;
    msg << "N kernel is not positive semidefinite: eigenvalue " << out.photons.back() << " vs max " << top;
    throw physics_error("psd-violation", msg.str());
  }

  const auto keep = static_cast<Eigen::Index>(std::min<std::size_t>(count, static_cast<std::size_t>(n)));
  out.profiles.resize(n, keep);
  for (Eigen::Index i = 0; i < keep; ++i) {
    Eigen::VectorXcd f = eig.vectors.col(n - 1 - i).cwiseQuotient(sw.cast<cplx>());
    fix_phase(f);
    out.profiles.col(i) = f;
  }
  return out;
}

TakagiModes takagi_modes(const MomentKernels& kernels, std::size_t count) {
  const double scale = kernels.m.cwiseAbs().maxCoeff();
  if ((kernels.m - kernels.m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300)) {
    throw invalid_parameter("takagi_modes needs a symmetric M kernel");
  }
  const Eigen::VectorXd sw = sqrt_weights(kernels);
  const auto tk = linalg::leading_takagi(weighted_m(kernels, sw), count);
  const Eigen::Index keep = tk.s.size();

  TakagiModes out;
  out.amplitudes.assign(tk.s.data(), tk.s.data() + keep);

  // M = Σ m f* f*ᵀ, so the profile is the conjugated Takagi vector.
  std::vector<Eigen::VectorXcd> profiles;
  for (Eigen::Index i = 0; i < keep; ++i) {
    Eigen::VectorXcd f = tk.f.col(i).conjugate().cwiseQuotient(sw.cast<cplx>());
    fix_phase(f);
    profiles.push_back(std::move(f));
  }
  // Equal amplitudes carry no intrinsic order; list the earlier pulse first.
  std::vector<std::size_t> order(profiles.size());
  std::iota(order.begin(), order.end(), 0);
  const double top = keep > 0 ? tk.s[0] : 0.0;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (std::abs(tk.s[static_cast<Eigen::Index>(x)] - tk.s[static_cast<Eigen::Index>(y)]) > 1e-10 * top) {
      return tk.s[static_cast<Eigen::Index>(x)] > tk.s[static_cast<Eigen::Index>(y)];
    }
    return peak_index(profiles[x]) < peak_index(profiles[y]);
  });
  out.profiles.resize(tk.f.rows(), keep);
  for (Eigen::Index i = 0; i < keep; ++i) out.profiles.col(i) = profiles[order[static_cast<std::size_t>(i)]];
  return out;
}

double schmidt_number(std::span<const double> photons) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double n : photons) {
    if (n < 0.0) throw invalid_parameter("schmidt_number needs non-negative photon numbers");
    sum += n;
    sum_sq += n * n;
  }
  if (!(sum_sq > 0.0)) {
    throw Error(ErrorKind::kPhysics, "undefined", "Schmidt number undefined: all photon numbers vanish");
  }
  return sum * sum / sum_sq;
}

QuadratureVariances quadrature_variances(double n, cplx m, double r_pure) {
  QuadratureVariances q;
  q.v_squeezed = 1.0 + 2.0 * n - 2.0 * std::abs(m);
  q.v_antisqueezed = 1.0 + 2.0 * n + 2.0 * std::abs(m);
  q.v_anti_pure = std::exp(2.0 * r_pure);
  if (!(q.v_squeezed > 0.0)) {
    std::ostringstream msg;
    msg << "squeezed variance " << q.v_squeezed << " <= 0 (n = " << n << ", |m| = " << std::abs(m) << ")";
    throw physics_error("uncertainty-violation", msg.str());
  }
  q.v_squeezed_db = 10.0 * std::log10(q.v_squeezed);
  q.v_antisqueezed_db = 10.0 * std::log10(q.v_antisqueezed);
  q.v_anti_pure_db = 10.0 * std::log10(q.v_anti_pure);
  return q;
}

ThermalEquivalents thermal_equivalents(double n, cplx m, double eta) {
  if (!(n >= 0.0)) throw invalid_parameter("thermal_equivalents needs n >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw invalid_parameter("thermal_equivalents needs eta in [0, 1]");
  const double am = std::abs(m);
  if (2.0 * am >= 2.0 * n + 1.0) {
    throw physics_error("non-physical", "moments violate |2m| < 2n + 1");
  }
  ThermalEquivalents t;
  t.n_thermal_williamson = std::max(std::sqrt((n + 0.5) * (n + 0.5) - am * am) - 0.5, 0.0);
  t.r_squeeze_williamson = 0.5 * std::atanh(2.0 * am / (2.0 * n + 1.0));
  if (eta > 0.0) {
    t.r_pure = std::asinh(std::sqrt(n / eta));
    const double sh = std::sinh(t.r_pure);
    const double ch = std::cosh(t.r_pure);
    t.n_thermal_reported = eta * sh * sh;
    t.r_squeeze_reported = std::atanh(eta * sh * ch / (1.0 + eta * sh * sh));
  }
  return t;
}

double mode_fidelity(const Eigen::VectorXcd& f_a, const Eigen::VectorXcd& f_b, std::span<const double> weights) {
  if (f_a.size() != f_b.size() || static_cast<std::size_t>(f_a.size()) != weights.size()) {
    throw invalid_parameter("mode_fidelity needs profiles and weights on one grid");
  }
  cplx overlap{};
  for (Eigen::Index k = 0; k < f_a.size(); ++k) {
    overlap += weights[static_cast<std::size_t>(k)] * std::conj(f_a[k]) * f_b[k];
  }
  return std::norm(overlap);
}

ProfileWidth profile_fwhm(const Eigen::VectorXcd& f, const TimeGrid& grid) {
  const Eigen::VectorXd intensity = f.cwiseAbs2();
  const Eigen::Index n = intensity.size();
  ProfileWidth out;
  if (n == 0) return out;
  const Eigen::Index peak = peak_index(f);
  const double half = 0.5 * intensity[peak];
  if (!(half > 0.0)) {
    out.multi_peak = true;
    return out;
  }

  const double h = grid.dt();
  Eigen::Index left = peak;
  while (left > 0 && intensity[left - 1] >= half) --left;
  Eigen::Index right = peak;
  while (right + 1 < n && intensity[right + 1] >= half) ++right;

  double t_left = grid.time(static_cast<std::size_t>(left));
  if (left > 0) {
    const double a = intensity[left - 1];
    const double b = intensity[left];
    t_left -= h * (b - half) / (b - a);
  } else {
    out.multi_peak = true;   // never falls to half on this side
  }
  double t_right = grid.time(static_cast<std::size_t>(right));
  if (right + 1 < n) {
    const double a = intensity[right];
    const double b = intensity[right + 1];
    t_right += h * (a - half) / (a - b);
  } else {
    out.multi_peak = true;
  }
  for (Eigen::Index k = 0; k < n && !out.multi_peak; ++k) {
    if ((k < left - 1 || k > right + 1) && intensity[k] >= half) out.multi_peak = true;
  }
  out.fwhm = t_right - t_left;
  return out;
}

cplx pair_amplitude(const MomentKernels& kernels, const Eigen::VectorXcd& profile) {
  Eigen::VectorXcd wf(profile.size());
  for (Eigen::Index k = 0; k < profile.size(); ++k) wf[k] = kernels.weights[static_cast<std::size_t>(k)] * profile[k];
  cplx sum = (wf.transpose() * kernels.m * wf)(0);
  for (std::size_t k = 0; k < kernels.m_kink.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    sum += kernels.m_kink[k] * wf[kk] * profile[kk];
  }
  return sum;
}

ModeDecomposition decompose(const MomentKernels& kernels, double eta_escape, std::size_t count) {
  if (!(eta_escape > 0.0 && eta_escape <= 1.0)) throw invalid_parameter("eta_escape must lie in (0, 1]");
  const SchmidtModes sm = schmidt_modes(kernels, count);

  ModeDecomposition out;
  out.eta_escape = eta_escape;
  out.all_photons = sm.photons;
  for (double& n : out.all_photons) n = std::max(n, 0.0);
  out.total_photons = std::accumulate(out.all_photons.begin(), out.all_photons.end(), 0.0);
  const bool vacuum = out.all_photons.empty() || !(out.all_photons.front() > 0.0);
  out.schmidt_number = vacuum ? 0.0 : schmidt_number(out.all_photons);

  for (Eigen::Index i = 0; i < sm.profiles.cols(); ++i) {
    Mode mode;
    mode.photons = out.all_photons[static_cast<std::size_t>(i)];
    mode.profile = sm.profiles.col(i);
    mode.pair_amplitude = pair_amplitude(kernels, mode.profile);
    mode.r_pure = std::asinh(std::sqrt(mode.photons / eta_escape));
    out.modes.push_back(std::move(mode));
  }
  return out;
}

}  // namespace ringsqueeze
