#pragma once

// Temporal-mode (Schmidt) decomposition of the output moments and the
// squeezing figures derived from it.

#include <Eigen/Core>
#include <span>
#include <vector>

#include "ringsqueeze/moments.hpp"

namespace ringsqueeze {

/// Eigen-decomposition of W^{1/2} N W^{1/2}: N(t,t') = Σ n_λ f_λ(t) f_λ*(t').
struct SchmidtModes {
  std::vector<double> photons;     // every eigenvalue, descending
  Eigen::MatrixXcd profiles;       // leading `count` profiles as columns, Σ_k w_k |f(t_k)|² = 1
};

SchmidtModes schmidt_modes(const MomentKernels& kernels, std::size_t count);

/// Leading Takagi pairs of W^{1/2} M W^{1/2}: M(t,t') = Σ m_λ f_λ*(t) f_λ*(t').
struct TakagiModes {
  std::vector<double> amplitudes;  // leading `count` m_λ >= 0, descending
  Eigen::MatrixXcd profiles;       // leading `count` profiles
};

TakagiModes takagi_modes(const MomentKernels& kernels, std::size_t count);

/// K = (Σ n)² / Σ n².
double schmidt_number(std::span<const double> photons);

struct QuadratureVariances {
  double v_squeezed = 1.0;         // vacuum = 1
  double v_antisqueezed = 1.0;
  double v_anti_pure = 1.0;
  double v_squeezed_db = 0.0;
  double v_antisqueezed_db = 0.0;
  double v_anti_pure_db = 0.0;
};

/// V∓ = 1 + 2n ∓ 2|m| for one mode; the pure-state reference is e^{2 r_pure}.
QuadratureVariances quadrature_variances(double n, cplx m, double r_pure);

struct ThermalEquivalents {
  // Loss-channel picture: n̄ = η sinh² r, r' = atanh(η sinh r cosh r / (1 + η sinh² r)).
  double n_thermal_reported = 0.0;
  double r_squeeze_reported = 0.0;
  // Williamson normal form of the single-mode moments (n, m).
  double n_thermal_williamson = 0.0;
  double r_squeeze_williamson = 0.0;
  double r_pure = 0.0;             // sinh² r = n / η
};

ThermalEquivalents thermal_equivalents(double n, cplx m, double eta);

/// |Σ_k w_k f_a*(t_k) f_b(t_k)|².
double mode_fidelity(const Eigen::VectorXcd& f_a, const Eigen::VectorXcd& f_b, std::span<const double> weights);

struct ProfileWidth {
  double fwhm = 0.0;
  bool multi_peak = false;         // set when the profile has no single dominant peak
};

/// Intensity FWHM of |f|², linearly interpolated between samples.
ProfileWidth profile_fwhm(const Eigen::VectorXcd& f, const TimeGrid& grid);

/// m_λ = Σ_jk w_j w_k f(t_j) f(t_k) M(t_j, t_k) for a profile taken from N.
cplx pair_amplitude(const MomentKernels& kernels, const Eigen::VectorXcd& profile);

/// Rotate a profile so its value at the intensity peak is real positive.
void fix_phase(Eigen::VectorXcd& profile);

struct Mode {
  double photons = 0.0;            // n_λ
  cplx pair_amplitude;             // m_λ, paired through the same profile
  double r_pure = 0.0;             // sinh² r = n_λ / η
  Eigen::VectorXcd profile;
};

struct ModeDecomposition {
  std::vector<Mode> modes;         // sorted by photons, descending
  std::vector<double> all_photons;
  double schmidt_number = 0.0;     // 0 when every n_λ vanishes
  double total_photons = 0.0;      // Σ_λ n_λ
  double eta_escape = 1.0;
};

ModeDecomposition decompose(const MomentKernels& kernels, double eta_escape, std::size_t count);

}  // namespace ringsqueeze
