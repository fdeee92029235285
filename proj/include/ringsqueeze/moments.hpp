#pragma once

// Second-order moments of the output field in the bus waveguide,
//   N(t, t') = v_g <ψ_out†(t) ψ_out(t')>,  M(t, t') = v_g <ψ_out(t) ψ_out(t')>,
// for vacuum inputs in the channel, the scattering modes and the resonator.

#include <Eigen/Core>
#include <vector>

#include "ringsqueeze/green.hpp"

namespace ringsqueeze {

/// Dense kernels over the grid, in photon flux units (1/s).
struct MomentKernels {
  TimeGrid grid;
  Eigen::MatrixXcd n;              // Hermitian
  Eigen::MatrixXcd m;              // symmetric
  std::vector<double> weights;     // trapezoid weights (s)
  // ∂M/∂t' jumps by 2Γg(t) across t' = t. Quadratures of M against smooth
  // profiles add m_kink[k] f(t_k) to the trapezoid sum (Euler-Maclaurin).
  std::vector<cplx> m_kink;

  double trace_photons() const;    // Σ_k w_k N(t_k, t_k)
};

struct MomentOptions {
  std::size_t max_points = 4096;
  bool allow_large = false;
};

/// Kernels from the Green function. With γ_S real and vacuum inputs,
///   N(t,t') = 4ΓΓ̄ ∫_{-∞}^{min} G12*(t,s) G12(t',s) ds
///   M(t,t') = 2Γ [ G12(t',t) - 2Γ̄ ∫_{-∞}^{t} G11(t,s) G12(t',s) ds ],  t <= t'
/// The part of the history before t_start, where the pump is absent, is the
/// resonator's initial vacuum and is added in closed form. The integrals are
/// evaluated through the propagator factors with the end-corrected
/// trapezoid rule, O(n²).
MomentKernels output_moments(const GreenTable& green, double gamma_coupling, double gamma_total,
                             const MomentOptions& options = {});

/// Brute-force reference: explicit linear map from discretized vacuum input
/// modes (initial resonator mode, one channel and one scattering mode per
/// cell) to output cells, stepped with per-cell exponentials of M; kernels
/// from the map by matrix algebra. Meant for coarse grids only.
MomentKernels bogoliubov_oracle(const CouplingMatrixSeries& series, double gamma_coupling,
                                double gamma_total);

}  // namespace ringsqueeze
