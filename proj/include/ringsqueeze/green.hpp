#pragma once

// Two-time Green function of the linearized signal-mode dynamics
//   d/dt (b, b†)ᵀ = M(t) (b, b†)ᵀ + d_in(t),
//   M(t) = -Γ̄_S I + [[iΔ̃, g], [g*, -iΔ̃]],  Δ̃ = Δ_net/2 + 2Λ|β̄_P|².

#include <Eigen/Core>
#include <vector>

#include "ringsqueeze/constants.hpp"
#include "ringsqueeze/pump.hpp"

namespace ringsqueeze {

/// M(t) sampled on the grid and at step midpoints. Stored by its two free
/// parameters; the damping is the same scalar for every sample.
struct CouplingMatrixSeries {
  TimeGrid grid;
  double gamma_total = 0.0;            // Γ̄_S
  std::vector<double> detuning;        // Δ̃(t_k)
  std::vector<double> detuning_mid;    // Δ̃(t_k + dt/2)
  std::vector<cplx> g;
  std::vector<cplx> g_mid;

  /// Traceless part A = M + Γ̄ I.
  Eigen::Matrix2cd traceless(std::size_t k) const;
  Eigen::Matrix2cd traceless_mid(std::size_t k) const;
  Eigen::Matrix2cd at(std::size_t k) const;
  void validate() const;
};

CouplingMatrixSeries coupling_matrix(const PumpSolution& pump, double delta_net, double coupling,
                                     double gamma_total_s);

/// Series with time-independent A, for closed-form checks.
CouplingMatrixSeries constant_coupling(const TimeGrid& grid, double gamma_total, cplx g, double detuning);

/// G(t_j, t_k) for j >= k. Built from the propagator factorization
///   G(t_j, t_k) = e^{-Γ̄(t_j - t_k)} U_j U_k⁻¹,  U_k = [[u_k, v_k], [v_k*, u_k*]],
/// where U solves dU/dt = A(t)U, U(t_start) = I. The Bogoliubov structure
/// G21 = G12*, G22 = G11* holds by construction, so only G11 and G12 are
/// stored (packed lower triangle).
class GreenTable {
 public:
  GreenTable(TimeGrid grid, double gamma_total, std::vector<double> detuning, std::vector<cplx> g,
             std::vector<cplx> u, std::vector<cplx> v);

  const TimeGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.n_points; }
  double gamma_total() const { return gamma_total_; }

  cplx g11(std::size_t j, std::size_t k) const { return g11_[index(j, k)]; }
  cplx g12(std::size_t j, std::size_t k) const { return g12_[index(j, k)]; }
  cplx g21(std::size_t j, std::size_t k) const { return std::conj(g12(j, k)); }
  cplx g22(std::size_t j, std::size_t k) const { return std::conj(g11(j, k)); }
  Eigen::Matrix2cd operator()(std::size_t j, std::size_t k) const;

  /// Propagator U_k of the traceless part.
  Eigen::Matrix2cd propagator(std::size_t k) const;
  const std::vector<cplx>& u() const { return u_; }
  const std::vector<cplx>& v() const { return v_; }
  /// A(t_k) parameters the table was solved with.
  const std::vector<double>& detuning() const { return detuning_; }
  const std::vector<cplx>& g() const { return g_; }
  /// max_k | |u_k|² - |v_k|² - 1 |.
  double su11_drift() const;

 private:
  std::size_t index(std::size_t j, std::size_t k) const { return j * (j + 1) / 2 + k; }

  TimeGrid grid_;
  double gamma_total_;
  std::vector<double> detuning_;
  std::vector<cplx> g_;
  std::vector<cplx> u_, v_;
  std::vector<cplx> g11_, g12_;
};

struct GreenOptions {
  double su11_tolerance = 1e-6;
  double max_propagator_entry = 1e12;
};

GreenTable solve_green(const CouplingMatrixSeries& series, const GreenOptions& options = {});

}  // namespace ringsqueeze
