#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "ringsqueeze/error.hpp"
#include "ringsqueeze/linalg.hpp"
#include "ringsqueeze/modes.hpp"

using namespace ringsqueeze;

namespace {

Eigen::MatrixXcd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx{d(rng), d(rng)};
  }
  return 0.5 * (a + a.transpose());
}

std::vector<double> uniform_weights(std::size_t n, double h) { return std::vector<double>(n, h); }

// Pure squeezed vacuum of parameter r seen through loss η.
std::pair<double, double> lossy_moments(double r, double eta) {
  return {eta * std::sinh(r) * std::sinh(r), eta * std::sinh(r) * std::cosh(r)};
}

}  // namespace

TEST_CASE("Schmidt number") {
  CHECK(schmidt_number(std::vector<double>{1.0, 0.0, 0.0}) == 1.0);
  CHECK(schmidt_number(std::vector<double>{1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(schmidt_number(std::vector<double>{100.0, 1.0}) == doctest::Approx(101.0 * 101.0 / 10001.0).epsilon(1e-15));
  const std::vector<double> n{3.0, 0.7, 0.05, 1e-4};
  std::vector<double> scaled;
  for (double x : n) scaled.push_back(37.5 * x);
  CHECK(std::abs(schmidt_number(scaled) - schmidt_number(n)) < 1e-12);
  CHECK(schmidt_number(n) >= 1.0);
  CHECK_THROWS_AS(schmidt_number(std::vector<double>{0.0, 0.0}), Error);
  CHECK_THROWS_AS(schmidt_number(std::vector<double>{1.0, -1.0}), Error);
}

TEST_CASE("quadrature variances") {
  const auto vac = quadrature_variances(0.0, cplx{}, 0.0);
  CHECK(vac.v_squeezed == 1.0);
  CHECK(vac.v_antisqueezed == 1.0);
  CHECK(vac.v_squeezed_db == 0.0);

  const auto [n1, m1] = lossy_moments(1.0, 1.0);
  const auto pure = quadrature_variances(n1, cplx{0.0, m1}, 1.0);
  CHECK(pure.v_squeezed == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(pure.v_antisqueezed == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
  CHECK(pure.v_anti_pure == doctest::Approx(std::exp(2.0)).epsilon(1e-12));

  const auto [n9, m9] = lossy_moments(5.0, 0.9);
  const auto lossy = quadrature_variances(n9, m9, 5.0);
  CHECK(std::abs(lossy.v_squeezed_db + 10.0) < 0.2);
  CHECK(lossy.v_squeezed_db <= 0.0);
  CHECK(lossy.v_antisqueezed_db >= 0.0);
  CHECK(lossy.v_squeezed_db == doctest::Approx(10.0 * std::log10(lossy.v_squeezed)).epsilon(1e-14));

  const auto [n99, m99] = lossy_moments(5.0, 0.99);
  CHECK(quadrature_variances(n99, m99, 5.0).v_squeezed_db <= -15.0);

  CHECK_THROWS_AS(quadrature_variances(1.0, cplx{2.0, 0.0}, 1.0), Error);
}

TEST_CASE("thermal equivalents") {
  const auto [n, m] = lossy_moments(1.0, 0.5);
  const auto t = thermal_equivalents(n, m, 0.5);
  CHECK(t.r_pure == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.n_thermal_reported == doctest::Approx(n).epsilon(1e-12));
  CHECK(t.r_squeeze_reported == doctest::Approx(std::atanh(0.9068 / 1.6906)).epsilon(2e-4));
  CHECK(t.r_squeeze_williamson == doctest::Approx(0.5002).epsilon(2e-4));

  const auto [np, mp] = lossy_moments(0.8, 1.0);
  const auto lossless = thermal_equivalents(np, mp, 1.0);
  CHECK(lossless.r_squeeze_reported == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::abs(lossless.n_thermal_williamson) < 1e-12);

  const auto vac = thermal_equivalents(0.0, cplx{}, 1e-9);
  CHECK(vac.n_thermal_williamson == 0.0);
  CHECK(vac.r_squeeze_williamson == 0.0);

  for (double r : {0.1, 0.7, 1.9}) {
    for (double eta : {0.3, 0.9}) {
      const auto [nn, mm] = lossy_moments(r, eta);
      const auto w = thermal_equivalents(nn, mm, eta);
      const double rw = w.r_squeeze_williamson;
      const double nt = w.n_thermal_williamson;
      CHECK(nt * std::cosh(2 * rw) + std::sinh(rw) * std::sinh(rw) == doctest::Approx(nn).epsilon(1e-9));
      CHECK((nt + 0.5) * std::sinh(2 * rw) == doctest::Approx(mm).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(thermal_equivalents(0.1, cplx{1.0, 0.0}, 0.5), Error);
}

TEST_CASE("mode fidelity") {
  const TimeGrid grid(-1.0, 1.0, 201);
  const auto w = grid.weights();
  Eigen::VectorXcd a(201), b(201);
  for (Eigen::Index k = 0; k < 201; ++k) {
    const double t = grid.time(static_cast<std::size_t>(k));
    a[k] = std::exp(-t * t * 8.0);
    b[k] = t * std::exp(-t * t * 8.0);
  }
  auto normalize = [&](Eigen::VectorXcd& f) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < f.size(); ++k) s += w[static_cast<std::size_t>(k)] * std::norm(f[k]);
    f /= std::sqrt(s);
  };
  normalize(a);
  normalize(b);
  CHECK(mode_fidelity(a, a, w) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mode_fidelity(a, b, w) < 1e-28);
  CHECK(mode_fidelity(a, std::exp(kI * 2.3) * a, w) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("profile width") {
  const double tau = 1e-9;
  const TimeGrid grid(-10e-9, 10e-9, 4001);
  Eigen::VectorXcd g(4001), e(4001), flat(4001);
  const double gamma = 2.0e9;
  for (Eigen::Index k = 0; k < 4001; ++k) {
    const double t = grid.time(static_cast<std::size_t>(k));
    g[k] = std::exp(-2.0 * std::log(2.0) * t * t / (tau * tau)) * std::exp(kI * 1e9 * t);
    e[k] = std::exp(-gamma * std::abs(t));
    flat[k] = 1.0;
  }
  const auto wg = profile_fwhm(g, grid);
  CHECK(wg.fwhm == doctest::Approx(tau).epsilon(1e-3));
  CHECK_FALSE(wg.multi_peak);
  CHECK(profile_fwhm(e, grid).fwhm == doctest::Approx(std::log(2.0) / gamma).epsilon(1e-3));
  CHECK(profile_fwhm(flat, grid).multi_peak);
}

TEST_CASE("Hermitian eigen and SVD agree with Eigen") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXcd s = random_symmetric(12, rng);
  const Eigen::MatrixXcd h = s * s.adjoint();
  const auto e = linalg::hermitian_eigen(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(h);
  CHECK((e.values - ref.eigenvalues()).norm() < 1e-12 * ref.eigenvalues().norm());
  CHECK((h * e.vectors - e.vectors * e.values.cast<cplx>().asDiagonal()).norm() < 1e-12 * h.norm());

  const auto d = linalg::svd(s);
  CHECK((d.u * d.s.cast<cplx>().asDiagonal() * d.vh - s).norm() < 1e-12 * s.norm());
}

TEST_CASE("Takagi factorization reconstructs random symmetric matrices") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd a = random_symmetric(8, rng);
    const auto t = linalg::takagi(a);
    const Eigen::MatrixXcd rec = t.f * t.s.cast<cplx>().asDiagonal() * t.f.transpose();
    CHECK((rec - a).norm() < 1e-10);
    CHECK((t.f.adjoint() * t.f - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-10);
    for (Eigen::Index i = 0; i + 1 < 8; ++i) CHECK(t.s[i] >= t.s[i + 1]);
  }
}

TEST_CASE("Takagi factorization handles degenerate values") {
  std::mt19937_64 rng(23);
  const Eigen::MatrixXcd q = linalg::svd(random_symmetric(8, rng)).u;
  Eigen::VectorXd s(8);
  s << 3.0, 2.0, 2.0, 2.0, 1.0, 0.5, 0.0, 0.0;
  const Eigen::MatrixXcd a = q * s.cast<cplx>().asDiagonal() * q.transpose();
  const auto t = linalg::takagi(a);
  CHECK((t.f * t.s.cast<cplx>().asDiagonal() * t.f.transpose() - a).norm() < 1e-10);
  CHECK((t.s - s).norm() < 1e-10);
}

TEST_CASE("leading Takagi pairs match the dense factorization") {
  std::mt19937_64 rng(29);
  const Eigen::Index n = 300;
  const Eigen::MatrixXcd q = linalg::svd(random_symmetric(n, rng)).u;
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = std::exp(-0.3 * static_cast<double>(i));
  const Eigen::MatrixXcd a = q * s.cast<cplx>().asDiagonal() * q.transpose();
  const auto lead = linalg::leading_takagi(a, 12);
  REQUIRE(lead.s.size() == 12);
  for (Eigen::Index i = 0; i < 12; ++i) {
    CHECK(lead.s[i] == doctest::Approx(s[i]).epsilon(1e-10));
    const Eigen::VectorXcd f = lead.f.col(i);
    CHECK((a * f.conjugate() - lead.s[i] * f).norm() < 1e-10);
  }
}

TEST_CASE("rank-one kernel has one Schmidt mode") {
  const TimeGrid grid(-1.0, 1.0, 129);
  MomentKernels k;
  k.grid = grid;
  k.weights = grid.weights();
  Eigen::VectorXcd phi(129);
  double norm = 0.0;
  for (Eigen::Index i = 0; i < 129; ++i) {
    const double t = grid.time(static_cast<std::size_t>(i));
    phi[i] = std::exp(-4.0 * t * t) * std::exp(kI * 0.7 * t);
    norm += k.weights[static_cast<std::size_t>(i)] * std::norm(phi[i]);
  }
  phi /= std::sqrt(norm);
  k.n = 2.5 * phi * phi.adjoint();
  k.m = Eigen::MatrixXcd::Zero(129, 129);
  const auto s = schmidt_modes(k, 3);
  CHECK(s.photons[0] == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(std::abs(s.photons[1]) < 1e-12);
  CHECK(mode_fidelity(s.profiles.col(0), phi, k.weights) == doctest::Approx(1.0).epsilon(1e-12));

  k.n.setZero();
  const auto z = schmidt_modes(k, 3);
  for (double x : z.photons) CHECK(x == 0.0);
  const auto tz = takagi_modes(k, 3);
  for (double x : tz.amplitudes) CHECK(x == 0.0);
}

TEST_CASE("indefinite N kernels are rejected") {
  const TimeGrid grid(0.0, 1.0, 16);
  MomentKernels k;
  k.grid = grid;
  k.weights = grid.weights();
  k.n = Eigen::MatrixXcd::Identity(16, 16);
  k.n(3, 3) = -1.0;
  k.m = Eigen::MatrixXcd::Zero(16, 16);
  CHECK_THROWS_AS(schmidt_modes(k, 2), Error);
}

TEST_CASE("decomposition of a lossless run is pure") {
  const fixtures::Device dev = fixtures::lossless();
  const TimeGrid grid = dev.grid(2048);
  const auto k = dev.kernels(10e-12, grid);
  const auto d = decompose(k, 1.0, 8);
  const auto tk = takagi_modes(k, 8);
  const double n0 = d.modes.front().photons;
  for (std::size_t i = 0; i < d.modes.size(); ++i) {
    const double n = d.modes[i].photons;
    if (n < 1e-4 * n0) break;
    const double pure = std::sqrt(n * (n + 1.0));
    CHECK(std::abs(std::abs(d.modes[i].pair_amplitude) / pure - 1.0) < 1e-6);
    CHECK(std::abs(tk.amplitudes[i] / pure - 1.0) < 1e-6);
    CHECK(mode_fidelity(d.modes[i].profile, tk.profiles.col(static_cast<Eigen::Index>(i)), k.weights) >= 1.0 - 1e-6);
  }
}

TEST_CASE("decomposition invariants on a lossy run") {
  const fixtures::Device dev;
  const TimeGrid grid = dev.grid(1024);
  const auto k = dev.kernels(30e-12, grid);
  const double eta = dev.signal_rates().escape_efficiency();
  const auto d = decompose(k, eta, 10);
  REQUIRE(d.modes.size() == 10);
  for (std::size_t i = 0; i + 1 < d.modes.size(); ++i) CHECK(d.modes[i].photons >= d.modes[i + 1].photons);
  CHECK(d.total_photons == doctest::Approx(k.trace_photons()).epsilon(1e-4));
  CHECK(d.schmidt_number >= 1.0);
  for (std::size_t i = 0; i < d.modes.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx overlap = 0.0;
      for (std::size_t t = 0; t < grid.n_points; ++t) {
        const auto tt = static_cast<Eigen::Index>(t);
        overlap += k.weights[t] * d.modes[i].profile[tt] * std::conj(d.modes[j].profile[tt]);
      }
      CHECK(std::abs(overlap - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
    const double n = d.modes[i].photons;
    const double m = std::abs(d.modes[i].pair_amplitude);
    CHECK((1 + 2 * n) * (1 + 2 * n) - 4 * m * m >= 1.0 - 1e-9);
    if (n > 1e-3 * d.modes.front().photons) {
      const double np = n / eta;
      CHECK(std::abs((m / eta) / std::sqrt(np * (np + 1.0)) - 1.0) < 1e-6);
    }
  }
}
