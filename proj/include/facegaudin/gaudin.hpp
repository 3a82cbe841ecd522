#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "facegaudin/diffop.hpp"
#include "facegaudin/elliptic.hpp"
#include "facegaudin/liealg.hpp"

namespace facegaudin {

struct Site {
  cplx z;
  RepresentedModule module;
};

/// Sites on the curve together with the cached action matrices on V*(0).
class GaudinProblem {
 public:
  /// Tolerance for "H in S": distance of alpha(H) to the nearest integer.
  static constexpr double kSTolerance = 1e-9;

  GaudinProblem(RootSystem rs, ModularData md, std::vector<Site> sites);

  [[nodiscard]] const RootSystem& roots() const { return rs_; }
  [[nodiscard]] const ModularData& modulus() const { return md_; }
  [[nodiscard]] const std::vector<Site>& sites() const { return sites_; }
  [[nodiscard]] int site_count() const { return static_cast<int>(sites_.size()); }
  [[nodiscard]] int rank() const { return rs_.rank(); }
  [[nodiscard]] const TensorSpace& space() const { return space_; }
  /// dim V*(0)
  [[nodiscard]] int dim() const { return space_.zero_dim(); }

  /// rho*_i(h_r) restricted to V*(0).
  [[nodiscard]] const Matrix& cartan_op(int i, int r) const;
  /// rho*_j(e_{-alpha}) rho*_i(e_alpha) restricted to V*(0).
  [[nodiscard]] const Matrix& pair_op(int i, int j, int alpha) const;

  /// Throws DomainError unless alpha(H) stays off the integers for every root.
  void check_in_S(const Vector& xi) const;
  /// Throws DomainError when u sits on a site modulo the lattice.
  void check_spectral(cplx u) const;

 private:
  RootSystem rs_;
  ModularData md_;
  std::vector<Site> sites_;
  TensorSpace space_;
  std::vector<Matrix> cartan_ops_;  // [i * rank + r]
  std::vector<Matrix> pair_ops_;    // [(i * N + j) * |Delta| + alpha]
};

/// Jet in xi of c -> f(c) evaluated along c = mu(H).
ScalarJet along_weight(const Series& f, const Vector& mu_on_basis, const Vector& xi, int order);

/// nabla_r = d/dxi_r - sum_i zeta(z_i - u) rho*_i(h_r).
DiffOperator build_nabla(const GaudinProblem& p, int r, cplx u);
/// The constant matrix sum_i zeta(z_i - u) rho*_i(h_r).
Matrix connection_matrix(const GaudinProblem& p, int r, cplx u);
/// The potential of the transfer matrix as a matrix jet in xi.
MatrixJet transfer_potential(const GaudinProblem& p, cplx u, const Vector& xi, int order);
DiffOperator build_transfer(const GaudinProblem& p, cplx u);

struct WeylKacPi {
  cplx value;
  ScalarJet log_jet;      // log Pi in xi (additive constant only fixed mod 2 pi i)
  ScalarJet dtau_log_jet; // d/dtau log Pi in xi
};

/// Normalised Weyl-Kac denominator and its log-derivatives at xi.
WeylKacPi weyl_kac_pi(const Vector& xi, const ModularData& md, const RootSystem& rs, int order);

/// f^{-1} o d o f for a nonvanishing scalar function given by its jets.
DiffOperator conjugate(const DiffOperator& d, std::function<ScalarJet(const Vector&, int)> f, int max_jet);

enum class TildeRoute { Conjugation, Explicit };
DiffOperator build_tilde_transfer(const GaudinProblem& p, cplx u, TildeRoute route);

struct CommutatorSample {
  Vector xi;
  double residual = 0.0;      // all coefficients, normalised
  double top_residual = 0.0;  // orders 3 and 4 only
  double scale = 0.0;         // |tau(u)| |tau(u')| at the sample
};

struct CommutatorReport {
  double residual = 0.0;
  double top_residual = 0.0;
  std::vector<CommutatorSample> samples;
};

/// max over samples and multi-indices of the coefficients of [tau(u), tau(u')],
/// normalised by the product of the operators' max entries at the same point.
CommutatorReport commutativity_residual(const GaudinProblem& p, cplx u, cplx u_prime, const std::vector<Vector>& samples);

/// Reproducible sample points in S and spectral parameters off the sites.
class Sampler {
 public:
  Sampler(std::uint64_t seed, double box = 0.8, double im_box = 0.1, double guard = 0.05);

  /// H in the box, rejected when any avoided weight comes within `guard` of an integer.
  Vector sample_H(const RootSystem& rs, const std::vector<Weight>& extra_avoid = {});
  /// u in the fundamental cell, at distance >= guard from each avoided point modulo the lattice.
  cplx sample_u(const ModularData& md, const std::vector<cplx>& avoid);

 private:
  std::mt19937_64 rng_;
  double box_;
  double im_box_;
  double guard_;
};

}  // namespace facegaudin
