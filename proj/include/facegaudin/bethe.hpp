#pragma once

#include <string>
#include <vector>

#include "facegaudin/gaudin.hpp"

namespace facegaudin {

/// Sites with dual Verma modules and the simple root alpha_{i(j)} attached to each Bethe root.
struct BetheConfig {
  GaudinProblem problem;
  std::vector<int> assignment;  // i(j), 0-based simple-root indices

  [[nodiscard]] int roots() const { return static_cast<int>(assignment.size()); }
  [[nodiscard]] const Weight& simple_weight(int j) const;
};

/// Default truncation depth of the site modules for M Bethe roots.
int default_verma_depth(const RootSystem& rs, int m);

/// sum_i lambda_i == sum_j alpha_{i(j)}, compared coordinatewise to `tol`.
bool check_charge(const BetheConfig& cfg, double tol = 1e-12);

/// Raised when a Bethe root meets a site or another root modulo the lattice.
class BethePoleError : public DomainError {
 public:
  BethePoleError(const std::string& what, std::string first, std::string second)
      : DomainError(what), first_(std::move(first)), second_(std::move(second)) {}
  [[nodiscard]] const std::string& first() const { return first_; }
  [[nodiscard]] const std::string& second() const { return second_; }

 private:
  std::string first_;
  std::string second_;
};

struct BetheSystem {
  Vector residual;
  Matrix jacobian;
};

BetheSystem bethe_system(const BetheConfig& cfg, const Vector& t, double pole_guard = 1e-9);

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  int max_halvings = 20;
  double dedup_tolerance = 1e-8;
};

struct BetheSolution {
  Vector t;
  Vector seed;
  double residual_norm = 0.0;
  int iterations = 0;
  double jacobian_condition = 0.0;
};

struct SolveOutcome {
  std::vector<BetheSolution> solutions;
  int converged_seeds = 0;
  int failed_seeds = 0;
  std::vector<std::string> failures;  // one reason per failed seed
};

/// Damped Newton from every seed, then de-duplication modulo the lattice and
/// permutations of roots sharing a simple root. Throws ConvergenceError when
/// no seed converges.
SolveOutcome solve_bethe(const BetheConfig& cfg, const std::vector<Vector>& seeds, const NewtonOptions& opts = {});

/// Halton points over the fundamental cell, kept `guard` away from the sites
/// and from each other modulo the lattice.
std::vector<Vector> halton_seeds(const BetheConfig& cfg, int count, double guard = 0.05);

/// t_j shifted by integers into 0 <= Re t_j < 1.
Vector normalise_roots(const Vector& t);

/// <I; v; z, t> for every basis vector v of `module`. `simple` lists i(j) and
/// `t` the roots for j in I (same order); entries are jets in xi.
std::vector<ScalarJet> bracket(const RootSystem& rs, const ModularData& md, const RepresentedModule& module, cplx z,
                               const std::vector<int>& simple, const std::vector<cplx>& t, const Vector& xi, int order);

/// Psi(H; .) as a functional on the product basis of V.
class BetheVector {
 public:
  BetheVector(const BetheConfig& cfg, Vector t);

  /// Components on V*(0) as a dim x 1 jet in xi.
  [[nodiscard]] MatrixJet on_zero_weight(const Vector& xi, int order) const;
  /// Psi(H; v) for the product basis vector with the given per-site indices.
  [[nodiscard]] cplx pairing(const Vector& xi, const std::vector<int>& digits) const;
  [[nodiscard]] VectorFunction as_function() const;

 private:
  // bracket of every subset (bitmask) at every site
  [[nodiscard]] std::vector<std::vector<std::vector<ScalarJet>>> brackets(const Vector& xi, int order) const;

  BetheConfig cfg_;
  Vector t_;
};

/// zeta-bar(h) and its u-derivative for h given by its values mu(h) on weights.
struct ZetaBar {
  cplx value;
  cplx du;
};
ZetaBar zeta_bar(const BetheConfig& cfg, const Vector& t, const Matrix& h, cplx u);

/// 1/2 sum_r zeta-bar(h_r)^2 + d/du zeta-bar(rho).
cplx eigenvalue_tau_psi(const BetheConfig& cfg, const Vector& t, cplx u);

struct EigenSample {
  Vector xi;
  cplx u;
  double residual = 0.0;
  double psi_norm = 0.0;
  bool inconclusive = false;
};

struct EigenReport {
  double residual = 0.0;  // max over conclusive samples
  int inconclusive = 0;
  std::vector<EigenSample> samples;
  [[nodiscard]] bool all_inconclusive() const { return inconclusive == static_cast<int>(samples.size()); }
};

/// max |(tau(u) Psi)(H) - tau_Psi(u) Psi(H)| / |Psi(H)| over the sample grid.
EigenReport verify_eigenvector(const BetheConfig& cfg, const Vector& t, const std::vector<cplx>& us,
                               const std::vector<Vector>& hs);

}  // namespace facegaudin
