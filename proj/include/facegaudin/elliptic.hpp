#pragma once

#include <cstdint>

#include "facegaudin/series.hpp"
#include "facegaudin/types.hpp"

namespace facegaudin {

/// Modulus of the curve C / (Z + Z tau) together with the q-series truncation policy.
class ModularData {
 public:
  static constexpr double kDefaultEpsTerm = 1e-16;
  static constexpr int kDefaultMaxTerms = 64;

  explicit ModularData(cplx tau, double eps_term = kDefaultEpsTerm, int n_max = kDefaultMaxTerms);
  /// Builds the modulus from the nome q = exp(2 pi i tau), principal branch.
  static ModularData from_nome(cplx q, double eps_term = kDefaultEpsTerm, int n_max = kDefaultMaxTerms);

  [[nodiscard]] cplx tau() const { return tau_; }
  [[nodiscard]] cplx q() const { return q_; }
  [[nodiscard]] double eps_term() const { return eps_term_; }
  [[nodiscard]] int n_max() const { return n_max_; }
  /// theta_11'(0), the literal derivative of the defining series at the origin.
  [[nodiscard]] cplx theta_prime0() const { return theta_prime0_; }

 private:
  cplx tau_;
  cplx q_;
  double eps_term_;
  int n_max_;
  cplx theta_prime0_{};
};

/// z = z0 + m tau + n with z0 in the fundamental cell
/// 0 <= Re z0 < 1, 0 <= Im z0 / Im tau < 1 (cell spanned by 1 and tau).
struct LatticeReduction {
  cplx z0;
  std::int64_t m = 0;
  std::int64_t n = 0;
};

LatticeReduction reduce_to_cell(cplx z, const ModularData& md);

/// Distance from z to the nearest lattice point m tau + n, together with that point.
struct NearestLatticePoint {
  cplx point;
  double distance = 0.0;
};
NearestLatticePoint nearest_lattice_point(cplx z, const ModularData& md);

/// Jet in z of the odd theta function theta_11(z, tau). order <= kMaxEllipticOrder.
Series theta11(cplx z, const ModularData& md, int order);

/// Jet of zeta_11 = d/dz log theta_11. Throws DomainError near lattice points.
Series zeta11(cplx z, const ModularData& md, int order);

/// Bivariate Taylor block of w_c(z): coeff(a, b) = d_c^a d_z^b w / (a! b!).
struct BivariateJet {
  cplx c_center;
  cplx z_center;
  Matrix coeffs;  // (order_c + 1) x (order_z + 1)

  [[nodiscard]] int order_c() const { return static_cast<int>(coeffs.rows()) - 1; }
  [[nodiscard]] int order_z() const { return static_cast<int>(coeffs.cols()) - 1; }
  [[nodiscard]] cplx value() const { return coeffs(0, 0); }
  /// Univariate jet in c at fixed z.
  [[nodiscard]] Series in_c() const;
  /// Univariate jet in z at fixed c.
  [[nodiscard]] Series in_z() const;
};

/// w_c(z) = theta'(0) theta(z - c) / (theta(z) theta(-c)) with jets in both arguments.
/// order_c + order_z <= kMaxEllipticOrder.
BivariateJet w(cplx c, cplx z, const ModularData& md, int order_c, int order_z);

/// Value-only convenience wrappers.
cplx theta11_value(cplx z, const ModularData& md);
cplx zeta11_value(cplx z, const ModularData& md);
cplx w_value(cplx c, cplx z, const ModularData& md);

inline constexpr int kMaxEllipticOrder = 8;
/// |theta_11| below this multiple of |theta_11'(0)| counts as a pole hit.
inline constexpr double kPoleFloor = 1e-12;

}  // namespace facegaudin
