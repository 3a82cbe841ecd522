#include "facegaudin/elliptic.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace facegaudin {

namespace {

void check_order(int order, const char* what) {
  if (order < 0 || order > kMaxEllipticOrder) {
    throw JetOrderError(std::string(what) + ": jet order " + std::to_string(order) + " outside [0, " +
                        std::to_string(kMaxEllipticOrder) + "]");
  }
}

// Taylor coefficients of theta_11 at a point of the centred cell, via the
// grouped sine form of the series:
//   theta_11(z) = sum_{k>=0} 2 (-1)^{k+1} e^{i pi tau (k+1/2)^2} sin((2k+1) pi z).
// Grouping the n and -n-1 terms keeps full relative accuracy near z = 0.
Series theta_at_reduced(cplx z0, const ModularData& md, int order) {
  Series out(z0, order);
  std::vector<double> abs_sum(static_cast<std::size_t>(order) + 1, 0.0);
  std::vector<double> fact(static_cast<std::size_t>(order) + 1, 1.0);
  for (int j = 1; j <= order; ++j) fact[j] = fact[j - 1] * j;

  const cplx tau = md.tau();
  for (int k = 0; k < md.n_max(); ++k) {
    const double half = k + 0.5;
    const double freq = (2.0 * k + 1.0) * kPi;
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    const cplx weight = 2.0 * sign * std::exp(kI * kPi * tau * (half * half));
    bool small = k > 0;
    double freq_pow = 1.0;
    for (int j = 0; j <= order; ++j) {
      const cplx term = weight * freq_pow * std::sin(freq * z0 + j * kPi / 2.0) / fact[j];
      out[j] += term;
      abs_sum[j] += std::abs(term);
      if (std::abs(term) > md.eps_term() * abs_sum[j]) small = false;
      freq_pow *= freq;
    }
    if (small) return out;
  }
  std::ostringstream os;
  os << "theta_11 series did not converge within " << md.n_max() << " terms (|q| = " << std::abs(md.q())
     << " too close to 1)";
  throw ConvergenceError(os.str());
}

// Reduction to the cell centred at the origin, |Re z0| <= 1/2, |Im z0| <= Im(tau)/2.
LatticeReduction reduce_centred(cplx z, const ModularData& md) {
  const cplx tau = md.tau();
  const double m = std::floor(z.imag() / tau.imag() + 0.5);
  const cplx z1 = z - m * tau;
  const double n = std::floor(z1.real() + 0.5);
  return {z1 - n, static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)};
}

// theta_11 jet at z in the form exp(log_scale) * series; the series carries the
// z-dependence of the quasi-periodicity factor, log_scale only its value.
struct ScaledTheta {
  cplx log_scale;
  Series series;
  double reduced_abs;  // |theta_11(z0)| at the reduced point
  cplx nearest;        // lattice point m tau + n closest to z
};

ScaledTheta theta_scaled(cplx z, const ModularData& md, int order) {
  const LatticeReduction red = reduce_centred(z, md);
  const Series base = theta_at_reduced(red.z0, md, order);
  // theta(z0 + m tau + n) = (-1)^{m+n} exp(i pi m^2 tau - 2 pi i m z) theta(z0)
  const auto m = static_cast<double>(red.m);
  const bool odd = ((red.m + red.n) % 2 + 2) % 2 == 1;
  const cplx log_scale = kI * kPi * m * m * md.tau() - 2.0 * kPi * kI * m * z + (odd ? kI * kPi : cplx{});
  Series moved = base;
  moved.center = z;
  Series shifted = exp_linear(z, -2.0 * kPi * kI * m, order) * moved;
  return {log_scale, std::move(shifted), std::abs(base.value()),
          static_cast<double>(red.m) * md.tau() + static_cast<double>(red.n)};
}

bool near_pole(const ScaledTheta& t, const ModularData& md) {
  return t.reduced_abs < kPoleFloor * std::abs(md.theta_prime0());
}

}  // namespace

ModularData::ModularData(cplx tau, double eps_term, int n_max)
    : tau_(tau), q_(std::exp(2.0 * kPi * kI * tau)), eps_term_(eps_term), n_max_(n_max) {
  if (!(tau.imag() > 0.0)) throw DomainError("modulus must have positive imaginary part, got " + format_complex(tau));
  if (!(eps_term > 0.0) || n_max < 1) throw std::invalid_argument("series truncation policy must be positive");
  theta_prime0_ = theta_at_reduced(0.0, *this, 1)[1];
}

ModularData ModularData::from_nome(cplx q, double eps_term, int n_max) {
  if (!(std::abs(q) < 1.0) || q == cplx{}) throw DomainError("nome must satisfy 0 < |q| < 1");
  return ModularData(std::log(q) / (2.0 * kPi * kI), eps_term, n_max);
}

LatticeReduction reduce_to_cell(cplx z, const ModularData& md) {
  const cplx tau = md.tau();
  double m = std::floor(z.imag() / tau.imag());
  cplx z1 = z - m * tau;
  if (z1.imag() < 0.0) {
    m -= 1.0;
    z1 += tau;
  } else if (z1.imag() >= tau.imag()) {
    m += 1.0;
    z1 -= tau;
  }
  double n = std::floor(z1.real());
  cplx z0 = z1 - n;
  if (z0.real() >= 1.0) {
    n += 1.0;
    z0 -= 1.0;
  } else if (z0.real() < 0.0) {
    // only reachable through roundoff of the floor
    n -= 1.0;
    z0 += 1.0;
  }
  return {z0, static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)};
}

NearestLatticePoint nearest_lattice_point(cplx z, const ModularData& md) {
  const LatticeReduction red = reduce_centred(z, md);
  NearestLatticePoint best{static_cast<double>(red.m) * md.tau() + static_cast<double>(red.n), std::abs(red.z0)};
  // the centred cell is not a Voronoi cell for skewed tau; check the neighbours
  for (int dm = -1; dm <= 1; ++dm) {
    for (int dn = -1; dn <= 1; ++dn) {
      const cplx p = static_cast<double>(red.m + dm) * md.tau() + static_cast<double>(red.n + dn);
      const double d = std::abs(z - p);
      if (d < best.distance) best = {p, d};
    }
  }
  return best;
}

Series theta11(cplx z, const ModularData& md, int order) {
  check_order(order, "theta11");
  ScaledTheta t = theta_scaled(z, md, order);
  return std::exp(t.log_scale) * t.series;
}

Series zeta11(cplx z, const ModularData& md, int order) {
  check_order(order + 1, "zeta11");
  const ScaledTheta t = theta_scaled(z, md, order + 1);
  if (near_pole(t, md)) {
    throw DomainError("zeta11: argument " + format_complex(z) + " is at the pole " + format_complex(t.nearest));
  }
  Series out = differentiate(t.series) / truncate(t.series, order);
  out.center = z;
  return out;
}

Series BivariateJet::in_c() const {
  Series s(c_center, order_c());
  for (int a = 0; a <= order_c(); ++a) s[a] = coeffs(a, 0);
  return s;
}

Series BivariateJet::in_z() const {
  Series s(z_center, order_z());
  for (int b = 0; b <= order_z(); ++b) s[b] = coeffs(0, b);
  return s;
}

BivariateJet w(cplx c, cplx z, const ModularData& md, int order_c, int order_z) {
  if (order_c < 0 || order_z < 0) throw JetOrderError("w: negative jet order");
  const int total = order_c + order_z;
  check_order(total, "w");

  const ScaledTheta den_z = theta_scaled(z, md, order_z);
  if (near_pole(den_z, md)) {
    throw DomainError("w: pole in z, argument " + format_complex(z) + " at lattice point " +
                      format_complex(den_z.nearest));
  }
  const ScaledTheta den_c = theta_scaled(-c, md, order_c);
  if (near_pole(den_c, md)) {
    throw DomainError("w: pole in c, subscript " + format_complex(c) + " at lattice point " +
                      format_complex(-den_c.nearest));
  }
  const ScaledTheta num = theta_scaled(z - c, md, total);

  // theta(z - c) as a bivariate block: d_c^a d_z^b -> (-1)^a binom(a+b, a) s_{a+b}
  Matrix numer(order_c + 1, order_z + 1);
  for (int a = 0; a <= order_c; ++a) {
    for (int b = 0; b <= order_z; ++b) {
      double binom = 1.0;
      for (int k = 1; k <= a; ++k) binom = binom * (b + k) / k;
      numer(a, b) = ((a % 2 == 0) ? 1.0 : -1.0) * binom * num.series[a + b];
    }
  }
  const Series inv_z = reciprocal(den_z.series);
  // theta(-(c + dc)) expanded in dc is the reflection of the jet at -c
  Series theta_c = den_c.series;
  for (int a = 1; a <= order_c; a += 2) theta_c[a] = -theta_c[a];
  const Series inv_c = reciprocal(theta_c);

  const cplx scale = md.theta_prime0() * std::exp(num.log_scale - den_z.log_scale - den_c.log_scale);
  BivariateJet out{c, z, Matrix::Zero(order_c + 1, order_z + 1)};
  for (int a = 0; a <= order_c; ++a) {
    for (int b = 0; b <= order_z; ++b) {
      cplx acc{};
      for (int a1 = 0; a1 <= a; ++a1) {
        for (int b1 = 0; b1 <= b; ++b1) acc += numer(a1, b1) * inv_c[a - a1] * inv_z[b - b1];
      }
      out.coeffs(a, b) = scale * acc;
    }
  }
  return out;
}

cplx theta11_value(cplx z, const ModularData& md) { return theta11(z, md, 0).value(); }
cplx zeta11_value(cplx z, const ModularData& md) { return zeta11(z, md, 0).value(); }
cplx w_value(cplx c, cplx z, const ModularData& md) { return w(c, z, md, 0, 0).value(); }

}  // namespace facegaudin
