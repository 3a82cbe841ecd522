#pragma once

#include <vector>

#include "facegaudin/types.hpp"

namespace facegaudin {

/// Univariate truncated Taylor expansion around `center`.
///
/// `coeffs[k]` holds f^(k)(center) / k!, so the series has order
/// `coeffs.size() - 1`. Arithmetic truncates to the smaller order of the two
/// operands.
struct Series {
  cplx center{};
  std::vector<cplx> coeffs;

  Series() = default;
  Series(cplx c, int order) : center(c), coeffs(static_cast<std::size_t>(order) + 1, cplx{}) {}

  [[nodiscard]] int order() const { return static_cast<int>(coeffs.size()) - 1; }
  [[nodiscard]] cplx value() const { return coeffs.front(); }
  /// k-th derivative at the center.
  [[nodiscard]] cplx derivative(int k) const;

  cplx& operator[](int k) { return coeffs[static_cast<std::size_t>(k)]; }
  cplx operator[](int k) const { return coeffs[static_cast<std::size_t>(k)]; }

  static Series constant(cplx center, cplx value, int order);
  /// The identity map x -> x expanded at `center`.
  static Series variable(cplx center, int order);
};

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator*(const Series& a, const Series& b);
Series operator*(cplx s, const Series& a);
Series operator/(const Series& a, const Series& b);

Series truncate(const Series& a, int order);
Series reciprocal(const Series& a);
Series exp(const Series& a);
/// Principal branch for the constant term; higher coefficients are branch free.
Series log(const Series& a);
/// d/dx, order drops by one.
Series differentiate(const Series& a);
/// x -> -x reflected series expanded at -center.
Series reflect(const Series& a);

/// Taylor coefficients of a function of the form exp(slope * (x - center)).
Series exp_linear(cplx center, cplx slope, int order);

}  // namespace facegaudin
