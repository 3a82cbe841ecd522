#include "facegaudin/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace facegaudin {

std::string format_complex(cplx z) {
  // shortest round-trip digits; the imaginary part is dropped when it is zero
  auto num = [](double x) {
    char buf[64];
    return std::string(buf, std::to_chars(buf, buf + sizeof(buf), x).ptr);
  };
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

cplx Series::derivative(int k) const {
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  return coeffs.at(static_cast<std::size_t>(k)) * fact;
}

Series Series::constant(cplx center, cplx value, int order) {
  Series s(center, order);
  s[0] = value;
  return s;
}

Series Series::variable(cplx center, int order) {
  Series s(center, order);
  s[0] = center;
  if (order >= 1) s[1] = 1.0;
  return s;
}

namespace {
int common_order(const Series& a, const Series& b) { return std::min(a.order(), b.order()); }
}  // namespace

Series operator+(const Series& a, const Series& b) {
  Series r(a.center, common_order(a, b));
  for (int k = 0; k <= r.order(); ++k) r[k] = a[k] + b[k];
  return r;
}

Series operator-(const Series& a, const Series& b) {
  Series r(a.center, common_order(a, b));
  for (int k = 0; k <= r.order(); ++k) r[k] = a[k] - b[k];
  return r;
}

Series operator*(const Series& a, const Series& b) {
  Series r(a.center, common_order(a, b));
  for (int k = 0; k <= r.order(); ++k) {
    cplx acc{};
    for (int j = 0; j <= k; ++j) acc += a[j] * b[k - j];
    r[k] = acc;
  }
  return r;
}

Series operator*(cplx s, const Series& a) {
  Series r = a;
  for (auto& c : r.coeffs) c *= s;
  return r;
}

Series operator/(const Series& a, const Series& b) { return a * reciprocal(b); }

Series truncate(const Series& a, int order) {
  Series r(a.center, std::min(order, a.order()));
  std::copy_n(a.coeffs.begin(), r.coeffs.size(), r.coeffs.begin());
  return r;
}

Series reciprocal(const Series& a) {
  if (a[0] == cplx{}) throw DomainError("reciprocal of a series with zero constant term");
  Series r(a.center, a.order());
  const cplx inv = 1.0 / a[0];
  r[0] = inv;
  for (int k = 1; k <= r.order(); ++k) {
    cplx acc{};
    for (int j = 1; j <= k; ++j) acc += a[j] * r[k - j];
    r[k] = -inv * acc;
  }
  return r;
}

Series exp(const Series& a) {
  Series r(a.center, a.order());
  r[0] = std::exp(a[0]);
  for (int k = 1; k <= r.order(); ++k) {
    cplx acc{};
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * r[k - j];
    r[k] = acc / static_cast<double>(k);
  }
  return r;
}

Series log(const Series& a) {
  if (a[0] == cplx{}) throw DomainError("logarithm of a series with zero constant term");
  Series r(a.center, a.order());
  r[0] = std::log(a[0]);
  for (int k = 1; k <= r.order(); ++k) {
    cplx acc{};
    for (int j = 1; j < k; ++j) acc += static_cast<double>(j) * r[j] * a[k - j];
    r[k] = (a[k] - acc / static_cast<double>(k)) / a[0];
  }
  return r;
}

Series differentiate(const Series& a) {
  Series r(a.center, std::max(a.order() - 1, 0));
  if (a.order() == 0) return r;
  for (int k = 0; k <= r.order(); ++k) r[k] = static_cast<double>(k + 1) * a[k + 1];
  return r;
}

Series reflect(const Series& a) {
  Series r(-a.center, a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = (k % 2 == 0) ? a[k] : -a[k];
  return r;
}

Series exp_linear(cplx center, cplx slope, int order) {
  Series r(center, order);
  r[0] = 1.0;
  for (int k = 1; k <= order; ++k) r[k] = r[k - 1] * slope / static_cast<double>(k);
  return r;
}

}  // namespace facegaudin
