#pragma once

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "facegaudin/series.hpp"
#include "facegaudin/types.hpp"

namespace facegaudin {

using MultiIndex = std::vector<int>;

/// All multi-indices in `vars` variables of total degree <= `order`, graded by
/// degree so that the indices of a lower order form a prefix.
class MultiIndexSet {
 public:
  static std::shared_ptr<const MultiIndexSet> get(int vars, int order);

  [[nodiscard]] int vars() const { return vars_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int size() const { return static_cast<int>(items_.size()); }
  /// Number of multi-indices of degree <= k.
  [[nodiscard]] int size_up_to(int k) const { return prefix_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] const MultiIndex& at(int idx) const { return items_[static_cast<std::size_t>(idx)]; }
  [[nodiscard]] int degree(int idx) const { return degree_[static_cast<std::size_t>(idx)]; }
  /// beta! = prod_r beta_r!
  [[nodiscard]] double factorial(int idx) const { return factorial_[static_cast<std::size_t>(idx)]; }
  /// Position of `beta`, or -1 when its degree exceeds the order.
  [[nodiscard]] int index(const MultiIndex& beta) const;
  /// Index of at(a) + at(b), or -1 when out of range.
  [[nodiscard]] int sum(int a, int b) const { return sum_[static_cast<std::size_t>(a * size() + b)]; }
  /// Index of at(a) + e_r, or -1.
  [[nodiscard]] int raise(int a, int r) const { return raise_[static_cast<std::size_t>(a * vars_ + r)]; }

  MultiIndexSet(int vars, int order);

 private:
  int vars_;
  int order_;
  std::vector<MultiIndex> items_;
  std::vector<int> degree_;
  std::vector<int> prefix_;
  std::vector<double> factorial_;
  std::vector<int> sum_;
  std::vector<int> raise_;
};

namespace detail {
inline cplx zero_like(const cplx&) { return {}; }
inline Matrix zero_like(const Matrix& m) { return Matrix::Zero(m.rows(), m.cols()); }
}  // namespace detail

/// Truncated multivariate Taylor expansion of a scalar- or matrix-valued
/// function of the Cartan coordinates. Coefficient of x^beta is
/// (d^beta f)(point) / beta!.
template <class T>
class Jet {
 public:
  Jet(Vector point, int order, const T& zero)
      : point_(std::move(point)),
        set_(MultiIndexSet::get(static_cast<int>(point_.size()), order)),
        coeffs_(static_cast<std::size_t>(set_->size()), detail::zero_like(zero)) {}

  static Jet constant(const Vector& point, int order, const T& value) {
    Jet j(point, order, value);
    j.coeffs_[0] = value;
    return j;
  }

  [[nodiscard]] int vars() const { return set_->vars(); }
  [[nodiscard]] int order() const { return set_->order(); }
  [[nodiscard]] const Vector& point() const { return point_; }
  [[nodiscard]] const MultiIndexSet& indices() const { return *set_; }
  [[nodiscard]] int size() const { return set_->size(); }

  T& operator[](int idx) { return coeffs_[static_cast<std::size_t>(idx)]; }
  const T& operator[](int idx) const { return coeffs_[static_cast<std::size_t>(idx)]; }
  [[nodiscard]] const T& value() const { return coeffs_.front(); }
  [[nodiscard]] const T& coeff(const MultiIndex& beta) const {
    const int idx = set_->index(beta);
    if (idx < 0) throw JetOrderError("jet coefficient beyond the stored order");
    return coeffs_[static_cast<std::size_t>(idx)];
  }
  /// d^beta f at the base point.
  [[nodiscard]] T partial(const MultiIndex& beta) const {
    const int idx = set_->index(beta);
    if (idx < 0) throw JetOrderError("jet derivative beyond the stored order");
    return coeffs_[static_cast<std::size_t>(idx)] * set_->factorial(idx);
  }

  [[nodiscard]] Jet truncated(int k) const {
    if (k > order()) throw JetOrderError("cannot raise the order of a jet by truncation");
    Jet out(point_, k, coeffs_.front());
    for (int i = 0; i < out.size(); ++i) out.coeffs_[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)];
    return out;
  }

  /// d/dx_r, order drops by one.
  [[nodiscard]] Jet derivative(int r) const {
    if (order() == 0) throw JetOrderError("derivative of an order-0 jet");
    Jet out(point_, order() - 1, coeffs_.front());
    for (int i = 0; i < out.size(); ++i) {
      const int up = set_->raise(i, r);
      out.coeffs_[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(up)] *
                                                 static_cast<double>(set_->at(i)[static_cast<std::size_t>(r)] + 1);
    }
    return out;
  }

  /// d^beta, order drops by |beta|.
  [[nodiscard]] Jet derivative(const MultiIndex& beta) const {
    Jet out = *this;
    for (int r = 0; r < static_cast<int>(beta.size()); ++r) {
      for (int k = 0; k < beta[static_cast<std::size_t>(r)]; ++k) out = out.derivative(r);
    }
    return out;
  }

  Jet& operator+=(const Jet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Jet& operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  void check_compatible(const Jet<T>& o) const { check_same_base(point_, order(), o.point(), o.order()); }

  static void check_same_base(const Vector& p, int k, const Vector& q, int kq) {
    if (k != kq) throw std::invalid_argument("jet order mismatch");
    if (p.size() != q.size() || (p - q).cwiseAbs().maxCoeff() != 0.0) {
      throw std::invalid_argument("jet base point mismatch");
    }
  }

 private:
  Vector point_;
  std::shared_ptr<const MultiIndexSet> set_;
  std::vector<T> coeffs_;
};

using ScalarJet = Jet<cplx>;
using MatrixJet = Jet<Matrix>;

template <class T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) {
  a += b;
  return a;
}
template <class T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) {
  a -= b;
  return a;
}
template <class T>
Jet<T> operator*(cplx s, Jet<T> a) {
  a *= s;
  return a;
}

namespace detail {
template <class R, class A, class B>
Jet<R> jet_product(const Jet<A>& a, const Jet<B>& b, const R& zero) {
  if (a.order() != b.order()) throw std::invalid_argument("jet order mismatch");
  Jet<A>::check_same_base(a.point(), a.order(), b.point(), b.order());
  Jet<R> out(a.point(), a.order(), zero);
  const MultiIndexSet& set = a.indices();
  const int n = set.size();
  for (int i = 0; i < n; ++i) {
    const int room = set.order() - set.degree(i);
    const int limit = set.size_up_to(room);
    for (int j = 0; j < limit; ++j) out[set.sum(i, j)] += a[i] * b[j];
  }
  return out;
}
}  // namespace detail

/// Truncated Taylor product; both operands must share base point and order.
inline ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) { return detail::jet_product(a, b, cplx{}); }
inline MatrixJet operator*(const MatrixJet& a, const MatrixJet& b) {
  return detail::jet_product(a, b, Matrix(Matrix::Zero(a.value().rows(), b.value().cols())));
}
inline MatrixJet operator*(const ScalarJet& a, const MatrixJet& b) {
  return detail::jet_product(a, b, Matrix(Matrix::Zero(b.value().rows(), b.value().cols())));
}
inline MatrixJet operator*(const MatrixJet& a, const ScalarJet& b) {
  return detail::jet_product(a, b, Matrix(Matrix::Zero(a.value().rows(), a.value().cols())));
}

/// Scalar jet times a constant matrix.
MatrixJet scale_matrix(const ScalarJet& s, const Matrix& m);

/// a + sum_r grad_r (x_r - point_r): the jet of an affine function.
ScalarJet affine_jet(const Vector& point, int order, cplx value, const Vector& grad);

/// f(a(x)) for a univariate expansion f centred at a(point), truncated to the
/// smaller of the two orders.
ScalarJet compose(const Series& f, const ScalarJet& a);

ScalarJet exp(const ScalarJet& a);
ScalarJet log(const ScalarJet& a);
ScalarJet reciprocal(const ScalarJet& a);

}  // namespace facegaudin
