#pragma once

#include <functional>
#include <limits>
#include <memory>

#include "facegaudin/jet.hpp"

namespace facegaudin {

inline constexpr int kMaxOperatorOrder = 4;
inline constexpr int kUnlimitedJet = std::numeric_limits<int>::max() / 4;

/// A differential operator sum_beta c_beta(xi) d^beta frozen at one base point:
/// every coefficient is a dim x dim matrix jet of a common order.
class OperatorJet {
 public:
  OperatorJet(Vector point, int dim, int op_order, int jet_order);

  [[nodiscard]] int vars() const { return static_cast<int>(point_.size()); }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int op_order() const { return symbols_->order(); }
  [[nodiscard]] int jet_order() const { return jet_order_; }
  [[nodiscard]] const Vector& point() const { return point_; }
  /// Multi-indices beta of the derivative parts.
  [[nodiscard]] const MultiIndexSet& symbols() const { return *symbols_; }

  MatrixJet& operator[](int idx) { return coeffs_[static_cast<std::size_t>(idx)]; }
  const MatrixJet& operator[](int idx) const { return coeffs_[static_cast<std::size_t>(idx)]; }
  [[nodiscard]] const MatrixJet& coeff(const MultiIndex& beta) const;
  MatrixJet& coeff(const MultiIndex& beta);

  /// Same operator with coefficient jets cut to order k.
  [[nodiscard]] OperatorJet truncated(int k) const;
  /// Same operator stored with a larger symbol set (extra coefficients zero).
  [[nodiscard]] OperatorJet widened(int op_order) const;
  /// Highest |beta| with a coefficient that is not identically zero.
  [[nodiscard]] int effective_order() const;
  /// max |entry| over all coefficient values at the base point.
  [[nodiscard]] double max_abs_value() const;

  OperatorJet& operator+=(const OperatorJet& o);
  OperatorJet& operator-=(const OperatorJet& o);
  OperatorJet& operator*=(cplx s);

 private:
  Vector point_;
  int dim_;
  int jet_order_;
  std::shared_ptr<const MultiIndexSet> symbols_;
  std::vector<MatrixJet> coeffs_;
};

OperatorJet operator+(OperatorJet a, const OperatorJet& b);
OperatorJet operator-(OperatorJet a, const OperatorJet& b);
OperatorJet operator*(cplx s, OperatorJet a);

/// Operator product by the Leibniz rule. `b` must carry jets of order at least
/// a.jet_order() + a.op_order(); the result has a's jet order.
OperatorJet compose(const OperatorJet& a, const OperatorJet& b);

/// sum_beta c_beta(H) (d^beta f)(H) for a column-vector jet f of order >= op_order.
Vector apply(const OperatorJet& d, const MatrixJet& f);

/// Differential operator in the Cartan coordinates whose coefficients are
/// produced on demand at any base point. `max_jet` is the highest coefficient
/// jet order the producer can supply.
class DiffOperator {
 public:
  using Producer = std::function<OperatorJet(const Vector& point, int jet_order)>;

  DiffOperator(int vars, int dim, int order, int max_jet, Producer producer);

  static DiffOperator identity(int vars, int dim);
  static DiffOperator zero(int vars, int dim);
  static DiffOperator partial(int vars, int dim, int r);
  static DiffOperator constant(int vars, const Matrix& m);
  /// Multiplication by a matrix function given through its jets.
  static DiffOperator multiplication(int vars, int dim, int max_jet, std::function<MatrixJet(const Vector&, int)> f);

  [[nodiscard]] int vars() const { return vars_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int max_jet() const { return max_jet_; }

  /// Coefficient jets at `point`; throws JetOrderError beyond max_jet().
  [[nodiscard]] OperatorJet at(const Vector& point, int jet_order = 0) const;

 private:
  int vars_;
  int dim_;
  int order_;
  int max_jet_;
  std::shared_ptr<const Producer> producer_;
};

DiffOperator operator+(const DiffOperator& a, const DiffOperator& b);
DiffOperator operator-(const DiffOperator& a, const DiffOperator& b);
DiffOperator operator*(cplx s, const DiffOperator& a);

/// a o b. Throws JetOrderError when b's coefficients cannot be differentiated
/// order(a) times, or when the product order exceeds kMaxOperatorOrder.
DiffOperator compose(const DiffOperator& a, const DiffOperator& b);
DiffOperator commutator(const DiffOperator& a, const DiffOperator& b);

using VectorFunction = std::function<MatrixJet(const Vector& point, int jet_order)>;
Vector apply(const DiffOperator& d, const VectorFunction& f, const Vector& point);

}  // namespace facegaudin
