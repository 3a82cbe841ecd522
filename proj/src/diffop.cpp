#include "facegaudin/diffop.hpp"

#include <algorithm>

namespace facegaudin {

namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

MatrixJet zero_jet(const Vector& point, int order, int dim) { return MatrixJet(point, order, Matrix::Zero(dim, dim)); }

}  // namespace

OperatorJet::OperatorJet(Vector point, int dim, int op_order, int jet_order)
    : point_(std::move(point)), dim_(dim), jet_order_(jet_order) {
  if (op_order < 0 || op_order > kMaxOperatorOrder) throw std::invalid_argument("operator order out of range");
  symbols_ = MultiIndexSet::get(static_cast<int>(point_.size()), op_order);
  coeffs_.assign(static_cast<std::size_t>(symbols_->size()), zero_jet(point_, jet_order, dim));
}

const MatrixJet& OperatorJet::coeff(const MultiIndex& beta) const {
  const int idx = symbols_->index(beta);
  if (idx < 0) throw std::out_of_range("operator has no such derivative term");
  return coeffs_[static_cast<std::size_t>(idx)];
}

MatrixJet& OperatorJet::coeff(const MultiIndex& beta) {
  const int idx = symbols_->index(beta);
  if (idx < 0) throw std::out_of_range("operator has no such derivative term");
  return coeffs_[static_cast<std::size_t>(idx)];
}

OperatorJet OperatorJet::truncated(int k) const {
  OperatorJet out(point_, dim_, op_order(), k);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i].truncated(k);
  return out;
}

OperatorJet OperatorJet::widened(int order) const {
  if (order < op_order()) throw std::invalid_argument("widened() cannot drop derivative terms");
  OperatorJet out(point_, dim_, order, jet_order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i];  // prefix by grading
  return out;
}

int OperatorJet::effective_order() const {
  int best = 0;
  for (int i = 0; i < symbols_->size(); ++i) {
    const MatrixJet& c = coeffs_[static_cast<std::size_t>(i)];
    for (int j = 0; j < c.size(); ++j) {
      if (c[j].size() > 0 && c[j].cwiseAbs().maxCoeff() != 0.0) {
        best = std::max(best, symbols_->degree(i));
        break;
      }
    }
  }
  return best;
}

double OperatorJet::max_abs_value() const {
  double m = 0.0;
  for (const auto& c : coeffs_) {
    if (c.value().size() > 0) m = std::max(m, c.value().cwiseAbs().maxCoeff());
  }
  return m;
}

OperatorJet& OperatorJet::operator+=(const OperatorJet& o) {
  if (o.op_order() > op_order()) *this = widened(o.op_order());
  if (o.dim() != dim_) throw std::invalid_argument("operator dimension mismatch");
  for (int i = 0; i < o.symbols().size(); ++i) coeffs_[static_cast<std::size_t>(i)] += o[i];
  return *this;
}

OperatorJet& OperatorJet::operator-=(const OperatorJet& o) {
  if (o.op_order() > op_order()) *this = widened(o.op_order());
  if (o.dim() != dim_) throw std::invalid_argument("operator dimension mismatch");
  for (int i = 0; i < o.symbols().size(); ++i) coeffs_[static_cast<std::size_t>(i)] -= o[i];
  return *this;
}

OperatorJet& OperatorJet::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

OperatorJet operator+(OperatorJet a, const OperatorJet& b) {
  a += b;
  return a;
}
OperatorJet operator-(OperatorJet a, const OperatorJet& b) {
  a -= b;
  return a;
}
OperatorJet operator*(cplx s, OperatorJet a) {
  a *= s;
  return a;
}

OperatorJet compose(const OperatorJet& a, const OperatorJet& b) {
  const int k = a.jet_order();
  const int oa = a.op_order();
  if (b.jet_order() < k + oa) throw JetOrderError("right factor jets too short for the Leibniz expansion");
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
  const int total = oa + b.op_order();
  if (total > kMaxOperatorOrder) throw std::invalid_argument("composed operator order exceeds the cap");
  OperatorJet out(a.point(), a.dim(), total, k);
  const MultiIndexSet& sa = a.symbols();
  const MultiIndexSet& sb = b.symbols();
  const MultiIndexSet& so = out.symbols();
  const int vars = a.vars();

  for (int ib = 0; ib < sb.size(); ++ib) {
    const MatrixJet& bc = b[ib];
    bool zero = true;
    for (int j = 0; j < bc.size() && zero; ++j) zero = bc[j].cwiseAbs().maxCoeff() == 0.0;
    if (zero) continue;
    for (int ia = 0; ia < sa.size(); ++ia) {
      const MatrixJet& ac = a[ia];
      const MultiIndex& beta = sa.at(ia);
      // eps runs over all multi-indices <= beta
      const int n_eps = sa.size_up_to(sa.degree(ia));
      for (int ie = 0; ie < n_eps; ++ie) {
        const MultiIndex& eps = sa.at(ie);
        bool below = true;
        double coef = 1.0;
        for (int r = 0; r < vars && below; ++r) {
          const int br = beta[static_cast<std::size_t>(r)];
          const int er = eps[static_cast<std::size_t>(r)];
          if (er > br) below = false;
          else coef *= binomial(br, er);
        }
        if (!below) continue;
        MultiIndex target = sb.at(ib);
        for (int r = 0; r < vars; ++r) {
          target[static_cast<std::size_t>(r)] += beta[static_cast<std::size_t>(r)] - eps[static_cast<std::size_t>(r)];
        }
        const MatrixJet db = bc.derivative(eps).truncated(k);
        MatrixJet prod = ac * db;
        prod *= coef;
        out[so.index(target)] += prod;
      }
    }
  }
  return out;
}

Vector apply(const OperatorJet& d, const MatrixJet& f) {
  if (f.order() < d.op_order()) throw JetOrderError("function jet shorter than the operator order");
  Vector out = Vector::Zero(d.dim());
  const MultiIndexSet& s = d.symbols();
  for (int i = 0; i < s.size(); ++i) out += d[i].value() * f.partial(s.at(i));
  return out;
}

DiffOperator::DiffOperator(int vars, int dim, int order, int max_jet, Producer producer)
    : vars_(vars), dim_(dim), order_(order), max_jet_(max_jet), producer_(std::make_shared<const Producer>(std::move(producer))) {
  if (order < 0 || order > kMaxOperatorOrder) throw std::invalid_argument("operator order out of range");
}

OperatorJet DiffOperator::at(const Vector& point, int jet_order) const {
  if (point.size() != vars_) throw std::invalid_argument("base point has the wrong number of coordinates");
  if (jet_order > max_jet_) throw JetOrderError("coefficient jets requested beyond the supplied order");
  return (*producer_)(point, jet_order);
}

DiffOperator DiffOperator::identity(int vars, int dim) { return constant(vars, Matrix::Identity(dim, dim)); }

DiffOperator DiffOperator::zero(int vars, int dim) { return constant(vars, Matrix::Zero(dim, dim)); }

DiffOperator DiffOperator::constant(int vars, const Matrix& m) {
  const int dim = static_cast<int>(m.rows());
  return {vars, dim, 0, kUnlimitedJet, [m, dim](const Vector& p, int k) {
            OperatorJet out(p, dim, 0, k);
            out[0][0] = m;
            return out;
          }};
}

DiffOperator DiffOperator::partial(int vars, int dim, int r) {
  if (r < 0 || r >= vars) throw std::invalid_argument("partial derivative index out of range");
  return {vars, dim, 1, kUnlimitedJet, [dim, r](const Vector& p, int k) {
            OperatorJet out(p, dim, 1, k);
            MultiIndex e(static_cast<std::size_t>(p.size()), 0);
            e[static_cast<std::size_t>(r)] = 1;
            out.coeff(e)[0] = Matrix::Identity(dim, dim);
            return out;
          }};
}

DiffOperator DiffOperator::multiplication(int vars, int dim, int max_jet, std::function<MatrixJet(const Vector&, int)> f) {
  return {vars, dim, 0, max_jet, [dim, f = std::move(f)](const Vector& p, int k) {
            OperatorJet out(p, dim, 0, k);
            out[0] = f(p, k);
            return out;
          }};
}

namespace {

void check_same_shape(const DiffOperator& a, const DiffOperator& b) {
  if (a.vars() != b.vars() || a.dim() != b.dim()) throw std::invalid_argument("operators act on different spaces");
}

}  // namespace

DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
  check_same_shape(a, b);
  return {a.vars(), a.dim(), std::max(a.order(), b.order()), std::min(a.max_jet(), b.max_jet()),
          [a, b](const Vector& p, int k) { return a.at(p, k) + b.at(p, k); }};
}

DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) {
  check_same_shape(a, b);
  return {a.vars(), a.dim(), std::max(a.order(), b.order()), std::min(a.max_jet(), b.max_jet()),
          [a, b](const Vector& p, int k) { return a.at(p, k) - b.at(p, k); }};
}

DiffOperator operator*(cplx s, const DiffOperator& a) {
  return {a.vars(), a.dim(), a.order(), a.max_jet(), [a, s](const Vector& p, int k) { return s * a.at(p, k); }};
}

DiffOperator compose(const DiffOperator& a, const DiffOperator& b) {
  check_same_shape(a, b);
  if (a.order() + b.order() > kMaxOperatorOrder) throw std::invalid_argument("composed operator order exceeds the cap");
  const int max_jet = std::min(a.max_jet(), b.max_jet() - a.order());
  if (max_jet < 0) throw JetOrderError("right factor cannot be differentiated as often as the left factor requires");
  return {a.vars(), a.dim(), a.order() + b.order(), max_jet,
          [a, b](const Vector& p, int k) { return compose(a.at(p, k), b.at(p, k + a.order())); }};
}

DiffOperator commutator(const DiffOperator& a, const DiffOperator& b) { return compose(a, b) - compose(b, a); }

Vector apply(const DiffOperator& d, const VectorFunction& f, const Vector& point) {
  return facegaudin::apply(d.at(point, 0), f(point, d.order()));
}

}  // namespace facegaudin
