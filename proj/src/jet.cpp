#include "facegaudin/jet.hpp"

#include <map>
#include <mutex>

namespace facegaudin {

namespace {

// degree-d multi-indices in `vars` variables, lexicographically descending
void enumerate_degree(int vars, int degree, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == vars - 1) {
    cur[static_cast<std::size_t>(pos)] = degree;
    out.push_back(cur);
    return;
  }
  for (int k = degree; k >= 0; --k) {
    cur[static_cast<std::size_t>(pos)] = k;
    enumerate_degree(vars, degree - k, cur, pos + 1, out);
  }
}

}  // namespace

MultiIndexSet::MultiIndexSet(int vars, int order) : vars_(vars), order_(order) {
  if (vars < 1 || order < 0) throw std::invalid_argument("multi-index set needs vars >= 1 and order >= 0");
  MultiIndex cur(static_cast<std::size_t>(vars), 0);
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(vars, d, cur, 0, items_);
    prefix_.push_back(static_cast<int>(items_.size()));
  }
  for (const auto& b : items_) {
    int deg = 0;
    double fact = 1.0;
    for (int k : b) {
      deg += k;
      for (int j = 2; j <= k; ++j) fact *= j;
    }
    degree_.push_back(deg);
    factorial_.push_back(fact);
  }
  const int n = size();
  sum_.assign(static_cast<std::size_t>(n * n), -1);
  raise_.assign(static_cast<std::size_t>(n * vars), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (degree_[static_cast<std::size_t>(a)] + degree_[static_cast<std::size_t>(b)] > order) continue;
      MultiIndex s = items_[static_cast<std::size_t>(a)];
      for (int r = 0; r < vars; ++r) s[static_cast<std::size_t>(r)] += items_[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)];
      sum_[static_cast<std::size_t>(a * n + b)] = index(s);
    }
    for (int r = 0; r < vars; ++r) {
      MultiIndex s = items_[static_cast<std::size_t>(a)];
      s[static_cast<std::size_t>(r)] += 1;
      raise_[static_cast<std::size_t>(a * vars + r)] = index(s);
    }
  }
}

int MultiIndexSet::index(const MultiIndex& beta) const {
  if (static_cast<int>(beta.size()) != vars_) throw std::invalid_argument("multi-index has the wrong arity");
  int deg = 0;
  for (int k : beta) {
    if (k < 0) return -1;
    deg += k;
  }
  if (deg > order_) return -1;
  const int start = deg == 0 ? 0 : prefix_[static_cast<std::size_t>(deg - 1)];
  const int stop = prefix_[static_cast<std::size_t>(deg)];
  for (int i = start; i < stop; ++i) {
    if (items_[static_cast<std::size_t>(i)] == beta) return i;
  }
  return -1;
}

std::shared_ptr<const MultiIndexSet> MultiIndexSet::get(int vars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexSet>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{vars, order}];
  if (!slot) slot = std::make_shared<const MultiIndexSet>(vars, order);
  return slot;
}

MatrixJet scale_matrix(const ScalarJet& s, const Matrix& m) {
  MatrixJet out(s.point(), s.order(), m);
  for (int i = 0; i < s.size(); ++i) out[i] = s[i] * m;
  return out;
}

ScalarJet affine_jet(const Vector& point, int order, cplx value, const Vector& grad) {
  ScalarJet out(point, order, cplx{});
  out[0] = value;
  if (order >= 1) {
    const MultiIndexSet& set = out.indices();
    for (int r = 0; r < out.vars(); ++r) out[set.raise(0, r)] = grad[r];
  }
  return out;
}

ScalarJet compose(const Series& f, const ScalarJet& a) {
  const int order = std::min(f.order(), a.order());
  ScalarJet delta = a.truncated(order);
  delta[0] = 0.0;
  ScalarJet acc = ScalarJet::constant(a.point(), order, f[order]);
  for (int k = order - 1; k >= 0; --k) {
    acc = acc * delta;
    acc[0] += f[k];
  }
  return acc;
}

ScalarJet exp(const ScalarJet& a) {
  return compose(exp(Series::variable(a.value(), a.order())), a);
}

ScalarJet log(const ScalarJet& a) { return compose(log(Series::variable(a.value(), a.order())), a); }

ScalarJet reciprocal(const ScalarJet& a) { return compose(reciprocal(Series::variable(a.value(), a.order())), a); }

}  // namespace facegaudin
