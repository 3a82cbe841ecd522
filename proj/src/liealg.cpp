#include "facegaudin/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace facegaudin {

// ---------------------------------------------------------------------------
// Root system

RootSystem RootSystem::build(AlgebraSeries series, int rank) {
  if (series != AlgebraSeries::A) throw std::invalid_argument("only the A series is supported");
  if (rank < 1 || rank > 3) throw std::invalid_argument("rank " + std::to_string(rank) + " unsupported (1..3)");
  RootSystem rs;
  rs.series_ = series;
  rs.rank_ = rank;
  const int n = rank + 1;

  for (int r = 1; r <= rank; ++r) {
    Matrix h = Matrix::Zero(n, n);
    const double norm = std::sqrt(static_cast<double>(r * (r + 1)));
    for (int a = 0; a < r; ++a) h(a, a) = 1.0 / norm;
    h(r, r) = -static_cast<double>(r) / norm;
    rs.cartan_basis_.push_back(h);
  }

  // positive roots first (ordered by height, then row), negatives in matching order
  std::vector<std::pair<int, int>> pos;
  for (int ht = 1; ht < n; ++ht) {
    for (int a = 0; a + ht < n; ++a) pos.emplace_back(a, a + ht);
  }
  auto make_root = [&](int row, int col) {
    Root r;
    r.row = row;
    r.col = col;
    r.weight = Weight::Zero(n);
    r.weight[row] += 1.0;
    r.weight[col] -= 1.0;
    r.on_basis = rs.on_basis(r.weight);
    r.simple_coeffs = Eigen::VectorXi::Zero(rank);
    const int lo = std::min(row, col);
    const int hi = std::max(row, col);
    const int sign = row < col ? 1 : -1;
    for (int i = lo; i < hi; ++i) r.simple_coeffs[i] = sign;
    r.height = sign * (hi - lo);
    return r;
  };
  for (auto [a, b] : pos) rs.roots_.push_back(make_root(a, b));
  for (auto [a, b] : pos) rs.roots_.push_back(make_root(b, a));
  for (int i = 0; i < static_cast<int>(pos.size()); ++i) rs.positive_.push_back(i);
  for (int i = 0; i < rank; ++i) rs.simple_.push_back(rs.root_index(i, i + 1));

  rs.rho_ = Weight::Zero(n);
  for (int idx : rs.positive_) rs.rho_ += 0.5 * rs.roots_[static_cast<std::size_t>(idx)].weight;
  return rs;
}

int RootSystem::root_index(int row, int col) const {
  for (int i = 0; i < static_cast<int>(roots_.size()); ++i) {
    if (roots_[static_cast<std::size_t>(i)].row == row && roots_[static_cast<std::size_t>(i)].col == col) return i;
  }
  return -1;
}

int RootSystem::negative_of(int idx) const {
  const Root& r = root(idx);
  return root_index(r.col, r.row);
}

cplx RootSystem::inner(const Weight& a, const Weight& b) const { return a.cwiseProduct(b).sum(); }

cplx RootSystem::evaluate(const Weight& mu, const Matrix& h) const { return mu.cwiseProduct(h.diagonal()).sum(); }

Vector RootSystem::on_basis(const Weight& mu) const {
  Vector out(rank_);
  for (int r = 0; r < rank_; ++r) out[r] = evaluate(mu, cartan_basis_[static_cast<std::size_t>(r)]);
  return out;
}

Matrix RootSystem::cartan_element(const Vector& xi) const {
  if (xi.size() != rank_) throw std::invalid_argument("Cartan coordinates have the wrong length");
  Matrix h = Matrix::Zero(matrix_size(), matrix_size());
  for (int r = 0; r < rank_; ++r) h += xi[r] * cartan_basis_[static_cast<std::size_t>(r)];
  return h;
}

Matrix RootSystem::cartan_of(const Weight& mu) const {
  const Vector centred = mu.array() - mu.mean();
  return centred.asDiagonal();
}

Weight RootSystem::weight_from_dynkin(const Vector& labels) const {
  if (labels.size() != rank_) throw std::invalid_argument("Dynkin label vector has the wrong length");
  const int n = matrix_size();
  Weight mu = Weight::Zero(n);
  for (int i = 0; i < rank_; ++i) {
    for (int a = 0; a <= i; ++a) mu[a] += labels[i];
  }
  mu.array() -= mu.mean();
  return mu;
}

Weight RootSystem::weight_from_roots(const Vector& coeffs) const {
  if (coeffs.size() != rank_) throw std::invalid_argument("root coordinate vector has the wrong length");
  Weight mu = Weight::Zero(matrix_size());
  for (int i = 0; i < rank_; ++i) {
    mu[i] += coeffs[i];
    mu[i + 1] -= coeffs[i];
  }
  return mu;
}

Vector RootSystem::dynkin_labels(const Weight& mu) const {
  Vector out(rank_);
  for (int i = 0; i < rank_; ++i) out[i] = mu[i] - mu[i + 1];
  return out;
}

Vector RootSystem::root_coordinates(const Weight& mu) const {
  const Vector centred = mu.array() - mu.mean();
  Vector out(rank_);
  cplx acc{};
  for (int i = 0; i < rank_; ++i) {
    acc += centred[i];
    out[i] = acc;
  }
  return out;
}

Matrix RootSystem::root_vector(int idx) const {
  const Root& r = root(idx);
  Matrix m = Matrix::Zero(matrix_size(), matrix_size());
  m(r.row, r.col) = 1.0;
  return m;
}

Matrix RootSystem::chevalley_e(int i) const { return root_vector(simple_root(i)); }
Matrix RootSystem::chevalley_f(int i) const { return root_vector(negative_of(simple_root(i))); }
Matrix RootSystem::chevalley_h(int i) const { return bracket(chevalley_e(i), chevalley_f(i)); }

std::vector<Matrix> RootSystem::chevalley_basis() const {
  std::vector<Matrix> out;
  for (int i = 0; i < static_cast<int>(roots_.size()); ++i) out.push_back(root_vector(i));
  for (int i = 0; i < rank_; ++i) out.push_back(chevalley_h(i));
  return out;
}

Vector RootSystem::chevalley_coordinates(const Matrix& x) const {
  const int nroots = static_cast<int>(roots_.size());
  Vector out(nroots + rank_);
  for (int i = 0; i < nroots; ++i) out[i] = x(roots_[static_cast<std::size_t>(i)].row, roots_[static_cast<std::size_t>(i)].col);
  cplx acc{};
  for (int i = 0; i < rank_; ++i) {
    acc += x(i, i);
    out[nroots + i] = acc;
  }
  return out;
}

Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix adjoint_matrix(const Matrix& x, const RootSystem& rs) {
  const std::vector<Matrix> basis = rs.chevalley_basis();
  Matrix ad(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
  for (int k = 0; k < static_cast<int>(basis.size()); ++k) ad.col(k) = rs.chevalley_coordinates(bracket(x, basis[static_cast<std::size_t>(k)]));
  return ad;
}

cplx normalized_form(const Matrix& a, const Matrix& b, const RootSystem& rs) {
  return (adjoint_matrix(a, rs) * adjoint_matrix(b, rs)).trace() / (2.0 * rs.dual_coxeter());
}

// ---------------------------------------------------------------------------
// Modules

RepresentedModule::RepresentedModule(const RootSystem& rs, ModuleKind kind, Weight highest, int depth,
                                     std::vector<Weight> weights, std::vector<int> heights, std::vector<Matrix> root_ops,
                                     std::string label)
    : kind_(kind),
      highest_(std::move(highest)),
      depth_(depth),
      weights_(std::move(weights)),
      heights_(std::move(heights)),
      root_ops_(std::move(root_ops)),
      label_(std::move(label)) {
  for (const Root& r : rs.roots()) units_.emplace_back(r.row, r.col);
}

Matrix RepresentedModule::rho(const Matrix& x) const {
  Matrix out = Matrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const cplx c = x(units_[i].first, units_[i].second);
    if (c != cplx{}) out += c * root_ops_[i];
  }
  const Vector diag = x.diagonal();
  for (int k = 0; k < dim(); ++k) out(k, k) += weights_[static_cast<std::size_t>(k)].cwiseProduct(diag).sum();
  return out;
}

Eigen::RowVectorXcd RepresentedModule::jmath() const {
  Eigen::RowVectorXcd j = Eigen::RowVectorXcd::Zero(dim());
  j[0] = 1.0;
  return j;
}

namespace {

using Word = std::vector<int>;  // sorted positions into the negative-root list
using Combo = std::map<Word, cplx>;

void add_into(Combo& acc, const Combo& part, cplx scale) {
  if (scale == cplx{}) return;
  for (const auto& [w, c] : part) {
    cplx& slot = acc[w];
    slot += scale * c;
  }
}

// PBW straightening in U(sl_n) acting on M_lambda = U(n_-) v_lambda.
class VermaBuilder {
 public:
  VermaBuilder(const RootSystem& rs, Weight lambda) : rs_(rs), lambda_(std::move(lambda)) {
    for (int idx = 0; idx < static_cast<int>(rs.roots().size()); ++idx) {
      if (!rs.root(idx).positive()) negatives_.push_back(idx);
    }
  }

  [[nodiscard]] const std::vector<int>& negatives() const { return negatives_; }

  int word_height(const Word& w) const {
    int h = 0;
    for (int p : w) h -= rs_.root(negatives_[static_cast<std::size_t>(p)]).height;
    return h;
  }

  Weight word_weight(const Word& w) const {
    Weight mu = lambda_;
    for (int p : w) mu += rs_.root(negatives_[static_cast<std::size_t>(p)]).weight;
    return mu;
  }

  // all sorted words of height <= depth, ordered by height
  std::vector<Word> basis(int depth) const {
    std::vector<Word> out;
    Word cur;
    enumerate(depth, 0, cur, out);
    std::stable_sort(out.begin(), out.end(), [&](const Word& a, const Word& b) {
      const int ha = word_height(a);
      const int hb = word_height(b);
      return ha != hb ? ha < hb : a < b;
    });
    return out;
  }

  // e_alpha . (word v_lambda) for a root index alpha
  const Combo& act_root(int alpha, const Word& w) {
    const auto key = std::make_pair(alpha, w);
    if (auto it = act_memo_.find(key); it != act_memo_.end()) return it->second;
    Combo out;
    const Root& r = rs_.root(alpha);
    if (w.empty()) {
      if (!r.positive()) out[Word{position_of(alpha)}] = 1.0;
    } else {
      const int head = w.front();
      const Word rest(w.begin() + 1, w.end());
      // X Y rest = Y (X rest) + [X, Y] rest
      const Combo inner = act_root(alpha, rest);
      for (const auto& [iw, ic] : inner) add_into(out, leftmul(head, iw), ic);
      const Matrix br = bracket(rs_.root_vector(alpha), rs_.root_vector(negatives_[static_cast<std::size_t>(head)]));
      add_into(out, act_element(br, rest), 1.0);
    }
    prune(out);
    return act_memo_.emplace(key, std::move(out)).first->second;
  }

  // general traceless element acting on a word
  Combo act_element(const Matrix& x, const Word& w) {
    Combo out;
    const int n = rs_.matrix_size();
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b || x(a, b) == cplx{}) continue;
        add_into(out, act_root(rs_.root_index(a, b), w), x(a, b));
      }
    }
    const cplx diag = word_weight(w).cwiseProduct(Vector(x.diagonal())).sum();
    if (diag != cplx{}) out[w] += diag;
    prune(out);
    return out;
  }

  // Y_p . (word) re-sorted into PBW order
  const Combo& leftmul(int p, const Word& w) {
    const auto key = std::make_pair(p, w);
    if (auto it = left_memo_.find(key); it != left_memo_.end()) return it->second;
    Combo out;
    if (w.empty() || p <= w.front()) {
      Word nw;
      nw.reserve(w.size() + 1);
      nw.push_back(p);
      nw.insert(nw.end(), w.begin(), w.end());
      out[nw] = 1.0;
    } else {
      const int q = w.front();
      const Word rest(w.begin() + 1, w.end());
      // Y_p Y_q rest = Y_q (Y_p rest) + [Y_p, Y_q] rest
      const Combo moved = leftmul(p, rest);
      for (const auto& [mw, mc] : moved) add_into(out, leftmul(q, mw), mc);
      const Matrix br = bracket(rs_.root_vector(negatives_[static_cast<std::size_t>(p)]),
                                rs_.root_vector(negatives_[static_cast<std::size_t>(q)]));
      const int n = rs_.matrix_size();
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (a == b || br(a, b) == cplx{}) continue;
          add_into(out, leftmul(position_of(rs_.root_index(a, b)), rest), br(a, b));
        }
      }
    }
    prune(out);
    return left_memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  int position_of(int root_idx) const {
    const auto it = std::find(negatives_.begin(), negatives_.end(), root_idx);
    return static_cast<int>(it - negatives_.begin());
  }

  static void prune(Combo& c) {
    for (auto it = c.begin(); it != c.end();) it = (it->second == cplx{}) ? c.erase(it) : std::next(it);
  }

  void enumerate(int budget, int min_pos, Word& cur, std::vector<Word>& out) const {
    out.push_back(cur);
    for (int p = min_pos; p < static_cast<int>(negatives_.size()); ++p) {
      const int h = -rs_.root(negatives_[static_cast<std::size_t>(p)]).height;
      if (h > budget) continue;
      cur.push_back(p);
      enumerate(budget - h, p, cur, out);
      cur.pop_back();
    }
  }

  const RootSystem& rs_;
  Weight lambda_;
  std::vector<int> negatives_;
  std::map<std::pair<int, Word>, Combo> act_memo_;
  std::map<std::pair<int, Word>, Combo> left_memo_;
};

struct VermaData {
  std::vector<Word> words;
  std::vector<Weight> weights;
  std::vector<int> heights;
  std::vector<Matrix> root_ops;
};

VermaData verma_data(const RootSystem& rs, const Weight& lambda, int depth) {
  VermaBuilder vb(rs, lambda);
  VermaData d;
  d.words = vb.basis(depth);
  const int dim = static_cast<int>(d.words.size());
  std::map<Word, int> pos;
  for (int k = 0; k < dim; ++k) {
    pos[d.words[static_cast<std::size_t>(k)]] = k;
    d.weights.push_back(vb.word_weight(d.words[static_cast<std::size_t>(k)]));
    d.heights.push_back(vb.word_height(d.words[static_cast<std::size_t>(k)]));
  }
  for (int alpha = 0; alpha < static_cast<int>(rs.roots().size()); ++alpha) {
    Matrix op = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
      for (const auto& [w, c] : vb.act_root(alpha, d.words[static_cast<std::size_t>(k)])) {
        const auto it = pos.find(w);
        if (it != pos.end()) op(it->second, k) += c;  // words above the depth are dropped
      }
    }
    d.root_ops.push_back(std::move(op));
  }
  return d;
}

std::string weight_label(const RootSystem& rs, const Weight& mu) {
  std::ostringstream os;
  const Vector dl = rs.dynkin_labels(mu);
  os << "(";
  for (int i = 0; i < dl.size(); ++i) {
    if (i) os << ",";
    os << format_complex(dl[i]);
  }
  os << ")";
  return os.str();
}

bool is_dominant_integral(const Vector& labels) {
  for (int i = 0; i < labels.size(); ++i) {
    const cplx v = labels[i];
    if (std::abs(v.imag()) > 1e-12 || v.real() < -1e-12 || std::abs(v.real() - std::round(v.real())) > 1e-12) return false;
  }
  return true;
}

}  // namespace

RepresentedModule build_verma(const RootSystem& rs, const Weight& lambda, int depth) {
  if (depth < 0) throw std::invalid_argument("Verma truncation depth must be nonnegative");
  VermaData d = verma_data(rs, lambda, depth);
  return {rs, ModuleKind::Verma, lambda, depth, std::move(d.weights), std::move(d.heights), std::move(d.root_ops),
          "M" + weight_label(rs, lambda)};
}

RepresentedModule build_dual_verma(const RootSystem& rs, const Weight& lambda, int depth) {
  if (depth < 1) throw std::invalid_argument("dual Verma truncation depth must be at least 1");
  VermaData d = verma_data(rs, lambda, depth);
  // (X phi)(m) = phi(sigma(X) m) with the Chevalley anti-involution sigma(e_alpha) = e_{-alpha}
  std::vector<Matrix> ops;
  for (int alpha = 0; alpha < static_cast<int>(rs.roots().size()); ++alpha) {
    ops.push_back(d.root_ops[static_cast<std::size_t>(rs.negative_of(alpha))].transpose());
  }
  return {rs, ModuleKind::DualVerma, lambda, depth, std::move(d.weights), std::move(d.heights), std::move(ops),
          "M*" + weight_label(rs, lambda)};
}

long weyl_dimension(const RootSystem& rs, const Vector& dynkin_labels) {
  const Weight lambda = rs.weight_from_dynkin(dynkin_labels);
  double num = 1.0;
  double den = 1.0;
  for (int idx : rs.positive_roots()) {
    const Weight& a = rs.root(idx).weight;
    num *= rs.inner(lambda + rs.rho(), a).real();
    den *= rs.inner(rs.rho(), a).real();
  }
  return std::lround(num / den);
}

RepresentedModule build_irrep(const RootSystem& rs, const Vector& dynkin_labels) {
  if (!is_dominant_integral(dynkin_labels)) {
    throw std::invalid_argument("highest weight " + weight_label(rs, rs.weight_from_dynkin(dynkin_labels)) +
                                " is not dominant integral");
  }
  const Weight lambda = rs.weight_from_dynkin(dynkin_labels);
  const int top = static_cast<int>(std::lround(2.0 * rs.inner(lambda, rs.rho()).real()));
  VermaBuilder vb(rs, lambda);
  VermaData d = verma_data(rs, lambda, top);
  const int vdim = static_cast<int>(d.words.size());

  // contravariant form <m, m'> = coefficient of v_lambda in sigma(m) m'
  auto pairing_row = [&](int k) {
    // sigma(Y_1 ... Y_k) = sigma(Y_k) ... sigma(Y_1): sigma(Y_1) acts first
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(vdim);
    row[0] = 1.0;
    const Word& w = d.words[static_cast<std::size_t>(k)];
    // row * A_k * ... * A_1 evaluates the coefficient of v after applying A_1 first
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      const int neg = vb.negatives()[static_cast<std::size_t>(*it)];
      row = row * d.root_ops[static_cast<std::size_t>(rs.negative_of(neg))];
    }
    return row;
  };

  // group the Verma basis by weight (simple-root content of lambda - mu)
  std::map<std::vector<long>, std::vector<int>> by_weight;
  for (int k = 0; k < vdim; ++k) {
    const Vector rc = rs.root_coordinates(lambda - d.weights[static_cast<std::size_t>(k)]);
    std::vector<long> key;
    for (int i = 0; i < rc.size(); ++i) key.push_back(std::lround(rc[i].real()));
    by_weight[key].push_back(k);
  }

  Matrix gram(vdim, vdim);
  for (int k = 0; k < vdim; ++k) gram.row(k) = pairing_row(k);

  // independent representatives per weight space
  std::vector<int> chosen;
  std::vector<int> owner(static_cast<std::size_t>(vdim), -1);  // weight-group id of each Verma vector
  std::vector<std::vector<int>> groups;
  for (const auto& [key, members] : by_weight) {
    const int gid = static_cast<int>(groups.size());
    groups.push_back(members);
    for (int k : members) owner[static_cast<std::size_t>(k)] = gid;
  }
  // one scale for the whole form, so a weight space holding only roundoff is recognised as null
  const double scale = gram.cwiseAbs().maxCoeff();
  std::vector<std::vector<int>> reps(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& members = groups[g];
    for (int k : members) {
      std::vector<int> trial = reps[g];
      trial.push_back(k);
      Matrix sub(static_cast<Eigen::Index>(trial.size()), static_cast<Eigen::Index>(trial.size()));
      for (std::size_t i = 0; i < trial.size(); ++i) {
        for (std::size_t j = 0; j < trial.size(); ++j) sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gram(trial[i], trial[j]);
      }
      // absolute pivot test: a relative LU threshold would accept a 1x1 roundoff block
      const Eigen::FullPivLU<Matrix> lu(sub);
      const double smallest = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
      if (smallest > 1e-10 * scale) reps[g] = std::move(trial);
    }
  }
  // order the irreducible basis by height, highest vector first
  for (int k = 0; k < vdim; ++k) {
    const auto& r = reps[static_cast<std::size_t>(owner[static_cast<std::size_t>(k)])];
    if (std::find(r.begin(), r.end(), k) != r.end()) chosen.push_back(k);
  }
  std::map<int, int> local;  // Verma index -> irreducible index
  for (int i = 0; i < static_cast<int>(chosen.size()); ++i) local[chosen[static_cast<std::size_t>(i)]] = i;
  const int dim = static_cast<int>(chosen.size());

  // projection of a Verma vector of a given weight group onto the quotient basis
  std::vector<Matrix> solve_ops(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& r = reps[g];
    if (r.empty()) continue;
    Matrix grr(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.size()));
    Matrix gra(static_cast<Eigen::Index>(r.size()), vdim);
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (std::size_t j = 0; j < r.size(); ++j) grr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gram(r[i], r[j]);
      gra.row(static_cast<Eigen::Index>(i)) = gram.row(r[i]);
    }
    solve_ops[g] = grr.fullPivLu().solve(gra);
  }

  std::vector<Matrix> ops;
  for (int alpha = 0; alpha < static_cast<int>(rs.roots().size()); ++alpha) {
    Matrix op = Matrix::Zero(dim, dim);
    const Matrix& vop = d.root_ops[static_cast<std::size_t>(alpha)];
    for (int s = 0; s < dim; ++s) {
      const Vector image = vop.col(chosen[static_cast<std::size_t>(s)]);
      if (image.cwiseAbs().maxCoeff() == 0.0) continue;
      // all nonzero entries share one weight group
      int target = -1;
      for (int k = 0; k < vdim; ++k) {
        if (image[k] != cplx{}) {
          target = owner[static_cast<std::size_t>(k)];
          break;
        }
      }
      const auto& r = reps[static_cast<std::size_t>(target)];
      if (r.empty()) continue;
      const Vector y = solve_ops[static_cast<std::size_t>(target)] * image;
      for (std::size_t i = 0; i < r.size(); ++i) op(local[r[i]], s) = y[static_cast<Eigen::Index>(i)];
    }
    ops.push_back(std::move(op));
  }

  std::vector<Weight> weights;
  std::vector<int> heights;
  for (int k : chosen) {
    weights.push_back(d.weights[static_cast<std::size_t>(k)]);
    heights.push_back(d.heights[static_cast<std::size_t>(k)]);
  }
  const long expected = weyl_dimension(rs, dynkin_labels);
  if (expected != dim) {
    throw std::logic_error("irreducible quotient has dimension " + std::to_string(dim) + ", Weyl formula gives " +
                           std::to_string(expected));
  }
  return {rs, ModuleKind::Irreducible, lambda, -1, std::move(weights), std::move(heights), std::move(ops),
          "L" + weight_label(rs, lambda)};
}

Matrix dual_action(const RepresentedModule& module, const Matrix& x) { return module.rho(x).transpose(); }

// ---------------------------------------------------------------------------
// Tensor products

TensorSpace::TensorSpace(std::vector<int> dims, std::vector<int> zero_indices)
    : dims_(std::move(dims)), zero_(std::move(zero_indices)) {
  strides_.assign(dims_.size(), 1);
  full_dim_ = 1;
  for (int i = static_cast<int>(dims_.size()) - 1; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] = full_dim_;
    full_dim_ *= dims_[static_cast<std::size_t>(i)];
  }
}

std::vector<int> TensorSpace::digits(int full_index) const {
  std::vector<int> out(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    out[i] = full_index / strides_[i];
    full_index %= strides_[i];
  }
  return out;
}

int TensorSpace::compose_index(const std::vector<int>& digits) const {
  int idx = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) idx += digits[i] * strides_[i];
  return idx;
}

Matrix TensorSpace::embed(int factor, const Matrix& op) const {
  const auto f = static_cast<std::size_t>(factor);
  const int outer = full_dim_ / (strides_[f] * dims_[f]);
  const int inner = strides_[f];
  Matrix out = Matrix::Zero(full_dim_, full_dim_);
  for (int o = 0; o < outer; ++o) {
    for (int a = 0; a < dims_[f]; ++a) {
      for (int b = 0; b < dims_[f]; ++b) {
        const cplx v = op(a, b);
        if (v == cplx{}) continue;
        const int base_a = o * dims_[f] * inner + a * inner;
        const int base_b = o * dims_[f] * inner + b * inner;
        for (int i = 0; i < inner; ++i) out(base_a + i, base_b + i) = v;
      }
    }
  }
  return out;
}

Matrix TensorSpace::restrict_to_zero(const Matrix& full) const {
  const int k = zero_dim();
  Matrix out(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) out(a, b) = full(zero_[static_cast<std::size_t>(a)], zero_[static_cast<std::size_t>(b)]);
  }
  return out;
}

Matrix TensorSpace::zero_projector() const {
  Matrix p = Matrix::Zero(full_dim_, full_dim_);
  for (int idx : zero_) p(idx, idx) = 1.0;
  return p;
}

TensorSpace zero_weight_basis(const std::vector<RepresentedModule>& factors, double tol) {
  if (factors.empty()) throw std::invalid_argument("tensor product needs at least one factor");
  std::vector<int> dims;
  for (const auto& f : factors) dims.push_back(f.dim());
  TensorSpace probe(dims, {});
  std::vector<int> zero;
  for (int idx = 0; idx < probe.full_dim(); ++idx) {
    const std::vector<int> dg = probe.digits(idx);
    Weight total = Weight::Zero(factors.front().highest_weight().size());
    for (std::size_t i = 0; i < factors.size(); ++i) total += factors[i].weight(dg[i]);
    if (total.cwiseAbs().maxCoeff() < tol) zero.push_back(idx);
  }
  return {std::move(dims), std::move(zero)};
}

}  // namespace facegaudin
