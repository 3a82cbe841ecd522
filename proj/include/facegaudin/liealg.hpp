#pragma once

#include <string>
#include <utility>
#include <vector>

#include "facegaudin/types.hpp"

namespace facegaudin {

enum class AlgebraSeries { A };

/// A weight, stored in epsilon coordinates of sl(n) normalised to zero sum.
/// mu(H) = sum_a mu_a H_aa for diagonal H.
using Weight = Vector;

struct Root {
  int row = 0;  // e_alpha is the matrix unit E_{row, col}
  int col = 0;
  Weight weight;        // eps_row - eps_col
  Vector on_basis;      // alpha(h_r), r = 0..rank-1
  Eigen::VectorXi simple_coeffs;  // alpha as an integer combination of simple roots
  int height = 0;       // signed: negative for negative roots
  [[nodiscard]] bool positive() const { return height > 0; }
};

/// Root datum of sl(rank + 1) in its defining matrix realisation.
///
/// Algebra elements are traceless (rank+1) x (rank+1) complex matrices. The
/// root vectors are the matrix units, so (e_alpha | e_{-alpha}) = 1 under the
/// form (A|B) = Tr_g(ad A ad B) / (2 h^v), which on sl(n) equals Tr(AB).
/// The Cartan basis h_r is orthonormal for that form; xi_r are the coordinates
/// of H = sum_r xi_r h_r.
class RootSystem {
 public:
  static RootSystem build(AlgebraSeries series, int rank);

  [[nodiscard]] AlgebraSeries series() const { return series_; }
  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] int matrix_size() const { return rank_ + 1; }
  [[nodiscard]] int dimension() const { return matrix_size() * matrix_size() - 1; }
  [[nodiscard]] int dual_coxeter() const { return rank_ + 1; }
  [[nodiscard]] std::string name() const { return "A" + std::to_string(rank_); }

  [[nodiscard]] const std::vector<Root>& roots() const { return roots_; }
  [[nodiscard]] const Root& root(int idx) const { return roots_[static_cast<std::size_t>(idx)]; }
  [[nodiscard]] const std::vector<int>& positive_roots() const { return positive_; }
  /// Root index of the simple root alpha_i, i = 0..rank-1.
  [[nodiscard]] int simple_root(int i) const { return simple_[static_cast<std::size_t>(i)]; }
  /// Root index of e_{row,col}, or -1 when row == col.
  [[nodiscard]] int root_index(int row, int col) const;
  [[nodiscard]] int negative_of(int idx) const;

  [[nodiscard]] const std::vector<Matrix>& cartan_basis() const { return cartan_basis_; }
  [[nodiscard]] const Weight& rho() const { return rho_; }

  /// Normalised inner product of two weights (identifying h with h*).
  [[nodiscard]] cplx inner(const Weight& a, const Weight& b) const;
  /// mu(H) for a diagonal H.
  [[nodiscard]] cplx evaluate(const Weight& mu, const Matrix& h) const;
  /// (mu(h_1), ..., mu(h_l)).
  [[nodiscard]] Vector on_basis(const Weight& mu) const;
  /// H = sum_r xi_r h_r.
  [[nodiscard]] Matrix cartan_element(const Vector& xi) const;
  /// The Cartan element identified with mu through the normalised form.
  [[nodiscard]] Matrix cartan_of(const Weight& mu) const;

  [[nodiscard]] Weight weight_from_dynkin(const Vector& labels) const;
  [[nodiscard]] Weight weight_from_roots(const Vector& coeffs) const;
  /// mu(H_i) for the Chevalley coroots H_i.
  [[nodiscard]] Vector dynkin_labels(const Weight& mu) const;
  /// Coefficients of mu in the simple-root basis.
  [[nodiscard]] Vector root_coordinates(const Weight& mu) const;
  [[nodiscard]] Weight zero_weight() const { return Weight::Zero(matrix_size()); }

  [[nodiscard]] Matrix root_vector(int idx) const;
  [[nodiscard]] Matrix chevalley_e(int i) const;
  [[nodiscard]] Matrix chevalley_f(int i) const;
  [[nodiscard]] Matrix chevalley_h(int i) const;
  /// Chevalley basis: all root vectors (in root order) followed by H_1..H_l.
  [[nodiscard]] std::vector<Matrix> chevalley_basis() const;
  /// Coordinates of a traceless matrix in chevalley_basis().
  [[nodiscard]] Vector chevalley_coordinates(const Matrix& x) const;

 private:
  AlgebraSeries series_ = AlgebraSeries::A;
  int rank_ = 0;
  std::vector<Root> roots_;
  std::vector<int> positive_;
  std::vector<int> simple_;
  std::vector<Matrix> cartan_basis_;
  Weight rho_;
};

Matrix bracket(const Matrix& a, const Matrix& b);
/// Matrix of ad X in the Chevalley basis.
Matrix adjoint_matrix(const Matrix& x, const RootSystem& rs);
/// (A|B) = Tr_g(ad A ad B) / (2 h^v), computed from explicit ad matrices.
cplx normalized_form(const Matrix& a, const Matrix& b, const RootSystem& rs);

enum class ModuleKind { Irreducible, DualVerma, Verma };

/// Weight module given by dense action matrices of every root vector.
///
/// Basis vectors are weight vectors; index 0 is the highest weight vector.
/// For dual Verma modules the basis is dual to the PBW basis of the Verma
/// module truncated at `depth`, and jmath() pairs with its highest vector.
class RepresentedModule {
 public:
  RepresentedModule(const RootSystem& rs, ModuleKind kind, Weight highest, int depth, std::vector<Weight> weights,
                    std::vector<int> heights, std::vector<Matrix> root_ops, std::string label);

  [[nodiscard]] ModuleKind kind() const { return kind_; }
  [[nodiscard]] const Weight& highest_weight() const { return highest_; }
  /// Truncation height for Verma-type modules, -1 for irreducibles.
  [[nodiscard]] int depth() const { return depth_; }
  [[nodiscard]] int dim() const { return static_cast<int>(weights_.size()); }
  [[nodiscard]] const Weight& weight(int k) const { return weights_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] const std::vector<Weight>& weights() const { return weights_; }
  [[nodiscard]] int height(int k) const { return heights_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] const Matrix& root_op(int root_idx) const { return root_ops_[static_cast<std::size_t>(root_idx)]; }
  [[nodiscard]] const std::string& label() const { return label_; }

  /// rho(X) for an arbitrary (traceless) algebra element.
  [[nodiscard]] Matrix rho(const Matrix& x) const;
  /// The pairing with the highest weight vector, as a row vector.
  [[nodiscard]] Eigen::RowVectorXcd jmath() const;

 private:
  ModuleKind kind_;
  Weight highest_;
  int depth_;
  std::vector<Weight> weights_;
  std::vector<int> heights_;
  std::vector<Matrix> root_ops_;
  std::vector<std::pair<int, int>> units_;  // (row, col) of each root vector
  std::string label_;
};

/// Verma module M_lambda on the PBW basis, truncated at total height `depth`.
RepresentedModule build_verma(const RootSystem& rs, const Weight& lambda, int depth);

/// Finite-dimensional irreducible module with dominant integral highest weight.
RepresentedModule build_irrep(const RootSystem& rs, const Vector& dynkin_labels);

/// Contragredient dual M*_lambda of the truncated Verma module.
RepresentedModule build_dual_verma(const RootSystem& rs, const Weight& lambda, int depth);

/// Weyl dimension formula.
long weyl_dimension(const RootSystem& rs, const Vector& dynkin_labels);

/// Matrix of rho*(X) on the component vector of a functional:
/// (rho*(X) phi)(v) = phi(rho(X) v), i.e. rho(X)^T.
Matrix dual_action(const RepresentedModule& module, const Matrix& x);

/// Product basis of V = V_1 (x) ... (x) V_N with the cached zero-weight
/// sub-basis of V (and, dually, of V*).
class TensorSpace {
 public:
  TensorSpace() = default;
  TensorSpace(std::vector<int> dims, std::vector<int> zero_indices);

  [[nodiscard]] int factors() const { return static_cast<int>(dims_.size()); }
  [[nodiscard]] const std::vector<int>& dims() const { return dims_; }
  [[nodiscard]] int full_dim() const { return full_dim_; }
  [[nodiscard]] int zero_dim() const { return static_cast<int>(zero_.size()); }
  /// Product-basis index of the k-th zero-weight basis vector.
  [[nodiscard]] int zero_index(int k) const { return zero_[static_cast<std::size_t>(k)]; }
  [[nodiscard]] const std::vector<int>& zero_indices() const { return zero_; }
  /// Per-factor basis indices of a product-basis index.
  [[nodiscard]] std::vector<int> digits(int full_index) const;
  [[nodiscard]] int compose_index(const std::vector<int>& digits) const;

  /// I (x) ... (x) op (x) ... (x) I with op on factor i.
  [[nodiscard]] Matrix embed(int factor, const Matrix& op) const;
  /// Compression of a full-space matrix to the zero-weight block.
  [[nodiscard]] Matrix restrict_to_zero(const Matrix& full) const;
  /// Orthogonal projector onto the zero-weight subspace of the full space.
  [[nodiscard]] Matrix zero_projector() const;

 private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int full_dim_ = 0;
  std::vector<int> zero_;
};

TensorSpace zero_weight_basis(const std::vector<RepresentedModule>& factors, double tol = 1e-9);

}  // namespace facegaudin
