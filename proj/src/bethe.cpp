#include "facegaudin/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace facegaudin {

const Weight& BetheConfig::simple_weight(int j) const {
  const RootSystem& rs = problem.roots();
  return rs.root(rs.simple_root(assignment[static_cast<std::size_t>(j)])).weight;
}

int default_verma_depth(const RootSystem& rs, int m) { return m + std::max(2, rs.rank()); }

bool check_charge(const BetheConfig& cfg, double tol) {
  const RootSystem& rs = cfg.problem.roots();
  Weight diff = rs.zero_weight();
  for (const Site& s : cfg.problem.sites()) diff += s.module.highest_weight();
  for (int j = 0; j < cfg.roots(); ++j) diff -= cfg.simple_weight(j);
  return diff.cwiseAbs().maxCoeff() <= tol;
}

namespace {

std::string root_name(int j) { return "t_" + std::to_string(j + 1); }
std::string site_name(int i) { return "z_" + std::to_string(i + 1); }

void guard_pair(cplx a, cplx b, const ModularData& md, double guard, const std::string& na, const std::string& nb) {
  if (nearest_lattice_point(a - b, md).distance < guard) {
    throw BethePoleError(na + " collides with " + nb + " mod lattice", na, nb);
  }
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

BetheSystem bethe_system(const BetheConfig& cfg, const Vector& t, double pole_guard) {
  const GaudinProblem& p = cfg.problem;
  const RootSystem& rs = p.roots();
  const ModularData& md = p.modulus();
  const int m = cfg.roots();
  if (t.size() != m) throw std::invalid_argument("one Bethe root per assignment entry is required");
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < p.site_count(); ++i) guard_pair(t[j], p.sites()[i].z, md, pole_guard, root_name(j), site_name(i));
    for (int k = j + 1; k < m; ++k) guard_pair(t[j], t[k], md, pole_guard, root_name(j), root_name(k));
  }
  BetheSystem out{Vector::Zero(m), Matrix::Zero(m, m)};
  for (int j = 0; j < m; ++j) {
    const Weight& aj = cfg.simple_weight(j);
    for (int i = 0; i < p.site_count(); ++i) {
      const cplx c = rs.inner(aj, p.sites()[i].module.highest_weight());
      if (c == cplx{}) continue;
      const Series z = zeta11(t[j] - p.sites()[i].z, md, 1);
      out.residual[j] += c * z[0];
      out.jacobian(j, j) += c * z[1];
    }
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      const cplx c = rs.inner(aj, cfg.simple_weight(k));
      if (c == cplx{}) continue;
      const Series z = zeta11(t[j] - t[k], md, 1);
      out.residual[j] -= c * z[0];
      out.jacobian(j, j) -= c * z[1];
      out.jacobian(j, k) += c * z[1];
    }
  }
  return out;
}

Vector normalise_roots(const Vector& t) {
  Vector out = t;
  for (int j = 0; j < out.size(); ++j) out[j] -= std::floor(out[j].real());
  return out;
}

namespace {

// same root set modulo the lattice, up to permutations within equal simple roots
bool same_solution(const BetheConfig& cfg, const Vector& a, const Vector& b, double tol) {
  const int m = cfg.roots();
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  std::function<bool(int)> match = [&](int j) {
    if (j == m) return true;
    for (int k = 0; k < m; ++k) {
      if (used[static_cast<std::size_t>(k)] || cfg.assignment[static_cast<std::size_t>(k)] != cfg.assignment[static_cast<std::size_t>(j)]) continue;
      if (nearest_lattice_point(a[j] - b[k], cfg.problem.modulus()).distance >= tol) continue;
      used[static_cast<std::size_t>(k)] = true;
      if (match(j + 1)) return true;
      used[static_cast<std::size_t>(k)] = false;
    }
    return false;
  };
  return match(0);
}

double condition_number(const Matrix& j) {
  const Eigen::JacobiSVD<Matrix> svd(j);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double lo = s[s.size() - 1];
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : s[0] / lo;
}

}  // namespace

SolveOutcome solve_bethe(const BetheConfig& cfg, const std::vector<Vector>& seeds, const NewtonOptions& opts) {
  if (!check_charge(cfg)) throw std::invalid_argument("charge condition violated: sum of lambda_i differs from sum of alpha_{i(j)}");
  SolveOutcome out;
  for (const Vector& seed : seeds) {
    Vector t = seed;
    std::string failure;
    try {
      BetheSystem sys = bethe_system(cfg, t);
      double norm = inf_norm(sys.residual);
      int it = 0;
      while (norm >= opts.tolerance) {
        if (it >= opts.max_iterations) {
          failure = "no convergence after " + std::to_string(it) + " iterations";
          break;
        }
        ++it;
        const Eigen::FullPivLU<Matrix> lu(sys.jacobian);
        if (!lu.isInvertible()) {
          failure = "singular Jacobian at iteration " + std::to_string(it);
          break;
        }
        const Vector step = lu.solve(-sys.residual);
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
          const Vector trial = t + lambda * step;
          try {
            BetheSystem ts = bethe_system(cfg, trial);
            const double tn = inf_norm(ts.residual);
            if (tn < norm) {
              t = trial;
              sys = std::move(ts);
              norm = tn;
              accepted = true;
              break;
            }
          } catch (const DomainError&) {
            // trial hit the pole guard; shorten the step
          }
        }
        if (!accepted) {
          failure = "step rejected after " + std::to_string(opts.max_halvings) + " halvings (residual " +
                    std::to_string(norm) + ")";
          break;
        }
      }
      if (failure.empty()) {
        BetheSolution sol;
        sol.t = normalise_roots(t);
        sol.seed = seed;
        sol.residual_norm = inf_norm(bethe_system(cfg, sol.t).residual);
        sol.iterations = it;
        sol.jacobian_condition = condition_number(sys.jacobian);
        ++out.converged_seeds;
        const bool dup = std::any_of(out.solutions.begin(), out.solutions.end(), [&](const BetheSolution& s) {
          return same_solution(cfg, s.t, sol.t, opts.dedup_tolerance);
        });
        if (!dup) out.solutions.push_back(std::move(sol));
        continue;
      }
    } catch (const DomainError& e) {
      failure = e.what();
    }
    ++out.failed_seeds;
    out.failures.push_back(failure);
  }
  if (out.solutions.empty()) throw ConvergenceError("no seed converged to a Bethe solution");
  return out;
}

namespace {

double radical_inverse(unsigned long k, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (k > 0) {
    f /= base;
    r += f * static_cast<double>(k % base);
    k /= base;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

std::vector<Vector> halton_seeds(const BetheConfig& cfg, int count, double guard) {
  const int m = cfg.roots();
  if (2 * m > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("too many Bethe roots for the seed grid");
  const ModularData& md = cfg.problem.modulus();
  std::vector<Vector> out;
  for (unsigned long k = 1; static_cast<int>(out.size()) < count && k < 100000UL; ++k) {
    Vector t(m);
    for (int j = 0; j < m; ++j) {
      t[j] = radical_inverse(k, kPrimes[2 * j]) + radical_inverse(k, kPrimes[2 * j + 1]) * md.tau();
    }
    bool ok = true;
    for (int j = 0; j < m && ok; ++j) {
      for (const Site& s : cfg.problem.sites()) ok = ok && nearest_lattice_point(t[j] - s.z, md).distance >= guard;
      for (int l = j + 1; l < m; ++l) ok = ok && nearest_lattice_point(t[j] - t[l], md).distance >= guard;
    }
    if (ok) out.push_back(t);
  }
  return out;
}

std::vector<ScalarJet> bracket(const RootSystem& rs, const ModularData& md, const RepresentedModule& module, cplx z,
                               const std::vector<int>& simple, const std::vector<cplx>& t, const Vector& xi, int order) {
  const int m = static_cast<int>(simple.size());
  if (static_cast<int>(t.size()) != m) throw std::invalid_argument("bracket needs one root per simple-root label");
  if (module.kind() != ModuleKind::Irreducible && module.depth() < m) {
    throw JetOrderError("module truncation depth " + std::to_string(module.depth()) + " below bracket length " +
                        std::to_string(m));
  }
  const int dim = module.dim();
  std::vector<ScalarJet> out(static_cast<std::size_t>(dim), ScalarJet(xi, order, cplx{}));
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // coefficient jet: product of w's indexed by minus the partial sums of the simple roots.
    // With +partial sums the vector is not an eigenvector once two sites share the roots.
    ScalarJet coef = ScalarJet::constant(xi, order, 1.0);
    Weight partial = rs.zero_weight();
    for (int k = 0; k < m; ++k) {
      const int jk = perm[static_cast<std::size_t>(k)];
      partial -= rs.root(rs.simple_root(simple[static_cast<std::size_t>(jk)])).weight;
      const Vector on = rs.on_basis(partial);
      const cplx c0 = (on.transpose() * xi)(0);
      const cplx arg = (k + 1 < m ? t[static_cast<std::size_t>(perm[static_cast<std::size_t>(k + 1)])] : z);
      const cplx x = t[static_cast<std::size_t>(jk)] - arg;
      coef = coef * along_weight(w(c0, x, md, order, 0).in_c(), on, xi, order);
    }
    // j(E_{sigma(m)} ... E_{sigma(1)} v) for all v at once: E_{sigma(1)} acts first
    Eigen::RowVectorXcd row = module.jmath();
    for (int k = m - 1; k >= 0; --k) {
      row = row * module.root_op(rs.simple_root(simple[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]));
    }
    for (int v = 0; v < dim; ++v) {
      if (row[v] == cplx{}) continue;
      ScalarJet term = coef;
      term *= row[v];
      out[static_cast<std::size_t>(v)] += term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

BetheVector::BetheVector(const BetheConfig& cfg, Vector t) : cfg_(cfg), t_(std::move(t)) {
  if (t_.size() != cfg_.roots()) throw std::invalid_argument("one Bethe root per assignment entry is required");
  if (!check_charge(cfg_)) throw std::invalid_argument("charge condition violated");
}

std::vector<std::vector<std::vector<ScalarJet>>> BetheVector::brackets(const Vector& xi, int order) const {
  const GaudinProblem& p = cfg_.problem;
  const int m = cfg_.roots();
  const int subsets = 1 << m;
  std::vector<std::vector<std::vector<ScalarJet>>> out(static_cast<std::size_t>(p.site_count()));
  for (int a = 0; a < p.site_count(); ++a) {
    out[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(subsets));
    for (int mask = 0; mask < subsets; ++mask) {
      std::vector<int> simple;
      std::vector<cplx> t;
      for (int j = 0; j < m; ++j) {
        if (mask & (1 << j)) {
          simple.push_back(cfg_.assignment[static_cast<std::size_t>(j)]);
          t.push_back(t_[j]);
        }
      }
      if (p.sites()[a].module.kind() != ModuleKind::Irreducible && p.sites()[a].module.depth() < static_cast<int>(simple.size())) {
        continue;  // never reached by a weight-zero vector
      }
      out[static_cast<std::size_t>(a)][static_cast<std::size_t>(mask)] =
          bracket(p.roots(), p.modulus(), p.sites()[a].module, p.sites()[a].z, simple, t, xi, order);
    }
  }
  return out;
}

namespace {

// sum over maps {1..M} -> sites of prod_a bracket_a(I_a)[digit_a]
ScalarJet partition_sum(const std::vector<std::vector<std::vector<ScalarJet>>>& br, int m, const std::vector<int>& digits,
                        const Vector& xi, int order) {
  const int n = static_cast<int>(br.size());
  ScalarJet total(xi, order, cplx{});
  std::vector<int> owner(static_cast<std::size_t>(m), 0);
  while (true) {
    std::vector<int> masks(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < m; ++j) masks[static_cast<std::size_t>(owner[static_cast<std::size_t>(j)])] |= 1 << j;
    ScalarJet prod = ScalarJet::constant(xi, order, 1.0);
    bool zero = false;
    for (int a = 0; a < n && !zero; ++a) {
      const auto& entries = br[static_cast<std::size_t>(a)][static_cast<std::size_t>(masks[static_cast<std::size_t>(a)])];
      if (entries.empty()) {
        zero = true;
        break;
      }
      const ScalarJet& f = entries[static_cast<std::size_t>(digits[static_cast<std::size_t>(a)])];
      if (f.value() == cplx{} && std::all_of(&f[0], &f[0] + f.size(), [](cplx c) { return c == cplx{}; })) zero = true;
      else prod = prod * f;
    }
    if (!zero) total += prod;
    int j = 0;
    while (j < m && ++owner[static_cast<std::size_t>(j)] == n) owner[static_cast<std::size_t>(j++)] = 0;
    if (j == m) break;
  }
  return total;
}

}  // namespace

MatrixJet BetheVector::on_zero_weight(const Vector& xi, int order) const {
  const GaudinProblem& p = cfg_.problem;
  const auto br = brackets(xi, order);
  const TensorSpace& space = p.space();
  MatrixJet out(xi, order, Matrix::Zero(p.dim(), 1));
  for (int k = 0; k < space.zero_dim(); ++k) {
    const ScalarJet s = partition_sum(br, cfg_.roots(), space.digits(space.zero_index(k)), xi, order);
    for (int i = 0; i < out.size(); ++i) out[i](k, 0) = s[i];
  }
  return out;
}

cplx BetheVector::pairing(const Vector& xi, const std::vector<int>& digits) const {
  return partition_sum(brackets(xi, 0), cfg_.roots(), digits, xi, 0).value();
}

VectorFunction BetheVector::as_function() const {
  const BetheVector self = *this;
  return [self](const Vector& xi, int order) { return self.on_zero_weight(xi, order); };
}

ZetaBar zeta_bar(const BetheConfig& cfg, const Vector& t, const Matrix& h, cplx u) {
  const GaudinProblem& p = cfg.problem;
  const RootSystem& rs = p.roots();
  const ModularData& md = p.modulus();
  ZetaBar out{0.0, 0.0};
  for (const Site& s : p.sites()) {
    const cplx c = rs.evaluate(s.module.highest_weight(), h);
    if (c == cplx{}) continue;
    const Series z = zeta11(s.z - u, md, 1);
    out.value += c * z[0];
    out.du -= c * z[1];
  }
  for (int j = 0; j < cfg.roots(); ++j) {
    const cplx c = rs.evaluate(cfg.simple_weight(j), h);
    if (c == cplx{}) continue;
    const Series z = zeta11(t[j] - u, md, 1);
    out.value -= c * z[0];
    out.du += c * z[1];
  }
  return out;
}

cplx eigenvalue_tau_psi(const BetheConfig& cfg, const Vector& t, cplx u) {
  const RootSystem& rs = cfg.problem.roots();
  cplx total = 0.0;
  for (const Matrix& h : rs.cartan_basis()) {
    const cplx zb = zeta_bar(cfg, t, h, u).value;
    total += 0.5 * zb * zb;
  }
  return total + zeta_bar(cfg, t, rs.cartan_of(rs.rho()), u).du;
}

EigenReport verify_eigenvector(const BetheConfig& cfg, const Vector& t, const std::vector<cplx>& us,
                               const std::vector<Vector>& hs) {
  const GaudinProblem& p = cfg.problem;
  for (const Site& s : p.sites()) {
    if (s.module.kind() != ModuleKind::Irreducible && s.module.depth() < cfg.roots() + p.rank()) {
      throw JetOrderError("dual Verma depth " + std::to_string(s.module.depth()) + " too small for " +
                          std::to_string(cfg.roots()) + " Bethe roots");
    }
  }
  const BetheVector psi(cfg, t);
  EigenReport rep;
  std::vector<std::pair<Vector, MatrixJet>> psi_at;
  for (const Vector& xi : hs) psi_at.emplace_back(xi, psi.on_zero_weight(xi, 2));
  for (cplx u : us) {
    const DiffOperator tau = build_transfer(p, u);
    const cplx ev = eigenvalue_tau_psi(cfg, t, u);
    for (const auto& [xi, jet] : psi_at) {
      EigenSample s;
      s.xi = xi;
      s.u = u;
      const Vector value = jet.value().col(0);
      s.psi_norm = value.size() == 0 ? 0.0 : value.cwiseAbs().maxCoeff();
      if (s.psi_norm < 1e-14) {
        s.inconclusive = true;
        ++rep.inconclusive;
      } else {
        const Vector lhs = facegaudin::apply(tau.at(xi, 0), jet);
        s.residual = (lhs - ev * value).cwiseAbs().maxCoeff() / s.psi_norm;
        rep.residual = std::max(rep.residual, s.residual);
      }
      rep.samples.push_back(std::move(s));
    }
  }
  return rep;
}

}  // namespace facegaudin
