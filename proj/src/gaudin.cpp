#include "facegaudin/gaudin.hpp"

#include <cmath>
#include <sstream>

namespace facegaudin {

GaudinProblem::GaudinProblem(RootSystem rs, ModularData md, std::vector<Site> sites)
    : rs_(std::move(rs)), md_(std::move(md)), sites_(std::move(sites)) {
  if (sites_.empty()) throw std::invalid_argument("a Gaudin problem needs at least one site");
  const int n = site_count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (nearest_lattice_point(sites_[i].z - sites_[j].z, md_).distance < 1e-9) {
        std::ostringstream os;
        os << "sites " << i + 1 << " and " << j + 1 << " coincide mod lattice";
        throw DomainError(os.str());
      }
    }
  }
  std::vector<RepresentedModule> mods;
  for (const auto& s : sites_) mods.push_back(s.module);
  space_ = zero_weight_basis(mods);

  const int l = rank();
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < l; ++r) {
      const Matrix full = space_.embed(i, dual_action(sites_[i].module, rs_.cartan_basis()[r]));
      cartan_ops_.push_back(space_.restrict_to_zero(full));
    }
  }
  // rho*_j(e_{-a}) rho*_i(e_a) = R_j(e_{-a})^T R_i(e_a)^T with R the embedded actions on V
  const int nroots = static_cast<int>(rs_.roots().size());
  std::vector<Matrix> embedded;  // [i * nroots + alpha], transposed already
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < nroots; ++a) embedded.push_back(space_.embed(i, sites_[i].module.root_op(a)).transpose());
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < nroots; ++a) {
        const Matrix& ri = embedded[static_cast<std::size_t>(i * nroots + a)];
        const Matrix& rj = embedded[static_cast<std::size_t>(j * nroots + rs_.negative_of(a))];
        pair_ops_.push_back(space_.restrict_to_zero(rj * ri));
      }
    }
  }
}

const Matrix& GaudinProblem::cartan_op(int i, int r) const {
  return cartan_ops_[static_cast<std::size_t>(i * rank() + r)];
}

const Matrix& GaudinProblem::pair_op(int i, int j, int alpha) const {
  const int nroots = static_cast<int>(rs_.roots().size());
  return pair_ops_[static_cast<std::size_t>((i * site_count() + j) * nroots + alpha)];
}

void GaudinProblem::check_in_S(const Vector& xi) const {
  if (xi.size() != rank()) throw std::invalid_argument("H needs one coordinate per Cartan direction");
  for (int idx : rs_.positive_roots()) {
    const cplx a = (rs_.root(idx).on_basis.transpose() * xi)(0);
    if (std::abs(a - std::round(a.real())) < kSTolerance) {
      std::ostringstream os;
      os << "H outside S: alpha(H) = " << format_complex(a) << " is an integer";
      throw DomainError(os.str());
    }
  }
}

void GaudinProblem::check_spectral(cplx u) const {
  for (int i = 0; i < site_count(); ++i) {
    if (nearest_lattice_point(sites_[i].z - u, md_).distance < 1e-9) {
      std::ostringstream os;
      os << "spectral parameter u = " << format_complex(u) << " hits site " << i + 1 << " mod lattice";
      throw DomainError(os.str());
    }
  }
}

ScalarJet along_weight(const Series& f, const Vector& mu_on_basis, const Vector& xi, int order) {
  const cplx c0 = (mu_on_basis.transpose() * xi)(0);
  return compose(f, affine_jet(xi, order, c0, mu_on_basis));
}

Matrix connection_matrix(const GaudinProblem& p, int r, cplx u) {
  p.check_spectral(u);
  Matrix a = Matrix::Zero(p.dim(), p.dim());
  for (int i = 0; i < p.site_count(); ++i) a += zeta11_value(p.sites()[i].z - u, p.modulus()) * p.cartan_op(i, r);
  return a;
}

DiffOperator build_nabla(const GaudinProblem& p, int r, cplx u) {
  const int l = p.rank();
  return DiffOperator::partial(l, p.dim(), r) - DiffOperator::constant(l, connection_matrix(p, r, u));
}

MatrixJet transfer_potential(const GaudinProblem& p, cplx u, const Vector& xi, int order) {
  p.check_in_S(xi);
  const RootSystem& rs = p.roots();
  const int n = p.site_count();
  const int d = p.dim();
  MatrixJet out(xi, order, Matrix::Zero(d, d));
  for (int a = 0; a < static_cast<int>(rs.roots().size()); ++a) {
    const Vector& on = rs.root(a).on_basis;
    const cplx c0 = (on.transpose() * xi)(0);
    std::vector<ScalarJet> plus;
    std::vector<ScalarJet> minus;
    for (int i = 0; i < n; ++i) {
      const cplx x = p.sites()[i].z - u;
      plus.push_back(along_weight(w(c0, x, p.modulus(), order, 0).in_c(), on, xi, order));
      minus.push_back(along_weight(w(-c0, x, p.modulus(), order, 0).in_c(), -on, xi, order));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Matrix& m = p.pair_op(i, j, a);
        if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) continue;
        out += scale_matrix(plus[i] * minus[j], 0.5 * m);
      }
    }
  }
  return out;
}

DiffOperator build_transfer(const GaudinProblem& p, cplx u) {
  p.check_spectral(u);
  const int l = p.rank();
  const int d = p.dim();
  DiffOperator lap = DiffOperator::zero(l, d);
  for (int r = 0; r < l; ++r) {
    const DiffOperator nabla = build_nabla(p, r, u);
    lap = lap + 0.5 * compose(nabla, nabla);
  }
  const DiffOperator pot = DiffOperator::multiplication(
      l, d, kMaxEllipticOrder, [p, u](const Vector& xi, int k) { return transfer_potential(p, u, xi, k); });
  return lap + pot;
}

namespace {

// log(e^{pi i c} - e^{-pi i c}) as a series in c
Series log_sine_factor(cplx c0, int order) {
  const cplx e = std::exp(kI * kPi * c0);
  const Series s = e * exp_linear(c0, kI * kPi, order) - (1.0 / e) * exp_linear(c0, -kI * kPi, order);
  return log(s);
}

// q^n e^{2 pi i c} as a series in c
Series shifted_exponential(cplx qn, cplx c0, int order) {
  return (qn * std::exp(2.0 * kPi * kI * c0)) * exp_linear(c0, 2.0 * kPi * kI, order);
}

// the products stop once |q^n| max(1, |x|) drops below eps
int product_terms(const ModularData& md, double x_abs) {
  const double qa = std::abs(md.q());
  const double target = md.eps_term() / std::max(1.0, x_abs);
  int n = 1;
  double qn = qa;
  while (qn >= target) {
    if (++n > 10 * md.n_max()) {
      throw ConvergenceError("Weyl-Kac q-product did not converge (|q| too close to 1)");
    }
    qn *= qa;
  }
  return n;
}

}  // namespace

WeylKacPi weyl_kac_pi(const Vector& xi, const ModularData& md, const RootSystem& rs, int order) {
  for (int idx : rs.positive_roots()) {
    const cplx a = (rs.root(idx).on_basis.transpose() * xi)(0);
    if (std::abs(a - std::round(a.real())) < GaudinProblem::kSTolerance) {
      throw DomainError("H outside S: a positive root takes the integer value " + format_complex(a));
    }
  }
  const cplx q = md.q();
  const int l = rs.rank();
  const double dimg = rs.dimension();

  // H-independent parts
  cplx log_const = 2.0 * kPi * kI * md.tau() * dimg / 24.0;
  cplx dtau_const = 2.0 * kPi * kI * dimg / 24.0;
  {
    const int nt = product_terms(md, 1.0);
    cplx qn = 1.0;
    for (int n = 1; n <= nt; ++n) {
      qn *= q;
      log_const += static_cast<double>(l) * std::log(1.0 - qn);
      dtau_const -= 2.0 * kPi * kI * static_cast<double>(l) * static_cast<double>(n) * qn / (1.0 - qn);
    }
  }
  ScalarJet log_jet = ScalarJet::constant(xi, order, log_const);
  ScalarJet dtau_jet = ScalarJet::constant(xi, order, dtau_const);

  for (int idx : rs.positive_roots()) {
    const Vector& on = rs.root(idx).on_basis;
    const cplx c0 = (on.transpose() * xi)(0);
    log_jet += along_weight(log_sine_factor(c0, order), on, xi, order);
  }
  for (const Root& root : rs.roots()) {
    const cplx c0 = (root.on_basis.transpose() * xi)(0);
    const int nt = product_terms(md, std::abs(std::exp(2.0 * kPi * kI * c0)));
    Series log_sum(c0, order);
    Series dtau_sum(c0, order);
    cplx qn = 1.0;
    for (int n = 1; n <= nt; ++n) {
      qn *= q;
      const Series y = shifted_exponential(qn, c0, order);
      const Series one_minus = Series::constant(c0, 1.0, order) - y;
      if (std::abs(one_minus.value()) < kPoleFloor) throw DomainError("H hits a zero of the Weyl-Kac denominator");
      log_sum = log_sum + log(one_minus);
      dtau_sum = dtau_sum - (2.0 * kPi * kI * static_cast<double>(n)) * (y / one_minus);
    }
    log_jet += along_weight(log_sum, root.on_basis, xi, order);
    dtau_jet += along_weight(dtau_sum, root.on_basis, xi, order);
  }
  return {std::exp(log_jet.value()), std::move(log_jet), std::move(dtau_jet)};
}

DiffOperator conjugate(const DiffOperator& d, std::function<ScalarJet(const Vector&, int)> f, int max_jet) {
  const int l = d.vars();
  const int dim = d.dim();
  const Matrix id = Matrix::Identity(dim, dim);
  const DiffOperator mul = DiffOperator::multiplication(l, dim, max_jet, [f, id](const Vector& xi, int k) {
    return scale_matrix(f(xi, k), id);
  });
  const DiffOperator inv = DiffOperator::multiplication(l, dim, max_jet, [f, id](const Vector& xi, int k) {
    return scale_matrix(reciprocal(f(xi, k)), id);
  });
  return compose(inv, compose(d, mul));
}

DiffOperator build_tilde_transfer(const GaudinProblem& p, cplx u, TildeRoute route) {
  const DiffOperator tau = build_transfer(p, u);
  const RootSystem rs = p.roots();
  const ModularData md = p.modulus();
  constexpr int kPiJet = 2 * kMaxEllipticOrder;
  if (route == TildeRoute::Conjugation) {
    return conjugate(
        tau, [rs, md](const Vector& xi, int k) { return exp(weyl_kac_pi(xi, md, rs, k).log_jet); }, kPiJet);
  }
  const int l = p.rank();
  const int d = p.dim();
  const Matrix id = Matrix::Identity(d, d);
  DiffOperator out = tau;
  for (int r = 0; r < l; ++r) {
    const DiffOperator g = DiffOperator::multiplication(l, d, kPiJet - 1, [rs, md, id, r](const Vector& xi, int k) {
      return scale_matrix(weyl_kac_pi(xi, md, rs, k + 1).log_jet.derivative(r), id);
    });
    out = out + compose(g, build_nabla(p, r, u));
  }
  const cplx hv = static_cast<double>(rs.dual_coxeter());
  const DiffOperator heat = DiffOperator::multiplication(l, d, kPiJet, [rs, md, id, hv](const Vector& xi, int k) {
    return scale_matrix(weyl_kac_pi(xi, md, rs, k).dtau_log_jet, 2.0 * kPi * kI * hv * id);
  });
  return out + heat;
}

CommutatorReport commutativity_residual(const GaudinProblem& p, cplx u, cplx u_prime, const std::vector<Vector>& samples) {
  const DiffOperator a = build_transfer(p, u);
  const DiffOperator b = build_transfer(p, u_prime);
  const DiffOperator c = commutator(a, b);
  CommutatorReport rep;
  for (const Vector& xi : samples) {
    const OperatorJet cj = c.at(xi, 0);
    CommutatorSample s;
    s.xi = xi;
    s.scale = a.at(xi, 0).max_abs_value() * b.at(xi, 0).max_abs_value();
    const MultiIndexSet& sym = cj.symbols();
    for (int i = 0; i < sym.size(); ++i) {
      const double v = cj[i].value().size() == 0 ? 0.0 : cj[i].value().cwiseAbs().maxCoeff();
      const double rel = s.scale > 0.0 ? v / s.scale : v;
      s.residual = std::max(s.residual, rel);
      if (sym.degree(i) >= 3) s.top_residual = std::max(s.top_residual, rel);
    }
    rep.residual = std::max(rep.residual, s.residual);
    rep.top_residual = std::max(rep.top_residual, s.top_residual);
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

Sampler::Sampler(std::uint64_t seed, double box, double im_box, double guard)
    : rng_(seed), box_(box), im_box_(im_box), guard_(guard) {}

Vector Sampler::sample_H(const RootSystem& rs, const std::vector<Weight>& extra_avoid) {
  std::uniform_real_distribution<double> re(-box_, box_);
  std::uniform_real_distribution<double> im(-im_box_, im_box_);
  std::vector<Vector> avoid;
  for (const Root& r : rs.roots()) avoid.push_back(r.on_basis);
  for (const Weight& mu : extra_avoid) avoid.push_back(rs.on_basis(mu));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Vector xi(rs.rank());
    for (int r = 0; r < rs.rank(); ++r) {
      const double x = re(rng_);
      const double y = im(rng_);
      xi[r] = cplx(x, y);
    }
    bool ok = true;
    for (const Vector& on : avoid) {
      const cplx a = (on.transpose() * xi)(0);
      if (std::abs(a - std::round(a.real())) < guard_) {
        ok = false;
        break;
      }
    }
    if (ok) return xi;
  }
  throw ConvergenceError("could not place a sample point in S; shrink the guard radius");
}

cplx Sampler::sample_u(const ModularData& md, const std::vector<cplx>& avoid) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double x = unit(rng_);
    const double y = unit(rng_);
    const cplx u = x + y * md.tau();
    bool ok = true;
    for (cplx a : avoid) {
      if (nearest_lattice_point(u - a, md).distance < guard_) {
        ok = false;
        break;
      }
    }
    if (ok) return u;
  }
  throw ConvergenceError("could not place a spectral parameter away from the sites");
}

}  // namespace facegaudin
