#include <doctest.h>

#include <cmath>

#include "facegaudin/gaudin.hpp"
#include "model_oracles.hpp"
#include "oracles.hpp"

using namespace facegaudin;

namespace {

const ModularData kMd(cplx(0.1, 0.9));

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double rel_diff(const Matrix& a, const Matrix& b) {
  return max_abs(a - b) / std::max(1e-300, std::max(max_abs(a), max_abs(b)));
}

RepresentedModule trivial(const RootSystem& rs) { return build_irrep(rs, Vector::Zero(rs.rank())); }

Vector labels(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

GaudinProblem instance_a(const ModularData& md = kMd) {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 1);
  const RepresentedModule f = build_irrep(rs, labels({1}));
  return {rs, md, {{cplx(0.1, 0.05), f}, {cplx(0.55, 0.3), f}}};
}

GaudinProblem instance_b() {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 1);
  const RepresentedModule f = build_irrep(rs, labels({1}));
  return {rs, kMd, {{cplx(0.1, 0.05), f}, {cplx(0.45, 0.2), f}, {cplx(0.8, 0.6), build_irrep(rs, labels({2}))}}};
}

GaudinProblem instance_c() {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 2);
  return {rs, kMd, {{cplx(0.12, 0.07), build_irrep(rs, labels({1, 0}))}, {cplx(0.6, 0.35), build_irrep(rs, labels({0, 1}))}}};
}

std::vector<cplx> site_points(const GaudinProblem& p) {
  std::vector<cplx> out;
  for (const Site& s : p.sites()) out.push_back(s.z);
  return out;
}

}  // namespace

TEST_CASE("coincident sites are rejected") {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 1);
  const RepresentedModule f = build_irrep(rs, labels({1}));
  try {
    GaudinProblem(rs, kMd, {{cplx(0.2, 0.1), f}, {cplx(1.2, 0.1) + kMd.tau(), f}});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("coincide mod lattice") != std::string::npos);
  }
}

TEST_CASE("H outside S and u on a site are reported") {
  const GaudinProblem p = instance_a();
  Vector xi(1);
  xi << cplx(1.0 / std::sqrt(2.0), 0.0);  // alpha(H) = 1
  CHECK_THROWS_AS(p.check_in_S(xi), DomainError);
  CHECK_THROWS_AS(build_transfer(p, p.sites()[0].z + 1.0), DomainError);
  const DiffOperator tau = build_transfer(p, cplx(0.3, 0.4));
  CHECK_THROWS_AS(static_cast<void>(tau.at(xi, 0)), DomainError);
}

TEST_CASE("trivial modules give the flat Laplacian") {
  for (int rank : {1, 2}) {
    const RootSystem rs = RootSystem::build(AlgebraSeries::A, rank);
    const GaudinProblem p(rs, kMd, {{cplx(0.1, 0.2), trivial(rs)}, {cplx(0.5, 0.1), trivial(rs)}});
    REQUIRE(p.dim() == 1);
    Sampler s(1);
    const Vector xi = s.sample_H(rs);
    const OperatorJet nabla = build_nabla(p, 0, cplx(0.3, 0.4)).at(xi, 0);
    CHECK(max_abs(nabla[0].value()) == 0.0);
    const OperatorJet tau = build_transfer(p, cplx(0.3, 0.4)).at(xi, 1);
    const MultiIndexSet& sym = tau.symbols();
    for (int i = 0; i < sym.size(); ++i) {
      const MultiIndex& beta = sym.at(i);
      cplx expected = 0.0;
      for (int r = 0; r < rank; ++r) {
        if (beta[static_cast<std::size_t>(r)] == 2 && sym.degree(i) == 2) expected = 0.5;
      }
      CHECK(std::abs(tau[i].value()(0, 0) - expected) == 0.0);
    }
  }
}

TEST_CASE("nabla has a constant connection matrix built from the site weights") {
  const GaudinProblem p = instance_a();
  const cplx u(0.3, 0.4);
  const Vector xi = Sampler(2).sample_H(p.roots());
  const OperatorJet nab = build_nabla(p, 0, u).at(xi, 3);
  // zeroth-order coefficient: -sum_i zeta(z_i - u) mu_i(h), with mu_i = +-1/sqrt2 on e1/e2
  const double s = 1.0 / std::sqrt(2.0);
  const cplx z1 = zeta11_value(p.sites()[0].z - u, kMd);
  const cplx z2 = zeta11_value(p.sites()[1].z - u, kMd);
  for (int k = 0; k < p.dim(); ++k) {
    const std::vector<int> d = p.space().digits(p.space().zero_index(k));
    const cplx expected = -((d[0] == 0 ? s : -s) * z1 + (d[1] == 0 ? s : -s) * z2);
    CHECK(std::abs(nab[0].value()(k, k) - expected) <= 1e-13 * std::abs(expected));
  }
  for (int j = 1; j < nab[0].size(); ++j) CHECK(max_abs(nab[0][j]) == 0.0);
}

TEST_CASE("transfer matrix matches a straight-line dense evaluation") {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 1);
  const RepresentedModule f = model_oracle::hand_fund(rs);
  const std::vector<cplx> zs{cplx(0.1, 0.05), cplx(0.55, 0.3)};
  const GaudinProblem p(rs, kMd, {{zs[0], f}, {zs[1], f}});
  REQUIRE(p.dim() == 2);

  // full 4x4 actions on C2 (x) C2, product index 2 * d0 + d1
  Matrix e = Matrix::Zero(2, 2), fm = Matrix::Zero(2, 2), h = Matrix::Zero(2, 2);
  e(0, 1) = 1.0;
  fm(1, 0) = 1.0;
  h(0, 0) = 1.0 / std::sqrt(2.0);
  h(1, 1) = -1.0 / std::sqrt(2.0);
  auto on = [](int site, const Matrix& m) {
    Matrix out = Matrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          if (site == 0) out(2 * a + c, 2 * b + c) = m(a, b);
          else out(2 * c + a, 2 * c + b) = m(a, b);
        }
    return out;
  };
  std::vector<int> zero;
  for (int k = 0; k < p.dim(); ++k) {
    const std::vector<int> d = p.space().digits(p.space().zero_index(k));
    zero.push_back(2 * d[0] + d[1]);
  }
  auto restrict = [&](const Matrix& m) {
    Matrix out(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out(a, b) = m(zero[static_cast<std::size_t>(a)], zero[static_cast<std::size_t>(b)]);
    return out;
  };

  Sampler s(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector xi = s.sample_H(rs);
    const cplx u = s.sample_u(kMd, zs);
    const cplx a = std::sqrt(2.0) * xi[0];
    Matrix conn = Matrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i) conn += zeta11_value(zs[static_cast<std::size_t>(i)] - u, kMd) * on(i, h).transpose();
    Matrix pot = Matrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const cplx xi_ = zs[static_cast<std::size_t>(i)] - u;
        const cplx xj = zs[static_cast<std::size_t>(j)] - u;
        // alpha = +: rho*_j(f) rho*_i(e);  alpha = -: rho*_j(e) rho*_i(f)
        pot += 0.5 * w_value(a, xi_, kMd) * w_value(-a, xj, kMd) * on(j, fm).transpose() * on(i, e).transpose();
        pot += 0.5 * w_value(-a, xi_, kMd) * w_value(a, xj, kMd) * on(j, e).transpose() * on(i, fm).transpose();
      }
    }
    const Matrix c = restrict(conn);
    const Matrix d0 = 0.5 * c * c + restrict(pot);
    const Matrix d1 = -c;

    const OperatorJet tau = build_transfer(p, u).at(xi, 0);
    MultiIndex b0{0}, b1{1}, b2{2};
    CHECK(rel_diff(tau.coeff(b0).value(), d0) <= 1e-12);
    CHECK(rel_diff(tau.coeff(b1).value(), d1) <= 1e-12);
    CHECK(rel_diff(tau.coeff(b2).value(), 0.5 * Matrix::Identity(2, 2)) <= 1e-15);
  }
}

TEST_CASE("library and hand-built fundamental give the same transfer matrix") {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 1);
  const GaudinProblem lib = instance_a();
  const GaudinProblem hand(rs, kMd, {{lib.sites()[0].z, model_oracle::hand_fund(rs)}, {lib.sites()[1].z, model_oracle::hand_fund(rs)}});
  const Vector xi = Sampler(8).sample_H(rs);
  const OperatorJet a = build_transfer(lib, cplx(0.3, 0.4)).at(xi, 2);
  const OperatorJet b = build_transfer(hand, cplx(0.3, 0.4)).at(xi, 2);
  for (int i = 0; i < a.symbols().size(); ++i) {
    for (int j = 0; j < a[i].size(); ++j) CHECK(max_abs(a[i][j] - b[i][j]) <= 1e-12 * (1.0 + max_abs(a[i][j])));
  }
}

TEST_CASE("potential jets agree with finite differences in H") {
  const GaudinProblem p = instance_c();
  Sampler s(9);
  const cplx u = s.sample_u(kMd, site_points(p));
  for (int trial = 0; trial < 5; ++trial) {
    const Vector xi = s.sample_H(p.roots());
    const MatrixJet v = transfer_potential(p, u, xi, 2);
    for (int r = 0; r < p.rank(); ++r) {
      const double h = 1e-5;
      Vector xp = xi, xm = xi;
      xp[r] += h;
      xm[r] -= h;
      const Matrix fd = (transfer_potential(p, u, xp, 0).value() - transfer_potential(p, u, xm, 0).value()) / (2.0 * h);
      MultiIndex e(static_cast<std::size_t>(p.rank()), 0);
      e[static_cast<std::size_t>(r)] = 1;
      CHECK(rel_diff(v.partial(e), fd) <= 1e-6);
    }
  }
}

TEST_CASE("transfer matrix is periodic under u -> u + 1") {
  for (const GaudinProblem& p : {instance_a(), instance_c()}) {
    Sampler s(13);
    const Vector xi = s.sample_H(p.roots());
    const cplx u = s.sample_u(kMd, site_points(p));
    const OperatorJet a = build_transfer(p, u).at(xi, 0);
    const OperatorJet b = build_transfer(p, u + 1.0).at(xi, 0);
    for (int i = 0; i < a.symbols().size(); ++i) CHECK(rel_diff(a[i].value(), b[i].value()) <= 1e-10);
  }
}

TEST_CASE("swapping identical sites conjugates by the factor swap") {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 1);
  const RepresentedModule f = build_irrep(rs, labels({1}));
  const cplx z1(0.1, 0.05), z2(0.55, 0.3);
  const GaudinProblem p(rs, kMd, {{z1, f}, {z2, f}});
  const GaudinProblem q(rs, kMd, {{z2, f}, {z1, f}});
  // permutation on V*(0): digits (a, b) -> (b, a)
  Matrix perm = Matrix::Zero(p.dim(), p.dim());
  for (int k = 0; k < p.dim(); ++k) {
    const std::vector<int> d = p.space().digits(p.space().zero_index(k));
    const int swapped = p.space().compose_index({d[1], d[0]});
    for (int m = 0; m < q.dim(); ++m) {
      if (q.space().zero_index(m) == swapped) perm(m, k) = 1.0;
    }
  }
  Sampler s(17);
  const Vector xi = s.sample_H(rs);
  const cplx u = s.sample_u(kMd, {z1, z2});
  const OperatorJet a = build_transfer(p, u).at(xi, 0);
  const OperatorJet b = build_transfer(q, u).at(xi, 0);
  for (int i = 0; i < a.symbols().size(); ++i) {
    CHECK(max_abs(perm * a[i].value() * perm.transpose() - b[i].value()) <= 1e-12 * (1.0 + max_abs(a[i].value())));
  }
}

TEST_CASE("Weyl-Kac denominator: parity, log-derivatives and small-q limit") {
  const ModularData md(cplx(0.2, 0.8));
  for (int rank : {1, 2}) {
    const RootSystem rs = RootSystem::build(AlgebraSeries::A, rank);
    Sampler s(21);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector xi = s.sample_H(rs);
      const cplx plus = weyl_kac_pi(xi, md, rs, 0).value;
      const cplx minus = weyl_kac_pi(-xi, md, rs, 0).value;
      const double sign = rs.positive_roots().size() % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::abs(minus / plus - sign) <= 1e-12);

      const WeylKacPi pi = weyl_kac_pi(xi, md, rs, 2);
      CHECK(std::abs(std::exp(pi.log_jet.value()) - pi.value) <= 1e-14 * std::abs(pi.value));
      for (int r = 0; r < rank; ++r) {
        auto along = [&](cplx x) {
          Vector p = xi;
          p[r] = x;
          return weyl_kac_pi(p, md, rs, 0).value;
        };
        const double h = 1e-5;
        const cplx fd = std::log(along(xi[r] + h) / along(xi[r] - h)) / (2.0 * h);
        MultiIndex e(static_cast<std::size_t>(rank), 0);
        e[static_cast<std::size_t>(r)] = 1;
        CHECK(std::abs(pi.log_jet.partial(e) - fd) <= 1e-6 * std::abs(fd));
        e[static_cast<std::size_t>(r)] = 2;
        const cplx fd2 = oracle::fd2([&](cplx x) { return std::log(along(x) / along(xi[r])); }, xi[r], 1e-4);
        CHECK(std::abs(pi.log_jet.partial(e) - fd2) <= 1e-6 * std::abs(fd2));
      }
      // d/dtau log Pi against a difference quotient in the modulus
      const double h = 1e-5;
      const cplx fdt = std::log(weyl_kac_pi(xi, ModularData(md.tau() + h), rs, 0).value /
                                weyl_kac_pi(xi, ModularData(md.tau() - h), rs, 0).value) /
                       (2.0 * h);
      CHECK(std::abs(pi.dtau_log_jet.value() - fdt) <= 1e-6 * std::abs(fdt));
    }

    // q -> 0: Pi q^{-dim g/24} tends to the product of sine factors
    const ModularData tiny = ModularData::from_nome(1e-12);
    const Vector xi = s.sample_H(rs);
    cplx product = 1.0;
    for (int idx : rs.positive_roots()) {
      const cplx a = (rs.root(idx).on_basis.transpose() * xi)(0);
      product *= std::exp(kI * kPi * a) - std::exp(-kI * kPi * a);
    }
    const cplx pi = weyl_kac_pi(xi, tiny, rs, 0).value * std::exp(-2.0 * kPi * kI * tiny.tau() * (rs.dimension() / 24.0));
    CHECK(std::abs(pi - product) <= 1e-8 * std::abs(product));
  }
}

TEST_CASE("conjugation by the constant 1 returns the transfer matrix") {
  const GaudinProblem p = instance_a();
  const cplx u(0.3, 0.4);
  const DiffOperator tau = build_transfer(p, u);
  const DiffOperator same = conjugate(tau, [](const Vector& xi, int k) { return ScalarJet::constant(xi, k, 1.0); }, 8);
  const Vector xi = Sampler(3).sample_H(p.roots());
  const OperatorJet a = tau.at(xi, 1);
  const OperatorJet b = same.at(xi, 1);
  for (int i = 0; i < a.symbols().size(); ++i) {
    for (int j = 0; j < a[i].size(); ++j) CHECK(max_abs(a[i][j] - b[i][j]) == 0.0);
  }
}

TEST_CASE("explicit tilde-tau equals Pi^-1 tau Pi, not Pi tau Pi^-1") {
  const GaudinProblem p = instance_a();
  Sampler s(31);
  double worst = 0.0;
  double literal_best = 1e300;
  for (int trial = 0; trial < 10; ++trial) {
    const Vector xi = s.sample_H(p.roots());
    const cplx u = s.sample_u(kMd, site_points(p));
    const OperatorJet a = build_tilde_transfer(p, u, TildeRoute::Conjugation).at(xi, 0);
    const OperatorJet b = build_tilde_transfer(p, u, TildeRoute::Explicit).at(xi, 0);
    const RootSystem rs = p.roots();
    const DiffOperator literal = conjugate(
        build_transfer(p, u), [rs](const Vector& x, int k) { return exp(-1.0 * weyl_kac_pi(x, kMd, rs, k).log_jet); }, 16);
    const OperatorJet c = literal.at(xi, 0);
    const int n = std::max(a.symbols().size(), b.symbols().size());
    double diff = 0.0;
    double lit = 0.0;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
      const Matrix av = i < a.symbols().size() ? a[i].value() : Matrix::Zero(p.dim(), p.dim());
      const Matrix bv = i < b.symbols().size() ? b[i].value() : Matrix::Zero(p.dim(), p.dim());
      const Matrix cv = i < c.symbols().size() ? c[i].value() : Matrix::Zero(p.dim(), p.dim());
      diff = std::max(diff, max_abs(av - bv));
      lit = std::max(lit, max_abs(cv - bv));
      scale = std::max(scale, max_abs(bv));
    }
    worst = std::max(worst, diff / scale);
    literal_best = std::min(literal_best, lit / scale);
  }
  CHECK(worst <= 1e-6);
  CHECK(literal_best > 1e-2);
}

TEST_CASE("commutator of tau(u) with itself and with trivial modules vanishes") {
  const GaudinProblem p = instance_a();
  Sampler s(41);
  std::vector<Vector> xs{s.sample_H(p.roots()), s.sample_H(p.roots())};
  const cplx u = s.sample_u(kMd, site_points(p));
  const CommutatorReport same = commutativity_residual(p, u, u, xs);
  CHECK(same.residual == 0.0);

  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 2);
  const GaudinProblem t(rs, kMd, {{cplx(0.1, 0.2), trivial(rs)}, {cplx(0.4, 0.3), trivial(rs)}});
  const CommutatorReport flat = commutativity_residual(t, cplx(0.3, 0.5), cplx(0.7, 0.1), {s.sample_H(rs)});
  CHECK(flat.residual == 0.0);
}

TEST_CASE("tau(u) and tau(u') commute on the three test instances") {
  int which = 0;
  for (const GaudinProblem& p : {instance_a(), instance_b(), instance_c()}) {
    CAPTURE(which);
    Sampler s(100 + static_cast<std::uint64_t>(which++));
    double worst = 0.0;
    double top = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
      const cplx u = s.sample_u(kMd, site_points(p));
      std::vector<cplx> avoid = site_points(p);
      avoid.push_back(u);
      const cplx v = s.sample_u(kMd, avoid);
      const CommutatorReport rep = commutativity_residual(p, u, v, {s.sample_H(p.roots())});
      worst = std::max(worst, rep.residual);
      top = std::max(top, rep.top_residual);
    }
    CHECK(worst <= 1e-8);
    CHECK(top <= 1e-12);
  }
}

TEST_CASE("a broken potential is caught by the commutator check") {
  // dropping the cross-site terms breaks commutativity
  const GaudinProblem p = instance_a();
  const cplx u(0.3, 0.4), v(0.7, 0.15);
  auto broken = [&](cplx uu) {
    const int l = p.rank();
    const int d = p.dim();
    DiffOperator lap = 0.5 * compose(build_nabla(p, 0, uu), build_nabla(p, 0, uu));
    const DiffOperator pot = DiffOperator::multiplication(l, d, kMaxEllipticOrder, [&p, uu](const Vector& xi, int k) {
      const RootSystem& rs = p.roots();
      MatrixJet out(xi, k, Matrix::Zero(p.dim(), p.dim()));
      for (int a = 0; a < static_cast<int>(rs.roots().size()); ++a) {
        const Vector& on = rs.root(a).on_basis;
        const cplx c0 = (on.transpose() * xi)(0);
        for (int i = 0; i < p.site_count(); ++i) {
          const cplx x = p.sites()[static_cast<std::size_t>(i)].z - uu;
          const ScalarJet wp = along_weight(w(c0, x, p.modulus(), k, 0).in_c(), on, xi, k);
          const ScalarJet wm = along_weight(w(-c0, x, p.modulus(), k, 0).in_c(), -on, xi, k);
          out += scale_matrix(wp * wm, 0.5 * p.pair_op(i, i, a));
        }
      }
      return out;
    });
    return lap + pot;
  };
  const DiffOperator c = commutator(broken(u), broken(v));
  const Vector xi = Sampler(4).sample_H(p.roots());
  const OperatorJet cj = c.at(xi, 0);
  const double scale = broken(u).at(xi, 0).max_abs_value() * broken(v).at(xi, 0).max_abs_value();
  CHECK(cj.max_abs_value() / scale > 1e-4);
}

TEST_CASE("small nome potential approaches its trigonometric limit") {
  Sampler s(55);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector xi = s.sample_H(RootSystem::build(AlgebraSeries::A, 1));
    const cplx u = s.sample_u(ModularData(cplx(0.0, 0.3)), {cplx(0.1, 0.05), cplx(0.55, 0.3)});
    CHECK(model_oracle::trig_potential_error(xi, u) <= 1e-6);
  }
}
