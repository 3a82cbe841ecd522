#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "facegaudin/bethe.hpp"
#include "model_oracles.hpp"
#include "oracles.hpp"

using namespace facegaudin;

namespace {

const ModularData kMd(cplx(0.1, 0.9));
const cplx kC(0.37, 0.11);
const cplx kZ1(0.1, 0.05);
const cplx kZ2(0.55, 0.3);

const RootSystem& a1() {
  static const RootSystem rs = RootSystem::build(AlgebraSeries::A, 1);
  return rs;
}

Weight alpha(const RootSystem& rs, int i) { return rs.root(rs.simple_root(i)).weight; }

BetheConfig verma_pair(const Weight& l1, const Weight& l2, std::vector<int> assignment, int depth = -1) {
  const RootSystem& rs = a1();
  const int m = static_cast<int>(assignment.size());
  const int d = depth < 0 ? default_verma_depth(rs, m) : depth;
  return {GaudinProblem(rs, kMd, {{kZ1, build_dual_verma(rs, l1, d)}, {kZ2, build_dual_verma(rs, l2, d)}}),
          std::move(assignment)};
}

BetheConfig instance_m1() { return verma_pair(kC * alpha(a1(), 0), (1.0 - kC) * alpha(a1(), 0), {0}); }
BetheConfig instance_m2() { return verma_pair(2.0 * kC * alpha(a1(), 0), (2.0 - 2.0 * kC) * alpha(a1(), 0), {0, 0}); }

Weight omega(const RootSystem& rs) { return rs.weight_from_dynkin(Vector::Ones(1)); }

double lattice_distance(cplx a, cplx b) { return nearest_lattice_point(a - b, kMd).distance; }

std::vector<cplx> avoid_points(const BetheConfig& cfg, const Vector& t) {
  std::vector<cplx> out;
  for (const Site& s : cfg.problem.sites()) out.push_back(s.z);
  for (int j = 0; j < t.size(); ++j) out.push_back(t[j]);
  return out;
}

Vector solve_one(const BetheConfig& cfg, int seeds = 16) {
  const SolveOutcome out = solve_bethe(cfg, halton_seeds(cfg, seeds));
  return out.solutions.front().t;
}

}  // namespace

TEST_CASE("charge condition examples") {
  const RootSystem& rs = a1();
  const Weight w = omega(rs);
  auto irrep_cfg = [&](const Weight& l1, const Weight& l2, std::vector<int> asg) {
    return BetheConfig{GaudinProblem(rs, kMd, {{kZ1, build_dual_verma(rs, l1, 3)}, {kZ2, build_dual_verma(rs, l2, 3)}}),
                       std::move(asg)};
  };
  CHECK(check_charge(irrep_cfg(w, w, {0})));
  CHECK_FALSE(check_charge(irrep_cfg(w, rs.zero_weight(), {0})));
  CHECK(check_charge(instance_m1()));
  CHECK(check_charge(verma_pair(cplx(-3.1, 2.0) * alpha(rs, 0), cplx(4.1, -2.0) * alpha(rs, 0), {0})));
  CHECK_THROWS_AS(solve_bethe(irrep_cfg(w, rs.zero_weight(), {0}), {Vector::Constant(1, cplx(0.3, 0.2))}),
                  std::invalid_argument);
}

TEST_CASE("closed-form roots make the residual vanish") {
  const RootSystem& rs = a1();
  {
    const BetheConfig cfg{GaudinProblem(rs, kMd, {{kZ1, build_dual_verma(rs, alpha(rs, 0), 3)}}), {0}};
    Vector t(1);
    t << kZ1 + 0.5;
    CHECK(std::abs(bethe_system(cfg, t).residual[0]) <= 1e-13);
  }
  {
    const BetheConfig cfg = verma_pair(omega(rs), omega(rs), {0});
    Vector t(1);
    t << 0.5 * (kZ1 + kZ2) + 0.5;
    CHECK(std::abs(bethe_system(cfg, t).residual[0]) <= 1e-13);
  }
}

TEST_CASE("Bethe Jacobian matches finite differences") {
  const BetheConfig cfg = instance_m2();
  Vector t(2);
  t << cplx(0.31, 0.22), cplx(0.74, 0.51);
  const BetheSystem sys = bethe_system(cfg, t);
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      auto f = [&](cplx x) {
        Vector tt = t;
        tt[k] = x;
        return bethe_system(cfg, tt).residual[j];
      };
      const cplx fd = oracle::fd1(f, t[k], 1e-5);
      CHECK(std::abs(sys.jacobian(j, k) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("residual is equivariant under relabelling equal roots") {
  const BetheConfig cfg = instance_m2();
  Vector t(2), s(2);
  t << cplx(0.31, 0.22), cplx(0.74, 0.51);
  s << t[1], t[0];
  const Vector a = bethe_system(cfg, t).residual;
  const Vector b = bethe_system(cfg, s).residual;
  CHECK(a[0] == b[1]);
  CHECK(a[1] == b[0]);
}

TEST_CASE("pole collisions name the colliding pair") {
  const BetheConfig cfg = instance_m2();
  Vector t(2);
  t << kZ2 + kMd.tau(), cplx(0.3, 0.3);
  try {
    bethe_system(cfg, t);
    FAIL("expected a pole error");
  } catch (const BethePoleError& e) {
    CHECK(e.first() == "t_1");
    CHECK(e.second() == "z_2");
    CHECK(std::string(e.what()).find("t_1 collides with z_2") != std::string::npos);
  }
  t << cplx(0.3, 0.3), cplx(1.3, 0.3);
  CHECK_THROWS_AS(bethe_system(cfg, t), BethePoleError);
}

TEST_CASE("Newton converges to the closed-form roots") {
  const RootSystem& rs = a1();
  {
    const BetheConfig cfg{GaudinProblem(rs, kMd, {{kZ1, build_dual_verma(rs, alpha(rs, 0), 3)}}), {0}};
    Vector seed(1);
    seed << kZ1 + cplx(0.46, 0.03);
    const SolveOutcome out = solve_bethe(cfg, {seed});
    REQUIRE(out.solutions.size() == 1);
    CHECK(lattice_distance(out.solutions[0].t[0], kZ1 + 0.5) <= 1e-12);
    CHECK(out.solutions[0].residual_norm < 1e-12);
  }
  {
    const BetheConfig cfg = verma_pair(omega(rs), omega(rs), {0});
    const SolveOutcome out = solve_bethe(cfg, halton_seeds(cfg, 16));
    const cplx target = 0.5 * (kZ1 + kZ2) + 0.5;
    const bool found = std::any_of(out.solutions.begin(), out.solutions.end(),
                                   [&](const BetheSolution& s) { return lattice_distance(s.t[0], target) <= 1e-9; });
    CHECK(found);
  }
}

TEST_CASE("duplicate seeds collapse to one solution") {
  const BetheConfig cfg = instance_m1();
  Vector seed(1);
  seed << cplx(0.8, 0.15);
  Vector shifted = seed;
  shifted[0] += 0.002;
  const SolveOutcome out = solve_bethe(cfg, {seed, seed, shifted});
  CHECK(out.converged_seeds == 3);
  CHECK(out.solutions.size() == 1);

  const BetheConfig two = instance_m2();
  const Vector t = solve_one(two);
  Vector swapped(2);
  swapped << t[1] + 1.0, t[0];
  const SolveOutcome again = solve_bethe(two, {t, swapped});
  CHECK(again.solutions.size() == 1);
}

TEST_CASE("solver reports failure when no seed converges") {
  const BetheConfig cfg = instance_m1();
  NewtonOptions opts;
  opts.max_iterations = 0;
  Vector seed(1);
  seed << cplx(0.8, 0.15);
  CHECK_THROWS_AS(solve_bethe(cfg, {seed}, opts), ConvergenceError);
}

TEST_CASE("halton seeds keep clear of the sites") {
  const BetheConfig cfg = instance_m2();
  const std::vector<Vector> seeds = halton_seeds(cfg, 40);
  CHECK(seeds.size() == 40);
  for (const Vector& s : seeds) {
    for (int j = 0; j < 2; ++j) {
      CHECK(lattice_distance(s[j], kZ1) >= 0.05);
      CHECK(lattice_distance(s[j], kZ2) >= 0.05);
    }
    CHECK(lattice_distance(s[0], s[1]) >= 0.05);
  }
}

TEST_CASE("bracket agrees with the permutation oracle") {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 2);
  const Weight lambda = cplx(0.3, 0.2) * alpha(rs, 0) + cplx(1.1, -0.4) * alpha(rs, 1);
  const RepresentedModule mod = build_dual_verma(rs, lambda, 4);
  Sampler s(3);
  const Vector xi = s.sample_H(rs);
  const cplx z(0.2, 0.1);
  const std::vector<cplx> ts{cplx(0.61, 0.3), cplx(0.35, 0.62), cplx(0.83, 0.12)};

  // empty set: the pairing with the highest vector
  const std::vector<ScalarJet> empty = bracket(rs, kMd, mod, z, {}, {}, xi, 0);
  CHECK(empty[0].value() == cplx(1.0));
  for (int v = 1; v < mod.dim(); ++v) CHECK(empty[static_cast<std::size_t>(v)].value() == cplx{});

  for (const std::vector<int>& simple : {std::vector<int>{0}, std::vector<int>{0, 1}, std::vector<int>{1, 1},
                                         std::vector<int>{0, 1, 1}}) {
    const std::vector<cplx> tt(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(simple.size()));
    const std::vector<ScalarJet> got = bracket(rs, kMd, mod, z, simple, tt, xi, 1);
    for (int v = 0; v < mod.dim(); ++v) {
      const cplx want = model_oracle::bracket_brute(rs, kMd, mod, z, simple, tt, xi, v);
      CHECK(std::abs(got[static_cast<std::size_t>(v)].value() - want) <= 1e-12 * (1.0 + std::abs(want)));
    }
  }
  CHECK_THROWS_AS(bracket(rs, kMd, build_dual_verma(rs, lambda, 1), z, {0, 1}, {ts[0], ts[1]}, xi, 0), JetOrderError);
}

TEST_CASE("Bethe vector agrees with the partition oracle") {
  for (const BetheConfig& cfg : {instance_m1(), instance_m2()}) {
    const Vector t = solve_one(cfg);
    const BetheVector psi(cfg, t);
    Sampler s(7);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector xi = s.sample_H(cfg.problem.roots());
      const MatrixJet jet = psi.on_zero_weight(xi, 0);
      const TensorSpace& space = cfg.problem.space();
      for (int k = 0; k < space.zero_dim(); ++k) {
        const cplx want = model_oracle::psi_brute(cfg, t, xi, space.digits(space.zero_index(k)));
        CHECK(std::abs(jet.value()(k, 0) - want) <= 1e-10 * (1.0 + std::abs(want)));
      }
    }
  }
}

TEST_CASE("Bethe vector pairs to zero off the zero-weight space") {
  const BetheConfig cfg = instance_m2();
  const Vector t = solve_one(cfg);
  const BetheVector psi(cfg, t);
  const Vector xi = Sampler(9).sample_H(cfg.problem.roots());
  const TensorSpace& space = cfg.problem.space();
  int checked = 0;
  for (int idx = 0; idx < space.full_dim(); ++idx) {
    if (std::find(space.zero_indices().begin(), space.zero_indices().end(), idx) != space.zero_indices().end()) continue;
    CHECK(psi.pairing(xi, space.digits(idx)) == cplx{});
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("Bethe vector jets match finite differences") {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 2);
  const Weight l1 = cplx(0.4, 0.1) * alpha(rs, 0) + cplx(0.7, -0.2) * alpha(rs, 1);
  const Weight l2 = alpha(rs, 0) + alpha(rs, 1) - l1;
  const BetheConfig cfg{GaudinProblem(rs, kMd, {{kZ1, build_dual_verma(rs, l1, 4)}, {kZ2, build_dual_verma(rs, l2, 4)}}),
                        {0, 1}};
  Vector t(2);
  t << cplx(0.3, 0.6), cplx(0.8, 0.2);
  const BetheVector psi(cfg, t);
  Sampler s(11);
  for (int trial = 0; trial < 3; ++trial) {
    const Vector xi = s.sample_H(rs);
    const MatrixJet jet = psi.on_zero_weight(xi, 2);
    for (int r = 0; r < rs.rank(); ++r) {
      const double h = 1e-5;
      Vector xp = xi, xm = xi;
      xp[r] += h;
      xm[r] -= h;
      const Matrix fd = (psi.on_zero_weight(xp, 0).value() - psi.on_zero_weight(xm, 0).value()) / (2.0 * h);
      MultiIndex e(2, 0);
      e[static_cast<std::size_t>(r)] = 1;
      const Matrix an = jet.partial(e);
      CHECK((an - fd).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
      e[static_cast<std::size_t>(r)] = 2;
      const Matrix fd2 =
          (psi.on_zero_weight(xp, 0).value() - 2.0 * jet.value() + psi.on_zero_weight(xm, 0).value()) / (h * h);
      CHECK((jet.partial(e) - fd2).cwiseAbs().maxCoeff() <= 1e-3 * std::max(1.0, fd2.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("zeta-bar is linear in h and the eigenvalue is periodic in u") {
  const BetheConfig cfg = instance_m2();
  const Vector t = solve_one(cfg);
  const RootSystem& rs = cfg.problem.roots();
  const Matrix h1 = rs.cartan_basis()[0];
  const Matrix h2 = rs.cartan_of(rs.rho());
  const cplx u(0.27, 0.41);
  const cplx a(0.7, -0.3), b(-1.2, 0.5);
  const ZetaBar lhs = zeta_bar(cfg, t, a * h1 + b * h2, u);
  const cplx rhs = a * zeta_bar(cfg, t, h1, u).value + b * zeta_bar(cfg, t, h2, u).value;
  CHECK(std::abs(lhs.value - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));

  const cplx e0 = eigenvalue_tau_psi(cfg, t, u);
  CHECK(std::abs(eigenvalue_tau_psi(cfg, t, u + 1.0) - e0) <= 1e-10 * std::abs(e0));
  CHECK(std::abs(zeta_bar(cfg, t, h1, u).du - oracle::fd1([&](cplx x) { return zeta_bar(cfg, t, h1, x).value; }, u, 1e-5)) <=
        1e-6 * (1.0 + std::abs(zeta_bar(cfg, t, h1, u).du)));
}

TEST_CASE("no roots and trivial weights: constant vector, zero eigenvalue") {
  const RootSystem& rs = a1();
  const BetheConfig cfg{GaudinProblem(rs, kMd, {{kZ1, build_dual_verma(rs, rs.zero_weight(), 2)},
                                                {kZ2, build_dual_verma(rs, rs.zero_weight(), 2)}}),
                        {}};
  const Vector t(0);
  CHECK(eigenvalue_tau_psi(cfg, t, cplx(0.3, 0.4)) == cplx{});
  const BetheVector psi(cfg, t);
  Sampler s(2);
  const Vector x1 = s.sample_H(rs), x2 = s.sample_H(rs);
  const MatrixJet j1 = psi.on_zero_weight(x1, 1);
  const MatrixJet j2 = psi.on_zero_weight(x2, 1);
  CHECK((j1.value() - j2.value()).cwiseAbs().maxCoeff() == 0.0);
  const EigenReport rep = verify_eigenvector(cfg, t, {cplx(0.3, 0.4), cplx(0.7, 0.2)}, {x1, x2});
  CHECK(rep.residual <= 1e-14);
  CHECK(rep.inconclusive == 0);
}

TEST_CASE("Bethe vector is an eigenvector, perturbed roots are not") {
  for (const BetheConfig& cfg : {instance_m1(), instance_m2()}) {
    const int m = cfg.roots();
    CAPTURE(m);
    const SolveOutcome out = solve_bethe(cfg, halton_seeds(cfg, 8));
    Sampler s(42);
    std::vector<Vector> hs;
    for (int k = 0; k < 3; ++k) hs.push_back(s.sample_H(cfg.problem.roots()));
    for (const BetheSolution& sol : out.solutions) {
      std::vector<cplx> us;
      for (int k = 0; k < 3; ++k) us.push_back(s.sample_u(kMd, avoid_points(cfg, sol.t)));
      const EigenReport rep = verify_eigenvector(cfg, sol.t, us, hs);
      CHECK(rep.residual <= (m == 1 ? 1e-7 : 1e-6));
      CHECK_FALSE(rep.all_inconclusive());
      Vector bad = sol.t;
      bad[0] += 1e-3;
      CHECK(verify_eigenvector(cfg, bad, us, hs).residual > 1e-4);
    }
  }
}

TEST_CASE("eigenvector check in rank two with mixed simple roots") {
  const RootSystem rs = RootSystem::build(AlgebraSeries::A, 2);
  const Weight l1 = cplx(0.4, 0.1) * alpha(rs, 0) + cplx(0.7, -0.2) * alpha(rs, 1);
  const Weight l2 = alpha(rs, 0) + alpha(rs, 1) - l1;
  const int depth = default_verma_depth(rs, 2);
  const BetheConfig cfg{
      GaudinProblem(rs, kMd, {{kZ1, build_dual_verma(rs, l1, depth)}, {kZ2, build_dual_verma(rs, l2, depth)}}), {0, 1}};
  const SolveOutcome out = solve_bethe(cfg, halton_seeds(cfg, 6));
  Sampler s(5);
  const BetheSolution& sol = out.solutions.front();
  std::vector<Vector> hs{s.sample_H(rs), s.sample_H(rs)};
  std::vector<cplx> us{s.sample_u(kMd, avoid_points(cfg, sol.t)), s.sample_u(kMd, avoid_points(cfg, sol.t))};
  CHECK(verify_eigenvector(cfg, sol.t, us, hs).residual <= 1e-6);
}

TEST_CASE("eigen check refuses modules truncated below the root count") {
  const BetheConfig cfg = verma_pair(kC * alpha(a1(), 0), (1.0 - kC) * alpha(a1(), 0), {0}, 1);
  Vector t(1);
  t << cplx(0.88, 0.13);
  CHECK_THROWS_AS(verify_eigenvector(cfg, t, {cplx(0.3, 0.4)}, {Vector::Constant(1, cplx(0.2, 0.01))}), JetOrderError);
}
