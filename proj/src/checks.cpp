#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>

#include "facegaudin/cli.hpp"

namespace facegaudin {

namespace {

using Clock = std::chrono::steady_clock;

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

cplx fd1(const std::function<cplx(cplx)>& f, cplx x, double h) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

cplx fd2(const std::function<cplx(cplx)>& f, cplx x, double h) {
  return (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
}

std::string list_literal(const Vector& v) {
  std::string s = "[";
  for (int k = 0; k < v.size(); ++k) s += (k ? ", " : "") + complex_literal(v[k]);
  return s + "]";
}

// max entrywise difference of two operator jets relative to the larger of the two
double operator_rel_diff(const OperatorJet& a, const OperatorJet& b) {
  const int order = std::max(a.op_order(), b.op_order());
  const OperatorJet aw = a.widened(order);
  const OperatorJet bw = b.widened(order);
  const double scale = std::max(aw.max_abs_value(), bw.max_abs_value());
  return (aw - bw).max_abs_value() / std::max(scale, 1e-300);
}

struct Uniform {
  std::mt19937_64 rng;
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const RunOptions& opts) : cfg_(cfg), opts_(opts), md_(cfg.tau) {
    report_.digest = instance_digest(cfg);
    report_.seed = cfg.seed;
    report_.config_echo = echo_config(cfg);
  }

  void elliptic_checks();
  void algebra_checks();
  void commute_checks();
  void bethe_checks();
  void eigen_checks();

  Report finish(Command command) {
    report_.command = command_name(command);
    std::stable_sort(report_.records.begin(), report_.records.end(),
                     [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    return std::move(report_);
  }

 private:
  std::uint64_t seed_for(const std::string& name) const { return cfg_.seed + fnv1a64(name); }

  // runs one check; `body` fills residual, pass is residual <= tolerance unless the body sets verdict_
  void check(const std::string& name, double tolerance, const std::function<void(CheckRecord&)>& body) {
    if (done_.count(name)) return;
    done_.insert(name);
    CheckRecord rec;
    rec.name = name;
    rec.digest = report_.digest;
    rec.tolerance = tolerance;
    const auto start = Clock::now();
    verdict_.reset();
    try {
      body(rec);
      rec.pass = verdict_ ? *verdict_ : rec.residual && *rec.residual <= tolerance;
      if (rec.residual && !std::isfinite(*rec.residual)) rec.pass = false;
    } catch (const std::exception& e) {
      rec.residual.reset();
      rec.pass = false;
      rec.detail = e.what();
    }
    rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report_.records.push_back(std::move(rec));
  }

  const GaudinProblem& problem() {
    if (!problem_) problem_ = std::make_unique<GaudinProblem>(build_problem(cfg_));
    return *problem_;
  }

  const BetheConfig& bethe() {
    if (!bethe_) bethe_ = std::make_unique<BetheConfig>(build_bethe(cfg_));
    return *bethe_;
  }

  // the solve is shared by bethe-solve and eigen-check
  const SolveOutcome& solutions() {
    if (!solved_) {
      std::vector<Vector> seeds = cfg_.bethe.seeds;
      if (seeds.empty()) seeds = halton_seeds(bethe(), cfg_.bethe.seed_count, cfg_.sampling.guard);
      NewtonOptions opts;
      opts.tolerance = cfg_.tolerances.newton;
      try {
        outcome_ = solve_bethe(bethe(), seeds, opts);
      } catch (const ConvergenceError& e) {
        solve_error_ = e.what();
      }
      solved_ = true;
    }
    if (!solve_error_.empty()) throw ConvergenceError(solve_error_);
    return outcome_;
  }

  std::vector<cplx> site_points() {
    std::vector<cplx> out;
    for (const SiteSpec& s : cfg_.sites) out.push_back(s.z);
    return out;
  }

  Sampler sampler(const std::string& name) const {
    return {seed_for(name), cfg_.sampling.box, cfg_.sampling.im_box, cfg_.sampling.guard};
  }

  std::vector<cplx> cell_points(const std::string& name, int count) const {
    Uniform u{std::mt19937_64(seed_for(name))};
    std::vector<cplx> out;
    for (int k = 0; k < count; ++k) out.push_back(u(0.05, 0.95) + u(0.05, 0.95) * md_.tau());
    return out;
  }

  void sweep(const Vector& t);

  const ExperimentConfig& cfg_;
  RunOptions opts_;
  ModularData md_;
  Report report_;
  std::set<std::string> done_;
  std::optional<bool> verdict_;
  std::unique_ptr<GaudinProblem> problem_;
  std::unique_ptr<BetheConfig> bethe_;
  bool solved_ = false;
  SolveOutcome outcome_;
  std::string solve_error_;
};

void Runner::elliptic_checks() {
  const Tolerances& tol = cfg_.tolerances;
  const int n = cfg_.sampling.elliptic_points;

  check("elliptic.zeta_periods", tol.elliptic_identity, [&](CheckRecord& rec) {
    double worst = 0.0;
    for (cplx z : cell_points("elliptic.zeta_periods", n)) {
      const cplx zt = zeta11_value(z, md_);
      worst = std::max(worst, rel_err(zeta11_value(z + 1.0, md_), zt));
      worst = std::max(worst, rel_err(zeta11_value(z + md_.tau(), md_) - zt, -2.0 * kPi * kI));
    }
    rec.residual = worst;
    rec.data["points"] = std::to_string(n);
  });

  check("elliptic.w_periods", tol.elliptic_identity, [&](CheckRecord& rec) {
    const std::vector<cplx> zs = cell_points("elliptic.w_periods", n);
    Uniform u{std::mt19937_64(seed_for("elliptic.w_periods.c"))};
    double worst = 0.0;
    for (cplx z : zs) {
      const cplx c = u(0.05, 0.95) + 0.3 * u(0.05, 0.95) * md_.tau();
      const cplx base = w_value(c, z, md_);
      worst = std::max(worst, rel_err(w_value(c, z + 1.0, md_), base));
      worst = std::max(worst, rel_err(w_value(c, z + md_.tau(), md_), std::exp(2.0 * kPi * kI * c) * base));
    }
    rec.residual = worst;
    rec.data["points"] = std::to_string(n);
  });

  // z f(z) -> 1 at the origin, by Richardson extrapolation along a fixed direction
  check("elliptic.pole_zeta", tol.pole_limit, [&](CheckRecord& rec) {
    const cplx dir(0.6, 0.8);
    auto g = [&](double h) { return h * dir * zeta11_value(h * dir, md_); };
    const double h1 = 1e-3, h2 = 1e-4;
    const cplx limit = (g(h2) * (h1 * h1) - g(h1) * (h2 * h2)) / (h1 * h1 - h2 * h2);
    rec.residual = std::abs(limit - 1.0);
  });

  check("elliptic.pole_w", tol.pole_limit, [&](CheckRecord& rec) {
    const cplx c(0.31, 0.07);
    const cplx dir(0.8, -0.6);
    auto g = [&](double h) { return h * dir * w_value(c, h * dir, md_); };
    // two Richardson steps in h for 1 + a z + b z^2 + ...
    const double h = 1e-3;
    const cplx r1 = 2.0 * g(h / 2) - g(h);
    const cplx r2 = 2.0 * g(h / 4) - g(h / 2);
    rec.residual = std::abs((4.0 * r2 - r1) / 3.0 - 1.0);
  });

  check("elliptic.jets_fd", tol.jet_fd, [&](CheckRecord& rec) {
    const int count = std::max(1, n / 5);
    const std::vector<cplx> zs = cell_points("elliptic.jets_fd", count);
    Uniform u{std::mt19937_64(seed_for("elliptic.jets_fd.c"))};
    const double h = 1e-5;
    const double h2 = 1e-4;
    double worst = 0.0;
    for (cplx z0 : zs) {
      // keep away from the lattice so the finite-difference stencil stays analytic
      const cplx z = 0.15 + 0.7 * (z0 - 0.05 - 0.05 * md_.tau()) / 0.9;
      const cplx c = u(0.15, 0.85) + 0.2 * u(0.15, 0.85) * md_.tau();
      auto th = [&](cplx x) { return theta11_value(x, md_); };
      auto ze = [&](cplx x) { return zeta11_value(x, md_); };
      auto wz = [&](cplx x) { return w_value(c, x, md_); };
      auto wc = [&](cplx x) { return w_value(x, z, md_); };
      const Series tj = theta11(z, md_, 2);
      const Series zj = zeta11(z, md_, 2);
      const BivariateJet wj = w(c, z, md_, 2, 2);
      worst = std::max({worst, rel_err(tj[1], fd1(th, z, h)), rel_err(tj[2], fd2(th, z, h2) / 2.0),
                        rel_err(zj[1], fd1(ze, z, h)), rel_err(zj[2], fd2(ze, z, h2) / 2.0),
                        rel_err(wj.coeffs(0, 1), fd1(wz, z, h)), rel_err(wj.coeffs(1, 0), fd1(wc, c, h)),
                        rel_err(wj.coeffs(0, 2), fd2(wz, z, h2) / 2.0), rel_err(wj.coeffs(2, 0), fd2(wc, c, h2) / 2.0)});
    }
    rec.residual = worst;
    rec.data["points"] = std::to_string(count);
  });

  check("elliptic.trig_limit", tol.trig_limit, [&](CheckRecord& rec) {
    const ModularData tiny = ModularData::from_nome(1e-10);
    double worst = 0.0;
    for (double x = 0.05; x < 1.0; x += 0.1) {
      for (double y : {-0.2, 0.0, 0.15}) {
        const cplx z(x, y);
        worst = std::max(worst, std::abs(zeta11_value(z, tiny) - kPi / std::tan(kPi * z)));
      }
    }
    rec.residual = worst;
    rec.data["nome"] = "1e-10";
  });

  const std::vector<cplx> zs = cell_points("elliptic.table", std::min(n, 20));
  const cplx c(0.31, 0.07);
  for (cplx z : zs) report_.elliptic.push_back({z, c, theta11_value(z, md_), zeta11_value(z, md_), w_value(c, z, md_)});
}

void Runner::algebra_checks() {
  const RootSystem rs = config_roots(cfg_);

  check("liealg.describe", 0.0, [&](CheckRecord& rec) {
    rec.residual = 0.0;
    rec.data["algebra"] = rs.name();
    rec.data["dimension"] = std::to_string(rs.dimension());
    rec.data["dual_coxeter"] = std::to_string(rs.dual_coxeter());
    rec.data["rho"] = list_literal(rs.root_coordinates(rs.rho()));
    std::string roots;
    for (int idx : rs.positive_roots()) {
      std::string coeffs;
      for (int k = 0; k < rs.rank(); ++k) coeffs += (k ? "," : "") + std::to_string(rs.root(idx).simple_coeffs[k]);
      roots += (roots.empty() ? "" : " ") + std::string("(") + coeffs + ")";
    }
    rec.data["positive_roots"] = roots;
    const GaudinProblem& p = problem();
    for (int i = 0; i < p.site_count(); ++i) {
      const RepresentedModule& m = p.sites()[static_cast<std::size_t>(i)].module;
      rec.data["site_" + std::to_string(i + 1)] = m.label() + ", dim " + std::to_string(m.dim());
    }
    rec.data["zero_weight_dim"] = std::to_string(p.dim());
  });

  check("liealg.form", cfg_.tolerances.form, [&](CheckRecord& rec) {
    const auto basis = rs.chevalley_basis();
    double worst = 0.0;
    for (const Matrix& a : basis) {
      for (const Matrix& b : basis) worst = std::max(worst, std::abs(normalized_form(a, b, rs) - (a * b).trace()));
    }
    for (int idx : rs.positive_roots()) {
      const cplx pair = normalized_form(rs.root_vector(idx), rs.root_vector(rs.negative_of(idx)), rs);
      worst = std::max(worst, std::abs(pair - 1.0));
    }
    rec.residual = worst;
  });

  const GaudinProblem& p = problem();
  for (int i = 0; i < p.site_count(); ++i) {
    const std::string name = "liealg.site_" + std::to_string(i + 1) + ".relations";
    check(name, cfg_.tolerances.form * 100.0, [&](CheckRecord& rec) {
      const RepresentedModule& m = p.sites()[static_cast<std::size_t>(i)].module;
      // truncated modules are exact only on columns two root heights below the cut
      const int max_height = m.depth() < 0 ? 1 << 20 : m.depth() - 2 * rs.rank();
      const auto basis = rs.chevalley_basis();
      double worst = 0.0;
      int columns = 0;
      for (int k = 0; k < m.dim(); ++k) columns += m.height(k) <= max_height ? 1 : 0;
      for (const Matrix& x : basis) {
        for (const Matrix& y : basis) {
          const Matrix diff = m.rho(x) * m.rho(y) - m.rho(y) * m.rho(x) - m.rho(bracket(x, y));
          for (int k = 0; k < m.dim(); ++k) {
            if (m.height(k) <= max_height) worst = std::max(worst, diff.col(k).cwiseAbs().maxCoeff());
          }
        }
      }
      rec.residual = worst;
      rec.data["columns_checked"] = std::to_string(columns);
    });
  }
}

void Runner::commute_checks() {
  const Tolerances& tol = cfg_.tolerances;
  const Sampling& sm = cfg_.sampling;

  auto commutator_samples = [&](const std::string& name, CommutatorReport& worst) {
    const GaudinProblem& p = problem();
    Sampler s = sampler(name);
    for (int k = 0; k < sm.commute_samples; ++k) {
      const cplx u = s.sample_u(md_, site_points());
      std::vector<cplx> avoid = site_points();
      avoid.push_back(u);
      const cplx v = s.sample_u(md_, avoid);
      const CommutatorReport rep = commutativity_residual(p, u, v, {s.sample_H(p.roots())});
      worst.residual = std::max(worst.residual, rep.residual);
      worst.top_residual = std::max(worst.top_residual, rep.top_residual);
    }
  };

  CommutatorReport comm;
  bool comm_done = false;
  std::string comm_error;
  auto shared = [&]() {
    if (!comm_done) {
      comm_done = true;
      try {
        commutator_samples("gaudin.commutator", comm);
      } catch (const std::exception& e) {
        comm_error = e.what();
      }
    }
    if (!comm_error.empty()) throw DomainError(comm_error);
  };

  check("gaudin.commutator", tol.commutator, [&](CheckRecord& rec) {
    shared();
    rec.residual = comm.residual;
    rec.data["samples"] = std::to_string(sm.commute_samples);
  });

  check("gaudin.commutator_top", tol.commutator_top, [&](CheckRecord& rec) {
    shared();
    rec.residual = comm.top_residual;
    rec.data["orders"] = "3,4";
  });

  check("gaudin.commutator_self", tol.commutator_top, [&](CheckRecord& rec) {
    const GaudinProblem& p = problem();
    Sampler s = sampler("gaudin.commutator_self");
    const cplx u = s.sample_u(md_, site_points());
    rec.residual = commutativity_residual(p, u, u, {s.sample_H(p.roots())}).residual;
  });

  check("gaudin.periodicity", tol.periodicity, [&](CheckRecord& rec) {
    const GaudinProblem& p = problem();
    Sampler s = sampler("gaudin.periodicity");
    double worst = 0.0;
    for (int k = 0; k < sm.u_samples; ++k) {
      const Vector xi = s.sample_H(p.roots());
      const cplx u = s.sample_u(md_, site_points());
      worst = std::max(worst, operator_rel_diff(build_transfer(p, u).at(xi, 0), build_transfer(p, u + 1.0).at(xi, 0)));
    }
    rec.residual = worst;
  });

  check("gaudin.tilde_routes", tol.tilde_routes, [&](CheckRecord& rec) {
    const GaudinProblem& p = problem();
    Sampler s = sampler("gaudin.tilde_routes");
    double worst = 0.0;
    for (int k = 0; k < sm.tilde_samples; ++k) {
      const Vector xi = s.sample_H(p.roots());
      const cplx u = s.sample_u(md_, site_points());
      const OperatorJet a = build_tilde_transfer(p, u, TildeRoute::Conjugation).at(xi, 0);
      const OperatorJet b = build_tilde_transfer(p, u, TildeRoute::Explicit).at(xi, 0);
      worst = std::max(worst, operator_rel_diff(a, b));
    }
    rec.residual = worst;
    rec.data["samples"] = std::to_string(sm.tilde_samples);
  });
}

void Runner::bethe_checks() {
  if (!cfg_.bethe.present) return;
  const Tolerances& tol = cfg_.tolerances;

  check("bethe.charge", tol.charge, [&](CheckRecord& rec) {
    const BetheConfig& b = bethe();
    const RootSystem& rs = b.problem.roots();
    Weight diff = rs.zero_weight();
    for (const Site& s : b.problem.sites()) diff += s.module.highest_weight();
    for (int j = 0; j < b.roots(); ++j) diff -= b.simple_weight(j);
    rec.residual = diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
  });

  check("bethe.solve", tol.newton, [&](CheckRecord& rec) {
    const SolveOutcome& out = solutions();
    double worst = 0.0;
    for (const BetheSolution& s : out.solutions) worst = std::max(worst, s.residual_norm);
    rec.residual = worst;
    rec.data["solutions"] = std::to_string(out.solutions.size());
    rec.data["converged_seeds"] = std::to_string(out.converged_seeds);
    rec.data["failed_seeds"] = std::to_string(out.failed_seeds);
  });

  if (solve_error_.empty() && solved_) {
    const SolveOutcome& out = outcome_;
    for (std::size_t k = 0; k < out.solutions.size(); ++k) {
      const BetheSolution& s = out.solutions[k];
      check("bethe.solution_" + std::to_string(k + 1), tol.newton, [&](CheckRecord& rec) {
        rec.residual = s.residual_norm;
        rec.data["t"] = list_literal(s.t);
        rec.data["seed"] = list_literal(s.seed);
        rec.data["iterations"] = std::to_string(s.iterations);
        rec.data["jacobian_condition"] = real_literal(s.jacobian_condition);
      });
    }
  }
}

void Runner::sweep(const Vector& t) {
  // u = s + y tau for s in [0, 1), with y in the middle of the widest gap between the
  // tau-coordinates of the sites and roots, so the line stays clear of every pole
  std::vector<double> ys;
  auto tau_coord = [&](cplx z) {
    const double y = z.imag() / md_.tau().imag();
    return y - std::floor(y);
  };
  for (cplx z : site_points()) ys.push_back(tau_coord(z));
  for (int j = 0; j < t.size(); ++j) ys.push_back(tau_coord(t[j]));
  std::sort(ys.begin(), ys.end());
  double best_gap = -1.0;
  double y0 = 0.5;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double lo = ys[k];
    const double hi = k + 1 < ys.size() ? ys[k + 1] : ys.front() + 1.0;
    if (hi - lo > best_gap) {
      best_gap = hi - lo;
      y0 = 0.5 * (lo + hi);
    }
  }
  const int n = cfg_.sampling.sweep_points;
  for (int k = 0; k < n; ++k) {
    const cplx u = static_cast<double>(k) / n + y0 * md_.tau();
    report_.sweep.push_back({u, eigenvalue_tau_psi(bethe(), t, u)});
  }
}

void Runner::eigen_checks() {
  if (!cfg_.bethe.present) return;
  const Tolerances& tol = cfg_.tolerances;
  const Sampling& sm = cfg_.sampling;

  auto grid = [&](const std::string& name, const Vector& t, std::vector<cplx>& us, std::vector<Vector>& hs) {
    Sampler s = sampler(name);
    std::vector<cplx> avoid = site_points();
    for (int j = 0; j < t.size(); ++j) avoid.push_back(t[j]);
    for (int k = 0; k < sm.h_samples; ++k) hs.push_back(s.sample_H(bethe().problem.roots()));
    for (int k = 0; k < sm.u_samples; ++k) us.push_back(s.sample_u(md_, avoid));
  };

  auto perturbed = [](Vector t) {
    if (t.size() > 0) t[0] += 1e-3;
    return t;
  };

  check("bethe.solve", tol.newton, [&](CheckRecord& rec) {
    const SolveOutcome& out = solutions();
    double worst = 0.0;
    for (const BetheSolution& s : out.solutions) worst = std::max(worst, s.residual_norm);
    rec.residual = worst;
    rec.data["solutions"] = std::to_string(out.solutions.size());
    rec.data["converged_seeds"] = std::to_string(out.converged_seeds);
    rec.data["failed_seeds"] = std::to_string(out.failed_seeds);
  });
  if (!solved_ || !solve_error_.empty()) return;

  for (std::size_t k = 0; k < outcome_.solutions.size(); ++k) {
    const std::string name = "eigen.solution_" + std::to_string(k + 1);
    const Vector t = opts_.negative_control ? perturbed(outcome_.solutions[k].t) : outcome_.solutions[k].t;
    check(name, tol.eigen, [&](CheckRecord& rec) {
      std::vector<cplx> us;
      std::vector<Vector> hs;
      grid(name, t, us, hs);
      const EigenReport rep = verify_eigenvector(bethe(), t, us, hs);
      rec.data["t"] = list_literal(t);
      rec.data["samples"] = std::to_string(rep.samples.size());
      rec.data["inconclusive"] = std::to_string(rep.inconclusive);
      if (opts_.negative_control) rec.data["perturbed"] = "t_1 + 1e-3";
      if (rep.all_inconclusive()) {
        rec.residual = 0.0;
        verdict_ = true;
        rec.detail = "inconclusive: Psi vanishes at every sample";
        return;
      }
      rec.residual = rep.residual;
    });
  }

  if (!opts_.negative_control && !outcome_.solutions.empty()) {
    const Vector t = perturbed(outcome_.solutions.front().t);
    check("eigen.negative_control", tol.negative_control, [&](CheckRecord& rec) {
      std::vector<cplx> us;
      std::vector<Vector> hs;
      grid("eigen.negative_control", t, us, hs);
      rec.residual = verify_eigenvector(bethe(), t, us, hs).residual;
      rec.detail = "expected above tolerance";
      verdict_ = *rec.residual > tol.negative_control;
      rec.data["perturbed"] = "t_1 + 1e-3";
    });
  }

  if (!outcome_.solutions.empty()) {
    try {
      sweep(outcome_.solutions.front().t);
    } catch (const std::exception&) {
      report_.sweep.clear();
    }
  }
}

}  // namespace

bool Report::pass() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::EllipticCheck, Command::DescribeAlgebra, Command::CommuteCheck, Command::BetheSolve,
                    Command::EigenCheck, Command::FullVerify}) {
    if (command_name(c) == name) return c;
  }
  throw std::invalid_argument("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::EllipticCheck: return "elliptic-check";
    case Command::DescribeAlgebra: return "describe-algebra";
    case Command::CommuteCheck: return "commute-check";
    case Command::BetheSolve: return "bethe-solve";
    case Command::EigenCheck: return "eigen-check";
    case Command::FullVerify: return "full-verify";
  }
  return "";
}

Report run(Command command, const ExperimentConfig& cfg, const RunOptions& opts) {
  Runner r(cfg, opts);
  switch (command) {
    case Command::EllipticCheck: r.elliptic_checks(); break;
    case Command::DescribeAlgebra: r.algebra_checks(); break;
    case Command::CommuteCheck: r.commute_checks(); break;
    case Command::BetheSolve: r.bethe_checks(); break;
    case Command::EigenCheck: r.eigen_checks(); break;
    case Command::FullVerify:
      r.elliptic_checks();
      r.algebra_checks();
      r.commute_checks();
      r.bethe_checks();
      r.eigen_checks();
      break;
  }
  return r.finish(command);
}

}  // namespace facegaudin
