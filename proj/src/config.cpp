#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "facegaudin/cli.hpp"

namespace facegaudin {

ConfigError::ConfigError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

namespace {

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::string shortest(double x) { return real_literal(x); }

}  // namespace

std::string real_literal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

std::string complex_literal(cplx z) {
  if (z.imag() == 0.0) return real_literal(z.real());
  const std::string im = real_literal(std::abs(z.imag())) + "i";
  if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
  return real_literal(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  if (s.empty()) throw ConfigError("empty complex literal");
  double re = 0.0;
  if (s.back() != 'i' && s.back() != 'j') {
    if (!parse_real(s, re)) throw ConfigError("not a number: '" + text + "'");
    return {re, 0.0};
  }
  s.pop_back();
  // split at the last sign that is not an exponent sign
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  std::string real_part = cut == std::string::npos ? "" : s.substr(0, cut);
  std::string imag_part = cut == std::string::npos ? s : s.substr(cut);
  if (imag_part.empty() || imag_part == "+") imag_part += "1";
  if (imag_part == "-") imag_part = "-1";
  double im = 0.0;
  if ((!real_part.empty() && !parse_real(real_part, re)) || !parse_real(imag_part, im)) {
    throw ConfigError("malformed complex literal '" + text + "' (expected a+bi)");
  }
  return {re, im};
}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  const YAML::Mark m = node.Mark();
  throw ConfigError(what, m.line >= 0 ? m.line + 1 : 0, m.column >= 0 ? m.column + 1 : 0);
}

void expect_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (allowed.count(key) == 0) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(kv.first, "unknown key '" + key + "' in " + where + " (allowed: " + list + ")");
    }
  }
}

YAML::Node require(const YAML::Node& node, const std::string& key, const std::string& where) {
  const YAML::Node child = node[key];
  if (!child) fail(node, "missing key '" + key + "' in " + where);
  return child;
}

cplx as_complex(const YAML::Node& node) {
  if (!node.IsScalar()) fail(node, "expected a complex number");
  try {
    return parse_complex(node.Scalar());
  } catch (const ConfigError& e) {
    fail(node, e.what());
  }
}

double as_real(const YAML::Node& node) {
  double x = 0.0;
  if (!node.IsScalar() || !parse_real(node.Scalar(), x)) fail(node, "expected a real number");
  return x;
}

int as_int(const YAML::Node& node) {
  int x = 0;
  const std::string s = node.IsScalar() ? node.Scalar() : "";
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) fail(node, "expected an integer");
  return x;
}

Vector as_complex_list(const YAML::Node& node) {
  if (!node.IsSequence()) fail(node, "expected a list");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t k = 0; k < node.size(); ++k) v[static_cast<Eigen::Index>(k)] = as_complex(node[k]);
  return v;
}

SiteSpec parse_site(const YAML::Node& node, int rank, int index) {
  const std::string where = "gaudin.sites[" + std::to_string(index) + "]";
  expect_keys(node, where, {"z", "kind", "dynkin", "roots", "depth"});
  SiteSpec s;
  s.z = as_complex(require(node, "z", where));
  const std::string kind = require(node, "kind", where).as<std::string>();
  if (kind == "irrep") {
    s.kind = SiteSpec::Kind::Irrep;
    if (node["roots"] || node["depth"]) fail(node, where + ": irreps take only 'dynkin'");
    const YAML::Node d = require(node, "dynkin", where);
    s.dynkin = as_complex_list(d);
    for (int k = 0; k < s.dynkin.size(); ++k) {
      const cplx x = s.dynkin[k];
      if (x.imag() != 0.0 || x.real() < 0.0 || x.real() != std::floor(x.real())) {
        fail(d, where + ": irrep Dynkin labels must be non-negative integers");
      }
    }
  } else if (kind == "dual_verma") {
    s.kind = SiteSpec::Kind::DualVerma;
    if (node["dynkin"] && node["roots"]) fail(node, where + ": give the weight either as 'dynkin' or as 'roots'");
    if (node["roots"]) {
      s.by_roots = true;
      s.root_coords = as_complex_list(node["roots"]);
    } else {
      s.dynkin = as_complex_list(require(node, "dynkin", where + " (or 'roots')"));
    }
    if (node["depth"]) {
      s.depth = as_int(node["depth"]);
      if (s.depth < 0) fail(node["depth"], where + ": depth must be non-negative");
    }
  } else {
    fail(node["kind"], where + ": kind must be 'irrep' or 'dual_verma'");
  }
  const Vector& w = s.by_roots ? s.root_coords : s.dynkin;
  if (w.size() != rank) fail(node, where + ": weight needs " + std::to_string(rank) + " coordinates");
  return s;
}

Weight site_weight(const RootSystem& rs, const SiteSpec& s) {
  return s.by_roots ? rs.weight_from_roots(s.root_coords) : rs.weight_from_dynkin(s.dynkin);
}

}  // namespace

RootSystem config_roots(const ExperimentConfig& cfg) { return RootSystem::build(AlgebraSeries::A, cfg.rank); }

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping with sections liealg, elliptic, gaudin");
  expect_keys(root, "config", {"liealg", "elliptic", "gaudin", "bethe", "tolerances", "sampling", "seed"});
  ExperimentConfig cfg;

  const YAML::Node lie = require(root, "liealg", "config");
  expect_keys(lie, "liealg", {"series", "rank"});
  if (lie["series"] && lie["series"].as<std::string>() != "A") fail(lie["series"], "only the A series is supported");
  cfg.rank = as_int(require(lie, "rank", "liealg"));
  if (cfg.rank < 1 || cfg.rank > 6) fail(lie["rank"], "rank must be between 1 and 6");

  const YAML::Node ell = require(root, "elliptic", "config");
  expect_keys(ell, "elliptic", {"tau"});
  cfg.tau = as_complex(require(ell, "tau", "elliptic"));
  if (!(cfg.tau.imag() > 0.0)) fail(ell["tau"], "tau must lie in the upper half plane");

  const YAML::Node gd = require(root, "gaudin", "config");
  expect_keys(gd, "gaudin", {"sites"});
  const YAML::Node sites = require(gd, "sites", "gaudin");
  if (!sites.IsSequence() || sites.size() == 0) fail(sites, "gaudin.sites must be a non-empty list");
  for (std::size_t k = 0; k < sites.size(); ++k) cfg.sites.push_back(parse_site(sites[k], cfg.rank, static_cast<int>(k)));

  if (const YAML::Node b = root["bethe"]) {
    expect_keys(b, "bethe", {"assignment", "seed_count", "seeds"});
    cfg.bethe.present = true;
    const YAML::Node asg = require(b, "assignment", "bethe");
    if (!asg.IsSequence()) fail(asg, "bethe.assignment must be a list of simple-root numbers");
    for (std::size_t k = 0; k < asg.size(); ++k) {
      const int i = as_int(asg[k]);
      if (i < 1 || i > cfg.rank) fail(asg[k], "bethe.assignment entries must lie in 1.." + std::to_string(cfg.rank));
      cfg.bethe.assignment.push_back(i - 1);
    }
    if (b["seed_count"]) {
      cfg.bethe.seed_count = as_int(b["seed_count"]);
      if (cfg.bethe.seed_count < 1) fail(b["seed_count"], "bethe.seed_count must be positive");
    }
    if (const YAML::Node seeds = b["seeds"]) {
      if (!seeds.IsSequence()) fail(seeds, "bethe.seeds must be a list of root lists");
      for (std::size_t k = 0; k < seeds.size(); ++k) {
        const Vector v = as_complex_list(seeds[k]);
        if (v.size() != static_cast<Eigen::Index>(cfg.bethe.assignment.size())) {
          fail(seeds[k], "each seed needs one value per Bethe root");
        }
        cfg.bethe.seeds.push_back(v);
      }
    }
  }

  if (const YAML::Node t = root["tolerances"]) {
    Tolerances& tol = cfg.tolerances;
    const std::map<std::string, double*> fields{
        {"elliptic_identity", &tol.elliptic_identity}, {"pole_limit", &tol.pole_limit},
        {"jet_fd", &tol.jet_fd},                       {"trig_limit", &tol.trig_limit},
        {"form", &tol.form},                           {"commutator", &tol.commutator},
        {"commutator_top", &tol.commutator_top},       {"tilde_routes", &tol.tilde_routes},
        {"periodicity", &tol.periodicity},             {"charge", &tol.charge},
        {"newton", &tol.newton},                       {"eigen", &tol.eigen},
        {"negative_control", &tol.negative_control}};
    std::set<std::string> allowed;
    for (const auto& f : fields) allowed.insert(f.first);
    expect_keys(t, "tolerances", allowed);
    for (const auto& kv : t) {
      const double x = as_real(kv.second);
      if (!(x >= 0.0)) fail(kv.second, "tolerances must be non-negative");
      *fields.at(kv.first.as<std::string>()) = x;
    }
  }

  if (const YAML::Node s = root["sampling"]) {
    Sampling& sm = cfg.sampling;
    const std::map<std::string, int*> ints{{"elliptic_points", &sm.elliptic_points}, {"commute_samples", &sm.commute_samples},
                                           {"tilde_samples", &sm.tilde_samples},     {"h_samples", &sm.h_samples},
                                           {"u_samples", &sm.u_samples},             {"sweep_points", &sm.sweep_points}};
    const std::map<std::string, double*> reals{{"box", &sm.box}, {"im_box", &sm.im_box}, {"guard", &sm.guard}};
    std::set<std::string> allowed;
    for (const auto& f : ints) allowed.insert(f.first);
    for (const auto& f : reals) allowed.insert(f.first);
    expect_keys(s, "sampling", allowed);
    for (const auto& kv : s) {
      const std::string key = kv.first.as<std::string>();
      if (ints.count(key)) {
        const int v = as_int(kv.second);
        if (v < 0) fail(kv.second, "sampling counts must be non-negative");
        *ints.at(key) = v;
      } else {
        const double v = as_real(kv.second);
        if (!(v >= 0.0)) fail(kv.second, "sampling radii must be non-negative");
        *reals.at(key) = v;
      }
    }
  }

  if (const YAML::Node sd = root["seed"]) {
    std::uint64_t v = 0;
    const std::string str = sd.IsScalar() ? sd.Scalar() : "";
    const auto res = std::from_chars(str.data(), str.data() + str.size(), v);
    if (str.empty() || res.ec != std::errc() || res.ptr != str.data() + str.size()) fail(sd, "seed must be an unsigned integer");
    cfg.seed = v;
  }

  // semantic checks
  const ModularData md(cfg.tau);
  for (std::size_t i = 0; i < cfg.sites.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.sites.size(); ++j) {
      if (nearest_lattice_point(cfg.sites[i].z - cfg.sites[j].z, md).distance < 1e-9) {
        fail(sites[j], "sites coincide mod lattice: z_" + std::to_string(i + 1) + " and z_" + std::to_string(j + 1));
      }
    }
  }
  if (cfg.bethe.present) {
    for (std::size_t i = 0; i < cfg.sites.size(); ++i) {
      if (cfg.sites[i].kind != SiteSpec::Kind::DualVerma) {
        fail(sites[i], "the bethe section needs dual_verma sites (site " + std::to_string(i + 1) + " is an irrep)");
      }
    }
    const RootSystem rs = config_roots(cfg);
    Weight diff = rs.zero_weight();
    for (const SiteSpec& s : cfg.sites) diff += site_weight(rs, s);
    for (int a : cfg.bethe.assignment) diff -= rs.root(rs.simple_root(a)).weight;
    if (diff.cwiseAbs().maxCoeff() > cfg.tolerances.charge) {
      const Vector coords = rs.root_coordinates(diff);
      std::string d;
      for (int k = 0; k < coords.size(); ++k) d += (k ? ", " : "") + complex_literal(coords[k]);
      fail(root["bethe"], "charge condition violated: sum of site weights minus sum of assigned simple roots is (" + d +
                              ") in the simple-root basis");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  auto list = [](const Vector& v) {
    std::string s = "[";
    for (int k = 0; k < v.size(); ++k) s += (k ? ", " : "") + complex_literal(v[k]);
    return s + "]";
  };
  const RootSystem rs = config_roots(cfg);
  const int m = static_cast<int>(cfg.bethe.assignment.size());
  os << "liealg:\n  series: A\n  rank: " << cfg.rank << "\n";
  os << "elliptic:\n  tau: " << complex_literal(cfg.tau) << "\n";
  os << "gaudin:\n  sites:\n";
  for (const SiteSpec& s : cfg.sites) {
    os << "    - z: " << complex_literal(s.z) << "\n";
    if (s.kind == SiteSpec::Kind::Irrep) {
      os << "      kind: irrep\n      dynkin: " << list(s.dynkin) << "\n";
    } else {
      os << "      kind: dual_verma\n";
      os << (s.by_roots ? "      roots: " : "      dynkin: ") << list(s.by_roots ? s.root_coords : s.dynkin) << "\n";
      os << "      depth: " << (s.depth >= 0 ? s.depth : default_verma_depth(rs, m)) << "\n";
    }
  }
  if (cfg.bethe.present) {
    os << "bethe:\n  assignment: [";
    for (int k = 0; k < m; ++k) os << (k ? ", " : "") << cfg.bethe.assignment[static_cast<std::size_t>(k)] + 1;
    os << "]\n  seed_count: " << cfg.bethe.seed_count << "\n";
    if (!cfg.bethe.seeds.empty()) {
      os << "  seeds:\n";
      for (const Vector& v : cfg.bethe.seeds) os << "    - " << list(v) << "\n";
    }
  }
  const Tolerances& t = cfg.tolerances;
  os << "tolerances:\n";
  os << "  charge: " << shortest(t.charge) << "\n";
  os << "  commutator: " << shortest(t.commutator) << "\n";
  os << "  commutator_top: " << shortest(t.commutator_top) << "\n";
  os << "  eigen: " << shortest(t.eigen) << "\n";
  os << "  elliptic_identity: " << shortest(t.elliptic_identity) << "\n";
  os << "  form: " << shortest(t.form) << "\n";
  os << "  jet_fd: " << shortest(t.jet_fd) << "\n";
  os << "  negative_control: " << shortest(t.negative_control) << "\n";
  os << "  newton: " << shortest(t.newton) << "\n";
  os << "  periodicity: " << shortest(t.periodicity) << "\n";
  os << "  pole_limit: " << shortest(t.pole_limit) << "\n";
  os << "  tilde_routes: " << shortest(t.tilde_routes) << "\n";
  os << "  trig_limit: " << shortest(t.trig_limit) << "\n";
  const Sampling& s = cfg.sampling;
  os << "sampling:\n";
  os << "  box: " << shortest(s.box) << "\n";
  os << "  commute_samples: " << s.commute_samples << "\n";
  os << "  elliptic_points: " << s.elliptic_points << "\n";
  os << "  guard: " << shortest(s.guard) << "\n";
  os << "  h_samples: " << s.h_samples << "\n";
  os << "  im_box: " << shortest(s.im_box) << "\n";
  os << "  sweep_points: " << s.sweep_points << "\n";
  os << "  tilde_samples: " << s.tilde_samples << "\n";
  os << "  u_samples: " << s.u_samples << "\n";
  os << "seed: " << cfg.seed << "\n";
  return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_digest(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(echo_config(cfg))));
  return buf;
}

GaudinProblem build_problem(const ExperimentConfig& cfg) {
  const RootSystem rs = config_roots(cfg);
  const int m = static_cast<int>(cfg.bethe.assignment.size());
  std::vector<Site> sites;
  for (const SiteSpec& s : cfg.sites) {
    if (s.kind == SiteSpec::Kind::Irrep) {
      Vector labels(s.dynkin.size());
      for (int k = 0; k < labels.size(); ++k) labels[k] = s.dynkin[k].real();
      sites.push_back({s.z, build_irrep(rs, labels)});
    } else {
      const int depth = s.depth >= 0 ? s.depth : default_verma_depth(rs, m);
      sites.push_back({s.z, build_dual_verma(rs, site_weight(rs, s), depth)});
    }
  }
  return {rs, ModularData(cfg.tau), std::move(sites)};
}

BetheConfig build_bethe(const ExperimentConfig& cfg) {
  if (!cfg.bethe.present) throw ConfigError("config has no bethe section");
  return {build_problem(cfg), cfg.bethe.assignment};
}

}  // namespace facegaudin
