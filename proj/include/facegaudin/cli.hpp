#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "facegaudin/bethe.hpp"

namespace facegaudin {

/// Malformed or semantically invalid configuration. line/column are 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// "0.37+0.11i", "-2i", "1e-3" ... ; throws ConfigError.
cplx parse_complex(const std::string& text);
/// Shortest round-trip spellings, the inverse of parse_complex.
std::string real_literal(double x);
std::string complex_literal(cplx z);

struct SiteSpec {
  enum class Kind { Irrep, DualVerma };
  cplx z;
  Kind kind = Kind::Irrep;
  Vector dynkin;       // irreps, and dual Vermas given by labels
  Vector root_coords;  // dual Vermas given in the simple-root basis
  bool by_roots = false;
  int depth = -1;      // dual Vermas; -1 means the default for the Bethe section
};

struct BetheSpec {
  bool present = false;
  std::vector<int> assignment;  // 0-based simple roots
  int seed_count = 16;
  std::vector<Vector> seeds;    // explicit seeds override the Halton grid
};

struct Tolerances {
  double elliptic_identity = 1e-10;
  double pole_limit = 1e-8;
  double jet_fd = 1e-6;
  double trig_limit = 1e-8;
  double form = 1e-12;
  double commutator = 1e-8;
  double commutator_top = 1e-12;
  double tilde_routes = 1e-6;
  double periodicity = 1e-10;
  double charge = 1e-12;
  double newton = 1e-12;
  double eigen = 1e-7;
  double negative_control = 1e-4;
};

struct Sampling {
  int elliptic_points = 100;
  int commute_samples = 20;
  int tilde_samples = 10;
  int h_samples = 5;
  int u_samples = 5;
  int sweep_points = 100;
  double box = 0.8;
  double im_box = 0.1;
  double guard = 0.05;
};

struct ExperimentConfig {
  int rank = 1;
  cplx tau{0.0, 1.0};
  std::vector<SiteSpec> sites;
  BetheSpec bethe;
  Tolerances tolerances;
  Sampling sampling;
  std::uint64_t seed = 1;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical YAML of the config with every default filled in.
std::string echo_config(const ExperimentConfig& cfg);
std::uint64_t fnv1a64(const std::string& bytes);
std::string instance_digest(const ExperimentConfig& cfg);

RootSystem config_roots(const ExperimentConfig& cfg);
GaudinProblem build_problem(const ExperimentConfig& cfg);
BetheConfig build_bethe(const ExperimentConfig& cfg);

struct CheckRecord {
  std::string name;
  std::string digest;
  std::optional<double> residual;  // empty when the check raised
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
  std::map<std::string, std::string> data;
  double wall_seconds = 0.0;  // text output only
};

struct SweepRow {
  cplx u;
  cplx tau_psi;
};

struct EllipticRow {
  cplx z;
  cplx c;
  cplx theta;
  cplx zeta;
  cplx w;
};

struct Report {
  std::string command;
  std::string digest;
  std::uint64_t seed = 0;
  std::string config_echo;
  std::vector<CheckRecord> records;
  std::vector<SweepRow> sweep;         // tau_Psi(u) of the first Bethe solution
  std::vector<EllipticRow> elliptic;   // value table from elliptic-check
  [[nodiscard]] bool pass() const;
};

enum class Command { EllipticCheck, DescribeAlgebra, CommuteCheck, BetheSolve, EigenCheck, FullVerify };
Command parse_command(const std::string& name);
std::string command_name(Command c);

struct RunOptions {
  bool negative_control = false;
};

/// Runs every check of the command; failures are recorded, never thrown.
Report run(Command command, const ExperimentConfig& cfg, const RunOptions& opts = {});

std::string emit_text(const Report& report);
std::string emit_jsonl(const Report& report);
/// The per-check table; header only when there are no records.
std::string emit_csv(const Report& report);
std::string emit_sweep_csv(const Report& report);
std::string emit_elliptic_csv(const Report& report);
std::string csv_quote(const std::string& field);

}  // namespace facegaudin
