#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "facegaudin/cli.hpp"

namespace fs = std::filesystem;
using namespace facegaudin;

namespace {

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks for the face-type elliptic Gaudin model"};
  app.require_subcommand(1);
  std::string config_path;
  std::string format = "text";
  std::string out_dir;
  std::uint64_t seed = 0;
  bool negative_control = false;

  const std::vector<std::string> commands{"elliptic-check", "describe-algebra", "commute-check",
                                          "bethe-solve",    "eigen-check",      "full-verify"};
  std::vector<CLI::Option*> seed_opts;
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", format, "text, jsonl or csv")->check(CLI::IsMember({"text", "jsonl", "csv"}));
    sub->add_option("--out", out_dir, "directory for report files (stdout when absent)");
    seed_opts.push_back(sub->add_option("--seed", seed, "rng seed, overrides the config"));
    sub->add_flag("--negative-control", negative_control, "perturb t_1 by 1e-3 before the eigenvector check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
    return 2;
  }
  for (const CLI::Option* o : seed_opts) {
    if (o->count() > 0) cfg.seed = seed;
  }

  RunOptions opts;
  opts.negative_control = negative_control;
  const Report report = run(parse_command(sub->get_name()), cfg, opts);

  std::string main_text;
  if (format == "text") main_text = emit_text(report);
  else if (format == "jsonl") main_text = emit_jsonl(report);
  else main_text = emit_csv(report);

  if (out_dir.empty()) {
    std::cout << main_text;
    if (format == "csv") {
      if (!report.sweep.empty()) std::cout << "\n" << emit_sweep_csv(report);
      if (!report.elliptic.empty()) std::cout << "\n" << emit_elliptic_csv(report);
    }
  } else {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const std::string ext = format == "text" ? "txt" : format;
    bool ok = !ec && write_file(fs::path(out_dir) / ("report." + ext), main_text);
    if (ok && format == "csv") {
      if (!report.sweep.empty()) ok = write_file(fs::path(out_dir) / "sweep.csv", emit_sweep_csv(report));
      if (ok && !report.elliptic.empty()) ok = write_file(fs::path(out_dir) / "elliptic.csv", emit_elliptic_csv(report));
    }
    if (!ok) {
      std::cerr << "cannot write report files to '" << out_dir << "'\n";
      return 2;
    }
    std::cerr << "verdict: " << (report.pass() ? "PASS" : "FAIL") << "\n";
  }
  return report.pass() ? 0 : 1;
}
