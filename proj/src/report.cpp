#include <json.hpp>

#include <cstdio>
#include <sstream>

#include "facegaudin/cli.hpp"

namespace facegaudin {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

}  // namespace

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string emit_text(const Report& report) {
  std::ostringstream os;
  os << "# " << report.command << "  instance " << report.digest << "  seed " << report.seed << "\n";
  std::istringstream echo(report.config_echo);
  for (std::string line; std::getline(echo, line);) os << "#   " << line << "\n";
  std::size_t width = 0;
  for (const CheckRecord& r : report.records) width = std::max(width, r.name.size());
  int passed = 0;
  for (const CheckRecord& r : report.records) {
    passed += r.pass ? 1 : 0;
    os << (r.pass ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ');
    os << "residual " << (r.residual ? sci(*r.residual) : std::string("   -     ")) << "  tol " << sci(r.tolerance);
    char wall[32];
    std::snprintf(wall, sizeof(wall), "  %7.3fs", r.wall_seconds);
    os << wall;
    if (!r.detail.empty()) os << "  " << r.detail;
    os << "\n";
    for (const auto& [key, value] : r.data) os << "        " << key << ": " << value << "\n";
  }
  if (!report.sweep.empty()) os << "sweep: " << report.sweep.size() << " u-points (csv format writes the table)\n";
  os << "verdict: " << (report.pass() ? "PASS" : "FAIL") << " (" << passed << "/" << report.records.size()
     << " checks passed)\n";
  return os.str();
}

std::string emit_jsonl(const Report& report) {
  std::string out;
  for (const CheckRecord& r : report.records) {
    nlohmann::json j;
    j["command"] = report.command;
    j["check"] = r.name;
    j["digest"] = r.digest;
    j["seed"] = report.seed;
    j["residual"] = r.residual ? nlohmann::json(*r.residual) : nlohmann::json(nullptr);
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["detail"] = r.detail;
    j["data"] = r.data;
    out += j.dump() + "\n";
  }
  return out;
}

std::string emit_csv(const Report& report) {
  std::string out = "check,digest,residual,tolerance,pass,detail\n";
  for (const CheckRecord& r : report.records) {
    out += csv_quote(r.name) + "," + r.digest + "," + (r.residual ? real_literal(*r.residual) : "") + "," +
           real_literal(r.tolerance) + "," + (r.pass ? "true" : "false") + "," + csv_quote(r.detail) + "\n";
  }
  return out;
}

std::string emit_sweep_csv(const Report& report) {
  std::string out = "u_re,u_im,tau_psi_re,tau_psi_im\n";
  for (const SweepRow& s : report.sweep) {
    out += real_literal(s.u.real()) + "," + real_literal(s.u.imag()) + "," + real_literal(s.tau_psi.real()) + "," +
           real_literal(s.tau_psi.imag()) + "\n";
  }
  return out;
}

std::string emit_elliptic_csv(const Report& report) {
  std::string out = "z_re,z_im,c_re,c_im,theta_re,theta_im,zeta_re,zeta_im,w_re,w_im\n";
  for (const EllipticRow& e : report.elliptic) {
    for (cplx v : {e.z, e.c, e.theta, e.zeta}) out += real_literal(v.real()) + "," + real_literal(v.imag()) + ",";
    out += real_literal(e.w.real()) + "," + real_literal(e.w.imag()) + "\n";
  }
  return out;
}

}  // namespace facegaudin
