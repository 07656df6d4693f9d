#include "sephier/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sephier/dps.hpp"
#include "sephier/error.hpp"
#include "sephier/groebner.hpp"
#include "sephier/kkt.hpp"
#include "sephier/oracle.hpp"
#include "sephier/problem_io.hpp"
#include "sephier/relaxation.hpp"
#include "sephier/witness.hpp"

namespace sephier {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct Input {
  std::string path;
  std::string bytes;
  json doc;
  std::string digest;
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Input input{path, ss.str(), {}, {}};
  try {
    input.doc = json::parse(input.bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, "'" + path + "' is not valid JSON: " + e.what());
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(input.bytes)));
  input.digest = std::string("fnv1a64:") + buf;
  return input;
}

class PhaseTimer {
 public:
  template <typename F>
  auto run(const std::string& phase, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(phase, t0);
    } else {
      auto result = f();
      record(phase, t0);
      return result;
    }
  }
  json to_json() const {
    json t = json::object();
    for (const auto& [k, v] : seconds_) t[k] = v;
    return t;
  }

 private:
  void record(const std::string& phase, std::chrono::steady_clock::time_point t0) {
    seconds_[phase] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  std::map<std::string, double> seconds_;
};

json residuals_json(const SdpResiduals& r) {
  return {{"primal_infeasibility", r.primal_infeasibility},
          {"dual_infeasibility", r.dual_infeasibility},
          {"relative_gap", r.relative_gap},
          {"min_eig_x", r.min_eig_x},
          {"min_eig_s", r.min_eig_s}};
}

void emit(std::ostream& out, const json& report) { out << report.dump(2) << '\n'; }

const ComplexHermitianOperator& require_bipartite(const Problem& p, const std::string& what) {
  if (p.kind != Problem::Kind::ComplexHermitian || !p.op || p.op->copies() != 2) {
    throw Error(ErrorKind::InvalidInput, what + " needs a complex_hermitian input with d = 2");
  }
  return *p.op;
}

// ------------------------------------------------------------------ commands

struct BoundArgs {
  std::string problem;
  int level = 0;
  bool kkt = true;
  std::uint64_t seed = 1;
  int restarts = 20;
  double tol = 1e-6;
  std::string certificate;
  bool timings = false;
  int max_moment_side = default_max_moment_side();
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  PhaseTimer timer;
  const Input input = read_input(a.problem);
  const Problem problem = parse_problem(input.doc);
  HierarchyConfig cfg;
  cfg.num_vars = problem.num_vars();
  cfg.half_degree = problem.half_degree();
  cfg.level = a.level;
  cfg.kkt_enabled = a.kkt;
  cfg.max_moment_side = a.max_moment_side;
  SolverOptions opts = hierarchy_solver_options();
  opts.gap_tolerance = a.tol;

  const MomentProgram prog = timer.run("build", [&] { return build_moment_sdp(problem.tensor, cfg); });
  const MomentSolution sol = timer.run("solve", [&] { return solve_moment(prog, opts); });
  const OracleResult oracle =
      timer.run("oracle", [&] { return multistart(problem.objective, a.restarts, a.seed); });

  json report;
  report["format"] = 1;
  report["command"] = "bound";
  report["input"] = input.path;
  report["input_digest"] = input.digest;
  report["config"] = {{"level", a.level},
                      {"kkt", a.kkt},
                      {"seed", a.seed},
                      {"restarts", a.restarts},
                      {"tol", a.tol},
                      {"num_vars", cfg.num_vars},
                      {"half_degree", cfg.half_degree},
                      {"moment_side", cfg.moment_side()},
                      {"max_moment_side", cfg.max_moment_side}};
  report["status"] = to_string(sol.status);
  report["iterations"] = sol.raw.iterations;
  report["upper_bound"] = sol.bound;
  report["primal_objective"] = sol.objective;
  report["lower_bound"] = oracle.best_value;
  report["lower_point"] = oracle.best_point;
  report["lower_kkt_residual"] = oracle.kkt_residual;
  report["gap"] = sol.bound - oracle.best_value;
  report["residuals"] = residuals_json(sol.residuals);
  report["certificate"] = nullptr;
  if (sol.status == SdpStatus::Optimal) {
    const SosCertificate cert = timer.run("certificate", [&] { return extract_certificate(prog, sol.raw); });
    report["certificate_residual"] = verify_certificate(problem.tensor, cert);
    report["min_gram_eigenvalue"] = min_gram_eigenvalue(cert);
    if (!a.certificate.empty()) {
      std::ofstream f(a.certificate);
      if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + a.certificate + "'");
      f << certificate_to_json(cert).dump(1) << '\n';
      report["certificate"] = a.certificate;
    }
  }
  if (a.timings) report["timings"] = timer.to_json();
  emit(out, report);
  return sol.status == SdpStatus::Optimal ? kExitOk : kExitNumerical;
}

struct CertifyArgs {
  std::string problem;
  std::string certificate;
  double tol = 1e-6;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  const Input input = read_input(a.problem);
  const Problem problem = parse_problem(input.doc);
  const Input cert_input = read_input(a.certificate);
  const SosCertificate cert = certificate_from_json(cert_input.doc);
  const double residual = verify_certificate(problem.tensor, cert);
  const bool passed = residual <= a.tol;
  json report = {{"format", 1},
                 {"command", "certify"},
                 {"input", input.path},
                 {"input_digest", input.digest},
                 {"certificate", cert_input.path},
                 {"certificate_digest", cert_input.digest},
                 {"nu", cert.nu},
                 {"residual", residual},
                 {"tol", a.tol},
                 {"min_gram_eigenvalue", min_gram_eigenvalue(cert)},
                 {"passed", passed}};
  emit(out, report);
  return passed ? kExitOk : kExitNumerical;
}

struct DpsArgs {
  std::string problem;
  int k = 1;
  bool ppt = false;
  bool timings = false;
};

int cmd_dps(const DpsArgs& a, std::ostream& out) {
  PhaseTimer timer;
  const Input input = read_input(a.problem);
  const Problem problem = parse_problem(input.doc);
  const ComplexHermitianOperator& m = require_bipartite(problem, "dps");
  const DpsResult r = timer.run("solve", [&] { return solve_dps(m, a.k, a.ppt); });
  json report = {{"format", 1},
                 {"command", "dps"},
                 {"input", input.path},
                 {"input_digest", input.digest},
                 {"config", {{"k", a.k}, {"ppt", a.ppt}, {"n", m.local_dim()}}},
                 {"status", to_string(r.status)},
                 {"iterations", r.raw.iterations},
                 {"value", r.value},
                 {"bound", r.bound},
                 {"residuals", residuals_json(r.raw.residuals)}};
  if (a.timings) report["timings"] = timer.to_json();
  emit(out, report);
  return r.status == SdpStatus::Optimal ? kExitOk : kExitNumerical;
}

struct WitnessArgs {
  std::string state;
  int level = 1;
  bool ppt = false;
  bool timings = false;
};

int cmd_witness(const WitnessArgs& a, std::ostream& out) {
  PhaseTimer timer;
  const Input input = read_input(a.state);
  const ComplexHermitianOperator rho = parse_complex_hermitian(input.doc);
  const WitnessSearchResult r = timer.run("search", [&] { return dps_witness_search(rho, a.level, a.ppt); });
  json report = {{"format", 1},
                 {"command", "witness"},
                 {"input", input.path},
                 {"input_digest", input.digest},
                 {"config", {{"level", a.level}, {"ppt", a.ppt}}},
                 {"detected", r.detected},
                 {"value", r.value},
                 {"threshold", kDetectionThreshold},
                 {"Z", complex_hermitian_to_json(r.witness.z)},
                 {"validated_margin", r.witness.margin},
                 {"valid", r.witness.valid}};
  if (a.timings) report["timings"] = timer.to_json();
  emit(out, report);
  return kExitOk;
}

struct OracleArgs {
  std::string problem;
  int restarts = 20;
  std::uint64_t seed = 1;
  std::optional<double> net;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
  const Input input = read_input(a.problem);
  const Problem problem = parse_problem(input.doc);
  const OracleResult r = multistart(problem.objective, a.restarts, a.seed);
  json report = {{"format", 1},
                 {"command", "oracle"},
                 {"input", input.path},
                 {"input_digest", input.digest},
                 {"config", {{"restarts", a.restarts}, {"seed", a.seed}}},
                 {"value", r.best_value},
                 {"point", r.best_point},
                 {"kkt_residual", r.kkt_residual}};
  if (a.net) {
    const NetBracket b = net_enumerate(problem.objective, *a.net);
    report["bracket"] = {{"lower", b.lower},     {"upper", b.upper},   {"delta", *a.net},
                         {"lipschitz", b.lipschitz}, {"points", b.points}, {"point", b.point}};
  }
  emit(out, report);
  return kExitOk;
}

struct GroebnerArgs {
  std::string problem;
  int cap = 30;
  std::int64_t denominator_cap = 1'000'000;
};

int cmd_groebner(const GroebnerArgs& a, std::ostream& out) {
  const Input input = read_input(a.problem);
  const Problem problem = parse_problem(input.doc);
  const SnapResult snapped = snap_to_rational(problem.objective, a.denominator_cap);
  const std::vector<RationalPolynomial> gens = kkt_generators(snapped.polynomial);
  int generator_degree = 0;
  for (const auto& g : gens) generator_degree = std::max(generator_degree, g.degree());
  const int n = problem.num_vars();

  json report = {{"format", 1},
                 {"command", "groebner analyze"},
                 {"input", input.path},
                 {"input_digest", input.digest},
                 {"config", {{"cap", a.cap}, {"denominator_cap", a.denominator_cap}}},
                 {"ordering", "grlex"},
                 {"generators", gens.size()},
                 {"max_snap_distance", snapped.max_distance}};
  try {
    const GroebnerBasis basis = buchberger(gens, a.cap);
    json degrees = json::array();
    json elements = json::array();
    for (const auto& g : basis.elements) {
      degrees.push_back(g.degree());
      elements.push_back(g.to_string());
    }
    const int dim = ideal_dimension(basis);
    report["cap_hit"] = false;
    report["basis_degrees"] = degrees;
    report["basis"] = elements;
    report["zero_dimensional"] = is_zero_dimensional(basis);
    report["ideal_dimension"] = dim;
    report["paper_degree_bound"] = to_string(degree_bound_report(n, generator_degree, std::max(dim, 0)));
  } catch (const CapExceededError& e) {
    report["cap_hit"] = true;
    report["cap_degree"] = e.degree();
    report["basis_degrees"] = json::array();
    report["zero_dimensional"] = nullptr;
    report["paper_degree_bound"] = to_string(degree_bound_report(n, generator_degree, 0));
  }
  emit(out, report);
  return kExitOk;
}

int cmd_kkt_dump(const std::string& path, std::ostream& out) {
  const Input input = read_input(path);
  const Problem problem = parse_problem(input.doc);
  const KktSystem sys = build_kkt_system(problem.objective);
  json minors = json::array();
  for (const auto& m : sys.minors()) {
    minors.push_back({{"i", m.i}, {"j", m.j}, {"type", "real_polynomial"}, {"vars", sys.num_vars()},
                      {"degree", 2 * sys.half_degree()}, {"terms", polynomial_terms_to_json(m.polynomial)}});
  }
  json report = {{"format", 1},
                 {"command", "kkt dump"},
                 {"input", input.path},
                 {"input_digest", input.digest},
                 {"num_vars", sys.num_vars()},
                 {"degree", 2 * sys.half_degree()},
                 {"objective", polynomial_terms_to_json(sys.objective())},
                 {"sphere", polynomial_terms_to_json(sys.sphere())},
                 {"minors", minors}};
  emit(out, report);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified upper bounds for product-symmetric polynomial optimization", "sephier"};
  app.require_subcommand(1);

  BoundArgs bound;
  auto* c_bound = app.add_subcommand("bound", "Level-r hierarchy bound, oracle lower bound and certificate");
  c_bound->add_option("problem", bound.problem, "Problem JSON")->required();
  c_bound->add_option("--level,-r", bound.level, "Hierarchy level r")->check(CLI::NonNegativeNumber);
  c_bound->add_flag("--kkt,!--no-kkt", bound.kkt, "KKT moment constraints (default on)");
  c_bound->add_option("--seed", bound.seed, "Oracle seed");
  c_bound->add_option("--restarts", bound.restarts, "Oracle restarts")->check(CLI::PositiveNumber);
  c_bound->add_option("--tol", bound.tol, "Solver gap tolerance")->check(CLI::PositiveNumber);
  c_bound->add_option("--certificate", bound.certificate, "Write the SOS certificate here");
  c_bound->add_flag("--timings", bound.timings, "Include wall-clock timings");
  c_bound->add_option("--max-moment-side", bound.max_moment_side, "Size guard on the moment matrix side")
      ->check(CLI::PositiveNumber);

  CertifyArgs certify;
  auto* c_certify = app.add_subcommand("certify", "Verify an SOS certificate against a problem");
  c_certify->add_option("problem", certify.problem, "Problem JSON")->required();
  c_certify->add_option("certificate", certify.certificate, "Certificate JSON")->required();
  c_certify->add_option("--tol", certify.tol, "Residual tolerance")->check(CLI::NonNegativeNumber);

  DpsArgs dps;
  auto* c_dps = app.add_subcommand("dps", "Symmetric-extension (DPS) bound for a bipartite operator");
  c_dps->add_option("problem", dps.problem, "complex_hermitian JSON with d = 2")->required();
  c_dps->add_option("--k", dps.k, "Number of B extensions")->check(CLI::PositiveNumber);
  c_dps->add_flag("--ppt", dps.ppt, "Add PPT cuts");
  c_dps->add_flag("--timings", dps.timings, "Include wall-clock timings");

  WitnessArgs witness;
  auto* c_witness = app.add_subcommand("witness", "Search for an entanglement witness");
  c_witness->add_option("state", witness.state, "State JSON (complex_hermitian, unit trace)")->required();
  c_witness->add_option("--level,-r", witness.level, "Extension level")->check(CLI::PositiveNumber);
  c_witness->add_flag("--ppt", witness.ppt, "Add PPT cuts");
  c_witness->add_flag("--timings", witness.timings, "Include wall-clock timings");

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "Multistart ascent lower bound, optional net bracket");
  c_oracle->add_option("problem", oracle.problem, "Problem JSON")->required();
  c_oracle->add_option("--restarts", oracle.restarts, "Restarts")->check(CLI::PositiveNumber);
  c_oracle->add_option("--seed", oracle.seed, "Seed");
  c_oracle->add_option("--net", oracle.net, "Net resolution delta")->check(CLI::PositiveNumber);

  GroebnerArgs groebner;
  auto* c_groebner = app.add_subcommand("groebner", "KKT ideal analysis");
  c_groebner->require_subcommand(1);
  auto* c_analyze = c_groebner->add_subcommand("analyze", "Groebner basis of the KKT ideal");
  c_analyze->add_option("problem", groebner.problem, "Problem JSON")->required();
  c_analyze->add_option("--cap", groebner.cap, "Degree cap")->check(CLI::PositiveNumber);
  c_analyze->add_option("--denominator-cap", groebner.denominator_cap, "Rational snapping cap")
      ->check(CLI::PositiveNumber);

  std::string kkt_problem;
  auto* c_kkt = app.add_subcommand("kkt", "KKT system tools");
  c_kkt->require_subcommand(1);
  auto* c_dump = c_kkt->add_subcommand("dump", "Write the minor polynomials");
  c_dump->add_option("problem", kkt_problem, "Problem JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_bound->parsed()) return cmd_bound(bound, out);
    if (c_certify->parsed()) return cmd_certify(certify, out);
    if (c_dps->parsed()) return cmd_dps(dps, out);
    if (c_witness->parsed()) return cmd_witness(witness, out);
    if (c_oracle->parsed()) return cmd_oracle(oracle, out);
    if (c_analyze->parsed()) return cmd_groebner(groebner, out);
    if (c_dump->parsed()) return cmd_kkt_dump(kkt_problem, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == ErrorKind::SolverFailure ? kExitNumerical : kExitInput;
  } catch (const json::exception& e) {
    err << "error [InvalidInput]: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace sephier
