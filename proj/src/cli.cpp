#include "bihar/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "bihar/biharmonic.hpp"
#include "bihar/elements.hpp"
#include "bihar/golden.hpp"
#include "bihar/mesh.hpp"
#include "bihar/stokes.hpp"

namespace bihar {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Help was requested; text already rendered.
struct HelpRequest {
  std::string text;
};

void add_common(CLI::App* c, RunConfig& cfg, bool list_n) {
  if (list_n)
    c->add_option("--n", cfg.n, "mesh size, or comma-separated list of sizes")->delimiter(',');
  else
    c->add_option("--n", cfg.n, "mesh size (squares per side)")->expected(1);
  c->add_option("--levels", cfg.levels, list_n ? "number of meshes n, 2n, 4n, ... when --n is a single value (0 means 1)"
                                               : "uniform red refinements applied to the mesh")
      ->check(CLI::Range(0, 8));
  c->add_option("--out", cfg.out, "output file");
}

std::vector<int> mesh_sequence(const RunConfig& cfg) {
  if (cfg.n.size() > 1) return cfg.n;
  std::vector<int> s{cfg.n.front()};
  for (int l = 1; l < std::max(1, cfg.levels); ++l) s.push_back(2 * s.back());
  return s;
}

Mesh build_mesh(const RunConfig& cfg) {
  Mesh m = generate_structured(cfg.n.front());
  for (int l = 0; l < cfg.levels; ++l) m = refine_uniform(m);
  return m;
}

// Writes to --out when set, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
      os_ = file_.get();
    }
    *os_ << std::setprecision(12);
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

int cmd_mesh(const RunConfig& cfg, std::ostream& out) {
  const Mesh m = build_mesh(cfg);
  Sink s(cfg.out, out);
  write_mesh(*s, m);
  if (!cfg.out.empty()) out << "vertices " << m.num_vertices() << ", cells " << m.num_cells() << '\n';
  return exit_ok;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Mesh m = build_mesh(cfg);
  const ManufacturedProblem prob = manufactured(cfg.problem);
  SolveOptions opt;
  opt.tol = cfg.tol;
  const SolveResult r = solve(m, scheme_from_name(cfg.scheme), prob.f, opt);
  out << std::setprecision(12);
  out << "scheme " << cfg.scheme << ", problem " << cfg.problem << ", cells " << m.num_cells() << '\n';
  if (r.scheme == Scheme::morley) {
    out << "dofs " << r.primal->name() << ' ' << r.primal->num_dofs() << '\n';
    out << "residual " << r.residual_stage1 << '\n';
  } else {
    out << "stage1 dofs " << r.primal->name() << ' ' << r.primal->num_dofs() << ", residual " << r.residual_stage1
        << '\n';
    out << "stage2 dofs " << r.velocity->name() << ' ' << r.velocity->num_dofs() << " + " << r.pressure->name() << ' '
        << r.pressure->num_dofs() << ", residual " << r.residual_stage2 << ", constraint " << r.constraint_residual
        << '\n';
    out << "stage3 dofs " << r.primal->name() << ' ' << r.primal->num_dofs() << ", residual " << r.residual_stage3
        << '\n';
  }
  const ErrorNorms e = error_norms(*r.primal, r.u, prob.exact());
  out << "errH2 " << e.h2 << '\n' << "errH1 " << e.h1 << '\n' << "errL2 " << e.l2 << '\n';
  if (!cfg.out.empty()) {
    Sink s(cfg.out, out);
    write_field_samples(*s, r.u_field(), 4 * cfg.n.front() << cfg.levels);
  }
  return exit_ok;
}

int cmd_study(const RunConfig& cfg, std::ostream& out) {
  SolveOptions opt;
  opt.tol = cfg.tol;
  const RateTable t = convergence_study(manufactured(cfg.problem), scheme_from_name(cfg.scheme), mesh_sequence(cfg), opt);
  Sink s(cfg.out, out);
  t.write_csv(*s);
  return exit_ok;
}

int verify_complex(const RunConfig& cfg, std::ostream& out) {
  bool ok = true;
  out << std::setprecision(12);
  for (int n : mesh_sequence(cfg)) {
    const ExactnessReport r = exactness_report(generate_structured(n), cfg.order);
    out << "n " << n << ": rank " << r.rank << ", kernel " << r.kernel;
    if (cfg.order == "quartic")
      out << ", dim P " << r.dim_pressure << ", surjective: " << (r.surjective ? "PASS" : "FAIL")
          << ", expected kernel " << r.expected_kernel << ", euler kernel " << r.euler_kernel;
    else
      out << ", b3 " << r.b3_count << ", max jump " << r.b3_max_jump;
    out << ", exact: " << (r.pass() ? "PASS" : "FAIL") << '\n';
    ok = ok && r.pass();
  }
  return ok ? exit_ok : exit_numerical;
}

int verify_elements(const RunConfig& cfg, std::ostream& out) {
  bool ok = true;
  out << std::setprecision(12);
  for (const GoldenEntry& g : golden_tables()) {
    out << (g.informational ? "INFO" : g.pass ? "PASS" : "FAIL") << ' ' << g.element << ' ' << g.label
        << ": expected " << g.expected << ", computed " << g.computed << '\n';
    if (!g.informational) ok = ok && g.pass;
  }
  for (const std::string& name : element_names()) {
    const UnisolvenceReport r = unisolvence_check(name, 100, cfg.seed);
    out << (r.failures == 0 ? "PASS" : "FAIL") << " unisolvence " << name << ": trials " << r.trials << ", failures "
        << r.failures << ", min |det| " << r.min_abs_det << ", max cond " << r.max_condition << '\n';
    ok = ok && r.failures == 0;
  }
  const VeqDeterminantCheck d = veq_determinant_check(100, cfg.seed);
  const bool det_ok = d.max_rel_printed <= 1e-10;
  out << (det_ok ? "PASS" : "FAIL") << " veq determinant " << d.printed << ": max rel deviation " << d.max_rel_printed
      << " (exact " << d.exact << ": " << d.max_rel_exact << ")\n";
  ok = ok && det_ok;
  return ok ? exit_ok : exit_numerical;
}

int verify_infsup(const RunConfig& cfg, std::ostream& out) {
  bool ok = true;
  out << std::setprecision(12);
  const Pair p = pair_from_name(cfg.pair);
  for (const auto& [n, c] : infsup_study(p, mesh_sequence(cfg))) {
    out << pair_name(p) << " n " << n << ": " << c << '\n';
    ok = ok && c > 1e-8;
  }
  return ok ? exit_ok : exit_numerical;
}

RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Nonconforming finite elements for the clamped plate", "bihar"};
  app.require_subcommand(1);
  const std::vector<std::string> schemes{"morley", "cubic", "quartic"};
  const std::vector<std::string> problems{"poly8", "sin2", "zero"};

  CLI::App* mesh = app.add_subcommand("mesh", "write a structured mesh");
  add_common(mesh, cfg, false);

  CLI::App* solve = app.add_subcommand("solve", "solve one manufactured problem");
  add_common(solve, cfg, false);
  solve->add_option("--scheme", cfg.scheme)->check(CLI::IsMember(schemes));
  solve->add_option("--problem", cfg.problem)->check(CLI::IsMember(problems));
  solve->add_option("--tol", cfg.tol)->check(CLI::PositiveNumber);

  CLI::App* study = app.add_subcommand("study", "convergence table as CSV");
  add_common(study, cfg, true);
  study->add_option("--scheme", cfg.scheme)->check(CLI::IsMember(schemes));
  study->add_option("--problem", cfg.problem)->check(CLI::IsMember(problems));
  study->add_option("--tol", cfg.tol)->check(CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand("verify", "element tables, complex exactness, inf-sup constants");
  verify->require_subcommand(1);
  CLI::App* vc = verify->add_subcommand("complex", "rank and kernel of the discrete rot");
  add_common(vc, cfg, true);
  vc->add_option("--order", cfg.order)->check(CLI::IsMember({"cubic", "quartic"}));
  CLI::App* ve = verify->add_subcommand("elements", "golden tables and unisolvence");
  ve->add_option("--seed", cfg.seed);
  CLI::App* vi = verify->add_subcommand("infsup", "discrete inf-sup constants");
  add_common(vi, cfg, true);
  vi->add_option("--pair", cfg.pair)->check(CLI::IsMember({"g2p0", "g2p1", "g3p2"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequest{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequest{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (CLI::App* s : {mesh, solve, study})
    if (s->parsed()) cfg.subcommand = s->get_name();
  if (verify->parsed()) {
    cfg.subcommand = "verify";
    for (CLI::App* s : {vc, ve, vi})
      if (s->parsed()) cfg.target = s->get_name();
  }
  if (cfg.target == "elements") return cfg;
  for (int n : cfg.n)
    if (n < 1 || n > 1024) throw UsageError("--n must lie in 1..1024");
  if (cfg.n.empty()) throw UsageError("--n needs a value");
  for (std::size_t i = 1; i < cfg.n.size(); ++i)
    if (cfg.n[i] != 2 * cfg.n[i - 1]) throw UsageError("--n list must double at each step");
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequest& h) {
    out << h.text;
    return exit_ok;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  }
  try {
    if (cfg.subcommand == "mesh") return cmd_mesh(cfg, out);
    if (cfg.subcommand == "solve") return cmd_solve(cfg, out);
    if (cfg.subcommand == "study") return cmd_study(cfg, out);
    if (cfg.target == "complex") return verify_complex(cfg, out);
    if (cfg.target == "elements") return verify_elements(cfg, out);
    return verify_infsup(cfg, out);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace bihar
