#include <CLI11.hpp>

#include <cstdio>
#include <optional>

#include "nldirac/workbench.hpp"

namespace {

// flag values; unset options leave the config untouched
struct Flags {
  std::string config;
  std::optional<int> m, K, n_grid, threads, max_iter;
  std::optional<std::string> nl, lambda_grid, suite, output;
  std::optional<double> alpha, p, q, lambda, weyl_lambda, grad_tol, fiber_tol;
  std::optional<std::uint64_t> seed;
  std::vector<int> second_near;
  std::vector<double> eps_sweep;
  bool no_guard = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("-c,--config", f.config, "YAML run config; flags override its values");
  sub->add_option("--dim", f.m, "torus dimension m");
  sub->add_option("--cutoff", f.K, "Galerkin cutoff K");
  sub->add_option("--n-grid", f.n_grid, "collocation grid points per axis");
  sub->add_option("--output", f.output, "output directory (relative to $NLD_OUTPUT_ROOT if set)");
  sub->add_option("--seed", f.seed, "seed");
  sub->add_option("--threads", f.threads, "worker threads");
}

void add_solver(CLI::App* sub, Flags& f) {
  sub->add_option("--nl", f.nl, "nonlinearity: bnd, power, log_critical");
  sub->add_option("--alpha", f.alpha, "nonlinearity coefficient");
  sub->add_option("--p", f.p, "power exponent, 2 < p < 2*");
  sub->add_option("--q", f.q, "log-critical exponent");
  sub->add_option("--grad-tol", f.grad_tol, "sphere descent gradient tolerance");
  sub->add_option("--fiber-tol", f.fiber_tol, "fiber ascent tolerance");
  sub->add_option("--max-iter", f.max_iter, "descent iteration cap");
  sub->add_flag("--no-guard", f.no_guard, "exit 0 even when an energy reaches gamma_crit");
}

void apply(const Flags& f, nld::RunConfig& c) {
  if (f.m) c.m = *f.m;
  if (f.K) c.K = *f.K;
  if (f.n_grid) c.n_grid = *f.n_grid;
  if (f.threads) c.threads = *f.threads;
  if (f.max_iter) c.tol.max_iter = *f.max_iter;
  if (f.nl) c.nl.kind = *f.nl;
  if (f.alpha) c.nl.alpha = *f.alpha;
  if (f.p) c.nl.p = *f.p;
  if (f.q) c.nl.q = *f.q;
  if (f.lambda) c.lambda = *f.lambda;
  if (f.lambda_grid) {
    c.lambda_grid = *f.lambda_grid;
    c.lambdas = nld::parse_lambda_grid(*f.lambda_grid);
  }
  if (f.suite) c.suite = *f.suite;
  if (f.output) c.output = *f.output;
  if (f.weyl_lambda) c.weyl_lambda = *f.weyl_lambda;
  if (f.grad_tol) c.tol.grad_tol = *f.grad_tol;
  if (f.fiber_tol) c.tol.fiber_tol = *f.fiber_tol;
  if (f.seed) c.seed = *f.seed;
  if (!f.second_near.empty()) c.second_near = f.second_near;
  if (!f.eps_sweep.empty()) c.eps_sweep = f.eps_sweep;
  if (f.no_guard) c.guard = false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlinear Dirac workbench on flat tori"};
  app.require_subcommand(1);
  Flags f;
  std::string run_path;

  auto* clifford = app.add_subcommand("clifford", "check the Clifford relations");
  auto* spectrum = app.add_subcommand("spectrum", "tabulate the Dirac spectrum");
  auto* weyl = app.add_subcommand("weyl", "eigenvalue counts against the Weyl law");
  auto* testspinor = app.add_subcommand("testspinor", "test-spinor energy sweep");
  auto* solve = app.add_subcommand("solve", "least-energy solution at lambda");
  auto* branch = app.add_subcommand("branch", "branch sweep over a lambda grid");
  auto* multiplicity = app.add_subcommand("multiplicity", "nu-window eigenvalue count");
  auto* acc = app.add_subcommand("accept", "run an acceptance suite");
  auto* run = app.add_subcommand("run", "execute a config file");
  for (auto* s : {clifford, spectrum, weyl, testspinor, solve, branch, multiplicity, acc})
    add_common(s, f);
  for (auto* s : {solve, branch}) add_solver(s, f);
  for (auto* s : {solve, branch, multiplicity, testspinor})
    s->add_option("--lambda", f.lambda, "spectral parameter");
  for (auto* s : {solve, branch, multiplicity})
    s->add_option("--lambda-grid", f.lambda_grid, "a:b:step");
  branch->add_option("--second-near", f.second_near, "eigenvalue indices k for second branches");
  testspinor->add_option("--eps", f.eps_sweep, "decreasing eps values");
  weyl->add_option("--Lambda", f.weyl_lambda, "count threshold");
  acc->add_option("suite", f.suite, "clifford, spectral, testspinor, variational, branch, all");
  run->add_option("config", run_path, "YAML run config")->required();
  add_solver(run, f);
  run->add_option("--output", f.output, "output directory");
  run->add_option("--threads", f.threads, "worker threads");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  nld::RunConfig cfg;
  try {
    const std::string& path = sub == run ? run_path : f.config;
    if (!path.empty()) cfg = nld::load_config(path);
    if (sub != run) cfg.operation = sub->get_name();
    apply(f, cfg);
    nld::validate(cfg);
  } catch (const nld::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return nld::kExitConfig;
  } catch (const nld::InvalidArgument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return nld::kExitConfig;
  }

  const nld::RunResult r = nld::run(cfg);
  std::printf("%s\n", r.summary.c_str());
  for (const auto& p : r.files) std::printf("wrote %s\n", p.string().c_str());
  return r.exit_code;
}
