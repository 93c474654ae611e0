// graphkirchhoff: command-line front end.
//
// Exit codes: 0 success, 1 input/usage error, 2 validation error,
// 3 convergence failure, 4 property or doubling failure.

#include "graphkirchhoff/error.hpp"
#include "graphkirchhoff/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace gk = graphkirchhoff;
using gk::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailure = 4;

void emit(const std::string& out_path, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    gk::io::write_text_file(out_path, text);
  }
}

gk::WorkingGraph load_graph(const std::string& path) {
  const auto [graph, dom] = gk::io::parse_graph(gk::io::read_json_file(path));
  return gk::WorkingGraph::build(graph, dom);
}

struct SolveArgs {
  std::string graph, params, mode = "both", out;
  int seeds = 16;
  double tol = 1e-8;
  double proj_tol = 1e-10;
  std::uint64_t rng_seed = 0;
  int max_iters = 2000;
};

int cmd_solve(const SolveArgs& a) {
  const gk::WorkingGraph g = load_graph(a.graph);
  const gk::ModelParams params = gk::io::parse_params(gk::io::read_json_file(a.params), g);
  gk::SolveConfig cfg;
  cfg.seeds = a.seeds;
  cfg.grad_tol = a.tol;
  cfg.proj_tol = a.proj_tol;
  cfg.rng_seed = a.rng_seed;
  cfg.max_iters = a.max_iters;
  const gk::SolveMode mode =
      a.mode == "ground" ? gk::SolveMode::Ground : (a.mode == "nodal" ? gk::SolveMode::Nodal : gk::SolveMode::Both);
  const gk::SolveReport report = gk::solve(g, params, cfg, mode);
  emit(a.out, gk::io::to_json(report, g));
  if (report.ground) std::cerr << "c (best found) = " << report.ground->level << "\n";
  if (report.nodal) std::cerr << "m (best found) = " << report.nodal->level << "\n";
  if (mode == gk::SolveMode::Both) {
    std::cerr << "m / c = " << report.ratio() << ", m >= 2c: " << (report.doubling_ok() ? "yes" : "NO") << "\n";
    if (!report.doubling_ok()) return kPropertyFailure;
  }
  return kOk;
}

int cmd_verify(int trials, std::uint64_t seed, const std::string& out) {
  const gk::PropertyReport report = gk::run_suite(trials, seed);
  for (const auto& c : report.checks) {
    std::fprintf(stderr, "%-30s %8ld evaluations %6ld failures  worst %.3e%s\n", c.name.c_str(), c.evaluations,
                 c.failures, c.worst, c.informational ? "  (informational)" : "");
  }
  std::fprintf(stderr, "%ld failures in %.2f s\n", report.failures(), report.elapsed.count());
  emit(out, gk::io::to_json(report));
  return report.failures() == 0 ? kOk : kPropertyFailure;
}

int cmd_project(const std::string& graph, const std::string& params_path, const std::string& input,
                const std::string& kind, double tol) {
  const gk::WorkingGraph g = load_graph(graph);
  const gk::ModelParams params = gk::io::parse_params(gk::io::read_json_file(params_path), g);
  const Eigen::VectorXd u = gk::io::parse_function(gk::io::read_json_file(input), g);
  if (kind == "scalar") {
    gk::ProjectionOptions opts;
    opts.tol = tol;
    emit("", gk::io::to_json(gk::scalar_project(g, params, u, opts)));
  } else {
    gk::PairProjectionOptions opts;
    opts.tol = tol;
    emit("", gk::io::to_json(gk::pair_project(g, params, u, opts)));
  }
  return kOk;
}

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw gk::InputError("--range must look like A:B");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string sa = s.substr(0, colon), sb = s.substr(colon + 1);
    const double a = std::stod(sa, &used_a);
    const double b = std::stod(sb, &used_b);
    if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::logic_error&) {
    throw gk::InputError("--range must look like A:B with numbers A and B (got '" + s + "')");
  }
}

int cmd_sample(double p, double r, const std::string& range, int points, const std::string& out) {
  const auto [lo, hi] = parse_range(range);
  if (!(lo > 0.0 && lo < hi && std::isfinite(hi))) throw gk::InputError("--range needs 0 < A < B");
  if (points < 2) throw gk::InputError("--points must be >= 2");
  if (!(p > 4.0)) throw gk::InputError("--p must be > 4");
  if (!(r >= 1.0)) throw gk::InputError("--r must be >= 1");

  std::ostringstream csv;
  csv << "s,ratio\n";
  char buf[64];
  const double llo = std::log(lo), lhi = std::log(hi);
  double prev = 0.0, drop_s1 = 0.0, drop_s2 = 0.0, s_prev = 0.0;
  bool non_monotone = false;
  for (int i = 0; i < points; ++i) {
    const double s = i == 0 ? lo : (i == points - 1 ? hi : std::exp(llo + (lhi - llo) * i / (points - 1)));
    const double ratio = gk::nodal_ratio(s, p, r);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s, ratio);
    csv << buf;
    if (i > 0 && ratio < prev && !non_monotone) {
      non_monotone = true;
      drop_s1 = s_prev;
      drop_s2 = s;
    }
    prev = ratio;
    s_prev = s;
  }
  gk::io::write_text_file(out, csv.str());
  if (non_monotone) {
    std::printf("non_monotone=true s1=%.17g s2=%.17g ratio(s1)>ratio(s2)\n", drop_s1, drop_s2);
  } else {
    std::printf("non_monotone=false\n");
  }
  return kOk;
}

int cmd_validate(const std::string& path) {
  const auto [graph, dom] = gk::io::parse_graph(gk::io::read_json_file(path));
  const auto violations = gk::validate(graph, dom);
  emit("", json{{"valid", violations.empty()}, {"violations", violations}});
  return violations.empty() ? kOk : gk::ValidationError::kExitCode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states and sign-changing solutions of a Kirchhoff problem with logarithmic nonlinearity on weighted graphs"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Compute the ground-state level c and the nodal level m");
  s->add_option("--graph", solve.graph, "Graph JSON file")->required();
  s->add_option("--params", solve.params, "Parameter JSON file")->required();
  s->add_option("--mode", solve.mode, "ground, nodal or both")
      ->check(CLI::IsMember({"ground", "nodal", "both"}))
      ->capture_default_str();
  s->add_option("--seeds", solve.seeds, "Number of random starts")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--tol", solve.tol, "Max pointwise residual for convergence")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--proj-tol", solve.proj_tol, "Membership tolerance for the projections")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--rng-seed", solve.rng_seed, "Seed of the random starts")->capture_default_str();
  s->add_option("--max-iters", solve.max_iters, "Descent iterations per seed")->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--out", solve.out, "Report path (stdout if omitted)");

  int trials = 100;
  std::uint64_t seed = 0;
  std::string verify_out;
  auto* v = app.add_subcommand("verify", "Run the randomized property suite");
  v->add_option("--trials", trials, "Random instances")->required()->check(CLI::PositiveNumber);
  v->add_option("--seed", seed, "Suite seed")->required();
  v->add_option("--out", verify_out, "Report path (stdout if omitted)");

  std::string pg, pp, pin, kind = "scalar";
  double ptol = 1e-10;
  auto* pr = app.add_subcommand("project", "Project a function onto the Nehari set or the nodal set");
  pr->add_option("--graph", pg, "Graph JSON file")->required();
  pr->add_option("--params", pp, "Parameter JSON file")->required();
  pr->add_option("--input", pin, "Function JSON file {vertex: value}")->required();
  pr->add_option("--kind", kind, "scalar or pair")->check(CLI::IsMember({"scalar", "pair"}))->capture_default_str();
  pr->add_option("--tol", ptol, "Residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();

  double sp = 0.0, sr = 0.0;
  std::string range, sample_out;
  int points = 0;
  auto* sn = app.add_subcommand("sample-nonlinearity", "Sample |s|^{p-2} s ln|s|^r / |s|^3 on a log grid");
  sn->add_option("--p", sp, "Exponent p")->required();
  sn->add_option("--r", sr, "Log exponent r")->required();
  sn->add_option("--range", range, "Sampling range A:B with 0 < A < B")->required();
  sn->add_option("--points", points, "Number of samples")->required();
  sn->add_option("--out", sample_out, "CSV output path")->required();

  std::string vg;
  auto* va = app.add_subcommand("validate", "Check a graph file against the domain invariants");
  va->add_option("--graph", vg, "Graph JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gk::InputError::kExitCode;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*v) return cmd_verify(trials, seed, verify_out);
    if (*pr) return cmd_project(pg, pp, pin, kind, ptol);
    if (*sn) return cmd_sample(sp, sr, range, points, sample_out);
    if (*va) return cmd_validate(vg);
  } catch (const gk::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return gk::InputError::kExitCode;
  } catch (const gk::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return gk::ValidationError::kExitCode;
  } catch (const gk::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return gk::ConvergenceError::kExitCode;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return gk::InputError::kExitCode;
  }
  return kOk;
}
