#include "graphkirchhoff/io.hpp"

#include "graphkirchhoff/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace graphkirchhoff::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e9) return static_cast<int>(v);
  }
  throw InputError(where + ": expected an integer");
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> id_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of vertex ids");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(text(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd field_values(const json& j, const WorkingGraph& g, const std::string& name) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  if (j.is_number()) {
    for (Index x : g.interior()) out(x) = j.get<double>();
    return out;
  }
  if (!j.is_object()) throw InputError("params." + name + ": expected a number or an object {vertex: value}");
  std::vector<bool> given(static_cast<std::size_t>(g.size()), false);
  for (const auto& [key, value] : j.items()) {
    const auto idx = g.index_of(key);
    if (!idx) throw ValidationError("params." + name + ": unknown vertex '" + key + "'");
    out(*idx) = number(value, "params." + name + "." + key);
    given[static_cast<std::size_t>(*idx)] = true;
  }
  for (Index x : g.interior()) {
    if (!given[static_cast<std::size_t>(x)]) {
      throw ValidationError("params." + name + ": no value for interior vertex '" + g.id(x) + "'");
    }
  }
  return out;
}

json interior_map(const WorkingGraph& g, const Eigen::VectorXd& v) {
  json out = json::object();
  for (Index x : g.interior()) out[g.id(x)] = v(x);
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json config_to_json(const SolveConfig& c) {
  return {{"seeds", c.seeds},         {"rng_seed", c.rng_seed},   {"step_init", c.step_init},
          {"armijo_c", c.armijo_c},   {"shrink", c.shrink},       {"grad_tol", c.grad_tol},
          {"proj_tol", c.proj_tol},   {"max_iters", c.max_iters}, {"newton_switch", c.newton_switch}};
}

json level_to_json(const LevelResult& r, const WorkingGraph& g) {
  json seeds = json::array();
  json levels = json::array();
  for (const auto& s : r.seeds) {
    seeds.push_back({{"index", s.index},
                     {"converged", s.converged},
                     {"level", s.state.size() ? finite_or_null(s.level) : json(nullptr)},
                     {"residual_max", finite_or_null(s.residual_max)},
                     {"membership", finite_or_null(s.membership)},
                     {"iterations", s.iterations},
                     {"newton_polished", s.polished},
                     {"status", s.status}});
    levels.push_back(s.converged ? json(s.level) : json(nullptr));
  }
  return {{"level", r.level},           {"state", function_to_json(g, r.state)},
          {"residual_max", r.residual_max}, {"membership", r.membership},
          {"best_seed", r.best_seed},   {"per_seed_levels", levels},
          {"seeds", seeds}};
}

std::string sign_pattern(const Eigen::VectorXd& u) {
  const bool pos = u.maxCoeff() > 0.0, neg = u.minCoeff() < 0.0;
  if (pos && neg) return "sign-changing";
  return pos ? "positive" : (neg ? "negative" : "zero");
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::pair<WeightedGraph, Domain> parse_graph(const json& j) {
  WeightedGraph graph;
  Domain dom;
  const json& vertices = field(j, "vertices", "graph");
  if (!vertices.is_array()) throw InputError("graph.vertices: expected an array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string where = "graph.vertices[" + std::to_string(i) + "]";
    graph.vertices.push_back({text(field(vertices[i], "id", where), where + ".id"),
                              number(field(vertices[i], "mu", where), where + ".mu")});
  }
  const json& edges = field(j, "edges", "graph");
  if (!edges.is_array()) throw InputError("graph.edges: expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "graph.edges[" + std::to_string(i) + "]";
    graph.edges.push_back({text(field(edges[i], "u", where), where + ".u"),
                           text(field(edges[i], "v", where), where + ".v"),
                           number(field(edges[i], "w", where), where + ".w")});
  }
  dom.interior = id_list(field(j, "interior", "graph"), "graph.interior");
  dom.boundary = id_list(field(j, "boundary", "graph"), "graph.boundary");
  return {graph, dom};
}

json graph_to_json(const WeightedGraph& graph, const Domain& dom) {
  json vertices = json::array();
  for (const auto& v : graph.vertices) vertices.push_back({{"id", v.id}, {"mu", v.mu}});
  json edges = json::array();
  for (const auto& e : graph.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  return {{"vertices", vertices}, {"edges", edges}, {"interior", dom.interior}, {"boundary", dom.boundary}};
}

ModelParams parse_params(const json& j, const WorkingGraph& g) {
  ModelParams p;
  p.a = number(field(j, "a", "params"), "params.a");
  p.b = number(field(j, "b", "params"), "params.b");
  p.lambda = number(field(j, "lambda", "params"), "params.lambda");
  p.p = number(field(j, "p", "params"), "params.p");
  p.r = number(field(j, "r", "params"), "params.r");
  p.k_exp = integer(field(j, "k", "params"), "params.k");
  p.m_exp = integer(field(j, "m", "params"), "params.m");
  p.Q = field_values(field(j, "Q", "params"), g, "Q");
  p.g = field_values(field(j, "g", "params"), g, "g");
  require_valid(g, p);
  return p;
}

json params_to_json(const ModelParams& params, const WorkingGraph& g) {
  return {{"a", params.a},         {"b", params.b},         {"lambda", params.lambda},
          {"p", params.p},         {"r", params.r},         {"k", params.k_exp},
          {"m", params.m_exp},     {"Q", interior_map(g, params.Q)},
          {"g", interior_map(g, params.g)}};
}

Eigen::VectorXd parse_function(const json& j, const WorkingGraph& g) {
  const json& values = j.is_object() && j.contains("values") ? j.at("values") : j;
  if (!values.is_object()) throw InputError("graph function: expected an object {vertex: value}");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  std::vector<bool> given(static_cast<std::size_t>(g.size()), false);
  for (const auto& [key, value] : values.items()) {
    const auto idx = g.index_of(key);
    if (!idx) throw ValidationError("graph function: unknown vertex '" + key + "'");
    const double v = number(value, "graph function." + key);
    if (!std::isfinite(v)) throw ValidationError("graph function: non-finite value at '" + key + "'");
    if (!g.is_interior(*idx) && v != 0.0) {
      throw ValidationError("graph function: boundary vertex '" + key + "' must be 0 (got " +
                            std::to_string(v) + ")");
    }
    u(*idx) = v;
    given[static_cast<std::size_t>(*idx)] = true;
  }
  for (Index x : g.interior()) {
    if (!given[static_cast<std::size_t>(x)]) {
      throw ValidationError("graph function: no value for interior vertex '" + g.id(x) + "'");
    }
  }
  return u;
}

json function_to_json(const WorkingGraph& g, const Eigen::VectorXd& u) { return interior_map(g, u); }

json to_json(const ScalarProjection& p) {
  return {{"kind", "scalar"},        {"t0", p.t0},         {"residual_f", p.residual_f},
          {"scale", p.scale},        {"bracket", {p.t_lo, p.t_hi}}, {"iterations", p.iterations}};
}

json to_json(const PairProjection& p) {
  return {{"kind", "pair"},
          {"s0", p.s0},
          {"t0", p.t0},
          {"residual_G", p.residual_G},
          {"residual_H", p.residual_H},
          {"scale_G", p.scale_G},
          {"scale_H", p.scale_H},
          {"box", {p.alpha, p.beta}},
          {"iterations", p.iterations}};
}

json to_json(const SolveReport& r, const WorkingGraph& g) {
  static const char* modes[] = {"ground", "nodal", "both"};
  json out = {{"mode", modes[static_cast<int>(r.mode)]},
              {"levels_are_upper_bounds", true},
              {"config", config_to_json(r.config)}};
  if (r.ground) {
    out["c_level"] = r.ground->level;
    out["ground_state"] = function_to_json(g, r.ground->state);
    out["ground_sign_pattern"] = sign_pattern(r.ground->state);
    out["residual_max_ground"] = r.ground->residual_max;
    out["ground"] = level_to_json(*r.ground, g);
  }
  if (r.nodal) {
    out["m_level"] = r.nodal->level;
    out["nodal_state"] = function_to_json(g, r.nodal->state);
    out["residual_max_nodal"] = r.nodal->residual_max;
    out["nodal"] = level_to_json(*r.nodal, g);
  }
  if (r.ground && r.nodal) {
    out["ratio"] = r.ratio();
    out["doubling_ok"] = r.doubling_ok();
    out["doubling_tol"] = r.doubling_tol;
  }
  json per_seed = json::object();
  if (r.ground) per_seed["ground"] = out["ground"]["per_seed_levels"];
  if (r.nodal) per_seed["nodal"] = out["nodal"]["per_seed_levels"];
  out["per_seed_levels"] = per_seed;
  return out;
}

json to_json(const Instance& inst) {
  const WorkingGraph g = inst.working();
  return {{"graph", graph_to_json(inst.graph, inst.domain)},
          {"params", params_to_json(inst.params, g)},
          {"u", function_to_json(g, inst.u)}};
}

Instance parse_instance(const json& j) {
  Instance inst;
  std::tie(inst.graph, inst.domain) = parse_graph(field(j, "graph", "instance"));
  const WorkingGraph g = inst.working();
  inst.params = parse_params(field(j, "params", "instance"), g);
  inst.u = parse_function(field(j, "u", "instance"), g);
  return inst;
}

json to_json(const PropertyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"evaluations", c.evaluations},
                      {"failures", c.failures},
                      {"worst_violation", finite_or_null(c.worst)},
                      {"threshold", c.threshold},
                      {"informational", c.informational}});
  }
  json ces = json::array();
  for (const auto& ce : r.counterexamples) {
    ces.push_back({{"check", ce.check},
                   {"trial", ce.trial},
                   {"check_seed", ce.check_seed},
                   {"violation", finite_or_null(ce.violation)},
                   {"instance", to_json(ce.instance)}});
  }
  return {{"seed", r.seed},
          {"trials", r.trials},
          {"elapsed_seconds", r.elapsed.count()},
          {"failures", r.failures()},
          {"passed", r.failures() == 0},
          {"checks", checks},
          {"counterexamples", ces}};
}

}  // namespace graphkirchhoff::io
