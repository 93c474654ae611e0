#pragma once

// JSON ingestion and serialization.
//
// Malformed input (unreadable file, invalid JSON, wrong value types, missing
// fields) raises InputError. Well-formed input that breaks a model invariant
// raises ValidationError.

#include "graphkirchhoff/solver.hpp"
#include "graphkirchhoff/verify.hpp"

#include <json.hpp>

#include <string>
#include <utility>

namespace graphkirchhoff::io {

using nlohmann::json;

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// { "vertices": [{"id", "mu"}], "edges": [{"u", "v", "w"}], "interior": [...], "boundary": [...] }
std::pair<WeightedGraph, Domain> parse_graph(const json& j);
json graph_to_json(const WeightedGraph& graph, const Domain& dom);

// { "a", "b", "lambda", "p", "r", "k", "m", "Q", "g" } where Q and g are a
// number (constant field) or an object {vertex id: value} covering the
// interior. The result is validated.
ModelParams parse_params(const json& j, const WorkingGraph& g);
json params_to_json(const ModelParams& params, const WorkingGraph& g);

// {vertex id: value}, optionally wrapped as {"values": {...}}. Interior ids
// are required; boundary ids may appear with value 0; anything else is
// rejected.
Eigen::VectorXd parse_function(const json& j, const WorkingGraph& g);
json function_to_json(const WorkingGraph& g, const Eigen::VectorXd& u);

json to_json(const ScalarProjection& p);
json to_json(const PairProjection& p);
json to_json(const SolveReport& r, const WorkingGraph& g);
json to_json(const Instance& inst);
Instance parse_instance(const json& j);
json to_json(const PropertyReport& r);

}  // namespace graphkirchhoff::io
