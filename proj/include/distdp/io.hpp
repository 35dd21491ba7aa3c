#pragma once

#include "distdp/errors.hpp"
#include "distdp/model.hpp"
#include "distdp/objective.hpp"
#include "distdp/solver.hpp"
#include "distdp/sweep.hpp"
#include "distdp/transport.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>

namespace distdp {

using Json = nlohmann::json;

/// Input problem tied to the JSON key that caused it (empty if unknown).
class InputError : public ValidationError {
public:
    InputError(const std::string& message, std::string key = {})
        : ValidationError(message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// A parsed document with its source text, for line-anchored diagnostics.
struct JsonDocument {
    std::string path;
    std::string text;
    Json root;

    /// 1-based line of the first occurrence of "key", or 1.
    int line_of(const std::string& key) const;
    /// "path:line: message".
    std::string locate(const InputError& err) const;
};

/// Reads and parses a file. Syntax errors become InputError with a
/// "path:line:" prefix already applied.
JsonDocument load_json(const std::string& path);
JsonDocument parse_json_text(std::string text, std::string path = "<input>");

/// A number given as a JSON number, a decimal string or a "p/q" string.
double parse_number(const Json& value, const std::string& key);

/**
 * Model keys: states, actions (counts or name lists), horizon, reward
 * ([x][a] stationary or [n][x][a]), terminal, transition ([x][a][x']),
 * initial and optional positions.
 */
MdpModel parse_model(const Json& root);

/**
 * Objective block with "type":
 *   linear_terminal        optional state_weights [x], reward_coefficient (default 1);
 *                          without state_weights the model's terminal reward is used
 *   threshold              t
 *   wasserstein            target [x]
 *   expected_plus_terminal terminal: {type: wasserstein, target} or {type: linear, weights}
 *   mean                   mean accumulated reward
 */
ObjectiveFunctional parse_objective(const Json& block, const MdpModel& model);

/**
 * Instance keys: K, N, costs ("uniform", a number or an array), target
 * ({kind, parameter} or an array) and initial (an array or {sample, seed}).
 */
TransportInstance parse_instance(const Json& root);

/// Keys mirror SweepConfig: K, kind, parameters, samples, n_min, n_max,
/// boxplot_stage, seed, workers, cost.
SweepConfig parse_sweep_config(const Json& root);

Json to_json(const SolveReport& report, const MdpModel& model, const ObjectiveFunctional& objective);
Json to_json(const ValueTables& tables, const MdpModel& model);
Json to_json(const TransportTrace& trace, const TransportInstance& inst, const StructuralReport& check);

/// stage,x,s,mass for every cell with positive mass.
void write_trajectory_csv(std::ostream& out, const std::vector<JointDistribution>& trajectory);

/// stage,state,mass,up_move,down_move,stage_cost,w1_to_target. The final stage
/// has zero moves and cost. States are 1-based.
void write_transport_csv(std::ostream& out, const TransportTrace& trace, const TransportInstance& inst);

/// Flat key,value rows for the scalar fields of a JSON object.
void write_summary_csv(std::ostream& out, const Json& report);

} // namespace distdp
