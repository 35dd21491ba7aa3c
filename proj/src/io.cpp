#include "distdp/io.hpp"

#include "distdp/wasserstein.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace distdp {

namespace {

int line_at_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

const Json& require_key(const Json& obj, const std::string& key) {
    if (!obj.is_object() || !obj.contains(key))
        throw InputError("missing key '" + key + "'", key);
    return obj.at(key);
}

int parse_int(const Json& v, const std::string& key) {
    if (!v.is_number_integer())
        throw InputError("'" + key + "' must be an integer", key);
    return v.get<int>();
}

std::vector<double> parse_vector(const Json& v, const std::string& key) {
    if (!v.is_array())
        throw InputError("'" + key + "' must be an array", key);
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v)
        out.push_back(parse_number(e, key));
    return out;
}

int count_or_names(const Json& v, const std::string& key) {
    if (v.is_array())
        return static_cast<int>(v.size());
    return parse_int(v, key);
}

std::string key_for_model_message(const std::string& msg) {
    for (const char* k : {"transition", "initial", "terminal", "reward", "positions", "horizon"})
        if (msg.find(k) != std::string::npos)
            return k;
    if (msg.find("state") != std::string::npos)
        return "states";
    if (msg.find("action") != std::string::npos)
        return "actions";
    return {};
}

} // namespace

int JsonDocument::line_of(const std::string& key) const {
    if (key.empty())
        return 1;
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 1 : line_at_offset(text, pos);
}

std::string JsonDocument::locate(const InputError& err) const {
    return path + ":" + std::to_string(line_of(err.key())) + ": " + err.what();
}

JsonDocument parse_json_text(std::string text, std::string path) {
    JsonDocument doc{std::move(path), std::move(text), {}};
    try {
        doc.root = Json::parse(doc.text);
    } catch (const Json::parse_error& e) {
        const int line = line_at_offset(doc.text, e.byte > 0 ? e.byte - 1 : 0);
        throw InputError(doc.path + ":" + std::to_string(line) + ": malformed JSON");
    }
    return doc;
}

JsonDocument load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError(path + ":1: cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

double parse_number(const Json& value, const std::string& key) {
    if (value.is_number())
        return value.get<double>();
    if (!value.is_string())
        throw InputError("'" + key + "' entries must be numbers or numeric strings", key);
    const auto s = value.get<std::string>();
    auto to_double = [&](const std::string& part) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size())
            throw InputError("'" + key + "': cannot read number \"" + s + "\"", key);
        return v;
    };
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const double den = to_double(s.substr(slash + 1));
        if (den == 0.0)
            throw InputError("'" + key + "': zero denominator in \"" + s + "\"", key);
        return to_double(s.substr(0, slash)) / den;
    }
    return to_double(s);
}

MdpModel parse_model(const Json& root) {
    if (!root.is_object())
        throw InputError("model must be a JSON object");
    MdpModel m;
    m.num_states = count_or_names(require_key(root, "states"), "states");
    m.num_actions = count_or_names(require_key(root, "actions"), "actions");
    m.horizon = parse_int(require_key(root, "horizon"), "horizon");
    if (m.num_states < 1 || m.num_actions < 1 || m.horizon < 1)
        throw InputError("states, actions and horizon must be positive",
                         m.num_states < 1 ? "states" : m.num_actions < 1 ? "actions" : "horizon");
    const auto E = static_cast<std::size_t>(m.num_states);
    const auto A = static_cast<std::size_t>(m.num_actions);

    const Json& reward = require_key(root, "reward");
    auto read_stage = [&](const Json& table, std::vector<double>& out) {
        if (!table.is_array() || table.size() != E)
            throw InputError("reward: expected " + std::to_string(E) + " rows of per-action rewards", "reward");
        for (const auto& row : table) {
            if (!row.is_array() || row.size() != A)
                throw InputError("reward: expected " + std::to_string(A) + " entries per state", "reward");
            for (const auto& v : row)
                out.push_back(parse_number(v, "reward"));
        }
    };
    const bool staged = reward.is_array() && !reward.empty() && reward[0].is_array() && !reward[0].empty() &&
                        reward[0][0].is_array();
    if (staged) {
        if (reward.size() != static_cast<std::size_t>(m.horizon))
            throw InputError("reward: expected one table per stage", "reward");
        for (const auto& stage : reward)
            read_stage(stage, m.rewards);
    } else {
        std::vector<double> one;
        read_stage(reward, one);
        for (int n = 0; n < m.horizon; ++n)
            m.rewards.insert(m.rewards.end(), one.begin(), one.end());
    }

    m.terminal = root.contains("terminal") ? parse_vector(root.at("terminal"), "terminal")
                                           : std::vector<double>(E, 0.0);
    const Json& trans = require_key(root, "transition");
    if (!trans.is_array() || trans.size() != E)
        throw InputError("transition: expected one block per state", "transition");
    for (const auto& block : trans) {
        if (!block.is_array() || block.size() != A)
            throw InputError("transition: expected one row per action", "transition");
        for (const auto& row : block) {
            auto r = parse_vector(row, "transition");
            if (r.size() != E)
                throw InputError("transition: rows must have " + std::to_string(E) + " entries", "transition");
            m.transitions.insert(m.transitions.end(), r.begin(), r.end());
        }
    }
    m.initial = parse_vector(require_key(root, "initial"), "initial");
    if (root.contains("positions"))
        m.positions = parse_vector(root.at("positions"), "positions");
    if (auto err = validate_model(m))
        throw InputError(*err, key_for_model_message(*err));
    return m;
}

ObjectiveFunctional parse_objective(const Json& block, const MdpModel& model) {
    const std::string key = "objective";
    if (!block.is_object())
        throw InputError("objective must be an object", key);
    const auto type = require_key(block, "type").get<std::string>();
    if (type == "linear_terminal") {
        if (!block.contains("state_weights") && !block.contains("reward_coefficient"))
            return ObjectiveFunctional::expected_total_reward(model);
        auto w = block.contains("state_weights") ? parse_vector(block.at("state_weights"), "state_weights")
                                                 : model.terminal;
        if (w.size() != static_cast<std::size_t>(model.num_states))
            throw InputError("state_weights: expected one weight per state", "state_weights");
        const double c = block.contains("reward_coefficient")
                             ? parse_number(block.at("reward_coefficient"), "reward_coefficient")
                             : 1.0;
        return ObjectiveFunctional::linear(
            [w, c](int x, double s) { return w[static_cast<std::size_t>(x)] + c * s; });
    }
    if (type == "threshold")
        return ObjectiveFunctional::threshold(parse_number(require_key(block, "t"), "t"));
    if (type == "wasserstein") {
        auto target = parse_vector(require_key(block, "target"), "target");
        if (target.size() != static_cast<std::size_t>(model.num_states))
            throw InputError("target: expected one mass per state", "target");
        try {
            return ObjectiveFunctional::wasserstein(std::move(target));
        } catch (const ValidationError& e) {
            throw InputError(e.what(), "target");
        }
    }
    if (type == "mean")
        return ObjectiveFunctional::mean_reward();
    if (type == "expected_plus_terminal") {
        const Json& term = require_key(block, "terminal");
        const auto ttype = require_key(term, "type").get<std::string>();
        if (ttype == "wasserstein") {
            auto target = parse_vector(require_key(term, "target"), "target");
            if (target.size() != static_cast<std::size_t>(model.num_states))
                throw InputError("target: expected one mass per state", "target");
            std::vector<double> pos(target.size());
            for (std::size_t x = 0; x < pos.size(); ++x)
                pos[x] = model.position(static_cast<int>(x));
            return ObjectiveFunctional::expected_plus_terminal(
                [target, pos](std::span<const double> F) { return -wasserstein_1d(F, target, pos); },
                Regularity{true, 1.0});
        }
        if (ttype == "linear") {
            auto w = parse_vector(require_key(term, "weights"), "weights");
            if (w.size() != static_cast<std::size_t>(model.num_states))
                throw InputError("weights: expected one weight per state", "weights");
            double lip = 0.0;
            for (std::size_t x = 0; x + 1 < w.size(); ++x)
                lip = std::max(lip, std::abs(w[x + 1] - w[x]) /
                                        std::max(1e-300, std::abs(model.position(static_cast<int>(x) + 1) -
                                                                  model.position(static_cast<int>(x)))));
            return ObjectiveFunctional::expected_plus_terminal(
                [w](std::span<const double> F) {
                    double v = 0.0;
                    for (std::size_t x = 0; x < F.size(); ++x)
                        v += w[x] * F[x];
                    return v;
                },
                Regularity{true, lip + 1.0});
        }
        throw InputError("unknown terminal type '" + ttype + "'", "type");
    }
    throw InputError("unknown objective type '" + type + "'", "type");
}

TransportInstance parse_instance(const Json& root) {
    if (!root.is_object())
        throw InputError("instance must be a JSON object");
    TransportInstance inst;
    inst.K = parse_int(require_key(root, "K"), "K");
    inst.N = parse_int(require_key(root, "N"), "N");
    if (inst.K < 2)
        throw InputError("grid size K must be at least 2", "K");
    if (inst.N < 1)
        throw InputError("horizon N must be at least 1", "N");

    const Json& costs = root.contains("costs") ? root.at("costs") : Json("uniform");
    if (costs.is_string() && costs.get<std::string>() == "uniform")
        inst.costs.assign(static_cast<std::size_t>(inst.N), 1.0);
    else if (costs.is_array())
        inst.costs = parse_vector(costs, "costs");
    else
        inst.costs.assign(static_cast<std::size_t>(inst.N), parse_number(costs, "costs"));

    const Json& target = require_key(root, "target");
    if (target.is_object()) {
        const auto kind = parse_target_kind(require_key(target, "kind").get<std::string>());
        const double p = parse_number(require_key(target, "parameter"), "parameter");
        try {
            inst.target = kind == TargetKind::Normal ? rescaled_normal_target(inst.K, p)
                                                     : shifted_exponential_target(inst.K, p);
        } catch (const ValidationError& e) {
            throw InputError(e.what(), "target");
        }
    } else {
        inst.target = parse_vector(target, "target");
    }

    const Json& initial = require_key(root, "initial");
    if (initial.is_object()) {
        const auto seed = require_key(initial, "seed");
        if (!seed.is_number_unsigned() && !seed.is_number_integer())
            throw InputError("seed must be an integer", "seed");
        inst.initial = sample_initial(inst.K, seed.get<std::uint64_t>());
    } else {
        inst.initial = parse_vector(initial, "initial");
    }

    if (auto err = validate_instance(inst)) {
        std::string key;
        for (const char* k : {"costs", "target", "initial"})
            if (err->rfind(k, 0) == 0)
                key = k;
        throw InputError(*err, key);
    }
    return inst;
}

SweepConfig parse_sweep_config(const Json& root) {
    if (!root.is_object())
        throw InputError("sweep config must be a JSON object");
    SweepConfig c;
    if (root.contains("K"))
        c.K = parse_int(root.at("K"), "K");
    if (root.contains("kind")) {
        try {
            if (!root.at("kind").is_string())
                throw InputError("kind must be a string", "kind");
            c.kind = parse_target_kind(root.at("kind").get<std::string>());
        } catch (const InputError&) {
            throw;
        } catch (const ValidationError& e) {
            throw InputError(e.what(), "kind");
        }
    }
    if (root.contains("parameters"))
        c.parameters = parse_vector(root.at("parameters"), "parameters");
    if (root.contains("samples"))
        c.samples = parse_int(root.at("samples"), "samples");
    if (root.contains("n_min"))
        c.n_min = parse_int(root.at("n_min"), "n_min");
    if (root.contains("n_max"))
        c.n_max = parse_int(root.at("n_max"), "n_max");
    if (root.contains("boxplot_stage"))
        c.boxplot_stage = parse_int(root.at("boxplot_stage"), "boxplot_stage");
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned())
            throw InputError("seed must be a nonnegative integer", "seed");
        c.base_seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("workers"))
        c.workers = parse_int(root.at("workers"), "workers");
    if (root.contains("cost"))
        c.cost = parse_number(root.at("cost"), "cost");
    if (auto err = validate_config(c))
        throw InputError(*err);
    return c;
}

Json to_json(const SolveReport& report, const MdpModel& model, const ObjectiveFunctional& objective) {
    Json j;
    j["objective"] = objective.name();
    j["value"] = report.value;
    j["score"] = report.score;
    j["horizon"] = model.horizon;
    j["strategy"] = report.stats.strategy;
    j["certified"] = report.stats.certified;
    j["nodes_expanded"] = report.stats.nodes_expanded;
    j["restarts"] = report.stats.restarts;
    j["best_so_far"] = report.stats.best_so_far;
    Json kernels = Json::array();
    for (std::size_t n = 0; n < report.actions.size(); ++n) {
        const auto& pi = report.actions[n];
        const auto& F = report.trajectory[n];
        Json rows = Json::array();
        for (int x = 0; x < pi.num_states(); ++x)
            for (std::size_t s = 0; s < pi.num_rewards(); ++s) {
                if (F(x, s) <= 0.0)
                    continue;
                const auto row = pi.row(x, s);
                rows.push_back({{"x", x},
                                {"s", F.support().value(static_cast<int>(n), s)},
                                {"probs", std::vector<double>(row.begin(), row.end())}});
            }
        kernels.push_back(std::move(rows));
    }
    j["kernels"] = std::move(kernels);
    return j;
}

Json to_json(const ValueTables& tables, const MdpModel& model) {
    Json j;
    j["value"] = tables.initial_value(model);
    j["horizon"] = model.horizon;
    Json stages = Json::array();
    for (int n = 0; n <= model.horizon; ++n) {
        Json rows = Json::array();
        const std::size_t w = tables.width(n);
        for (int x = 0; x < model.num_states; ++x)
            for (std::size_t s = 0; s < w; ++s) {
                Json row{{"x", x}, {"value", tables.value(n, x, s)}};
                if (tables.support)
                    row["s"] = tables.support->value(n, s);
                if (n < model.horizon)
                    row["action"] = tables.action(n, x, s);
                rows.push_back(std::move(row));
            }
        stages.push_back(std::move(rows));
    }
    j["stages"] = std::move(stages);
    return j;
}

Json to_json(const TransportTrace& trace, const TransportInstance& inst, const StructuralReport& check) {
    Json j;
    j["K"] = inst.K;
    j["N"] = inst.N;
    j["objective"] = trace.objective;
    j["total_cost"] = trace.total_cost;
    j["terminal_distance"] = trace.terminal_distance;
    j["moved"] = trace.moved;
    j["stage_costs"] = trace.stage_costs;
    j["distances"] = trace.distances;
    j["structural_check"] = {{"passed", check.passed},
                             {"violations", check.violations},
                             {"lp_checked", check.lp_checked},
                             {"lp_value", check.lp_value}};
    j["case4_states"] = trace.case4_states;
    j["case4_mismatches"] = trace.case4_mismatches;
    return j;
}

void write_trajectory_csv(std::ostream& out, const std::vector<JointDistribution>& trajectory) {
    out << "stage,x,s,mass\n";
    for (const auto& F : trajectory)
        for (int x = 0; x < F.num_states(); ++x)
            for (std::size_t s = 0; s < F.num_rewards(); ++s)
                if (F(x, s) > 0.0)
                    out << F.stage() << ',' << x << ',' << format_double(F.support().value(F.stage(), s)) << ','
                        << format_double(F(x, s)) << '\n';
}

void write_transport_csv(std::ostream& out, const TransportTrace& trace, const TransportInstance& inst) {
    out << "stage,state,mass,up_move,down_move,stage_cost,w1_to_target\n";
    for (std::size_t n = 0; n < trace.distributions.size(); ++n) {
        const bool acting = n < trace.plans.size();
        for (int x = 0; x < inst.K; ++x) {
            const auto i = static_cast<std::size_t>(x);
            out << n << ',' << x + 1 << ',' << format_double(trace.distributions[n][i]) << ','
                << format_double(acting ? trace.plans[n].up[i] : 0.0) << ','
                << format_double(acting ? trace.plans[n].down[i] : 0.0) << ','
                << format_double(acting && n < trace.stage_costs.size() ? trace.stage_costs[n] : 0.0) << ','
                << format_double(trace.distances[n]) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const Json& report) {
    out << "key,value\n";
    for (const auto& [k, v] : report.items()) {
        if (v.is_number_float())
            out << k << ',' << format_double(v.get<double>()) << '\n';
        else if (v.is_number() || v.is_boolean())
            out << k << ',' << v.dump() << '\n';
        else if (v.is_string())
            out << k << ',' << v.get<std::string>() << '\n';
    }
}

} // namespace distdp
