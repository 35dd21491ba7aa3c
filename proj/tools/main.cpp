// distdp: command-line front end for the lifted solvers and the transport experiments.

#include "distdp/infinite_horizon.hpp"
#include "distdp/io.hpp"
#include "distdp/reward_support.hpp"
#include "distdp/solver.hpp"
#include "distdp/sweep.hpp"
#include "distdp/transport.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace distdp;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

struct Common {
    std::string out = ".";
    std::uint64_t seed = 0;
    int workers = 1;
    std::string format = "json";
};

struct Failure {
    int code;
    std::string message;
};

std::ofstream open_out(const Common& c, const std::string& name) {
    fs::create_directories(c.out);
    std::ofstream f(fs::path(c.out) / name);
    if (!f)
        throw Failure{kExitValidation, (fs::path(c.out) / name).string() + ":1: cannot write file"};
    return f;
}

void write_report(const Common& c, const Json& report) {
    if (c.format == "csv") {
        auto f = open_out(c, "report.csv");
        write_summary_csv(f, report);
    } else {
        auto f = open_out(c, "report.json");
        f << report.dump(2) << '\n';
    }
}

// Parses `path` with `fn`, turning InputError into a line-anchored failure.
template <class Fn>
auto parse_located(const JsonDocument& doc, Fn&& fn) {
    try {
        return fn(doc.root);
    } catch (const InputError& e) {
        throw Failure{kExitValidation, doc.locate(e)};
    } catch (const ValidationError& e) {
        throw Failure{kExitValidation, doc.path + ":1: " + e.what()};
    } catch (const Json::exception& e) {
        throw Failure{kExitValidation, doc.path + ":1: " + e.what()};
    }
}

JsonDocument load(const std::string& path) {
    try {
        return load_json(path);
    } catch (const InputError& e) {
        throw Failure{kExitValidation, e.what()};
    }
}

struct ModelInput {
    JsonDocument doc;
    MdpModel model;
};

ModelInput load_model(const std::string& path) {
    ModelInput in{load(path), {}};
    in.model = parse_located(in.doc, [](const Json& j) { return parse_model(j); });
    return in;
}

ObjectiveFunctional load_objective(const ModelInput& in, const std::string& objective_path,
                                   std::optional<ObjectiveFunctional> fallback) {
    if (!objective_path.empty()) {
        const auto doc = load(objective_path);
        return parse_located(doc, [&](const Json& j) {
            return parse_objective(j.contains("objective") ? j.at("objective") : j, in.model);
        });
    }
    if (in.doc.root.contains("objective"))
        return parse_located(in.doc, [&](const Json& j) { return parse_objective(j.at("objective"), in.model); });
    if (fallback)
        return *fallback;
    throw Failure{kExitValidation, in.doc.path + ":1: no objective given"};
}

Strategy parse_strategy(const std::string& s) {
    if (s == "auto")
        return Strategy::Auto;
    if (s == "exhaustive")
        return Strategy::Exhaustive;
    if (s == "coordinate")
        return Strategy::CoordinateAscent;
    if (s == "linear")
        return Strategy::LinearDecomposition;
    throw Failure{kExitValidation, "unknown strategy '" + s + "'"};
}

void print_value(const std::string& label, double v) {
    std::cout << label << ' ' << format_double(v) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributional dynamic programming on lifted MDPs"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out, "Output directory");
        sub->add_option("--seed", common.seed, "Random seed");
        sub->add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    };

    std::string model_path, objective_path, strategy = "auto", instance_path, config_path;
    double threshold = 0.0, beta = 0.5, epsilon = 1e-3;
    std::optional<double> lipschitz;

    auto* solve = app.add_subcommand("solve", "Lifted value iteration for a terminal functional");
    solve->add_option("model", model_path, "Model JSON")->required();
    solve->add_option("--objective", objective_path, "Objective JSON (defaults to the model's objective block)");
    solve->add_option("--strategy", strategy, "auto|exhaustive|coordinate|linear");
    add_common(solve);

    auto* classical = app.add_subcommand("classical", "Classical Bellman recursion");
    classical->add_option("model", model_path, "Model JSON")->required();
    add_common(classical);

    auto* quantile = app.add_subcommand("quantile", "Maximal probability of reaching a threshold");
    quantile->add_option("model", model_path, "Model JSON")->required();
    quantile->add_option("--threshold,-t", threshold, "Threshold t")->required();
    add_common(quantile);

    auto* infinite = app.add_subcommand("infinite", "Discounted problem truncated to a tolerance");
    infinite->add_option("model", model_path, "Model JSON")->required();
    infinite->add_option("--objective", objective_path, "Objective JSON (defaults to the mean reward)");
    infinite->add_option("--beta", beta, "Discount factor in (0,1)");
    infinite->add_option("--epsilon", epsilon, "Truncation tolerance");
    infinite->add_option("--lipschitz", lipschitz, "Override the declared Lipschitz constant of H");
    infinite->add_option("--strategy", strategy, "auto|exhaustive|coordinate|linear");
    add_common(infinite);

    auto* trun = app.add_subcommand("transport-run", "Run the mass transport algorithm on one instance");
    trun->add_option("instance", instance_path, "Instance JSON")->required();
    add_common(trun);

    SweepConfig sweep_cfg;
    std::string kind_name;
    auto* tsweep = app.add_subcommand("transport-sweep", "Sweep over targets, horizons and sampled initials");
    tsweep->add_option("--config", config_path, "Sweep config JSON");
    tsweep->add_option("--K", sweep_cfg.K, "Grid size");
    tsweep->add_option("--kind", kind_name, "normal|exponential");
    tsweep->add_option("--parameters", sweep_cfg.parameters, "Target parameters");
    tsweep->add_option("--samples", sweep_cfg.samples, "Samples per parameter");
    tsweep->add_option("--n-max", sweep_cfg.n_max, "Largest horizon");
    add_common(tsweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            const auto in = load_model(model_path);
            const auto objective = load_objective(in, objective_path, ObjectiveFunctional::expected_total_reward(in.model));
            SolverOptions opt;
            opt.strategy = parse_strategy(strategy);
            opt.seed = common.seed;
            const auto rep = lifted_value_iteration(in.model, objective, opt);
            auto report = to_json(rep, in.model, objective);
            report["command"] = "solve";
            write_report(common, report);
            auto f = open_out(common, "trajectory.csv");
            write_trajectory_csv(f, rep.trajectory);
            print_value("value", rep.value);
        } else if (*classical) {
            const auto in = load_model(model_path);
            const auto tables = classical_bellman(in.model);
            auto report = to_json(tables, in.model);
            report["command"] = "classical";
            write_report(common, report);
            print_value("value", tables.initial_value(in.model));
        } else if (*quantile) {
            const auto in = load_model(model_path);
            const auto tables = quantile_dp(in.model, threshold);
            auto report = to_json(tables, in.model);
            report["command"] = "quantile";
            report["threshold"] = threshold;
            write_report(common, report);
            print_value("value", tables.initial_value(in.model));
        } else if (*infinite) {
            const auto in = load_model(model_path);
            auto objective = load_objective(in, objective_path, ObjectiveFunctional::mean_reward());
            if (lipschitz) {
                Regularity reg = objective.regularity();
                reg.lipschitz = *lipschitz;
                objective = ObjectiveFunctional(objective.variant(), objective.sense(), reg, objective.name());
            }
            SolverOptions opt;
            opt.strategy = parse_strategy(strategy);
            opt.seed = common.seed;
            InfiniteHorizonReport rep;
            try {
                rep = solve_to_tolerance(in.model, objective, beta, epsilon, opt);
            } catch (const ValidationError& e) {
                throw Failure{kExitValidation, in.doc.path + ":1: " + e.what()};
            }
            const auto discounted = build_discounted_model(in.model, beta, rep.stages);
            auto report = to_json(rep.solve, discounted, objective);
            report["command"] = "infinite";
            report["beta"] = beta;
            report["epsilon"] = epsilon;
            report["stages"] = rep.stages;
            report["truncation_gap"] = rep.truncation_gap;
            report["reached_epsilon"] = rep.reached_epsilon;
            write_report(common, report);
            auto f = open_out(common, "trajectory.csv");
            write_trajectory_csv(f, rep.solve.trajectory);
            print_value("value", rep.solve.value);
            print_value("truncation_gap", rep.truncation_gap);
        } else if (*trun) {
            const auto doc = load(instance_path);
            const auto inst = parse_located(doc, [](const Json& j) { return parse_instance(j); });
            const auto trace = run_algorithm1(inst);
            const auto check = structural_check(trace, inst);
            auto report = to_json(trace, inst, check);
            report["command"] = "transport-run";
            write_report(common, report);
            auto f = open_out(common, "trace.csv");
            write_transport_csv(f, trace, inst);
            print_value("objective", trace.objective);
            print_value("total_cost", trace.total_cost);
            print_value("terminal_distance", trace.terminal_distance);
        } else if (*tsweep) {
            SweepConfig cfg = sweep_cfg;
            if (!config_path.empty()) {
                const auto doc = load(config_path);
                cfg = parse_located(doc, [](const Json& j) { return parse_sweep_config(j); });
            }
            if (!kind_name.empty())
                cfg.kind = parse_target_kind(kind_name);
            if (tsweep->count("--seed") || config_path.empty())
                cfg.base_seed = common.seed;
            if (tsweep->count("--workers") || config_path.empty())
                cfg.workers = common.workers;
            if (auto err = validate_config(cfg))
                throw Failure{kExitValidation, (config_path.empty() ? "<flags>" : config_path) + ":1: " + *err};
            const auto rows = run_sweep(cfg);
            auto f = open_out(common, "sweep.csv");
            write_sweep_csv(f, rows);
            Json meta{{"command", "transport-sweep"},
                      {"K", cfg.K},
                      {"kind", to_string(cfg.kind)},
                      {"parameters", cfg.parameters},
                      {"samples", cfg.samples},
                      {"n_min", cfg.n_min},
                      {"n_max", cfg.last_stage()},
                      {"boxplot_stage", cfg.box_stage()},
                      {"seed", cfg.base_seed},
                      {"rows", rows.size()}};
            write_report(common, meta);
            std::cout << "rows " << rows.size() << '\n';
        }
    } catch (const Failure& f) {
        std::cerr << f.message << '\n';
        return f.code;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget: " << e.what() << '\n';
        return kExitBudget;
    } catch (const ValidationError& e) {
        std::cerr << (model_path.empty() ? instance_path : model_path) << ":1: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
