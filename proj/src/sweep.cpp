#include "distdp/sweep.hpp"

#include "distdp/errors.hpp"
#include "distdp/transport.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

namespace distdp {

std::string to_string(TargetKind kind) {
    return kind == TargetKind::Normal ? "normal" : "exponential";
}

TargetKind parse_target_kind(const std::string& name) {
    if (name == "normal")
        return TargetKind::Normal;
    if (name == "exponential")
        return TargetKind::Exponential;
    throw ValidationError("unknown target kind '" + name + "' (expected normal or exponential)");
}

int SweepConfig::box_stage() const {
    if (boxplot_stage)
        return *boxplot_stage;
    if (K == 50)
        return 15;
    if (K == 100)
        return 30;
    return std::max(1, K * 3 / 10);
}

std::optional<std::string> validate_config(const SweepConfig& c) {
    if (c.K < 2)
        return "K must be at least 2";
    if (c.samples < 1)
        return "sample count must be at least 1";
    if (c.n_min < 1 || c.last_stage() < c.n_min)
        return "horizon range is empty";
    if (c.parameters.empty())
        return "parameter list is empty";
    for (double p : c.parameters)
        if (!(p > 0.0) || !std::isfinite(p))
            return "parameters must be positive";
    if (c.workers < 1)
        return "worker count must be at least 1";
    if (!(c.cost > 0.0 && c.cost <= 1.0))
        return "stage cost must lie in (0, 1]";
    return std::nullopt;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    if (auto err = validate_config(config))
        throw ValidationError(*err);
    const int n_min = config.n_min;
    const int n_max = config.last_stage();
    const auto stage_count = static_cast<std::size_t>(n_max - n_min + 1);
    const auto samples = static_cast<std::size_t>(config.samples);
    const std::size_t tasks = config.parameters.size() * samples;
    std::vector<SweepRow> rows(tasks * stage_count);

    // The step rule never reads N or the costs, so one run to n_max gives
    // every horizon's terminal distance and cost prefix.
    auto work = [&](std::size_t task) {
        const std::size_t p = task / samples;
        const std::size_t i = task % samples;
        const double param = config.parameters[p];
        const auto target = config.kind == TargetKind::Normal ? rescaled_normal_target(config.K, param)
                                                               : shifted_exponential_target(config.K, param);
        const std::uint64_t seed = config.base_seed + i;
        const auto initial = sample_initial(config.K, seed);
        const TransportTrace tr = run_algorithm1(initial, target, n_max);
        double cost = 0.0;
        for (int N = 1; N <= n_max; ++N) {
            cost += config.cost * tr.moved[static_cast<std::size_t>(N - 1)];
            if (N < n_min)
                continue;
            auto& row = rows[(p * stage_count + static_cast<std::size_t>(N - n_min)) * samples + i];
            row = {config.K, config.kind, param, N, static_cast<int>(i), seed,
                   tr.distances[static_cast<std::size_t>(N)], cost};
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;)
            work(t);
    };
    const auto threads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(config.workers), tasks));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < threads; ++k)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "K,target_kind,parameter,N,sample_id,seed,w1_terminal,total_cost\n";
    for (const auto& r : rows)
        out << r.K << ',' << to_string(r.kind) << ',' << format_double(r.parameter) << ',' << r.N << ','
            << r.sample_id << ',' << r.seed << ',' << format_double(r.w1_terminal) << ','
            << format_double(r.total_cost) << '\n';
}

SweepSummary summarize(const SweepConfig& config, const std::vector<SweepRow>& rows) {
    SweepSummary s;
    s.parameters = config.parameters;
    for (int N = config.n_min; N <= config.last_stage(); ++N)
        s.stages.push_back(N);
    s.mean.assign(s.parameters.size(), std::vector<double>(s.stages.size(), 0.0));
    std::vector<std::vector<int>> count(s.parameters.size(), std::vector<int>(s.stages.size(), 0));
    for (const auto& r : rows) {
        const auto p = static_cast<std::size_t>(
            std::find(s.parameters.begin(), s.parameters.end(), r.parameter) - s.parameters.begin());
        if (p == s.parameters.size() || r.N < config.n_min || r.N > config.last_stage())
            continue;
        const auto n = static_cast<std::size_t>(r.N - config.n_min);
        s.mean[p][n] += r.w1_terminal;
        ++count[p][n];
    }
    for (std::size_t p = 0; p < s.mean.size(); ++p)
        for (std::size_t n = 0; n < s.mean[p].size(); ++n)
            if (count[p][n] > 0)
                s.mean[p][n] /= count[p][n];
    return s;
}

} // namespace distdp
