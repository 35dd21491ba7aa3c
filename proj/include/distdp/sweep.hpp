#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace distdp {

enum class TargetKind { Normal, Exponential };

std::string to_string(TargetKind kind);
TargetKind parse_target_kind(const std::string& name);

struct SweepConfig {
    int K = 50;
    TargetKind kind = TargetKind::Normal;
    std::vector<double> parameters{0.5, 1.0, 2.0, 5.0};
    int samples = 100;
    int n_min = 1;
    /// Defaults to K/2 + 5 when unset.
    std::optional<int> n_max;
    /// Stage shown in box plots; defaults to 15 for K = 50 and 30 for K = 100.
    std::optional<int> boxplot_stage;
    std::uint64_t base_seed = 0;
    int workers = 1;
    /// Common stage cost used for total_cost.
    double cost = 1.0;

    int last_stage() const { return n_max.value_or(K / 2 + 5); }
    int box_stage() const;
};

std::optional<std::string> validate_config(const SweepConfig& config);

struct SweepRow {
    int K = 0;
    TargetKind kind = TargetKind::Normal;
    double parameter = 0.0;
    int N = 0;
    int sample_id = 0;
    std::uint64_t seed = 0;
    double w1_terminal = 0.0;
    double total_cost = 0.0;
};

/// One row per (parameter, N, sample), sorted in that order. Sample i uses
/// seed base_seed + i for every parameter, so rows do not depend on `workers`.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Mean w1_terminal per (parameter, N), parameters in config order.
struct SweepSummary {
    std::vector<double> parameters;
    std::vector<int> stages;
    /// mean[p][n - n_min].
    std::vector<std::vector<double>> mean;
};

SweepSummary summarize(const SweepConfig& config, const std::vector<SweepRow>& rows);

} // namespace distdp
