#pragma once

#include "vibrobeam/bdf.hpp"
#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/dynamics.hpp"
#include "vibrobeam/loading.hpp"
#include "vibrobeam/time_series.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vibrobeam {

enum class InitialCondition { fresh_zero, continuation };
enum class ResponseMetric { max_all_nodes, max_tip };

struct SweepConfig {
    double f_start = 50.0;  // Hz
    double f_end = 1100.0;  // Hz
    int n_points = 526;     // inclusive grid, 2 Hz step with the defaults
    double tf = 0.4;        // s per point
    InitialCondition initial = InitialCondition::fresh_zero;
    ResponseMetric metric = ResponseMetric::max_all_nodes;

    void validate() const;
    std::vector<double> frequencies() const;
    double step() const noexcept { return (f_end - f_start) / (n_points - 1); }

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct SweepOptions {
    SolverOptions solver;         // dt_out <= 0 means samples_per_period per drive period
    int samples_per_period = 64;
    RayleighDamping damping;
    unsigned threads = 1;         // fresh_zero only; continuation is sequential
};

struct SweepPoint {
    double frequency_hz = 0.0;
    double peak_displacement = 0.0; // NaN when the point failed
    int argmax_node = 0;
    double argmax_time = 0.0;
    bool ok = true;
    std::string message;
    SolverStats stats;
};

struct SweepResult {
    std::vector<SweepPoint> points;

    std::size_t failures() const noexcept;
    std::vector<double> frequencies() const;
    std::vector<double> peaks() const;
};

// Peak displacement versus drive frequency: one integration from t = 0 to
// cfg.tf per grid frequency. Under fresh_zero every point starts at rest and
// points are distributed over `threads` workers; the result does not depend
// on the worker count. Integration failures are recorded per point.
SweepResult frequency_sweep(const AssembledModel& model, const UnilateralSpring& spring,
                            double amplitude, const SweepConfig& cfg,
                            const SweepOptions& opts = {});

// Runs one sweep point; exposed for benchmarks and the CLI.
SweepPoint sweep_point(const AssembledModel& model, const UnilateralSpring& spring,
                       double amplitude, double frequency_hz, const SweepConfig& cfg,
                       const SweepOptions& opts, const State& init, State* final_state = nullptr);

// f_hz,peak_disp_m,argmax_node,argmax_t_s,status
void write_csv(std::ostream& os, const SweepResult& result);

const char* to_string(InitialCondition ic) noexcept;
const char* to_string(ResponseMetric metric) noexcept;

} // namespace vibrobeam
