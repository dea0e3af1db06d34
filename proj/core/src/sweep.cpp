#include "vibrobeam/sweep.hpp"

#include "vibrobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace vibrobeam {

void SweepConfig::validate() const {
    if (!(f_start > 0.0) || !(f_end > f_start)) {
        throw std::invalid_argument("sweep: require 0 < f_start < f_end");
    }
    if (n_points < 2) {
        throw std::invalid_argument("sweep: n_points must be at least 2");
    }
    if (!(tf > 0.0)) {
        throw std::invalid_argument("sweep: tf must be positive");
    }
}

std::vector<double> SweepConfig::frequencies() const {
    std::vector<double> f(static_cast<std::size_t>(n_points));
    const double h = step();
    for (int i = 0; i < n_points; ++i) {
        f[static_cast<std::size_t>(i)] = i + 1 == n_points ? f_end : f_start + i * h;
    }
    return f;
}

std::size_t SweepResult::failures() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return !p.ok; }));
}

std::vector<double> SweepResult::frequencies() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.frequency_hz);
    }
    return out;
}

std::vector<double> SweepResult::peaks() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.peak_displacement);
    }
    return out;
}

SweepPoint sweep_point(const AssembledModel& model, const UnilateralSpring& spring,
                       double amplitude, double frequency_hz, const SweepConfig& cfg,
                       const SweepOptions& opts, const State& init, State* final_state) {
    SweepPoint point;
    point.frequency_hz = frequency_hz;
    try {
        const BaseExcitation exc = BaseExcitation::from_hz(amplitude, frequency_hz);
        const BeamDynamics dyn(model, spring, exc, opts.damping);
        SolverOptions solver = opts.solver;
        if (!(solver.dt_out > 0.0)) {
            solver.dt_out = 2.0 * std::numbers::pi / exc.omega / opts.samples_per_period;
        }
        const TimeSeries series = integrate_bdf(dyn, 0.0, cfg.tf, init, solver);
        point.stats = series.stats;
        if (cfg.metric == ResponseMetric::max_all_nodes) {
            const DisplacementPeak peak = max_displacement(series);
            point.peak_displacement = peak.global;
            point.argmax_node = peak.argmax_node;
            point.argmax_time = peak.argmax_time;
        } else {
            point.argmax_node = series.layout[static_cast<std::size_t>(series.tip_index)].node;
            for (std::size_t k = 0; k < series.size(); ++k) {
                const double u = std::abs(series.tip_displacement[k]);
                if (k == 0 || u > point.peak_displacement) {
                    point.peak_displacement = u;
                    point.argmax_time = series.time[k];
                }
            }
        }
        if (final_state != nullptr) {
            *final_state = series.final_state;
            final_state->t = 0.0;
        }
    } catch (const std::exception& e) {
        point.ok = false;
        point.peak_displacement = std::numeric_limits<double>::quiet_NaN();
        point.message = e.what();
        if (final_state != nullptr) {
            *final_state = State::at_rest(model.dof_count());
        }
    }
    return point;
}

SweepResult frequency_sweep(const AssembledModel& model, const UnilateralSpring& spring,
                            double amplitude, const SweepConfig& cfg, const SweepOptions& opts) {
    cfg.validate();
    spring.validate();
    opts.damping.validate();
    if (!(amplitude >= 0.0)) {
        throw std::invalid_argument("sweep: amplitude must be non-negative");
    }
    if (opts.samples_per_period < 2) {
        throw std::invalid_argument("sweep: samples_per_period must be at least 2");
    }
    const std::vector<double> freqs = cfg.frequencies();
    SweepResult result;
    result.points.resize(freqs.size());

    if (cfg.initial == InitialCondition::continuation) {
        // A failed point restarts its successor from rest.
        State state = State::at_rest(model.dof_count());
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            State next;
            result.points[i] = sweep_point(model, spring, amplitude, freqs[i], cfg, opts, state, &next);
            state = std::move(next);
        }
        return result;
    }

    const State rest = State::at_rest(model.dof_count());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < freqs.size(); i = next++) {
            result.points[i] = sweep_point(model, spring, amplitude, freqs[i], cfg, opts, rest);
        }
    };
    const unsigned n_threads =
        std::clamp<unsigned>(opts.threads, 1u, static_cast<unsigned>(freqs.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    return result;
}

void write_csv(std::ostream& os, const SweepResult& result) {
    os << "f_hz,peak_disp_m,argmax_node,argmax_t_s,status\n";
    for (const SweepPoint& p : result.points) {
        os << fmt::format("{:.17g},{:.17g},{},{:.17g},{}\n", p.frequency_hz, p.peak_displacement,
                          p.argmax_node, p.argmax_time, p.ok ? "ok" : "failed");
    }
}

const char* to_string(InitialCondition ic) noexcept {
    return ic == InitialCondition::fresh_zero ? "fresh_zero" : "continuation";
}

const char* to_string(ResponseMetric metric) noexcept {
    return metric == ResponseMetric::max_all_nodes ? "max_all_nodes" : "max_tip";
}

} // namespace vibrobeam
