#pragma once

#include "vibrobeam/dynamics.hpp"
#include "vibrobeam/time_series.hpp"

#include <limits>

namespace vibrobeam {

struct SolverOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_order = 5;
    double initial_step = 0.0; // 0 selects the step automatically
    double max_step = std::numeric_limits<double>::infinity();
    double dt_out = 0.0;       // output sampling interval, required

    void validate() const;

    // 64 samples per drive period.
    static double default_dt_out(double omega);

    friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

// Variable-order (1..max_order), variable-step BDF on the first-order form
// y = (w, w'). Newton iterations use a piecewise-constant Jacobian keyed by
// the contact state; it is refreshed once per step when the iteration stalls,
// after which the step is halved.
//
// Throws StepSizeUnderflow or DivergenceError.
TimeSeries integrate_bdf(const BeamDynamics& dyn, double t0, double tf, const State& init,
                         const SolverOptions& opts);

} // namespace vibrobeam
