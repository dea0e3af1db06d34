#pragma once

#include "vibrobeam/dynamics.hpp"
#include "vibrobeam/time_series.hpp"

namespace vibrobeam {

// Fixed-step Newmark average acceleration (gamma = 1/2, beta = 1/4) on the
// second-order form, with Newton iterations on the contact branch. Samples
// are interpolated with the constant mean acceleration of each step.
//
// dt_out = 0 samples at every step. A step longer than the span is clipped,
// so a single step is taken. Throws NewtonFailure with the step index.
TimeSeries integrate_reference(const BeamDynamics& dyn, double t0, double tf, const State& init,
                               double dt_fixed, double dt_out = 0.0);

} // namespace vibrobeam
