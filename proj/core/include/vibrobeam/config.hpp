#pragma once

#include "vibrobeam/bdf.hpp"
#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/dynamics.hpp"
#include "vibrobeam/loading.hpp"
#include "vibrobeam/spectrum.hpp"
#include "vibrobeam/sweep.hpp"

#include <string>
#include <string_view>

namespace vibrobeam {

enum class Integrator { bdf, newmark };

struct SpectrumOptions {
    SignalSelector signal;
    double transient_fraction = 0.5;
    Window window = Window::hann;
    double prominence = 1e-4;
    double rel_tol = 0.02;
    int reference_modes = 3;

    friend bool operator==(const SpectrumOptions&, const SpectrumOptions&) = default;
};

// Everything one CLI run needs. The default beam is an illustrative steel
// strip (h = 10 mm, b = 20 mm) whose length puts the first bilateral
// frequency at 196.35694 Hz for k_r = 5e5 N/m.
struct RunConfig {
    BeamProperties beam;
    RayleighDamping damping;
    UnilateralSpring spring;

    double amplitude = 50.0;     // m/s^2
    double frequency_hz = 100.0; // drive for simulate/spectrum
    double duration = 0.4;       // s, simulate/spectrum horizon

    Integrator integrator = Integrator::bdf;
    SolverOptions solver;        // dt_out = 0: samples_per_period per drive period
    int samples_per_period = 64;
    double newmark_dt = 1e-6;

    SweepConfig sweep;
    SpectrumOptions fft;

    // Set from the command line, not from the file.
    std::string output_dir = ".";
    unsigned threads = 1;

    void validate() const;
    BaseExcitation excitation() const;
    SolverOptions solver_for(double omega) const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// INI-style text with sections [beam], [spring], [excitation], [solver],
// [sweep], [fft]. '#' starts a comment. Missing keys take their defaults;
// unknown sections or keys, malformed values and constraint violations
// throw ConfigError naming the key and line.
RunConfig parse_config(std::string_view text);

// Every file key with its value; parse_config(serialize_config(c)) == c.
// With `documented`, each key is preceded by a comment describing it.
std::string serialize_config(const RunConfig& cfg, bool documented = false);

} // namespace vibrobeam
