// Acceptance runner: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status 1 if any criterion fails.
//
//   vibrobeam_acceptance [--only N ...] [--out DIR]

#include "linear_oracle.hpp"

#include "vibrobeam/bdf.hpp"
#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/config.hpp"
#include "vibrobeam/dynamics.hpp"
#include "vibrobeam/modal.hpp"
#include "vibrobeam/newmark.hpp"
#include "vibrobeam/spectrum.hpp"
#include "vibrobeam/sweep.hpp"
#include "vibrobeam/time_series.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace vibrobeam;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
};

std::filesystem::path g_out_dir;

void save(const std::string& name, const std::string& text) {
    if (g_out_dir.empty()) {
        return;
    }
    std::filesystem::create_directories(g_out_dir);
    std::ofstream(g_out_dir / name, std::ios::binary) << text;
}

double rel_max_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

Outcome cantilever_modes() {
    BeamProperties p;
    p.n_elements = 40;
    UnilateralSpring none;
    none.mode = SpringMode::none;
    const ModalResult fem = fem_eigenfrequencies(assemble(p), none, 3);
    const std::vector<double> roots = characteristic_roots(0.0, 3);
    const double reference[] = {1.8751, 4.6941, 7.8548};
    const double scale = std::sqrt(p.bending_stiffness() / p.mass_per_length()) /
                         (2.0 * std::numbers::pi * p.length * p.length);
    double worst = 0.0;
    double root_gap = 0.0;
    std::string freqs;
    for (int i = 0; i < 3; ++i) {
        const double exact = roots[i] * roots[i] * scale;
        worst = std::max(worst, std::abs(fem.frequencies_hz[i] - exact) / exact);
        root_gap = std::max(root_gap, std::abs(roots[i] - reference[i]));
        freqs += fmt::format(" {:.4f}", fem.frequencies_hz[i]);
    }
    return {worst <= 1e-3 && root_gap < 5e-5,
            fmt::format("f ={} Hz, max rel err {:.2e} (limit 1e-3), roots within {:.1e} of 4-digit values",
                        freqs, worst, root_gap)};
}

Outcome static_tip() {
    double worst = 0.0;
    for (int n : {1, 5, 40}) {
        BeamProperties p;
        p.n_elements = n;
        Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * n);
        load[2 * n - 2] = 1.0;
        const double tip = static_displacement(p, load)[2 * n - 2];
        const double exact = std::pow(p.length, 3) / (3.0 * p.bending_stiffness());
        worst = std::max(worst, std::abs(tip - exact) / exact);
    }
    return {worst <= 1e-12, fmt::format("n = 1, 5, 40: max rel err {:.2e} (limit 1e-12)", worst)};
}

Outcome cross_solver() {
    const BeamProperties p;
    const AssembledModel model = assemble(p);
    UnilateralSpring spring;
    spring.mode = SpringMode::bilateral;
    const double f1 = fem_eigenfrequencies(model, spring, 1).frequencies_hz[0];
    const double drive = std::round(0.97 * f1);
    const BaseExcitation exc = BaseExcitation::from_hz(50.0, drive);
    const BeamDynamics dyn(model, spring, exc);
    const State rest = State::at_rest(model.dof_count());
    const double tf = 0.1;

    SolverOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-15;
    opts.dt_out = SolverOptions::default_dt_out(exc.omega);
    const TimeSeries bdf = integrate_bdf(dyn, 0.0, tf, rest, opts);

    const testing::LinearModalOracle oracle(model, spring, exc, rest);
    Eigen::MatrixXd exact(bdf.w.rows(), bdf.w.cols());
    for (Eigen::Index k = 0; k < exact.rows(); ++k) {
        exact.row(k) = oracle.displacement(bdf.time[static_cast<std::size_t>(k)]).transpose();
    }
    const double err_oracle = rel_max_error(bdf.w, exact);

    const double dt0 = 1e-6;
    const TimeSeries ref = integrate_reference(dyn, 0.0, tf, rest, dt0 / 4.0, opts.dt_out);
    const double err_newmark = rel_max_error(ref.w, bdf.w);

    return {err_oracle <= 1e-6 && err_newmark <= 1e-5,
            fmt::format("drive {} Hz (f1 = {:.3f} Hz): BDF vs modal {:.2e} (limit 1e-6), "
                        "Newmark dt = {:.1e} s vs BDF {:.2e} (limit 1e-5)",
                        drive, f1, err_oracle, dt0 / 4.0, err_newmark)};
}

Outcome energy_conservation() {
    const RunConfig cfg;
    const AssembledModel model = assemble(cfg.beam);
    const BaseExcitation exc = cfg.excitation();
    const BeamDynamics dyn(model, cfg.spring, exc);
    SolverOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-12;
    // The work integral is a trapezoid sum over the samples; impacts put
    // high-frequency content into w', so sample much finer than the default.
    opts.dt_out = 1.0 / (1024.0 * cfg.frequency_hz);
    const TimeSeries series =
        integrate_bdf(dyn, 0.0, 0.2, State::at_rest(model.dof_count()), opts);
    const EnergyBalance balance = energy_balance(dyn, series);
    const auto contacts = std::count_if(series.contact_force.begin(), series.contact_force.end(),
                                        [](double f) { return f > 0.0; });
    const double r = balance.relative_residual();
    return {r <= 1e-5 && contacts > 0,
            fmt::format("drive {} Hz, {} samples in contact: residual {:.2e} of peak energy "
                        "(limit 1e-5)",
                        cfg.frequency_hz, contacts, r)};
}

Outcome bilinear_resonance() {
    const double f_open = 100.0;
    const double f_closed = 300.0;
    const double k_open = std::pow(2.0 * std::numbers::pi * f_open, 2);
    const double k_closed = std::pow(2.0 * std::numbers::pi * f_closed, 2);
    const AssembledModel sdof(Eigen::MatrixXd::Identity(1, 1),
                              Eigen::MatrixXd::Constant(1, 1, k_open),
                              {{DofKind::translation, 1}}, 0);
    UnilateralSpring spring;
    spring.stiffness = k_closed - k_open;
    SweepConfig sweep;
    sweep.f_start = 110.0;
    sweep.f_end = 200.0;
    sweep.n_points = 91;
    sweep.tf = 1.0;
    const SweepResult result = frequency_sweep(sdof, spring, 50.0, sweep);
    std::ostringstream csv;
    write_csv(csv, result);
    save("bilinear_sweep.csv", csv.str());

    const auto best = std::max_element(
        result.points.begin(), result.points.end(),
        [](const SweepPoint& a, const SweepPoint& b) { return a.peak_displacement < b.peak_displacement; });
    const double target = bilinear_frequency(f_open, f_closed);
    const double miss = std::abs(best->frequency_hz - target);
    return {result.failures() == 0 && miss <= 2.0 * sweep.step(),
            fmt::format("peak at {} Hz, bilinear frequency {} Hz, {} failed points "
                        "(limit two 1 Hz steps)",
                        best->frequency_hz, target, result.failures())};
}

Outcome harmonics() {
    // Mass-proportional damping decays every mode at rate alpha/2, so the
    // second half of the run is steady to well below the bilateral limit.
    const double drive = 120.0;
    const int periods = 24;
    const int per_period = 64;
    const double window = periods / drive;
    const BeamProperties p;
    const AssembledModel model = assemble(p);
    RayleighDamping damping;
    damping.alpha = 400.0;
    const BaseExcitation exc = BaseExcitation::from_hz(50.0, drive);

    SolverOptions opts;
    opts.dt_out = 1.0 / (drive * per_period);

    auto ratios = [&](SpringMode mode, std::string& text) {
        UnilateralSpring spring;
        spring.mode = mode;
        const BeamDynamics dyn(model, spring, exc, damping);
        const TimeSeries series =
            integrate_bdf(dyn, 0.0, 2.0 * window, State::at_rest(model.dof_count()), opts);
        const std::size_t n = static_cast<std::size_t>(periods * per_period);
        const std::span<const double> tail(series.tip_displacement.data() + series.size() - n, n);
        const SpectrumResult s = amplitude_spectrum(tail, opts.dt_out, Window::hann);
        const double a1 = s.amplitude[periods];
        const double r2 = s.amplitude[2 * periods] / a1;
        const double r3 = s.amplitude[3 * periods] / a1;
        text = fmt::format("{} 2f/f = {:.2e}, 3f/f = {:.2e}", to_string(mode), r2, r3);
        return std::pair{r2, r3};
    };
    std::string uni_text;
    std::string bil_text;
    const auto [u2, u3] = ratios(SpringMode::unilateral, uni_text);
    const auto [b2, b3] = ratios(SpringMode::bilateral, bil_text);
    return {u2 >= 1e-3 && u3 >= 1e-3 && b2 <= 1e-6 && b3 <= 1e-6,
            fmt::format("drive {} Hz: {} (limit >= 1e-3); {} (limit <= 1e-6)", drive, uni_text,
                        bil_text)};
}

Outcome interlacing() {
    const AssembledModel model = assemble(BeamProperties{});
    UnilateralSpring none;
    none.mode = SpringMode::none;
    const std::vector<double> free = fem_eigenfrequencies(model, none, 4).frequencies_hz;
    bool ok = true;
    std::vector<double> previous(3, 0.0);
    std::string text;
    for (double k_r : {1e4, 5e5, 1e8}) {
        UnilateralSpring spring;
        spring.mode = SpringMode::bilateral;
        spring.stiffness = k_r;
        const std::vector<double> f = fem_eigenfrequencies(model, spring, 3).frequencies_hz;
        for (int i = 0; i < 3; ++i) {
            ok = ok && free[i] <= f[i] && f[i] <= free[i + 1] && f[i] > previous[i];
        }
        previous = f;
        text += fmt::format("; k_r = {:.0e}: {:.2f} {:.2f} {:.2f}", k_r, f[0], f[1], f[2]);
    }
    return {ok, fmt::format("free {:.2f} {:.2f} {:.2f} {:.2f} Hz{}", free[0], free[1], free[2],
                            free[3], text)};
}

RunConfig sweep_config() {
    RunConfig cfg;
    cfg.beam.n_elements = 10;
    return cfg;
}

SweepResult run_sweep(const RunConfig& cfg, SpringMode mode, unsigned threads) {
    UnilateralSpring spring = cfg.spring;
    spring.mode = mode;
    SweepOptions opts;
    opts.solver = cfg.solver;
    opts.samples_per_period = cfg.samples_per_period;
    opts.damping = cfg.damping;
    opts.threads = threads;
    return frequency_sweep(assemble(cfg.beam), spring, cfg.amplitude, cfg.sweep, opts);
}

std::string csv_of(const SweepResult& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

Outcome sweep_reproduction() {
    const RunConfig cfg = sweep_config();
    const SweepResult uni = run_sweep(cfg, SpringMode::unilateral, 8);
    const SweepResult bil = run_sweep(cfg, SpringMode::bilateral, 8);
    save("sweep_unilateral.csv", csv_of(uni));
    save("sweep_bilateral.csv", csv_of(bil));

    UnilateralSpring linear = cfg.spring;
    linear.mode = SpringMode::bilateral;
    const std::vector<double> anchors =
        fem_eigenfrequencies(assemble(cfg.beam), linear, cfg.fft.reference_modes).frequencies_hz;
    const double step = cfg.sweep.step();
    const auto uni_peaks = sweep_peaks(uni, cfg.fft.prominence);
    const auto bil_peaks = sweep_peaks(bil, cfg.fft.prominence);

    auto near = [&](double f, const auto& list, auto key) {
        return std::any_of(list.begin(), list.end(),
                           [&](const auto& x) { return std::abs(key(x) - f) <= 2.0 * step; });
    };
    auto freq = [](const SpectralPeak& p) { return p.frequency_hz; };
    auto self = [](double f) { return f; };

    // (a) the dominant unilateral response sits away from every anchor.
    const auto top = std::max_element(
        uni_peaks.begin(), uni_peaks.end(),
        [](const SpectralPeak& a, const SpectralPeak& b) { return a.amplitude < b.amplitude; });
    const bool shifted = top != uni_peaks.end() && !near(top->frequency_hz, anchors, self);

    // (b) a unilateral peak with no bilateral counterpart, labelled from the anchors.
    std::vector<SpectralPeak> extra;
    for (const SpectralPeak& p : uni_peaks) {
        if (!near(p.frequency_hz, bil_peaks, freq)) {
            extra.push_back(p);
        }
    }
    const std::vector<SpectralPeak> labelled = classify_peaks(extra, anchors, 0.0, cfg.fft.rel_tol);
    std::string labels;
    bool harmonic = false;
    for (const SpectralPeak& p : labelled) {
        const bool h = p.label.kind == PeakLabel::Kind::superharmonic ||
                       p.label.kind == PeakLabel::Kind::subharmonic;
        harmonic = harmonic || h;
        if (h) {
            labels += fmt::format(" {} Hz {};", p.frequency_hz, p.label.str());
        }
    }
    const std::size_t failed = uni.failures() + bil.failures();
    std::string anchor_text;
    for (double f : anchors) {
        anchor_text += fmt::format(" {:.2f}", f);
    }
    return {shifted && harmonic && failed == 0,
            fmt::format("anchors{} Hz; dominant unilateral peak {} Hz; {} unilateral / {} bilateral "
                        "peaks, {} unmatched;{} {} failed points",
                        anchor_text, top != uni_peaks.end() ? top->frequency_hz : 0.0,
                        uni_peaks.size(), bil_peaks.size(), extra.size(),
                        labels.empty() ? " no super/subharmonic label;" : labels, failed)};
}

Outcome determinism() {
    RunConfig cfg = sweep_config();
    cfg.sweep.n_points = 22; // every 50 Hz across the same band
    const std::string one = csv_of(run_sweep(cfg, SpringMode::unilateral, 1));
    const std::string eight = csv_of(run_sweep(cfg, SpringMode::unilateral, 8));
    save("determinism_1.csv", one);
    save("determinism_8.csv", eight);
    return {one == eight, fmt::format("{} points, {} bytes, 1 vs 8 workers {}", cfg.sweep.n_points,
                                      one.size(), one == eight ? "identical" : "differ")};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vibrobeam acceptance criteria"};
    std::vector<int> only;
    std::string out_dir;
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--out", out_dir, "Write sweep CSVs here");
    CLI11_PARSE(app, argc, argv);
    g_out_dir = out_dir;

    const std::vector<Criterion> criteria = {
        {1, "cantilever modal accuracy", 1.0, cantilever_modes},
        {2, "static tip deflection", 1.0, static_tip},
        {3, "cross-solver linear oracle", 10.0, cross_solver},
        {4, "energy balance", 30.0, energy_conservation},
        {5, "bilinear resonance", 60.0, bilinear_resonance},
        {6, "harmonic content", 30.0, harmonics},
        {7, "rank-one interlacing", 5.0, interlacing},
        {8, "sweep reproduction", 900.0, sweep_reproduction},
        {9, "sweep determinism", 900.0, determinism},
    };
    const std::set<int> selected(only.begin(), only.end());

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() && !selected.contains(c.id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && wall < c.budget_s;
        failures += pass ? 0 : 1;
        std::cout << fmt::format("{} [{}] {}: {} | {:.2f} s (limit {} s)\n", pass ? "PASS" : "FAIL",
                                 c.id, c.name, o.detail, wall, c.budget_s)
                  << std::flush;
    }
    return failures == 0 ? 0 : 1;
}
