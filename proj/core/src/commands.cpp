#include "vibrobeam/commands.hpp"

#include "vibrobeam/errors.hpp"
#include "vibrobeam/modal.hpp"
#include "vibrobeam/newmark.hpp"
#include "vibrobeam/report.hpp"

#include <Eigen/Core>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace vibrobeam {

namespace fs = std::filesystem;

std::optional<Command> parse_command(std::string_view name) {
    if (name == "eigen") {
        return Command::eigen;
    }
    if (name == "simulate") {
        return Command::simulate;
    }
    if (name == "sweep") {
        return Command::sweep;
    }
    if (name == "spectrum") {
        return Command::spectrum;
    }
    return std::nullopt;
}

const char* to_string(Command cmd) noexcept {
    switch (cmd) {
    case Command::eigen:
        return "eigen";
    case Command::simulate:
        return "simulate";
    case Command::sweep:
        return "sweep";
    case Command::spectrum:
        return "spectrum";
    }
    return "?";
}

namespace {

class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        std::ofstream file(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw std::runtime_error(fmt::format("cannot open {} for writing", (dir_ / name).string()));
        }
        body(file);
        file.flush();
        if (!file) {
            throw std::runtime_error(fmt::format("failed writing {}", (dir_ / name).string()));
        }
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const noexcept { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::vector<double> bilateral_reference(const RunConfig& cfg, const AssembledModel& model) {
    UnilateralSpring linear = cfg.spring;
    linear.mode = SpringMode::bilateral;
    const int count = std::min<int>(cfg.fft.reference_modes, static_cast<int>(model.dof_count()));
    return fem_eigenfrequencies(model, linear, count).frequencies_hz;
}

TimeSeries simulate(const RunConfig& cfg, const AssembledModel& model) {
    const BaseExcitation exc = cfg.excitation();
    const BeamDynamics dyn(model, cfg.spring, exc, cfg.damping);
    const State rest = State::at_rest(model.dof_count());
    const SolverOptions opts = cfg.solver_for(exc.omega);
    if (cfg.integrator == Integrator::newmark) {
        return integrate_reference(dyn, 0.0, cfg.duration, rest, cfg.newmark_dt, opts.dt_out);
    }
    return integrate_bdf(dyn, 0.0, cfg.duration, rest, opts);
}

int run_eigen(const RunConfig& cfg, ArtifactWriter& writer, std::ostream& out) {
    const std::vector<EigenRow> rows = eigen_table(cfg.beam, cfg.spring, cfg.fft.reference_modes);
    print_eigen_table(out, rows);
    writer.write("eigen.csv", [&](std::ostream& os) { write_csv(os, rows); });
    return exit_code::ok;
}

int run_simulate(const RunConfig& cfg, ArtifactWriter& writer, std::ostream& out) {
    const AssembledModel model = assemble(cfg.beam);
    const TimeSeries series = simulate(cfg, model);
    const DisplacementPeak peak = max_displacement(series);
    out << fmt::format("simulated {} samples, {} steps; peak |u| = {:.6e} m at node {} (t = {:.6f} s)\n",
                       series.size(), series.stats.steps, peak.global, peak.argmax_node,
                       peak.argmax_time);
    writer.write("timeseries.csv", [&](std::ostream& os) { write_csv(os, series); });
    LinePlot plot{fmt::format("Tip displacement, f = {} Hz, {} spring", cfg.frequency_hz,
                              to_string(cfg.spring.mode)),
                  "t [s]", "u_tip [m]", false, {{"u_tip_abs", series.time, series.tip_displacement}},
                  {}};
    writer.write("timeseries.svg", [&](std::ostream& os) { write_svg(os, plot); });
    return exit_code::ok;
}

int run_sweep(const RunConfig& cfg, ArtifactWriter& writer, std::ostream& out, std::ostream& err) {
    const AssembledModel model = assemble(cfg.beam);
    SweepOptions opts;
    opts.solver = cfg.solver;
    opts.samples_per_period = cfg.samples_per_period;
    opts.damping = cfg.damping;
    opts.threads = cfg.threads;
    const SweepResult result = frequency_sweep(model, cfg.spring, cfg.amplitude, cfg.sweep, opts);
    for (const SweepPoint& p : result.points) {
        if (!p.ok) {
            err << fmt::format("warning: sweep point {} Hz failed: {}\n", p.frequency_hz, p.message);
        }
    }
    const std::vector<double> refs = bilateral_reference(cfg, model);
    writer.write("sweep.csv", [&](std::ostream& os) { write_csv(os, result); });
    LinePlot plot{fmt::format("Frequency sweep, {} spring, a = {} m/s^2, tf = {} s",
                              to_string(cfg.spring.mode), cfg.amplitude, cfg.sweep.tf),
                  "f [Hz]", "max displacement [m]", true,
                  {{to_string(cfg.spring.mode), result.frequencies(), result.peaks()}}, refs};
    writer.write("sweep.svg", [&](std::ostream& os) { write_svg(os, plot); });

    const auto peaks = sweep_peaks(result, cfg.fft.prominence);
    out << fmt::format("{} points, {} failed, {} local maxima\n", result.points.size(),
                       result.failures(), peaks.size());
    return result.failures() > 0 ? exit_code::partial_sweep : exit_code::ok;
}

int run_spectrum(const RunConfig& cfg, ArtifactWriter& writer, std::ostream& out) {
    const AssembledModel model = assemble(cfg.beam);
    const TimeSeries series = simulate(cfg, model);
    SpectrumResult spectrum = fft_spectrum(series, cfg.fft.signal, cfg.fft.transient_fraction,
                                           cfg.fft.window, cfg.fft.prominence);
    const std::vector<double> refs = bilateral_reference(cfg, model);
    spectrum.peaks = classify_peaks(spectrum, refs, cfg.frequency_hz, cfg.fft.rel_tol);
    for (const SpectralPeak& p : spectrum.peaks) {
        out << fmt::format("{:>12.4f} Hz  {:>14.6e}  {}\n", p.frequency_hz, p.amplitude,
                           p.label.str());
    }
    writer.write("spectrum.csv", [&](std::ostream& os) { write_csv(os, spectrum); });
    LinePlot plot{fmt::format("Amplitude spectrum ({}), drive {} Hz, {} spring",
                              cfg.fft.signal.str(), cfg.frequency_hz, to_string(cfg.spring.mode)),
                  "f [Hz]", "amplitude", true,
                  {{"spectrum", spectrum.frequency_hz, spectrum.amplitude}}, refs};
    writer.write("spectrum.svg", [&](std::ostream& os) { write_svg(os, plot); });
    return exit_code::ok;
}

} // namespace

CommandResult run_subcommand(Command cmd, const RunConfig& cfg, std::string_view config_text,
                             std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    CommandResult result;
    try {
        cfg.validate();
        ArtifactWriter writer(cfg.output_dir);
        switch (cmd) {
        case Command::eigen:
            result.exit_code = run_eigen(cfg, writer, out);
            break;
        case Command::simulate:
            result.exit_code = run_simulate(cfg, writer, out);
            break;
        case Command::sweep:
            result.exit_code = run_sweep(cfg, writer, out, err);
            break;
        case Command::spectrum:
            result.exit_code = run_spectrum(cfg, writer, out);
            break;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        nlohmann::json manifest = {
            {"tool", "vibrobeam"},
            {"version", VIBROBEAM_VERSION},
            {"command", to_string(cmd)},
            {"config_sha256", sha256_hex(config_text)},
            {"eigen_version", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                          EIGEN_MINOR_VERSION)},
            {"compiler", __VERSION__},
            {"threads", cfg.threads},
            {"deterministic", true},
            {"wall_time_s", wall},
            {"exit_code", result.exit_code},
            {"files", writer.files()},
        };
        writer.write("manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });
        result.files = writer.files();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        result.exit_code = exit_code::config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        result.exit_code = exit_code::runtime_error;
    }
    return result;
}

} // namespace vibrobeam
