#include "vibrobeam/spectrum.hpp"

#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace vibrobeam {

SignalSelector SignalSelector::parse(const std::string& text) {
    if (text == "tip_abs") {
        return {Kind::tip_absolute, 0};
    }
    if (text == "tip_rel") {
        return {Kind::tip_relative, 0};
    }
    if (text == "contact_force") {
        return {Kind::contact_force, 0};
    }
    if (text.starts_with("dof:")) {
        std::size_t pos = 0;
        const std::string idx = text.substr(4);
        long value = -1;
        try {
            value = std::stol(idx, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == idx.size() && !idx.empty() && value >= 0) {
            return {Kind::dof, static_cast<Eigen::Index>(value)};
        }
    }
    throw std::invalid_argument("unknown signal selector '" + text +
                                "' (expected tip_abs, tip_rel, contact_force or dof:<index>)");
}

std::string SignalSelector::str() const {
    switch (kind) {
    case Kind::tip_absolute:
        return "tip_abs";
    case Kind::tip_relative:
        return "tip_rel";
    case Kind::contact_force:
        return "contact_force";
    case Kind::dof:
        return fmt::format("dof:{}", dof);
    }
    return "tip_abs";
}

std::string PeakLabel::str() const {
    switch (kind) {
    case Kind::unlabeled:
        return "";
    case Kind::fundamental:
        return fmt::format("fundamental({})", mode);
    case Kind::superharmonic:
        return fmt::format("superharmonic({},{})", mode, multiple);
    case Kind::subharmonic:
        return fmt::format("subharmonic({},{})", mode, multiple);
    case Kind::drive_harmonic:
        return fmt::format("drive_harmonic({})", multiple);
    case Kind::unidentified:
        return "unidentified";
    }
    return "";
}

SpectrumResult amplitude_spectrum(std::span<const double> samples, double dt, Window window) {
    const std::size_t n = samples.size();
    if (n < 16) {
        throw std::invalid_argument(
            fmt::format("spectrum needs at least 16 samples, got {}", n));
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("spectrum: sampling interval must be positive");
    }
    std::vector<double> x(samples.begin(), samples.end());
    double gain = static_cast<double>(n);
    if (window == Window::hann) {
        gain = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // Periodic Hann, so that bin-centred tones keep their amplitude.
            const double wj =
                0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / n));
            x[j] *= wj;
            gain += wj;
        }
    }

    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    std::vector<std::complex<double>> bins;
    fft.fwd(bins, x);
    bins.resize(n / 2 + 1);

    SpectrumResult out;
    out.window = window;
    out.duration = static_cast<double>(n) * dt;
    out.frequency_hz.resize(bins.size());
    out.amplitude.resize(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
        out.frequency_hz[k] = static_cast<double>(k) / out.duration;
        out.amplitude[k] = (unpaired ? 1.0 : 2.0) * std::abs(bins[k]) / gain;
    }
    return out;
}

namespace {

std::vector<double> extract(const TimeSeries& series, const SignalSelector& signal) {
    switch (signal.kind) {
    case SignalSelector::Kind::tip_absolute:
        return series.tip_displacement;
    case SignalSelector::Kind::contact_force:
        return series.contact_force;
    case SignalSelector::Kind::tip_relative:
    case SignalSelector::Kind::dof: {
        const Eigen::Index dof =
            signal.kind == SignalSelector::Kind::dof ? signal.dof : series.tip_index;
        if (dof < 0 || dof >= series.w.cols()) {
            throw std::invalid_argument(fmt::format("signal DOF {} out of range", dof));
        }
        std::vector<double> out(series.size());
        for (std::size_t k = 0; k < series.size(); ++k) {
            out[k] = series.w(static_cast<Eigen::Index>(k), dof);
        }
        return out;
    }
    }
    return {};
}

} // namespace

SpectrumResult fft_spectrum(const TimeSeries& series, const SignalSelector& signal,
                            double transient_fraction, Window window, double prominence) {
    if (!(transient_fraction >= 0.0 && transient_fraction < 1.0)) {
        throw std::invalid_argument("transient_fraction must be in [0, 1)");
    }
    if (series.size() < 2) {
        throw std::invalid_argument("spectrum: series is too short");
    }
    const std::vector<double> all = extract(series, signal);
    const auto skip = static_cast<std::size_t>(std::floor(transient_fraction * all.size()));
    const double dt = series.time[1] - series.time[0];
    SpectrumResult out =
        amplitude_spectrum(std::span<const double>(all).subspan(skip), dt, window);
    out.transient_fraction = transient_fraction;

    double top = 0.0;
    for (std::size_t k = 1; k < out.amplitude.size(); ++k) {
        top = std::max(top, out.amplitude[k]);
    }
    if (top > 0.0) {
        for (std::size_t k : find_peaks(out.amplitude, prominence * top, 1)) {
            out.peaks.push_back({out.frequency_hz[k], out.amplitude[k], k, {}});
        }
    }
    return out;
}

std::vector<std::size_t> find_peaks(std::span<const double> values, double min_prominence,
                                    std::size_t first) {
    std::vector<std::size_t> out;
    const std::size_t n = values.size();
    for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < n; ++i) {
        const double v = values[i];
        if (!(v > values[i - 1] && v > values[i + 1])) {
            continue;
        }
        double left_min = v;
        for (std::size_t j = i; j-- > 0;) {
            if (values[j] > v) {
                break;
            }
            left_min = std::min(left_min, values[j]);
        }
        double right_min = v;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (values[j] > v) {
                break;
            }
            right_min = std::min(right_min, values[j]);
        }
        if (v - std::max(left_min, right_min) >= min_prominence) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<SpectralPeak> sweep_peaks(const SweepResult& sweep, double prominence) {
    std::vector<double> f;
    std::vector<double> y;
    for (const SweepPoint& p : sweep.points) {
        if (p.ok && std::isfinite(p.peak_displacement)) {
            f.push_back(p.frequency_hz);
            y.push_back(p.peak_displacement);
        }
    }
    std::vector<SpectralPeak> out;
    if (y.empty()) {
        return out;
    }
    const double top = *std::max_element(y.begin(), y.end());
    for (std::size_t i : find_peaks(y, prominence * top, 1)) {
        out.push_back({f[i], y[i], i, {}});
    }
    return out;
}

PeakLabel classify_frequency(double frequency_hz, std::span<const double> reference_hz,
                             double drive_hz, double rel_tol) {
    if (reference_hz.empty()) {
        throw std::invalid_argument("classify_peaks: reference list is empty");
    }
    if (!(rel_tol > 0.0 && rel_tol < 0.5)) {
        throw std::invalid_argument("classify_peaks: rel_tol must lie in (0, 0.5)");
    }
    // (relative distance, k, i) ordering; drive harmonics sort after any
    // reference-based label with the same distance and k.
    using Key = std::tuple<double, int, int>;
    PeakLabel best{PeakLabel::Kind::unidentified, 0, 0};
    Key best_key{std::numeric_limits<double>::infinity(), INT_MAX, INT_MAX};
    auto consider = [&](double target, PeakLabel label, int k, int i) {
        if (!(target > 0.0)) {
            return;
        }
        const double dist = std::abs(frequency_hz - target) / target;
        if (dist > rel_tol) {
            return;
        }
        const Key key{dist, k, i};
        if (key < best_key) {
            best_key = key;
            best = label;
        }
    };
    for (std::size_t idx = 0; idx < reference_hz.size(); ++idx) {
        const int i = static_cast<int>(idx) + 1;
        const double fi = reference_hz[idx];
        consider(fi, {PeakLabel::Kind::fundamental, i, 1}, 1, i);
        for (int k = 2; k <= 4; ++k) {
            consider(k * fi, {PeakLabel::Kind::superharmonic, i, k}, k, i);
        }
        for (int k = 2; k <= 3; ++k) {
            consider(fi / k, {PeakLabel::Kind::subharmonic, i, k}, k, i);
        }
    }
    if (drive_hz > 0.0) {
        for (int k = 1; k <= 8; ++k) {
            consider(k * drive_hz, {PeakLabel::Kind::drive_harmonic, 0, k}, k, INT_MAX);
        }
    }
    return best;
}

std::vector<SpectralPeak> classify_peaks(std::span<const SpectralPeak> peaks,
                                         std::span<const double> reference_hz, double drive_hz,
                                         double rel_tol) {
    std::vector<SpectralPeak> out(peaks.begin(), peaks.end());
    for (SpectralPeak& p : out) {
        p.label = classify_frequency(p.frequency_hz, reference_hz, drive_hz, rel_tol);
    }
    return out;
}

std::vector<SpectralPeak> classify_peaks(const SpectrumResult& spectrum,
                                         std::span<const double> reference_hz, double drive_hz,
                                         double rel_tol) {
    return classify_peaks(std::span<const SpectralPeak>(spectrum.peaks), reference_hz, drive_hz,
                          rel_tol);
}

void write_csv(std::ostream& os, const SpectrumResult& spectrum) {
    std::vector<std::string> labels(spectrum.amplitude.size());
    for (const SpectralPeak& p : spectrum.peaks) {
        if (p.bin < labels.size()) {
            labels[p.bin] = p.label.kind == PeakLabel::Kind::unlabeled ? "peak" : p.label.str();
        }
    }
    os << "f_hz,amplitude_m,label\n";
    for (std::size_t k = 0; k < spectrum.amplitude.size(); ++k) {
        // Labels contain commas; quote them.
        os << fmt::format("{:.17g},{:.17g},{}\n", spectrum.frequency_hz[k], spectrum.amplitude[k],
                          labels[k].empty() ? std::string() : "\"" + labels[k] + "\"");
    }
}

const char* to_string(Window window) noexcept { return window == Window::hann ? "hann" : "rect"; }

} // namespace vibrobeam
