#pragma once

#include "vibrobeam/sweep.hpp"
#include "vibrobeam/time_series.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vibrobeam {

enum class Window { rect, hann };

// Which channel of a TimeSeries to analyse.
struct SignalSelector {
    enum class Kind { tip_absolute, tip_relative, contact_force, dof };
    Kind kind = Kind::tip_absolute;
    Eigen::Index dof = 0; // only for Kind::dof

    // "tip_abs", "tip_rel", "contact_force" or "dof:<index>".
    static SignalSelector parse(const std::string& text);
    std::string str() const;

    friend bool operator==(const SignalSelector&, const SignalSelector&) = default;
};

struct PeakLabel {
    enum class Kind { unlabeled, fundamental, superharmonic, subharmonic, drive_harmonic, unidentified };
    Kind kind = Kind::unlabeled;
    int mode = 0;     // 1-based reference index
    int multiple = 0; // k in k*f or f/k

    // fundamental(1), superharmonic(1,2), subharmonic(1,3), drive_harmonic(2), unidentified
    std::string str() const;
    friend bool operator==(const PeakLabel&, const PeakLabel&) = default;
};

struct SpectralPeak {
    double frequency_hz = 0.0;
    double amplitude = 0.0;
    std::size_t bin = 0;
    PeakLabel label;
};

struct SpectrumResult {
    std::vector<double> frequency_hz; // one-sided, bin k at k / duration
    std::vector<double> amplitude;
    Window window = Window::rect;
    double transient_fraction = 0.0;
    double duration = 0.0;            // analysed record length, samples * dt
    std::vector<SpectralPeak> peaks;

    double bin_spacing() const noexcept { return duration > 0.0 ? 1.0 / duration : 0.0; }
};

// One-sided amplitude spectrum normalised by the window's coherent gain, so
// that A sin(2 pi f t) on a bin returns A. Needs at least 16 samples.
SpectrumResult amplitude_spectrum(std::span<const double> samples, double dt, Window window);

// Drops the leading transient_fraction of the samples, transforms the rest
// and detects peaks with prominence >= prominence * (largest non-DC bin).
SpectrumResult fft_spectrum(const TimeSeries& series, const SignalSelector& signal,
                            double transient_fraction = 0.5, Window window = Window::hann,
                            double prominence = 1e-4);

// Indices i >= first with values[i] strictly above both neighbours and a
// topographic prominence of at least min_prominence.
std::vector<std::size_t> find_peaks(std::span<const double> values, double min_prominence,
                                    std::size_t first = 1);

// Local maxima of a sweep curve (failed points are skipped), prominence
// relative to the largest peak displacement.
std::vector<SpectralPeak> sweep_peaks(const SweepResult& sweep, double prominence = 1e-4);

// Nearest-candidate labelling against reference frequencies f_i:
// fundamental(i) ~ f_i, superharmonic(i,k) ~ k f_i (k = 2..4),
// subharmonic(i,k) ~ f_i / k (k = 2, 3), drive_harmonic(k) ~ k f_drive
// (k = 1..8, skipped when drive_hz <= 0). A candidate matches when
// |f - target| / target <= rel_tol; the smallest relative distance wins, then
// the lower k, then the lower i.
PeakLabel classify_frequency(double frequency_hz, std::span<const double> reference_hz,
                             double drive_hz, double rel_tol);

std::vector<SpectralPeak> classify_peaks(std::span<const SpectralPeak> peaks,
                                         std::span<const double> reference_hz, double drive_hz,
                                         double rel_tol);
std::vector<SpectralPeak> classify_peaks(const SpectrumResult& spectrum,
                                         std::span<const double> reference_hz, double drive_hz,
                                         double rel_tol);

// f_hz,amplitude_m,label (label empty except on detected peaks)
void write_csv(std::ostream& os, const SpectrumResult& spectrum);

const char* to_string(Window window) noexcept;

} // namespace vibrobeam
