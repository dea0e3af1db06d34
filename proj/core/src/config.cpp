#include "vibrobeam/config.hpp"

#include "vibrobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

namespace vibrobeam {

ConfigError::ConfigError(const std::string& key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("{} (line {}): {}", key, line, message)
                                  : fmt::format("{}: {}", key, message)),
      key_(key),
      line_(line) {}

namespace {

enum class Bound { any, positive, non_negative };

struct KeySpec {
    std::string section;
    std::string name;
    std::string doc;
    // Parses and stores; throws std::invalid_argument with a bare message.
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;

    std::string qualified() const { return section + "." + name; }
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_real(std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument(fmt::format("expected a number, got '{}'", text));
    }
    return value;
}

long to_integer(std::string_view text) {
    long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument(fmt::format("expected an integer, got '{}'", text));
    }
    return value;
}

void check_bound(double v, Bound bound) {
    if (std::isnan(v)) {
        throw std::invalid_argument("must not be NaN");
    }
    if (bound == Bound::positive && !(v > 0.0)) {
        throw std::invalid_argument("must be positive");
    }
    if (bound == Bound::non_negative && !(v >= 0.0)) {
        throw std::invalid_argument("must be non-negative");
    }
}

// Shortest text that parses back to the same double.
std::string fmt_real(double v) { return fmt::format("{}", v); }

template <class Access>
KeySpec real_key(std::string section, std::string name, Bound bound, std::string doc,
                 Access access) {
    return {std::move(section), std::move(name), std::move(doc),
            [=](RunConfig& c, std::string_view v) {
                const double x = to_real(v);
                check_bound(x, bound);
                access(c) = x;
            },
            [=](const RunConfig& c) { return fmt_real(access(c)); }};
}

template <class Access>
KeySpec int_key(std::string section, std::string name, long lo, long hi, std::string doc,
                Access access) {
    return {std::move(section), std::move(name), std::move(doc),
            [=](RunConfig& c, std::string_view v) {
                const long x = to_integer(v);
                if (x < lo || x > hi) {
                    throw std::invalid_argument(fmt::format("must be in {}..{}", lo, hi));
                }
                access(c) = static_cast<std::remove_cvref_t<decltype(access(c))>>(x);
            },
            [=](const RunConfig& c) {
                return fmt::format("{}", access(c));
            }};
}

template <class Enum, class Access>
KeySpec enum_key(std::string section, std::string name,
                 std::vector<std::pair<std::string, Enum>> choices, std::string doc,
                 Access access) {
    return {std::move(section), std::move(name), std::move(doc),
            [=](RunConfig& c, std::string_view v) {
                for (const auto& [label, value] : choices) {
                    if (v == label) {
                        access(c) = value;
                        return;
                    }
                }
                std::string options;
                for (const auto& choice : choices) {
                    options += (options.empty() ? "" : ", ") + choice.first;
                }
                throw std::invalid_argument(
                    fmt::format("unknown value '{}' (expected one of: {})", v, options));
            },
            [=](const RunConfig& c) {
                for (const auto& [label, value] : choices) {
                    if (access(c) == value) {
                        return label;
                    }
                }
                return std::string("?");
            }};
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = [] {
        std::vector<KeySpec> t;
        // [beam]
        t.push_back(real_key("beam", "youngs_modulus", Bound::positive, "Young's modulus E [Pa]",
                             [](auto& c) -> auto& { return c.beam.youngs_modulus; }));
        t.push_back(real_key("beam", "density", Bound::positive, "density rho [kg/m^3]",
                             [](auto& c) -> auto& { return c.beam.density; }));
        t.push_back(real_key("beam", "length", Bound::positive,
                             "length L [m]; default puts bilateral f1 at 196.357 Hz",
                             [](auto& c) -> auto& { return c.beam.length; }));
        t.push_back(real_key("beam", "width", Bound::positive, "section width b [m]",
                             [](auto& c) -> auto& { return c.beam.width; }));
        t.push_back(real_key("beam", "height", Bound::positive, "section height h [m]",
                             [](auto& c) -> auto& { return c.beam.height; }));
        t.push_back(int_key("beam", "n_elements", 1, 2000, "number of Hermite elements",
                            [](auto& c) -> auto& { return c.beam.n_elements; }));
        t.push_back(real_key("beam", "rayleigh_alpha", Bound::non_negative,
                             "mass-proportional damping alpha [1/s]",
                             [](auto& c) -> auto& { return c.damping.alpha; }));
        t.push_back(real_key("beam", "rayleigh_beta", Bound::non_negative,
                             "stiffness-proportional damping beta [s]",
                             [](auto& c) -> auto& { return c.damping.beta; }));
        // [spring]
        t.push_back(enum_key<SpringMode>(
            "spring", "mode",
            {{"unilateral", SpringMode::unilateral},
             {"bilateral", SpringMode::bilateral},
             {"none", SpringMode::none}},
            "unilateral | bilateral | none",
            [](auto& c) -> auto& { return c.spring.mode; }));
        t.push_back(real_key("spring", "k_r", Bound::non_negative, "spring stiffness [N/m]",
                             [](auto& c) -> auto& { return c.spring.stiffness; }));
        t.push_back(real_key("spring", "gap", Bound::any, "backlash before contact [m]",
                             [](auto& c) -> auto& { return c.spring.gap; }));
        t.push_back(real_key("spring", "prestress", Bound::any, "pre-compression offset [m]",
                             [](auto& c) -> auto& { return c.spring.prestress; }));
        t.push_back(real_key("spring", "dashpot", Bound::non_negative,
                             "contact dashpot c [N s/m]",
                             [](auto& c) -> auto& { return c.spring.damping; }));
        // [excitation]
        t.push_back(real_key("excitation", "amplitude", Bound::non_negative,
                             "base acceleration amplitude a [m/s^2]",
                             [](auto& c) -> auto& { return c.amplitude; }));
        t.push_back(real_key("excitation", "frequency", Bound::positive,
                             "drive frequency for simulate/spectrum [Hz]",
                             [](auto& c) -> auto& { return c.frequency_hz; }));
        t.push_back(real_key("excitation", "duration", Bound::positive,
                             "simulate/spectrum horizon [s]",
                             [](auto& c) -> auto& { return c.duration; }));
        // [solver]
        t.push_back(enum_key<Integrator>(
            "solver", "integrator", {{"bdf", Integrator::bdf}, {"newmark", Integrator::newmark}},
            "bdf (adaptive) | newmark (fixed step, simulate/spectrum only)",
            [](auto& c) -> auto& { return c.integrator; }));
        t.push_back(real_key("solver", "rel_tol", Bound::positive, "BDF relative tolerance",
                             [](auto& c) -> auto& { return c.solver.rel_tol; }));
        t.push_back(real_key("solver", "abs_tol", Bound::positive, "BDF absolute tolerance",
                             [](auto& c) -> auto& { return c.solver.abs_tol; }));
        t.push_back(int_key("solver", "max_order", 1, 5, "maximum BDF order",
                            [](auto& c) -> auto& { return c.solver.max_order; }));
        t.push_back(real_key("solver", "initial_step", Bound::non_negative,
                             "first step [s], 0 = automatic",
                             [](auto& c) -> auto& { return c.solver.initial_step; }));
        t.push_back(real_key("solver", "max_step", Bound::positive, "step ceiling [s]",
                             [](auto& c) -> auto& { return c.solver.max_step; }));
        t.push_back(real_key("solver", "dt_out", Bound::non_negative,
                             "output interval [s], 0 = period / samples_per_period",
                             [](auto& c) -> auto& { return c.solver.dt_out; }));
        t.push_back(int_key("solver", "samples_per_period", 2, 1 << 20,
                            "output samples per drive period when dt_out = 0",
                            [](auto& c) -> auto& { return c.samples_per_period; }));
        t.push_back(real_key("solver", "newmark_dt", Bound::positive, "Newmark step [s]",
                             [](auto& c) -> auto& { return c.newmark_dt; }));
        // [sweep]
        t.push_back(real_key("sweep", "f_start", Bound::positive, "first frequency [Hz]",
                             [](auto& c) -> auto& { return c.sweep.f_start; }));
        t.push_back(real_key("sweep", "f_end", Bound::positive, "last frequency [Hz]",
                             [](auto& c) -> auto& { return c.sweep.f_end; }));
        t.push_back(int_key("sweep", "n_points", 2, 1000000, "grid points, both ends included",
                            [](auto& c) -> auto& { return c.sweep.n_points; }));
        t.push_back(real_key("sweep", "tf", Bound::positive, "integration horizon per point [s]",
                             [](auto& c) -> auto& { return c.sweep.tf; }));
        t.push_back(enum_key<InitialCondition>(
            "sweep", "initial_condition",
            {{"fresh_zero", InitialCondition::fresh_zero},
             {"continuation", InitialCondition::continuation}},
            "fresh_zero | continuation",
            [](auto& c) -> auto& { return c.sweep.initial; }));
        t.push_back(enum_key<ResponseMetric>(
            "sweep", "metric",
            {{"max_all_nodes", ResponseMetric::max_all_nodes},
             {"max_tip", ResponseMetric::max_tip}},
            "max_all_nodes | max_tip",
            [](auto& c) -> auto& { return c.sweep.metric; }));
        // [fft]
        t.push_back(KeySpec{
            "fft", "signal", "tip_abs | tip_rel | contact_force | dof:<index>",
            [](RunConfig& c, std::string_view v) {
                c.fft.signal = SignalSelector::parse(std::string(v));
            },
            [](const RunConfig& c) { return c.fft.signal.str(); }});
        t.push_back(real_key("fft", "transient_fraction", Bound::non_negative,
                             "leading fraction of the record discarded",
                             [](auto& c) -> auto& { return c.fft.transient_fraction; }));
        t.push_back(enum_key<Window>("fft", "window", {{"hann", Window::hann}, {"rect", Window::rect}},
                                     "hann | rect",
                                     [](auto& c) -> auto& { return c.fft.window; }));
        t.push_back(real_key("fft", "prominence", Bound::non_negative,
                             "peak prominence relative to the largest bin",
                             [](auto& c) -> auto& { return c.fft.prominence; }));
        t.push_back(real_key("fft", "rel_tol", Bound::positive,
                             "relative tolerance for peak labels, in (0, 0.5)",
                             [](auto& c) -> auto& { return c.fft.rel_tol; }));
        t.push_back(int_key("fft", "reference_modes", 1, 50,
                            "bilateral modes used as references (also the eigen table size)",
                            [](auto& c) -> auto& { return c.fft.reference_modes; }));
        return t;
    }();
    return table;
}

const std::vector<std::string>& section_order() {
    static const std::vector<std::string> order = {"beam",   "spring", "excitation",
                                                   "solver", "sweep",  "fft"};
    return order;
}

} // namespace

void RunConfig::validate() const {
    auto wrap = [](const std::string& key, auto&& check) {
        try {
            check();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, 0, e.what());
        }
    };
    wrap("beam", [&] { beam.validate(); });
    wrap("beam.rayleigh", [&] { damping.validate(); });
    wrap("spring", [&] { spring.validate(); });
    wrap("solver", [&] {
        SolverOptions probe = solver;
        if (!(probe.dt_out > 0.0)) {
            probe.dt_out = 1.0;
        }
        probe.validate();
    });
    wrap("sweep", [&] { sweep.validate(); });
    if (!(fft.transient_fraction < 1.0)) {
        throw ConfigError("fft.transient_fraction", 0, "must be below 1");
    }
    if (!(fft.rel_tol < 0.5)) {
        throw ConfigError("fft.rel_tol", 0, "must lie in (0, 0.5)");
    }
}

BaseExcitation RunConfig::excitation() const { return BaseExcitation::from_hz(amplitude, frequency_hz); }

SolverOptions RunConfig::solver_for(double omega) const {
    SolverOptions out = solver;
    if (!(out.dt_out > 0.0)) {
        out.dt_out = 2.0 * std::numbers::pi / omega / samples_per_period;
    }
    return out;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, const KeySpec*, std::less<>> by_name;
    for (const KeySpec& spec : key_table()) {
        by_name.emplace(spec.qualified(), &spec);
    }
    const auto& sections = section_order();

    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(std::string(line), line_no, "malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
                throw ConfigError(section, line_no, "unknown section");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), line_no, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(key, line_no, "key outside of any section");
        }
        const std::string qualified = section + "." + key;
        const auto it = by_name.find(qualified);
        if (it == by_name.end()) {
            throw ConfigError(qualified, line_no, "unknown key");
        }
        if (!seen.insert(qualified).second) {
            throw ConfigError(qualified, line_no, "duplicate key");
        }
        try {
            it->second->set(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(qualified, line_no, e.what());
        }
    }
    cfg.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg, bool documented) {
    std::string out;
    for (const std::string& section : section_order()) {
        if (!out.empty()) {
            out += '\n';
        }
        out += fmt::format("[{}]\n", section);
        for (const KeySpec& spec : key_table()) {
            if (spec.section != section) {
                continue;
            }
            if (documented) {
                out += fmt::format("# {}\n", spec.doc);
            }
            out += fmt::format("{} = {}\n", spec.name, spec.get(cfg));
        }
    }
    return out;
}

} // namespace vibrobeam
