#include "vibrobeam/report.hpp"

#include "vibrobeam/modal.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace vibrobeam {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

} // namespace

void write_svg(std::ostream& os, const LinePlot& plot) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = x_min;
    double y_max = -x_min;
    auto y_of = [&](double y) { return plot.log_y ? std::log10(y) : y; };
    for (const PlotSeries& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (plot.log_y && !(s.y[i] > 0.0))) {
                continue;
            }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, y_of(s.y[i]));
            y_max = std::max(y_max, y_of(s.y[i]));
        }
    }
    if (!(x_max > x_min)) {
        x_min = 0.0;
        x_max = 1.0;
    }
    if (!(y_max > y_min)) {
        y_min = std::isfinite(y_min) ? y_min - 1.0 : 0.0;
        y_max = y_min + 2.0;
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };

    os << fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        kWidth, kHeight);
    os << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
    os << fmt::format("<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                      kWidth / 2, escape(plot.title));
    os << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                      "stroke=\"black\"/>\n",
                      kLeft, kTop, pw, ph);

    // Ticks: 6 linear divisions on x; decades (log) or 5 divisions on y.
    for (int i = 0; i <= 6; ++i) {
        const double x = x_min + (x_max - x_min) * i / 6.0;
        os << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.4g}</text>\n",
                          px(x), kTop + ph + 18, x);
    }
    if (plot.log_y) {
        for (int e = static_cast<int>(std::ceil(y_min)); e <= static_cast<int>(std::floor(y_max));
             ++e) {
            os << fmt::format("<line x1=\"{:.2f}\" x2=\"{:.2f}\" y1=\"{:.2f}\" y2=\"{:.2f}\" "
                              "stroke=\"#dddddd\"/>\n",
                              kLeft, kLeft + pw, py(e), py(e));
            os << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">1e{}</text>\n",
                              kLeft - 6, py(e) + 4, e);
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double y = y_min + (y_max - y_min) * i / 5.0;
            os << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n",
                              kLeft - 6, py(y) + 4, y);
        }
    }
    os << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                      kLeft + pw / 2, kHeight - 15, escape(plot.x_label));
    os << fmt::format("<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                      "transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
                      kTop + ph / 2, escape(plot.y_label));

    for (double g : plot.x_gridlines) {
        if (g < x_min || g > x_max) {
            continue;
        }
        os << fmt::format("<line x1=\"{0:.2f}\" x2=\"{0:.2f}\" y1=\"{1:.2f}\" y2=\"{2:.2f}\" "
                          "stroke=\"#888888\" stroke-dasharray=\"4 4\"/>\n",
                          px(g), kTop, kTop + ph);
    }

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const PlotSeries& s = plot.series[si];
        const char* color = kColors[si % std::size(kColors)];
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (plot.log_y && !(s.y[i] > 0.0))) {
                continue;
            }
            points += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(y_of(s.y[i])));
        }
        if (!points.empty()) {
            points.pop_back();
        }
        os << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" "
                          "points=\"{}\"/>\n",
                          color, points);
        os << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"{}\">{}</text>\n",
                          kLeft + pw - 150, kTop + 18 + 16 * static_cast<double>(si), color,
                          escape(s.name));
    }
    os << "</svg>\n";
}

std::vector<EigenRow> eigen_table(const BeamProperties& beam, const UnilateralSpring& spring,
                                  int modes) {
    const AssembledModel model = assemble(beam);
    std::vector<EigenRow> rows;
    for (SpringMode mode : {SpringMode::none, SpringMode::bilateral}) {
        UnilateralSpring linear = spring;
        linear.mode = mode;
        const double k_r = mode == SpringMode::bilateral ? spring.stiffness : 0.0;
        const int count = std::min<int>(modes, static_cast<int>(model.dof_count()));
        const ModalResult fem = fem_eigenfrequencies(model, linear, count);
        const std::vector<double> exact = analytic_frequencies(beam, k_r, count);
        for (int i = 0; i < count; ++i) {
            rows.push_back({i + 1, mode, fem.frequencies_hz[static_cast<std::size_t>(i)],
                            exact[static_cast<std::size_t>(i)]});
        }
    }
    return rows;
}

void print_eigen_table(std::ostream& os, const std::vector<EigenRow>& rows) {
    os << fmt::format("{:>4}  {:<10} {:>16} {:>16} {:>12}\n", "mode", "spring", "FEM [Hz]",
                      "analytic [Hz]", "rel. gap");
    for (const EigenRow& r : rows) {
        os << fmt::format("{:>4}  {:<10} {:>16.8f} {:>16.8f} {:>12.3e}\n", r.mode,
                          to_string(r.spring), r.fem_hz, r.analytic_hz, r.relative_gap());
    }
}

void write_csv(std::ostream& os, const std::vector<EigenRow>& rows) {
    os << "mode,spring,fem_hz,analytic_hz,rel_gap\n";
    for (const EigenRow& r : rows) {
        os << fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", r.mode, to_string(r.spring), r.fem_hz,
                          r.analytic_hz, r.relative_gap());
    }
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

} // namespace vibrobeam
