#pragma once

#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/loading.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vibrobeam {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<PlotSeries> series;
    std::vector<double> x_gridlines; // drawn dashed, e.g. reference frequencies
};

// Single-plot SVG; output depends only on the plot contents.
void write_svg(std::ostream& os, const LinePlot& plot);

struct EigenRow {
    int mode = 0;
    SpringMode spring = SpringMode::none;
    double fem_hz = 0.0;
    double analytic_hz = 0.0;

    double relative_gap() const noexcept { return (fem_hz - analytic_hz) / analytic_hz; }
};

// FEM and analytic frequencies for the `none` and `bilateral` linearisations.
std::vector<EigenRow> eigen_table(const BeamProperties& beam, const UnilateralSpring& spring,
                                  int modes);

void print_eigen_table(std::ostream& os, const std::vector<EigenRow>& rows);
void write_csv(std::ostream& os, const std::vector<EigenRow>& rows);

// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

} // namespace vibrobeam
