#include "vibrobeam/time_series.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace vibrobeam {

double TimeSeries::absolute(std::size_t k, Eigen::Index dof) const {
    const double shift = layout[static_cast<std::size_t>(dof)].kind == DofKind::translation
                             ? base_displacement[k]
                             : 0.0;
    return w(static_cast<Eigen::Index>(k), dof) + shift;
}

std::vector<double> output_grid(double t0, double tf, double dt_out) {
    if (!(tf > t0)) {
        throw std::invalid_argument("time span must satisfy tf > t0");
    }
    if (!(dt_out > 0.0)) {
        throw std::invalid_argument("output interval must be positive");
    }
    const double span = tf - t0;
    // Tolerate round-off when the span is an integer number of intervals.
    const auto count = static_cast<std::size_t>(std::floor(span / dt_out * (1.0 + 1e-12) + 1e-9));
    std::vector<double> grid;
    grid.reserve(count + 2);
    for (std::size_t k = 0; k <= count; ++k) {
        grid.push_back(k == count && std::abs(t0 + k * dt_out - tf) <= 1e-9 * dt_out
                           ? tf
                           : t0 + static_cast<double>(k) * dt_out);
    }
    if (grid.size() == 1) {
        grid.push_back(tf);
    }
    return grid;
}

TimeSeries make_series(const AssembledModel& model, std::vector<double> grid) {
    TimeSeries s;
    const auto n = static_cast<Eigen::Index>(grid.size());
    s.time = std::move(grid);
    s.w = Eigen::MatrixXd::Zero(n, model.dof_count());
    s.w_dot = Eigen::MatrixXd::Zero(n, model.dof_count());
    s.base_displacement.assign(s.time.size(), 0.0);
    s.tip_displacement.assign(s.time.size(), 0.0);
    s.contact_force.assign(s.time.size(), 0.0);
    s.layout = model.layout();
    s.tip_index = model.tip_index();
    return s;
}

void record_sample(TimeSeries& series, const BeamDynamics& dyn, std::size_t k,
                   const Eigen::VectorXd& w, const Eigen::VectorXd& w_dot) {
    const auto row = static_cast<Eigen::Index>(k);
    series.w.row(row) = w.transpose();
    series.w_dot.row(row) = w_dot.transpose();
    const double d = base_motion(dyn.excitation(), series.time[k]).displacement;
    series.base_displacement[k] = d;
    series.tip_displacement[k] = w[series.tip_index] + d;
    series.contact_force[k] = dyn.contact_force(w, w_dot);
}

DisplacementPeak max_displacement(const TimeSeries& series) {
    if (series.empty()) {
        throw std::invalid_argument("max_displacement: empty series");
    }
    DisplacementPeak peak;
    bool first = true;
    for (std::size_t j = 0; j < series.layout.size(); ++j) {
        if (series.layout[j].kind != DofKind::translation) {
            continue;
        }
        const auto dof = static_cast<Eigen::Index>(j);
        double dof_max = 0.0;
        for (std::size_t k = 0; k < series.size(); ++k) {
            const double u = std::abs(series.absolute(k, dof));
            if (u > dof_max) {
                dof_max = u;
            }
            if (first || u > peak.global) {
                peak.global = u;
                peak.argmax_node = series.layout[j].node;
                peak.argmax_time = series.time[k];
                first = false;
            }
        }
        peak.per_dof.push_back(dof_max);
    }
    if (first) {
        throw std::invalid_argument("max_displacement: series has no translational DOF");
    }
    return peak;
}

void write_csv(std::ostream& os, const TimeSeries& series) {
    os << 't';
    for (const DofInfo& dof : series.layout) {
        fmt::print(os, ",{}_{}", dof.kind == DofKind::translation ? "u" : "theta", dof.node);
    }
    os << ",u_tip_abs,f_contact\n";
    fmt::memory_buffer line;
    for (std::size_t k = 0; k < series.size(); ++k) {
        line.clear();
        const auto row = static_cast<Eigen::Index>(k);
        fmt::format_to(std::back_inserter(line), "{:.17g}", series.time[k]);
        for (Eigen::Index j = 0; j < series.w.cols(); ++j) {
            fmt::format_to(std::back_inserter(line), ",{:.17g}", series.w(row, j));
        }
        fmt::format_to(std::back_inserter(line), ",{:.17g},{:.17g}\n", series.tip_displacement[k],
                       series.contact_force[k]);
        os.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
}

EnergyBalance energy_balance(const BeamDynamics& dyn, const TimeSeries& series) {
    if (series.empty()) {
        throw std::invalid_argument("energy_balance: empty series");
    }
    const AssembledModel& model = dyn.model();
    const Eigen::Index tip = model.tip_index();
    const std::size_t n = series.size();

    EnergyBalance out;
    out.stored.resize(n);
    out.base_work.assign(n, 0.0);
    out.dissipated.assign(n, 0.0);
    out.residual.assign(n, 0.0);

    std::vector<double> base_power(n);
    std::vector<double> loss_power(n);
    Eigen::VectorXd mr = model.mass() * model.base_influence();
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::VectorXd w = series.w.row(static_cast<Eigen::Index>(k)).transpose();
        const Eigen::VectorXd v = series.w_dot.row(static_cast<Eigen::Index>(k)).transpose();
        out.stored[k] = energy(dyn, w, v).total();
        const double acc = base_motion(dyn.excitation(), series.time[k]).acceleration;
        base_power[k] = -acc * mr.dot(v);
        double loss = 0.0;
        if (dyn.damping().active()) {
            loss += v.dot(dyn.damping_matrix() * v);
        }
        const double f_total = contact_force(dyn.spring(), w[tip], v[tip]);
        const double f_elastic = elastic_contact_force(dyn.spring(), w[tip]);
        loss -= (f_total - f_elastic) * v[tip];
        loss_power[k] = loss;
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double h = series.time[k] - series.time[k - 1];
        out.base_work[k] = out.base_work[k - 1] + 0.5 * h * (base_power[k] + base_power[k - 1]);
        out.dissipated[k] = out.dissipated[k - 1] + 0.5 * h * (loss_power[k] + loss_power[k - 1]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        out.residual[k] = out.stored[k] - out.stored[0] - out.base_work[k] + out.dissipated[k];
        out.peak_energy = std::max(out.peak_energy, out.stored[k]);
        out.max_residual = std::max(out.max_residual, std::abs(out.residual[k]));
    }
    return out;
}

} // namespace vibrobeam
