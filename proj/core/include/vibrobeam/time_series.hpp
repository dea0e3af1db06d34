#pragma once

#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/dynamics.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace vibrobeam {

struct SolverStats {
    long steps = 0;
    long rejected_steps = 0;
    long newton_failures = 0;
    long jacobian_updates = 0;
    long factorizations = 0;
    long rhs_evaluations = 0;
};

// Integrator output sampled on a uniform grid. Row k of `w` / `w_dot` is the
// relative state at time[k].
struct TimeSeries {
    std::vector<double> time;
    Eigen::MatrixXd w;
    Eigen::MatrixXd w_dot;
    std::vector<double> base_displacement; // d(t_k)
    std::vector<double> tip_displacement;  // absolute: w_tip + d(t_k)
    std::vector<double> contact_force;
    std::vector<DofInfo> layout;
    Eigen::Index tip_index = 0;
    State final_state; // state at the end of the span, off-grid in general
    SolverStats stats;

    std::size_t size() const noexcept { return time.size(); }
    bool empty() const noexcept { return time.empty(); }

    // Absolute displacement of DOF `dof` at sample k (rotations are not shifted).
    double absolute(std::size_t k, Eigen::Index dof) const;
};

// t0, t0+dt, ... up to tf. A span shorter than dt yields {t0, tf}.
std::vector<double> output_grid(double t0, double tf, double dt_out);

// Allocates the sample arrays for a given grid and model.
TimeSeries make_series(const AssembledModel& model, std::vector<double> grid);

// Fills row k from a relative state; computes the derived channels.
void record_sample(TimeSeries& series, const BeamDynamics& dyn, std::size_t k,
                   const Eigen::VectorXd& w, const Eigen::VectorXd& w_dot);

struct DisplacementPeak {
    std::vector<double> per_dof; // one entry per translational DOF
    double global = 0.0;
    int argmax_node = 0;
    double argmax_time = 0.0;
};

// Peak |u| over samples for every translational DOF, in absolute coordinates.
DisplacementPeak max_displacement(const TimeSeries& series);

// CSV with header t,u_1,theta_1,...,u_n,theta_n,u_tip_abs,f_contact
// (u_i/theta_i are relative coordinates), 17 significant digits.
void write_csv(std::ostream& os, const TimeSeries& series);

struct EnergyBalance {
    std::vector<double> stored;      // E(t_k)
    std::vector<double> base_work;   // cumulative work of -M r d''
    std::vector<double> dissipated;  // cumulative Rayleigh + dashpot dissipation
    std::vector<double> residual;    // E(t_k) - E(t_0) - work + dissipated
    double peak_energy = 0.0;
    double max_residual = 0.0;

    double relative_residual() const noexcept {
        return peak_energy > 0.0 ? max_residual / peak_energy : max_residual;
    }
};

// Trapezoid-rule power integrals on the sampled trajectory.
EnergyBalance energy_balance(const BeamDynamics& dyn, const TimeSeries& series);

} // namespace vibrobeam
