#pragma once

#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/loading.hpp"

#include <Eigen/Dense>

#include <vector>

namespace vibrobeam {

struct ModalResult {
    std::vector<double> frequencies_hz;
    std::vector<double> angular;
    Eigen::MatrixXd shapes; // mass-normalised, one mode per column
    UnilateralSpring spring;
};

// Lowest `count` pairs of (K [+ k_r e e^T], M). Only the `none` and
// `bilateral` spring modes have a linear eigenproblem; `unilateral` throws
// std::invalid_argument.
ModalResult fem_eigenfrequencies(const AssembledModel& model, const UnilateralSpring& spring,
                                 int count);

// Clamped beam whose free end rests on a bilateral spring, x = beta*L and
// ratio = k_r L^3 / (EI). With u(0) = u'(0) = 0, u''(L) = 0 and the restoring
// shear condition EI u'''(L) = k_r u(L), the boundary determinant reduces to
//
//   (1 + cos x cosh x) - ratio/x^3 (cos x sinh x - sin x cosh x) = 0,
//
// evaluated here divided by cosh x:
//
//   sech x + cos x - ratio/x^3 (cos x tanh x - sin x).
// ratio = 0 gives the cantilever, ratio -> inf the
// clamped-pinned beam (tan x = tanh x).
double characteristic_function(double x, double stiffness_ratio);

// Roots x_i of characteristic_function, bracketed on a 0.05 grid and refined
// by bisection.
std::vector<double> characteristic_roots(double stiffness_ratio, int count);

// Natural frequencies (Hz) of the continuous beam with a bilateral tip spring.
std::vector<double> analytic_frequencies(const BeamProperties& props, double k_r, int count);

// Free-vibration frequency of a one-DOF oscillator switching between two
// stiffnesses at the contact point: 2 f_open f_closed / (f_open + f_closed).
double bilinear_frequency(double f_open, double f_closed);

// Beam length for which the first bilateral frequency equals target_hz, all
// other properties held fixed.
double calibrate_length(const BeamProperties& props, double k_r, double target_hz);

} // namespace vibrobeam
