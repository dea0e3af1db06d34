#include "vibrobeam/modal.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vibrobeam {

ModalResult fem_eigenfrequencies(const AssembledModel& model, const UnilateralSpring& spring,
                                 int count) {
    if (spring.mode == SpringMode::unilateral) {
        throw std::invalid_argument(
            "fem_eigenfrequencies: a unilateral spring has no linear eigenproblem; "
            "use the bilateral or none linearisation");
    }
    spring.validate();
    const Eigen::Index n = model.dof_count();
    if (count < 1 || count > n) {
        throw std::invalid_argument(
            fmt::format("fem_eigenfrequencies: count must be in 1..{}", n));
    }

    Eigen::MatrixXd k = model.stiffness();
    if (spring.mode == SpringMode::bilateral) {
        k(model.tip_index(), model.tip_index()) += spring.stiffness;
    }
    // Cholesky reduction of M followed by symmetric tridiagonal QR.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        k, model.mass(), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("fem_eigenfrequencies: eigen-solver failed");
    }

    ModalResult out;
    out.spring = spring;
    out.shapes = solver.eigenvectors().leftCols(count);
    for (int i = 0; i < count; ++i) {
        const double lambda = std::max(solver.eigenvalues()[i], 0.0);
        out.angular.push_back(std::sqrt(lambda));
        out.frequencies_hz.push_back(out.angular.back() / (2.0 * std::numbers::pi));
        // Deterministic sign: largest component positive.
        Eigen::Index imax = 0;
        out.shapes.col(i).cwiseAbs().maxCoeff(&imax);
        if (out.shapes(imax, i) < 0.0) {
            out.shapes.col(i) = -out.shapes.col(i);
        }
    }
    return out;
}

double characteristic_function(double x, double stiffness_ratio) {
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double value = 1.0 / std::cosh(x) + c;
    if (stiffness_ratio == 0.0) {
        return value;
    }
    return value - stiffness_ratio / (x * x * x) * (c * std::tanh(x) - s);
}

namespace {

constexpr double kGridStep = 0.05;

double bisect(double lo, double hi, double ratio) {
    double f_lo = characteristic_function(lo, ratio);
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
         ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = characteristic_function(mid, ratio);
        if (f_mid == 0.0) {
            return mid;
        }
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<double> characteristic_roots(double stiffness_ratio, int count) {
    if (!(stiffness_ratio >= 0.0) || !std::isfinite(stiffness_ratio)) {
        throw std::invalid_argument("characteristic_roots: stiffness ratio must be non-negative");
    }
    if (count < 1) {
        throw std::invalid_argument("characteristic_roots: count must be positive");
    }
    // Consecutive roots are about pi apart; the n-th lies below (n + 1) pi.
    const double x_max = (count + 4) * std::numbers::pi;
    std::vector<double> roots;
    double a = kGridStep;
    double f_a = characteristic_function(a, stiffness_ratio);
    for (int k = 2; static_cast<int>(roots.size()) < count; ++k) {
        const double b = k * kGridStep;
        if (b > x_max) {
            throw std::runtime_error(fmt::format(
                "characteristic_roots: bracketed only {} of {} roots (last root {})",
                roots.size(), count, roots.empty() ? 0.0 : roots.back()));
        }
        const double f_b = characteristic_function(b, stiffness_ratio);
        if (f_b == 0.0) {
            roots.push_back(b);
        } else if ((f_a < 0.0) != (f_b < 0.0) && f_a != 0.0) {
            roots.push_back(bisect(a, b, stiffness_ratio));
        }
        a = b;
        f_a = f_b;
    }
    return roots;
}

std::vector<double> analytic_frequencies(const BeamProperties& props, double k_r, int count) {
    props.validate();
    if (!(k_r >= 0.0)) {
        throw std::invalid_argument("analytic_frequencies: k_r must be non-negative");
    }
    const double ei = props.bending_stiffness();
    const double l = props.length;
    const double ratio = k_r * l * l * l / ei;
    const double wave = std::sqrt(ei / props.mass_per_length()) / (l * l);
    std::vector<double> out;
    for (double x : characteristic_roots(ratio, count)) {
        out.push_back(x * x * wave / (2.0 * std::numbers::pi));
    }
    return out;
}

double bilinear_frequency(double f_open, double f_closed) {
    if (!(f_open > 0.0) || !(f_closed > 0.0)) {
        throw std::invalid_argument("bilinear_frequency: frequencies must be positive");
    }
    return 2.0 * f_open * f_closed / (f_open + f_closed);
}

double calibrate_length(const BeamProperties& props, double k_r, double target_hz) {
    if (!(target_hz > 0.0)) {
        throw std::invalid_argument("calibrate_length: target must be positive");
    }
    BeamProperties trial = props;
    auto f1 = [&](double length) {
        trial.length = length;
        return analytic_frequencies(trial, k_r, 1).front();
    };
    // f1 decreases with length.
    double lo = props.length;
    double hi = props.length;
    for (int i = 0; i < 200 && f1(lo) < target_hz; ++i) {
        lo *= 0.5;
    }
    for (int i = 0; i < 200 && f1(hi) > target_hz; ++i) {
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
         ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f1(mid) > target_hz) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace vibrobeam
