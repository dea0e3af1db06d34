#pragma once

// Closed-form response of an undamped linear beam (spring mode none or
// bilateral with zero gap and prestress) by modal superposition.

#include "vibrobeam/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace vibrobeam::testing {

class LinearModalOracle {
public:
    LinearModalOracle(const AssembledModel& model, const UnilateralSpring& spring,
                      const BaseExcitation& exc, const State& init)
        : exc_(exc) {
        if (spring.mode == SpringMode::unilateral || spring.gap != 0.0 || spring.prestress != 0.0 ||
            spring.damping != 0.0) {
            throw std::invalid_argument("oracle needs an undamped linear spring through the origin");
        }
        Eigen::MatrixXd k = model.stiffness();
        if (spring.mode == SpringMode::bilateral) {
            k(model.tip_index(), model.tip_index()) += spring.stiffness;
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, model.mass());
        phi_ = es.eigenvectors();
        omega_ = es.eigenvalues().cwiseSqrt();
        gamma_ = phi_.transpose() * model.mass() * model.base_influence();
        q0_ = phi_.transpose() * model.mass() * init.w;
        v0_ = phi_.transpose() * model.mass() * init.w_dot;
        t0_ = init.t;
    }

    // Relative displacement w(t).
    Eigen::VectorXd displacement(double t) const {
        const double big = exc_.omega;
        const double a = exc_.amplitude;
        Eigen::VectorXd q(omega_.size());
        for (Eigen::Index i = 0; i < q.size(); ++i) {
            const double w = omega_[i];
            const double s = t - t0_;
            // Forced part with zero state at t0, plus the free response.
            const double den = w * w - big * big;
            const double forced =
                -gamma_[i] * a / den *
                (std::sin(big * t) - std::sin(big * t0_) * std::cos(w * s) -
                 big / w * std::cos(big * t0_) * std::sin(w * s));
            q[i] = forced + q0_[i] * std::cos(w * s) + v0_[i] / w * std::sin(w * s);
        }
        return phi_ * q;
    }

    const Eigen::VectorXd& angular_frequencies() const noexcept { return omega_; }
    const Eigen::MatrixXd& shapes() const noexcept { return phi_; }

private:
    BaseExcitation exc_;
    Eigen::MatrixXd phi_;
    Eigen::VectorXd omega_;
    Eigen::VectorXd gamma_;
    Eigen::VectorXd q0_;
    Eigen::VectorXd v0_;
    double t0_ = 0.0;
};

} // namespace vibrobeam::testing
