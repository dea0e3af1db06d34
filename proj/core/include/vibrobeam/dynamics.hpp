#pragma once

#include "vibrobeam/beam_fem.hpp"
#include "vibrobeam/loading.hpp"

#include <Eigen/Dense>

namespace vibrobeam {

// Proportional damping C = alpha*M + beta*K. Zero by default (undamped beam).
struct RayleighDamping {
    double alpha = 0.0;
    double beta = 0.0;

    bool active() const noexcept { return alpha != 0.0 || beta != 0.0; }
    void validate() const;

    friend bool operator==(const RayleighDamping&, const RayleighDamping&) = default;
};

struct State {
    double t = 0.0;
    Eigen::VectorXd w;     // relative displacement
    Eigen::VectorXd w_dot; // relative velocity

    static State at_rest(Eigen::Index dofs, double t0 = 0.0);
};

// Forced beam in coordinates relative to the moving base:
//
//   M w'' + C w' + K w = -M r d''(t) + f_c(w_tip, w_tip') e_tip
//
// Holds a reference to the model; the model must outlive this object.
class BeamDynamics {
public:
    BeamDynamics(const AssembledModel& model, UnilateralSpring spring, BaseExcitation excitation,
                 RayleighDamping damping = {});

    const AssembledModel& model() const noexcept { return *model_; }
    const UnilateralSpring& spring() const noexcept { return spring_; }
    const BaseExcitation& excitation() const noexcept { return excitation_; }
    const RayleighDamping& damping() const noexcept { return damping_; }
    const Eigen::MatrixXd& damping_matrix() const noexcept { return c_; }
    Eigen::Index dof_count() const noexcept { return model_->dof_count(); }
    Eigen::Index tip_index() const noexcept { return model_->tip_index(); }

    using ConstRef = Eigen::Ref<const Eigen::VectorXd>;
    using Ref = Eigen::Ref<Eigen::VectorXd>;

    const SymmetricBand& damping_band() const noexcept { return c_band_; }

    double contact_force(ConstRef w, ConstRef w_dot) const noexcept;
    ContactTangent contact_tangent(ConstRef w, ConstRef w_dot) const noexcept;

    // out = w''; `out` must not alias w or w_dot.
    void acceleration(double t, ConstRef w, ConstRef w_dot, Ref out) const;

    // out = K w + C w' - f_c e_tip.
    void internal_force(double t, ConstRef w, ConstRef w_dot, Ref out) const;

private:
    const AssembledModel* model_;
    UnilateralSpring spring_;
    BaseExcitation excitation_;
    RayleighDamping damping_;
    Eigen::MatrixXd c_;
    SymmetricBand c_band_;
};

Eigen::VectorXd rhs(const AssembledModel& model, const UnilateralSpring& spring,
                    const BaseExcitation& exc, double t, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& w_dot);

struct EnergyTerms {
    double kinetic = 0.0;
    double strain = 0.0;
    double contact = 0.0;

    double total() const noexcept { return kinetic + strain + contact; }
};

EnergyTerms energy(const BeamDynamics& dyn, const Eigen::VectorXd& w, const Eigen::VectorXd& w_dot);

} // namespace vibrobeam
