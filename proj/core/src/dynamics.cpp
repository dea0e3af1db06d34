#include "vibrobeam/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace vibrobeam {

void RayleighDamping::validate() const {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw std::invalid_argument("Rayleigh coefficients must be non-negative and finite");
    }
}

State State::at_rest(Eigen::Index dofs, double t0) {
    return State{t0, Eigen::VectorXd::Zero(dofs), Eigen::VectorXd::Zero(dofs)};
}

BeamDynamics::BeamDynamics(const AssembledModel& model, UnilateralSpring spring,
                           BaseExcitation excitation, RayleighDamping damping)
    : model_(&model), spring_(spring), excitation_(excitation), damping_(damping) {
    spring_.validate();
    excitation_.validate();
    damping_.validate();
    if (damping_.active()) {
        c_ = damping_.alpha * model.mass() + damping_.beta * model.stiffness();
        c_band_ = model.mass_band();
        c_band_.assign_sum(damping_.alpha, model.mass_band(), damping_.beta, model.stiffness_band());
    }
}

double BeamDynamics::contact_force(ConstRef w, ConstRef w_dot) const noexcept {
    const Eigen::Index tip = model_->tip_index();
    return vibrobeam::contact_force(spring_, w[tip], w_dot[tip]);
}

ContactTangent BeamDynamics::contact_tangent(ConstRef w, ConstRef w_dot) const noexcept {
    const Eigen::Index tip = model_->tip_index();
    return vibrobeam::contact_tangent(spring_, w[tip], w_dot[tip]);
}

void BeamDynamics::internal_force(double, ConstRef w, ConstRef w_dot, Ref out) const {
    out.setZero();
    model_->stiffness_band().multiply_add(w, out);
    if (damping_.active()) {
        c_band_.multiply_add(w_dot, out);
    }
    out[model_->tip_index()] -= contact_force(w, w_dot);
}

void BeamDynamics::acceleration(double t, ConstRef w, ConstRef w_dot, Ref out) const {
    internal_force(t, w, w_dot, out);
    out = -out;
    model_->mass_factor().solve_in_place(out);
    // M^{-1}(-M r d'') = -r d''
    out -= base_motion(excitation_, t).acceleration * model_->base_influence();
}

Eigen::VectorXd rhs(const AssembledModel& model, const UnilateralSpring& spring,
                    const BaseExcitation& exc, double t, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& w_dot) {
    const BeamDynamics dyn(model, spring, exc);
    Eigen::VectorXd out(model.dof_count());
    dyn.acceleration(t, w, w_dot, out);
    return out;
}

EnergyTerms energy(const BeamDynamics& dyn, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& w_dot) {
    const AssembledModel& m = dyn.model();
    EnergyTerms e;
    e.kinetic = 0.5 * w_dot.dot(m.mass() * w_dot);
    e.strain = 0.5 * w.dot(m.stiffness() * w);
    e.contact = contact_potential(dyn.spring(), w[m.tip_index()]);
    return e;
}

} // namespace vibrobeam
