#include "vibrobeam/newmark.hpp"

#include "vibrobeam/errors.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <stdexcept>

namespace vibrobeam {

namespace {

constexpr int kMaxNewton = 50;

// Effective stiffness K' + (2/dt) C' + (4/dt^2) M for one contact branch.
class BranchSolver {
public:
    BranchSolver(const BeamDynamics& dyn, double dt) : dyn_(dyn), dt_(dt) {}

    const Eigen::LLT<Eigen::MatrixXd>& factor(const ContactTangent& tangent) {
        for (auto& entry : cache_) {
            if (entry.valid && entry.tangent == tangent) {
                return entry.llt;
            }
        }
        Entry& slot = cache_[next_++ % cache_.size()];
        const AssembledModel& model = dyn_.model();
        Eigen::MatrixXd a = model.stiffness() + (4.0 / (dt_ * dt_)) * model.mass();
        if (dyn_.damping().active()) {
            a += (2.0 / dt_) * dyn_.damping_matrix();
        }
        const Eigen::Index tip = model.tip_index();
        a(tip, tip) += tangent.stiffness + (2.0 / dt_) * tangent.damping;
        slot.llt.compute(a);
        slot.tangent = tangent;
        slot.valid = slot.llt.info() == Eigen::Success;
        if (!slot.valid) {
            throw std::runtime_error("Newmark effective stiffness is not positive definite");
        }
        return slot.llt;
    }

private:
    struct Entry {
        ContactTangent tangent;
        Eigen::LLT<Eigen::MatrixXd> llt;
        bool valid = false;
    };

    const BeamDynamics& dyn_;
    double dt_;
    std::array<Entry, 2> cache_;
    std::size_t next_ = 0;
};

} // namespace

TimeSeries integrate_reference(const BeamDynamics& dyn, double t0, double tf, const State& init,
                               double dt_fixed, double dt_out) {
    if (!(dt_fixed > 0.0) || !std::isfinite(dt_fixed)) {
        throw std::invalid_argument("integrate_reference: dt_fixed must be positive");
    }
    if (!(tf > t0)) {
        throw std::invalid_argument("integrate_reference: tf must exceed t0");
    }
    const Eigen::Index m = dyn.dof_count();
    if (init.w.size() != m || init.w_dot.size() != m) {
        throw std::invalid_argument("integrate_reference: initial state has the wrong size");
    }
    const AssembledModel& model = dyn.model();

    TimeSeries series = make_series(model, output_grid(t0, tf, dt_out > 0.0 ? dt_out : dt_fixed));
    record_sample(series, dyn, 0, init.w, init.w_dot);
    std::size_t next_sample = 1;

    Eigen::VectorXd w = init.w;
    Eigen::VectorXd v = init.w_dot;
    Eigen::VectorXd a(m);
    dyn.acceleration(t0, w, v, a);

    const double span = tf - t0;
    const auto n_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt_fixed - 1e-9)));

    BranchSolver full_step(dyn, dt_fixed);
    Eigen::VectorXd w_pred(m), v_pred(m), w_new(m), v_new(m), a_new(m), residual(m), mean_acc(m),
        sample_w(m), sample_v(m);
    const Eigen::VectorXd mr = model.mass() * model.base_influence();

    double t = t0;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t_new = step + 1 == n_steps ? tf : t0 + static_cast<double>(step + 1) * dt_fixed;
        const double h = t_new - t;
        BranchSolver last_step(dyn, h);
        BranchSolver& branches = (std::abs(h - dt_fixed) <= 1e-14 * dt_fixed) ? full_step : last_step;

        w_pred = w + h * v + (0.25 * h * h) * a;
        v_pred = v + (0.5 * h) * a;
        const double acc_base = base_motion(dyn.excitation(), t_new).acceleration;

        // Residual M a + C v + K w - f_c e + M r d'' as a function of w_new.
        w_new = w_pred;
        bool converged = false;
        for (int it = 0; it < kMaxNewton; ++it) {
            a_new = (4.0 / (h * h)) * (w_new - w_pred);
            v_new = v_pred + (0.5 * h) * a_new;
            dyn.internal_force(t_new, w_new, v_new, residual);
            residual.noalias() += model.mass() * a_new;
            residual += acc_base * mr;
            const ContactTangent tangent = dyn.contact_tangent(w_new, v_new);
            w_new -= branches.factor(tangent).solve(residual);
            // The residual is linear on each contact branch, so the update is
            // exact once it stays on the branch it was computed for.
            v_new = v_pred + (2.0 / h) * (w_new - w_pred);
            if (dyn.contact_tangent(w_new, v_new) == tangent) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NewtonFailure(fmt::format("Newmark Newton iteration failed at step {} (t = {:.17g})",
                                            step, t_new),
                                t_new, step);
        }
        a_new = (4.0 / (h * h)) * (w_new - w_pred);
        v_new = v_pred + (0.5 * h) * a_new;
        if (!w_new.allFinite() || !v_new.allFinite()) {
            throw DivergenceError(fmt::format("non-finite state at t = {:.17g}", t_new), t_new);
        }

        mean_acc = 0.5 * (a + a_new);
        const double tol = 1e-12 * std::max(1.0, std::abs(t_new));
        while (next_sample < series.size() && series.time[next_sample] <= t_new + tol) {
            const double s = series.time[next_sample] - t;
            if (std::abs(series.time[next_sample] - t_new) <= tol) {
                record_sample(series, dyn, next_sample, w_new, v_new);
            } else {
                sample_w = w + s * v + (0.5 * s * s) * mean_acc;
                sample_v = v + s * mean_acc;
                record_sample(series, dyn, next_sample, sample_w, sample_v);
            }
            ++next_sample;
        }

        w = w_new;
        v = v_new;
        a = a_new;
        t = t_new;
        ++series.stats.steps;
    }
    series.final_state = State{t, w, v};
    return series;
}

} // namespace vibrobeam
