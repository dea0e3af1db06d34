#include "vibrobeam/bdf.hpp"

#include "vibrobeam/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <type_traits>

namespace vibrobeam {

void SolverOptions::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw std::invalid_argument("solver tolerances must be positive");
    }
    if (max_order < 1 || max_order > 5) {
        throw std::invalid_argument("solver.max_order must be in 1..5");
    }
    if (!(initial_step >= 0.0)) {
        throw std::invalid_argument("solver.initial_step must be non-negative");
    }
    if (!(max_step > 0.0)) {
        throw std::invalid_argument("solver.max_step must be positive");
    }
    if (!(dt_out > 0.0) || !std::isfinite(dt_out)) {
        throw std::invalid_argument("solver.dt_out must be positive");
    }
}

double SolverOptions::default_dt_out(double omega) {
    return 2.0 * std::numbers::pi / omega / 64.0;
}

namespace {

constexpr int kMaxOrder = 5;
constexpr int kNewtonMaxIter = 4;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

// gamma_k = sum_{j=1}^{k} 1/j; the error constant of order k is 1/(k+1).
constexpr std::array<double, kMaxOrder + 2> kGamma = {
    0.0, 1.0, 1.5, 11.0 / 6.0, 25.0 / 12.0, 137.0 / 60.0, 49.0 / 20.0};

constexpr double error_constant(int order) { return 1.0 / (order + 1); }

double rms_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& scale) {
    return std::sqrt((x.array() / scale.array()).square().mean());
}

using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxOrder + 1, kMaxOrder + 1>;

// Coefficients re-expressing the backward differences after the step size
// is multiplied by `factor`.
SmallMatrix step_change_matrix(int order, double factor) {
    SmallMatrix m = SmallMatrix::Zero(order + 1, order + 1);
    for (int i = 1; i <= order; ++i) {
        for (int j = 1; j <= order; ++j) {
            m(i, j) = (i - 1 - factor * j) / static_cast<double>(i);
        }
    }
    m.row(0).setOnes();
    for (int i = 1; i <= order; ++i) {
        m.row(i) = m.row(i).cwiseProduct(m.row(i - 1));
    }
    return m;
}

// Calls f(std::integral_constant<int, k>) so the loops over differences
// have a compile-time trip count.
template <typename F>
void with_order(int k, F&& f) {
    switch (k) {
    case 1: f(std::integral_constant<int, 1>{}); break;
    case 2: f(std::integral_constant<int, 2>{}); break;
    case 3: f(std::integral_constant<int, 3>{}); break;
    case 4: f(std::integral_constant<int, 4>{}); break;
    default: f(std::integral_constant<int, 5>{}); break;
    }
}

class BdfSolver {
public:
    BdfSolver(const BeamDynamics& dyn, const SolverOptions& opts)
        : dyn_(dyn), opts_(opts), m_(dyn.dof_count()), n_(2 * m_), tip_(dyn.tip_index()) {
        y_.resize(n_);
        f_.resize(n_);
        y_predict_.resize(n_);
        y_new_.resize(n_);
        d_.resize(n_);
        dy_.resize(n_);
        psi_.resize(n_);
        scale_.resize(n_);
        rhs_.resize(n_);
        work_.resize(m_);
        stage_.resize(m_);
        mass_stage_.resize(m_);
        mass_influence_ = Eigen::VectorXd::Zero(m_);
        dyn.model().mass_band().multiply_add(dyn.model().base_influence(), mass_influence_);
        acc_.resize(m_);
        diffs_ = Eigen::MatrixXd::Zero(n_, kMaxOrder + 3);
        scratch_ = Eigen::MatrixXd::Zero(n_, kMaxOrder + 1);
        dense_ = Eigen::MatrixXd::Zero(n_, kMaxOrder + 1);
        iteration_matrix_ = dyn.model().mass_band();
        for (int k = 1; k <= kMaxOrder; ++k) {
            unit_change_[k] = step_change_matrix(k, 1.0);
        }
        newton_tol_ = std::max(10.0 * std::numeric_limits<double>::epsilon() / opts_.rel_tol,
                               std::min(0.03, std::sqrt(opts_.rel_tol)));
    }

    TimeSeries run(double t0, double tf, const State& init) {
        TimeSeries series =
            make_series(dyn_.model(), output_grid(t0, tf, opts_.dt_out));
        t_ = t0;
        t_bound_ = tf;
        y_.head(m_) = init.w;
        y_.tail(m_) = init.w_dot;
        check_finite(y_, t_);
        record_sample(series, dyn_, 0, init.w, init.w_dot);
        next_sample_ = 1;
        next_output_ = series.size() > 1 ? series.time[1] : std::numeric_limits<double>::infinity();

        eval(t_, y_, f_);
        jac_ = tangent(y_);
        h_abs_ = opts_.initial_step > 0.0 ? opts_.initial_step : initial_step(f_);
        h_abs_ = std::min({h_abs_, opts_.max_step, tf - t0});
        diffs_.col(0) = y_;
        diffs_.col(1) = h_abs_ * f_;
        order_ = 1;

        while (t_ < t_bound_) {
            step();
            emit_samples(series);
        }

        series.final_state = State{t_, y_.head(m_), y_.tail(m_)};
        series.stats = stats_;
        return series;
    }

private:
    void eval(double t, const Eigen::VectorXd& y, Eigen::VectorXd& out) {
        ++stats_.rhs_evaluations;
        out.head(m_) = y.tail(m_);
        dyn_.acceleration(t, y.head(m_), y.tail(m_), acc_);
        out.tail(m_) = acc_;
    }

    ContactTangent tangent(const Eigen::VectorXd& y) const {
        return vibrobeam::contact_tangent(dyn_.spring(), y[tip_], y[m_ + tip_]);
    }

    static void check_finite(const Eigen::VectorXd& y, double t) {
        if (!y.allFinite()) {
            throw DivergenceError(fmt::format("non-finite state at t = {:.17g}", t), t);
        }
    }

    double initial_step(const Eigen::VectorXd& f0) {
        scale_ = opts_.abs_tol + opts_.rel_tol * y_.array().abs();
        const double d0 = rms_norm(y_, scale_);
        const double d1 = rms_norm(f0, scale_);
        const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        y_new_ = y_ + h0 * f0;
        eval(t_ + h0, y_new_, rhs_);
        const double d2 = rms_norm(rhs_ - f0, scale_) / h0;
        const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                       : std::sqrt(0.01 / std::max(d1, d2));
        return std::min(100.0 * h0, h1);
    }

    // Factor M + c C' + c^2 K' for the current tangent; this is the reduced
    // form of I - c J for the first-order system.
    void factorize(double c) {
        ++stats_.factorizations;
        const AssembledModel& model = dyn_.model();
        iteration_matrix_.assign_sum(1.0, model.mass_band(), c * c, model.stiffness_band());
        if (dyn_.damping().active()) {
            iteration_matrix_.add_scaled(c, dyn_.damping_band());
        }
        iteration_matrix_.lower(tip_, tip_) += c * jac_.damping + c * c * jac_.stiffness;
        if (!chol_.compute(iteration_matrix_)) {
            throw DivergenceError("iteration matrix is not positive definite", t_);
        }
        c_lu_ = c;
        lu_valid_ = true;
    }

    // One Newton update for the stage equation d = c f(t, y_pred + d) - psi.
    // With J the tangent of f, the system (I - c_lu J) x = c f - psi - d is
    // reduced to the velocity block
    //   (M + c_lu C' + c_lu^2 K') x2 = M r2 - c_lu K' r1,   x1 = r1 + c_lu x2,
    // and M r2 = c (M f2) - M (psi2 + d2) is formed without inverting M.
    // Result in dy_; false if the residual is not finite.
    bool newton_update(double t_new, double c) {
        ++stats_.rhs_evaluations;
        const AssembledModel& model = dyn_.model();
        const double cl = c_lu_;
        const double fc = dyn_.contact_force(y_new_.head(m_), y_new_.tail(m_));
        const double dd = base_motion(dyn_.excitation(), t_new).acceleration;

        // r1 = c w' - psi1 - d1 goes to dy_.head; the stiffness acts on
        // c w + c_lu r1 and the mass on psi2 + d2.
        const double* y = y_new_.data();
        const double* ps = psi_.data();
        const double* d = d_.data();
        const double* mr = mass_influence_.data();
        double* r1 = dy_.data();
        double* ks = stage_.data();
        double* ms = mass_stage_.data();
        double* wk = work_.data();
        const Eigen::Index m = m_;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double r = c * y[m + i] - ps[i] - d[i];
            r1[i] = r;
            ks[i] = c * y[i] + cl * r;
            ms[i] = ps[m + i] + d[m + i];
            wk[i] = -(c * dd) * mr[i];
        }
        // M f2 = -K w - C w' + f_c e - d'' M r
        multiply_add_pair(model.stiffness_band(), stage_, -1.0, model.mass_band(), mass_stage_, -1.0,
                          work_);
        if (dyn_.damping().active()) {
            dyn_.damping_band().multiply_add(y_new_.tail(m_), work_, -c);
        }
        work_[tip_] += c * fc - cl * jac_.stiffness * dy_[tip_];
        if (!std::isfinite(work_.sum())) {
            return false;
        }
        chol_.solve_in_place(work_);
        for (Eigen::Index i = 0; i < m; ++i) {
            r1[m + i] = wk[i];
            r1[i] += cl * wk[i];
        }
        return true;
    }

    // Applies dy_ to y_new_ and d_ and returns its scaled RMS norm.
    double apply_update() {
        const double* dy = dy_.data();
        const double* sc = scale_.data();
        double* y = y_new_.data();
        double* d = d_.data();
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n_; ++i) {
            const double q = dy[i] / sc[i];
            sum += q * q;
            y[i] += dy[i];
            d[i] += dy[i];
        }
        return std::sqrt(sum / static_cast<double>(n_));
    }

    // Simplified Newton on the BDF implicit stage. Returns (converged, iterations).
    std::pair<bool, int> solve_stage(double t_new, double c) {
        d_.setZero();
        y_new_ = y_predict_;
        // Inside one contact branch f is affine in y, so with a matrix built
        // for this very c the first update already solves the stage.
        const bool exact_matrix = c == c_lu_;
        double dy_norm_old = -1.0;
        bool converged = false;
        int k = 0;
        for (; k < kNewtonMaxIter; ++k) {
            if (!newton_update(t_new, c)) {
                break;
            }
            // A diverging update is applied too; the caller discards the stage.
            const double dy_norm = apply_update();
            double rate = -1.0;
            if (dy_norm_old > 0.0) {
                rate = dy_norm / dy_norm_old;
                if (rate >= 1.0 ||
                    std::pow(rate, kNewtonMaxIter - k) / (1.0 - rate) * dy_norm > newton_tol_) {
                    break;
                }
            }
            if (dy_norm == 0.0 || (rate >= 0.0 && rate / (1.0 - rate) * dy_norm < newton_tol_)) {
                converged = true;
                break;
            }
            if (k == 0 && exact_matrix && tangent(y_new_) == jac_) {
                // Count the confirming iteration so step control is unchanged.
                converged = true;
                ++k;
                break;
            }
            dy_norm_old = dy_norm;
        }
        return {converged, k + 1};
    }

    void change_differences(double factor) {
        const SmallMatrix ru = step_change_matrix(order_, factor) * unit_change_[order_];
        with_order(order_, [&](auto kc) {
            constexpr int K = decltype(kc)::value;
            double* d = diffs_.data();
            const Eigen::Index n = n_;
            for (Eigen::Index i = 0; i < n; ++i) {
                std::array<double, K + 1> row;
                for (int l = 0; l <= K; ++l) {
                    row[l] = d[l * n + i];
                }
                for (int j = 0; j <= K; ++j) {
                    double v = 0.0;
                    for (int l = 0; l <= K; ++l) {
                        v += row[l] * ru(l, j);
                    }
                    d[j * n + i] = v;
                }
            }
        });
    }

    // Predicted state, psi and error scale in one pass over the differences.
    void predict() {
        with_order(order_, [&](auto kc) {
            constexpr int K = decltype(kc)::value;
            std::array<double, K + 1> g{};
            for (int j = 1; j <= K; ++j) {
                g[j] = kGamma[j] / kGamma[K];
            }
            const double* d = diffs_.data();
            double* yp = y_predict_.data();
            double* ps = psi_.data();
            double* sc = scale_.data();
            const Eigen::Index n = n_;
            for (Eigen::Index i = 0; i < n; ++i) {
                double y = d[i];
                double p = 0.0;
                for (int j = 1; j <= K; ++j) {
                    y += d[j * n + i];
                    p += g[j] * d[j * n + i];
                }
                yp[i] = y;
                ps[i] = p;
                sc[i] = opts_.abs_tol + opts_.rel_tol * std::abs(y);
            }
        });
    }

    // Error scale at the new state and the scaled RMS norm of d_; NaN if the
    // new state is not finite.
    double error_estimate() {
        const double* y = y_new_.data();
        const double* d = d_.data();
        double* sc = scale_.data();
        double sum = 0.0;
        double probe = 0.0;
        for (Eigen::Index i = 0; i < n_; ++i) {
            const double s = opts_.abs_tol + opts_.rel_tol * std::abs(y[i]);
            sc[i] = s;
            const double q = d[i] / s;
            sum += q * q;
            probe += y[i];
        }
        if (!std::isfinite(probe)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return error_constant(order_) * std::sqrt(sum / static_cast<double>(n_));
    }

    // Backward differences after accepting the step with correction d_.
    void update_differences() {
        with_order(order_, [&](auto kc) {
            constexpr int K = decltype(kc)::value;
            double* dif = diffs_.data();
            const double* d = d_.data();
            const Eigen::Index n = n_;
            for (Eigen::Index i = 0; i < n; ++i) {
                double v = d[i];
                dif[(K + 2) * n + i] = v - dif[(K + 1) * n + i];
                dif[(K + 1) * n + i] = v;
                for (int j = K; j >= 0; --j) {
                    v += dif[j * n + i];
                    dif[j * n + i] = v;
                }
            }
        });
    }

    void step() {
        const double min_step =
            10.0 * std::abs(std::nextafter(t_, std::numeric_limits<double>::infinity()) - t_);
        double h_abs = h_abs_;
        if (h_abs > opts_.max_step) {
            change_differences(opts_.max_step / h_abs);
            h_abs = opts_.max_step;
            n_equal_steps_ = 0;
        } else if (h_abs < min_step) {
            change_differences(min_step / h_abs);
            h_abs = min_step;
            n_equal_steps_ = 0;
        }

        bool jac_current = false;
        double t_new = t_;
        double error_norm = 0.0;
        double safety = 0.0;
        for (bool accepted = false; !accepted;) {
            if (h_abs < min_step) {
                throw StepSizeUnderflow(
                    fmt::format("step size underflow at t = {:.17g}", t_), t_);
            }
            t_new = t_ + h_abs;
            if (t_new > t_bound_) {
                t_new = t_bound_;
                change_differences((t_new - t_) / h_abs);
                n_equal_steps_ = 0;
                lu_valid_ = false;
            }
            const double h = t_new - t_;
            h_abs = h;

            predict();
            const double c = h / kGamma[order_];

            bool converged = false;
            int n_iter = 0;
            while (!converged) {
                // A band factorization costs less than one Newton update, so
                // the matrix follows every change of c; only the contact
                // tangent is lagged.
                if (!lu_valid_ || c != c_lu_) {
                    factorize(c);
                }
                std::tie(converged, n_iter) = solve_stage(t_new, c);
                if (!converged) {
                    ++stats_.newton_failures;
                    if (jac_current) {
                        break;
                    }
                    jac_ = tangent(y_predict_);
                    ++stats_.jacobian_updates;
                    lu_valid_ = false;
                    jac_current = true;
                }
            }
            if (!converged) {
                ++stats_.rejected_steps;
                h_abs *= 0.5;
                change_differences(0.5);
                n_equal_steps_ = 0;
                lu_valid_ = false;
                continue;
            }

            safety = 0.9 * (2 * kNewtonMaxIter + 1) / (2 * kNewtonMaxIter + n_iter);
            error_norm = error_estimate();
            if (!std::isfinite(error_norm)) {
                throw DivergenceError(
                    fmt::format("non-finite state at t = {:.17g}", t_new), t_new);
            }
            if (error_norm > 1.0) {
                ++stats_.rejected_steps;
                const double factor =
                    std::max(kMinFactor, safety * std::pow(error_norm, -1.0 / (order_ + 1)));
                h_abs *= factor;
                change_differences(factor);
                n_equal_steps_ = 0;
            } else {
                accepted = true;
            }
        }

        ++stats_.steps;
        ++n_equal_steps_;
        t_old_ = t_;
        t_ = t_new;
        y_ = y_new_;
        h_abs_ = h_abs;
        // Follow the contact branch of the accepted state.
        if (const ContactTangent now = tangent(y_); !(now == jac_)) {
            jac_ = now;
            ++stats_.jacobian_updates;
            lu_valid_ = false;
        }

        update_differences();
        // Interpolant for this step, captured before any order/step change.
        if (next_output_ <= t_ + sample_tolerance()) {
            dense_order_ = order_;
            dense_h_ = t_ - t_old_;
            dense_.leftCols(order_ + 1) = diffs_.leftCols(order_ + 1);
        }

        if (n_equal_steps_ < order_ + 1) {
            return;
        }

        const double inf = std::numeric_limits<double>::infinity();
        const double error_m_norm =
            order_ > 1 ? error_constant(order_ - 1) * rms_norm(diffs_.col(order_), scale_) : inf;
        const double error_p_norm =
            order_ < opts_.max_order
                ? error_constant(order_ + 1) * rms_norm(diffs_.col(order_ + 2), scale_)
                : inf;
        const std::array<double, 3> norms = {error_m_norm, error_norm, error_p_norm};
        int best = 0;
        double best_factor = -1.0;
        for (int i = 0; i < 3; ++i) {
            const double factor = norms[i] == 0.0 ? inf : std::pow(norms[i], -1.0 / (order_ + i));
            if (factor > best_factor) {
                best_factor = factor;
                best = i;
            }
        }
        order_ += best - 1;
        const double factor = std::min(kMaxFactor, safety * best_factor);
        h_abs_ *= factor;
        change_differences(factor);
        n_equal_steps_ = 0;
        lu_valid_ = false;
    }

    double sample_tolerance() const { return 1e-12 * std::max(1.0, std::abs(t_)); }

    void emit_samples(TimeSeries& series) {
        const double tol = sample_tolerance();
        while (next_sample_ < series.size() && series.time[next_sample_] <= t_ + tol) {
            const double t = series.time[next_sample_];
            y_new_ = dense_.col(0);
            double p = 1.0;
            for (int j = 1; j <= dense_order_; ++j) {
                p *= (t - (t_ - (j - 1) * dense_h_)) / (dense_h_ * j);
                y_new_ += p * dense_.col(j);
            }
            record_sample(series, dyn_, next_sample_, y_new_.head(m_), y_new_.tail(m_));
            ++next_sample_;
        }
        next_output_ = next_sample_ < series.size() ? series.time[next_sample_]
                                                    : std::numeric_limits<double>::infinity();
    }

    const BeamDynamics& dyn_;
    const SolverOptions& opts_;
    Eigen::Index m_;
    Eigen::Index n_;
    Eigen::Index tip_;

    double t_ = 0.0;
    double t_old_ = 0.0;
    double t_bound_ = 0.0;
    double h_abs_ = 0.0;
    int order_ = 1;
    int n_equal_steps_ = 0;
    double newton_tol_ = 0.0;

    Eigen::VectorXd y_, f_, y_predict_, y_new_, d_, dy_, psi_, scale_, rhs_, work_, stage_, mass_stage_, acc_;
    Eigen::VectorXd mass_influence_;
    Eigen::MatrixXd diffs_;
    Eigen::MatrixXd scratch_;
    std::array<SmallMatrix, kMaxOrder + 1> unit_change_;

    ContactTangent jac_;
    SymmetricBand iteration_matrix_;
    BandCholesky chol_;
    double c_lu_ = 0.0;
    bool lu_valid_ = false;

    Eigen::MatrixXd dense_;
    int dense_order_ = 1;
    double dense_h_ = 0.0;
    std::size_t next_sample_ = 0;
    double next_output_ = 0.0;

    SolverStats stats_;
};

} // namespace

TimeSeries integrate_bdf(const BeamDynamics& dyn, double t0, double tf, const State& init,
                         const SolverOptions& opts) {
    opts.validate();
    if (!(tf > t0)) {
        throw std::invalid_argument("integrate_bdf: tf must exceed t0");
    }
    if (init.w.size() != dyn.dof_count() || init.w_dot.size() != dyn.dof_count()) {
        throw std::invalid_argument("integrate_bdf: initial state has the wrong size");
    }
    BdfSolver solver(dyn, opts);
    return solver.run(t0, tf, init);
}

} // namespace vibrobeam
