#pragma once

#include <Eigen/Dense>

namespace vibrobeam {

// Symmetric matrix kept as its lower band: entry (i, j) with 0 <= i - j <= bandwidth
// lives at band(i - j, j). Beam matrices have bandwidth 3.
class SymmetricBand {
public:
    SymmetricBand() = default;
    SymmetricBand(Eigen::Index size, Eigen::Index bandwidth);

    // Smallest band, at least `min_bandwidth` wide, that holds every nonzero
    // of the lower triangle of `a`.
    static SymmetricBand from_dense(const Eigen::MatrixXd& a, Eigen::Index min_bandwidth = 0);

    Eigen::Index size() const noexcept { return band_.cols(); }
    Eigen::Index bandwidth() const noexcept { return band_.rows() - 1; }

    // Requires 0 <= i - j <= bandwidth().
    double& lower(Eigen::Index i, Eigen::Index j) { return band_(i - j, j); }
    double lower(Eigen::Index i, Eigen::Index j) const { return band_(i - j, j); }

    // Same shape required.
    void assign_sum(double a, const SymmetricBand& x, double b, const SymmetricBand& y);
    void add_scaled(double a, const SymmetricBand& x);

    // y += s * A x
    void multiply_add(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y,
                      double s = 1.0) const;

    Eigen::MatrixXd to_dense() const;

    // Column-major (bandwidth + 1) x size storage.
    const double* data() const noexcept { return band_.data(); }

private:
    Eigen::MatrixXd band_;
};

// y += sa * A x + sb * B z for two bands of the same shape.
void multiply_add_pair(const SymmetricBand& a, const Eigen::Ref<const Eigen::VectorXd>& x,
                       double sa, const SymmetricBand& b,
                       const Eigen::Ref<const Eigen::VectorXd>& z, double sb,
                       Eigen::Ref<Eigen::VectorXd> y);

// Cholesky factor A = L L^T in band storage.
class BandCholesky {
public:
    // False if `a` is not numerically positive definite.
    bool compute(const SymmetricBand& a);
    void solve_in_place(Eigen::Ref<Eigen::VectorXd> x) const;

private:
    SymmetricBand l_;
    Eigen::VectorXd inverse_diagonal_;
};

} // namespace vibrobeam
