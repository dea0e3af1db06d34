#include "vibrobeam/band.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vibrobeam {

namespace {

// Row-oriented kernels: each output entry is accumulated in a register.
// Bandwidth fixed at compile time for the beam case (KD = 3) so the inner
// loops unroll; KD = -1 reads it from `kd`. Entry (i, j), i >= j, of a band
// with leading dimension ld sits at band[j * ld + i - j].

// y += sa * A x (+ sb * B z when B is given).
template <int KD, bool Pair>
void band_multiply(Eigen::Index n, Eigen::Index kd, const double* a, const double* x, double sa,
                   const double* b, const double* z, double sb, double* y) {
    const Eigen::Index w = KD >= 0 ? KD : kd;
    const Eigen::Index ld = w + 1;
    for (Eigen::Index i = 0; i < n; ++i) {
        double ax = a[i * ld] * x[i];
        double bz = 0.0;
        if constexpr (Pair) {
            bz = b[i * ld] * z[i];
        }
        if (KD >= 0 && i >= w && i + w < n) {
            for (int k = 1; k <= (KD >= 0 ? KD : 0); ++k) {
                ax += a[(i - k) * ld + k] * x[i - k] + a[i * ld + k] * x[i + k];
                if constexpr (Pair) {
                    bz += b[(i - k) * ld + k] * z[i - k] + b[i * ld + k] * z[i + k];
                }
            }
        } else {
            for (Eigen::Index k = 1; k <= std::min(i, w); ++k) {
                ax += a[(i - k) * ld + k] * x[i - k];
                if constexpr (Pair) {
                    bz += b[(i - k) * ld + k] * z[i - k];
                }
            }
            for (Eigen::Index k = 1; k <= std::min(n - 1 - i, w); ++k) {
                ax += a[i * ld + k] * x[i + k];
                if constexpr (Pair) {
                    bz += b[i * ld + k] * z[i + k];
                }
            }
        }
        y[i] += sa * ax + sb * bz;
    }
}

// L y = x then L^T x = y.
template <int KD>
void band_solve(Eigen::Index n, Eigen::Index kd, const double* l, const double* inv_diag,
                double* x) {
    const Eigen::Index w = KD >= 0 ? KD : kd;
    const Eigen::Index ld = w + 1;
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = x[i];
        if (KD >= 0 && i >= w) {
            for (int k = 1; k <= (KD >= 0 ? KD : 0); ++k) {
                v -= l[(i - k) * ld + k] * x[i - k];
            }
        } else {
            for (Eigen::Index k = 1; k <= std::min(i, w); ++k) {
                v -= l[(i - k) * ld + k] * x[i - k];
            }
        }
        x[i] = v * inv_diag[i];
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double v = x[i];
        if (KD >= 0 && i + w < n) {
            for (int k = 1; k <= (KD >= 0 ? KD : 0); ++k) {
                v -= l[i * ld + k] * x[i + k];
            }
        } else {
            for (Eigen::Index k = 1; k <= std::min(n - 1 - i, w); ++k) {
                v -= l[i * ld + k] * x[i + k];
            }
        }
        x[i] = v * inv_diag[i];
    }
}

} // namespace

SymmetricBand::SymmetricBand(Eigen::Index size, Eigen::Index bandwidth)
    : band_(Eigen::MatrixXd::Zero(bandwidth + 1, size)) {
    if (size < 0 || bandwidth < 0) {
        throw std::invalid_argument("SymmetricBand: negative dimension");
    }
}

SymmetricBand SymmetricBand::from_dense(const Eigen::MatrixXd& a, Eigen::Index min_bandwidth) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("SymmetricBand: matrix must be square");
    }
    const Eigen::Index n = a.rows();
    Eigen::Index kd =
        std::min(std::max<Eigen::Index>(0, min_bandwidth), std::max<Eigen::Index>(0, n - 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = n - 1; i > j + kd; --i) {
            if (a(i, j) != 0.0) {
                kd = i - j;
                break;
            }
        }
    }
    SymmetricBand out(n, kd);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i <= std::min(n - 1, j + kd); ++i) {
            out.band_(i - j, j) = a(i, j);
        }
    }
    return out;
}

void SymmetricBand::assign_sum(double a, const SymmetricBand& x, double b, const SymmetricBand& y) {
    band_.noalias() = a * x.band_ + b * y.band_;
}

void SymmetricBand::add_scaled(double a, const SymmetricBand& x) { band_ += a * x.band_; }

void SymmetricBand::multiply_add(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 Eigen::Ref<Eigen::VectorXd> y, double s) const {
    if (bandwidth() == 3) {
        band_multiply<3, false>(size(), 3, data(), x.data(), s, nullptr, nullptr, 0.0, y.data());
    } else {
        band_multiply<-1, false>(size(), bandwidth(), data(), x.data(), s, nullptr, nullptr, 0.0,
                                 y.data());
    }
}

void multiply_add_pair(const SymmetricBand& a, const Eigen::Ref<const Eigen::VectorXd>& x,
                       double sa, const SymmetricBand& b,
                       const Eigen::Ref<const Eigen::VectorXd>& z, double sb,
                       Eigen::Ref<Eigen::VectorXd> y) {
    if (a.size() != b.size() || a.bandwidth() != b.bandwidth()) {
        throw std::invalid_argument("multiply_add_pair: band shapes differ");
    }
    if (a.bandwidth() == 3) {
        band_multiply<3, true>(a.size(), 3, a.data(), x.data(), sa, b.data(), z.data(), sb,
                               y.data());
    } else {
        band_multiply<-1, true>(a.size(), a.bandwidth(), a.data(), x.data(), sa, b.data(),
                                z.data(), sb, y.data());
    }
}

Eigen::MatrixXd SymmetricBand::to_dense() const {
    const Eigen::Index n = size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i <= std::min(n - 1, j + bandwidth()); ++i) {
            a(i, j) = band_(i - j, j);
            a(j, i) = band_(i - j, j);
        }
    }
    return a;
}

bool BandCholesky::compute(const SymmetricBand& a) {
    l_ = a;
    const Eigen::Index n = l_.size();
    const Eigen::Index kd = l_.bandwidth();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index k0 = std::max<Eigen::Index>(0, j - kd);
        double d = l_.lower(j, j);
        for (Eigen::Index k = k0; k < j; ++k) {
            d -= l_.lower(j, k) * l_.lower(j, k);
        }
        if (!(d > 0.0)) {
            return false;
        }
        const double ljj = std::sqrt(d);
        l_.lower(j, j) = ljj;
        for (Eigen::Index i = j + 1; i <= std::min(n - 1, j + kd); ++i) {
            double v = l_.lower(i, j);
            for (Eigen::Index k = std::max<Eigen::Index>(0, i - kd); k < j; ++k) {
                v -= l_.lower(i, k) * l_.lower(j, k);
            }
            l_.lower(i, j) = v / ljj;
        }
    }
    inverse_diagonal_.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        inverse_diagonal_[j] = 1.0 / l_.lower(j, j);
    }
    return true;
}

void BandCholesky::solve_in_place(Eigen::Ref<Eigen::VectorXd> x) const {
    if (l_.bandwidth() == 3) {
        band_solve<3>(l_.size(), 3, l_.data(), inverse_diagonal_.data(), x.data());
    } else {
        band_solve<-1>(l_.size(), l_.bandwidth(), l_.data(), inverse_diagonal_.data(), x.data());
    }
}

} // namespace vibrobeam
