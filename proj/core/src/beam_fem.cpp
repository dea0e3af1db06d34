#include "vibrobeam/beam_fem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace vibrobeam {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("beam.") + name + " must be positive and finite");
    }
}

template <typename T>
Eigen::Matrix<T, 4, 4> element_stiffness(T ei, T le) {
    const T l2 = le * le;
    const T l3 = l2 * le;
    Eigen::Matrix<T, 4, 4> k;
    // clang-format off
    k <<  12,     6 * le, -12,     6 * le,
          6 * le, 4 * l2,  -6 * le, 2 * l2,
         -12,    -6 * le,  12,    -6 * le,
          6 * le, 2 * l2,  -6 * le, 4 * l2;
    // clang-format on
    return k * (ei / l3);
}

} // namespace

void BeamProperties::validate() const {
    require_positive(youngs_modulus, "youngs_modulus");
    require_positive(density, "density");
    require_positive(length, "length");
    require_positive(width, "width");
    require_positive(height, "height");
    if (n_elements < 1) {
        throw std::invalid_argument("beam.n_elements must be at least 1");
    }
}

ElementMatrices element_matrices(const BeamProperties& props, double le) {
    if (!(le > 0.0) || !std::isfinite(le)) {
        throw std::invalid_argument("element length must be positive");
    }
    const double l2 = le * le;

    ElementMatrices out;
    out.stiffness = element_stiffness(props.bending_stiffness(), le);
    // clang-format off
    out.mass <<  156.0,      22.0 * le,  54.0,      -13.0 * le,
                  22.0 * le,  4.0 * l2,  13.0 * le,  -3.0 * l2,
                  54.0,      13.0 * le, 156.0,      -22.0 * le,
                 -13.0 * le, -3.0 * l2, -22.0 * le,   4.0 * l2;
    out.mass *= props.mass_per_length() * le / 420.0;
    // clang-format on
    return out;
}

AssembledModel::AssembledModel(Eigen::MatrixXd mass, Eigen::MatrixXd stiffness,
                               std::vector<DofInfo> layout, Eigen::Index tip_index)
    : mass_(std::move(mass)), stiffness_(std::move(stiffness)), layout_(std::move(layout)),
      tip_(tip_index) {
    const Eigen::Index n = mass_.rows();
    if (n == 0 || mass_.cols() != n || stiffness_.rows() != n || stiffness_.cols() != n) {
        throw std::invalid_argument("mass and stiffness must be square and of equal size");
    }
    if (static_cast<Eigen::Index>(layout_.size()) != n) {
        throw std::invalid_argument("DOF layout does not match the matrix size");
    }
    if (tip_ < 0 || tip_ >= n || layout_[tip_].kind != DofKind::translation) {
        throw std::invalid_argument("tip index must select a translational DOF");
    }
    if (!mass_.isApprox(mass_.transpose()) || !stiffness_.isApprox(stiffness_.transpose())) {
        throw std::invalid_argument("mass and stiffness must be symmetric");
    }
    stiffness_band_ = SymmetricBand::from_dense(stiffness_);
    mass_band_ = SymmetricBand::from_dense(mass_, stiffness_band_.bandwidth());
    if (mass_band_.bandwidth() > stiffness_band_.bandwidth()) {
        stiffness_band_ = SymmetricBand::from_dense(stiffness_, mass_band_.bandwidth());
    }
    if (!mass_chol_.compute(mass_band_)) {
        throw std::invalid_argument("mass matrix is not positive definite");
    }
    influence_ = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (layout_[i].kind == DofKind::translation) {
            influence_[i] = 1.0;
            translations_.push_back(i);
        }
    }
}

AssembledModel assemble(const BeamProperties& props) {
    props.validate();
    const int ne = props.n_elements;
    const Eigen::Index full = 2 * (ne + 1);
    const ElementMatrices em = element_matrices(props, props.element_length());

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(full, full);
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(full, full);
    for (int e = 0; e < ne; ++e) {
        m.block<4, 4>(2 * e, 2 * e) += em.mass;
        k.block<4, 4>(2 * e, 2 * e) += em.stiffness;
    }

    // Clamped base: drop u_0 and u'_0.
    const Eigen::Index n = full - 2;
    std::vector<DofInfo> layout;
    layout.reserve(static_cast<std::size_t>(n));
    for (int node = 1; node <= ne; ++node) {
        layout.push_back({DofKind::translation, node});
        layout.push_back({DofKind::rotation, node});
    }
    return AssembledModel(m.bottomRightCorner(n, n), k.bottomRightCorner(n, n), std::move(layout),
                          n - 2);
}

Eigen::VectorXd static_displacement(const BeamProperties& props, const Eigen::VectorXd& load) {
    props.validate();
    using Real = long double;
    using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    const int ne = props.n_elements;
    const Eigen::Index n = 2 * ne;
    if (load.size() != n) {
        throw std::invalid_argument("static_displacement: load has the wrong size");
    }
    const Real width = props.width;
    const Real height = props.height;
    const Real ei = static_cast<Real>(props.youngs_modulus) * width * height * height * height / 12;
    const Eigen::Matrix<Real, 4, 4> ke =
        element_stiffness(ei, static_cast<Real>(props.length) / ne);
    MatrixR k = MatrixR::Zero(n + 2, n + 2);
    for (int e = 0; e < ne; ++e) {
        k.block<4, 4>(2 * e, 2 * e) += ke;
    }
    const Eigen::LLT<MatrixR> llt(k.bottomRightCorner(n, n));
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("static_displacement: stiffness is not positive definite");
    }
    return llt.solve(load.cast<Real>()).cast<double>();
}

} // namespace vibrobeam
