#pragma once

#include "vibrobeam/band.hpp"

#include <Eigen/Dense>

#include <vector>

namespace vibrobeam {

// Rectangular-section Euler-Bernoulli beam, uniform mesh.
struct BeamProperties {
    double youngs_modulus = 2.1e11; // Pa
    double density = 7800.0;        // kg/m^3
    double length = 0.39785534396291694; // m
    double width = 0.02;            // m
    double height = 0.01;           // m
    int n_elements = 20;

    double area() const noexcept { return width * height; }
    double inertia() const noexcept { return width * height * height * height / 12.0; }
    double bending_stiffness() const noexcept { return youngs_modulus * inertia(); }
    double mass_per_length() const noexcept { return density * area(); }
    double element_length() const noexcept { return length / n_elements; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const BeamProperties&, const BeamProperties&) = default;
};

struct ElementMatrices {
    Eigen::Matrix4d mass;
    Eigen::Matrix4d stiffness;
};

// Hermite cubic element with DOF order (u_i, u'_i, u_j, u'_j): consistent
// mass and exact bending stiffness.
ElementMatrices element_matrices(const BeamProperties& props, double element_length);

enum class DofKind { translation, rotation };

struct DofInfo {
    DofKind kind;
    int node; // 1-based; node 0 is the clamped base and carries no DOF
};

// Reduced (clamped) mass and stiffness of a structure driven through its
// base, plus the selector of the DOF that meets the tip spring.
//
// Immutable after construction. The mass Cholesky factor is computed once
// and shared by every caller, so instances may be read concurrently.
class AssembledModel {
public:
    // Generic constructor, used for reduced-order harnesses (e.g. a single
    // DOF oscillator). Matrices must be square, symmetric and of equal size;
    // the mass must be positive definite. Both are also kept in a common band
    // layout for the time integrators.
    AssembledModel(Eigen::MatrixXd mass, Eigen::MatrixXd stiffness,
                   std::vector<DofInfo> layout, Eigen::Index tip_index);

    Eigen::Index dof_count() const noexcept { return mass_.rows(); }
    const Eigen::MatrixXd& mass() const noexcept { return mass_; }
    const Eigen::MatrixXd& stiffness() const noexcept { return stiffness_; }
    const SymmetricBand& mass_band() const noexcept { return mass_band_; }
    const SymmetricBand& stiffness_band() const noexcept { return stiffness_band_; }
    const BandCholesky& mass_factor() const noexcept { return mass_chol_; }
    Eigen::Index tip_index() const noexcept { return tip_; }

    // 1 on translational DOFs, 0 on rotations: rigid translation of the base.
    const Eigen::VectorXd& base_influence() const noexcept { return influence_; }

    const std::vector<DofInfo>& layout() const noexcept { return layout_; }
    const std::vector<Eigen::Index>& translational_dofs() const noexcept { return translations_; }

private:
    Eigen::MatrixXd mass_;
    Eigen::MatrixXd stiffness_;
    SymmetricBand mass_band_;
    SymmetricBand stiffness_band_;
    BandCholesky mass_chol_;
    std::vector<DofInfo> layout_;
    std::vector<Eigen::Index> translations_;
    Eigen::VectorXd influence_;
    Eigen::Index tip_;
};

// Uniform-mesh assembly with both base DOFs eliminated. DOF 2k is the
// transverse displacement of node k+1, DOF 2k+1 its rotation.
AssembledModel assemble(const BeamProperties& props);

// Solves K q = load on the clamped mesh of `props`. Assembly and Cholesky run
// in long double: the stiffness condition number grows like n^4, which would
// otherwise cost several digits at fine meshes.
Eigen::VectorXd static_displacement(const BeamProperties& props, const Eigen::VectorXd& load);

} // namespace vibrobeam
