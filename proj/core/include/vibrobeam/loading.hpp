#pragma once

namespace vibrobeam {

// Imposed base acceleration a*sin(omega*t).
struct BaseExcitation {
    double amplitude = 50.0; // m/s^2
    double omega = 0.0;      // rad/s

    static BaseExcitation from_hz(double amplitude, double frequency_hz);
    double frequency_hz() const noexcept;
    void validate() const;

    friend bool operator==(const BaseExcitation&, const BaseExcitation&) = default;
};

struct BaseMotion {
    double displacement;
    double velocity;
    double acceleration;
};

// Zero-mean integrals of the imposed acceleration:
//   d(t) = -(a/w^2) sin(wt),  d'(t) = -(a/w) cos(wt),  d''(t) = a sin(wt).
BaseMotion base_motion(const BaseExcitation& exc, double t);

enum class SpringMode { unilateral, bilateral, none };

// Tip spring. The penetration is delta = -w_tip - gap + prestress, where
// w_tip is the tip displacement relative to the base.
struct UnilateralSpring {
    double stiffness = 5.0e5; // N/m
    double gap = 0.0;         // m, free play before contact
    double prestress = 0.0;   // m, initial compression offset
    double damping = 0.0;     // N s/m, acts only while in contact (unilateral)
    SpringMode mode = SpringMode::unilateral;

    void validate() const;

    friend bool operator==(const UnilateralSpring&, const UnilateralSpring&) = default;
};

inline double positive_part(double x) noexcept { return x > 0.0 ? x : 0.0; }

double penetration(const UnilateralSpring& spring, double w_tip) noexcept;

// Force on the tip translational DOF (positive pushes the tip upwards).
double contact_force(const UnilateralSpring& spring, double w_tip, double w_tip_dot) noexcept;

// Elastic part only: k_r*delta_+ (unilateral), k_r*delta (bilateral).
double elastic_contact_force(const UnilateralSpring& spring, double w_tip) noexcept;

// Stored energy of the spring: 1/2 k_r delta_+^2 or 1/2 k_r delta^2.
double contact_potential(const UnilateralSpring& spring, double w_tip) noexcept;

// Derivatives of -contact_force with respect to (w_tip, w_tip_dot) on the
// current branch. Zero when the contact is open.
struct ContactTangent {
    double stiffness = 0.0;
    double damping = 0.0;

    friend bool operator==(const ContactTangent&, const ContactTangent&) = default;
};

ContactTangent contact_tangent(const UnilateralSpring& spring, double w_tip,
                               double w_tip_dot) noexcept;

const char* to_string(SpringMode mode) noexcept;

} // namespace vibrobeam
