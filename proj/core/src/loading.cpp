#include "vibrobeam/loading.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vibrobeam {

BaseExcitation BaseExcitation::from_hz(double amplitude, double frequency_hz) {
    return BaseExcitation{amplitude, 2.0 * std::numbers::pi * frequency_hz};
}

double BaseExcitation::frequency_hz() const noexcept { return omega / (2.0 * std::numbers::pi); }

void BaseExcitation::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("excitation angular frequency must be positive");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("excitation amplitude must be non-negative");
    }
}

BaseMotion base_motion(const BaseExcitation& exc, double t) {
    if (!(exc.omega > 0.0)) {
        throw std::invalid_argument("base_motion: omega must be positive");
    }
    const double s = std::sin(exc.omega * t);
    const double c = std::cos(exc.omega * t);
    return {-exc.amplitude / (exc.omega * exc.omega) * s, -exc.amplitude / exc.omega * c,
            exc.amplitude * s};
}

void UnilateralSpring::validate() const {
    if (!(stiffness >= 0.0) || !std::isfinite(stiffness)) {
        throw std::invalid_argument("spring.stiffness must be non-negative");
    }
    if (!(damping >= 0.0) || !std::isfinite(damping)) {
        throw std::invalid_argument("spring.damping must be non-negative");
    }
    if (!std::isfinite(gap) || !std::isfinite(prestress)) {
        throw std::invalid_argument("spring.gap and spring.prestress must be finite");
    }
}

double penetration(const UnilateralSpring& spring, double w_tip) noexcept {
    return -w_tip - spring.gap + spring.prestress;
}

double contact_force(const UnilateralSpring& spring, double w_tip, double w_tip_dot) noexcept {
    const double delta = penetration(spring, w_tip);
    switch (spring.mode) {
    case SpringMode::none:
        return 0.0;
    case SpringMode::bilateral:
        return spring.stiffness * delta - spring.damping * w_tip_dot;
    case SpringMode::unilateral:
        if (delta <= 0.0) {
            return 0.0;
        }
        return positive_part(spring.stiffness * delta - spring.damping * w_tip_dot);
    }
    return 0.0;
}

double elastic_contact_force(const UnilateralSpring& spring, double w_tip) noexcept {
    const double delta = penetration(spring, w_tip);
    switch (spring.mode) {
    case SpringMode::none:
        return 0.0;
    case SpringMode::bilateral:
        return spring.stiffness * delta;
    case SpringMode::unilateral:
        return spring.stiffness * positive_part(delta);
    }
    return 0.0;
}

double contact_potential(const UnilateralSpring& spring, double w_tip) noexcept {
    const double delta = penetration(spring, w_tip);
    switch (spring.mode) {
    case SpringMode::none:
        return 0.0;
    case SpringMode::bilateral:
        return 0.5 * spring.stiffness * delta * delta;
    case SpringMode::unilateral: {
        const double dp = positive_part(delta);
        return 0.5 * spring.stiffness * dp * dp;
    }
    }
    return 0.0;
}

ContactTangent contact_tangent(const UnilateralSpring& spring, double w_tip,
                               double w_tip_dot) noexcept {
    switch (spring.mode) {
    case SpringMode::none:
        return {};
    case SpringMode::bilateral:
        return {spring.stiffness, spring.damping};
    case SpringMode::unilateral:
        if (contact_force(spring, w_tip, w_tip_dot) > 0.0) {
            return {spring.stiffness, spring.damping};
        }
        return {};
    }
    return {};
}

const char* to_string(SpringMode mode) noexcept {
    switch (mode) {
    case SpringMode::unilateral:
        return "unilateral";
    case SpringMode::bilateral:
        return "bilateral";
    case SpringMode::none:
        return "none";
    }
    return "unknown";
}

} // namespace vibrobeam
