#pragma once

#include <cmath>

#include "itpn/angles.hpp"
#include "itpn/errors.hpp"

namespace itpn {

inline constexpr double kCoLocatedRadius = 1e-9;  // [m]
inline constexpr double kDefaultSpeedFloor = 1.0; // [m/s]

/// Planar point-mass vehicle: Cartesian position plus speed and flight-path angle.
struct VehicleState {
    double x = 0.0;      // east [m]
    double y = 0.0;      // north [m]
    double speed = 0.0;  // [m/s], >= 0
    double gamma = 0.0;  // flight-path angle [rad], in (-pi, pi]
};

/// Line-of-sight-frame relative quantities derived from the two vehicle states.
struct RelativeState {
    double r = 0.0;          // separation [m], > 0
    double theta_los = 0.0;  // LOS angle [rad]
    double theta_i = 0.0;    // interceptor lead angle gamma_i - theta [rad]
    double theta_t = 0.0;    // target lead angle gamma_t - theta [rad]
    double v_r = 0.0;        // radial relative speed [m/s]
    double v_theta = 0.0;    // tangential relative speed [m/s]
    double theta_dot = 0.0;  // LOS rate v_theta / r [rad/s]
};

/// Full simulation state: both vehicles, the achieved lateral acceleration
/// (state of the saturation ODE) and elapsed time since launch.
struct EngagementState {
    VehicleState interceptor;
    VehicleState target;
    double a_i = 0.0;   // achieved acceleration [m/s^2]
    double t_el = 0.0;  // elapsed time [s]
};

/// Time derivative of EngagementState. Target speed/heading rates are zero by
/// construction (constant-velocity, non-maneuvering target).
struct StateDerivative {
    double xi_dot = 0.0;
    double yi_dot = 0.0;
    double speed_i_dot = 0.0;
    double gamma_i_dot = 0.0;
    double xt_dot = 0.0;
    double yt_dot = 0.0;
    double a_i_dot = 0.0;
};

/// Relative kinematics: r, theta and the LOS-frame velocity components
///   v_r     = V_T cos(theta_t) - V_I cos(theta_i)
///   v_theta = V_T sin(theta_t) - V_I sin(theta_i)
/// Throws CoLocatedError below the co-location radius.
inline RelativeState derive_relative_state(const VehicleState& interceptor,
                                           const VehicleState& target) {
    const double dx = target.x - interceptor.x;
    const double dy = target.y - interceptor.y;
    const double r = std::hypot(dx, dy);
    if (r < kCoLocatedRadius)
        throw CoLocatedError("vehicles co-located (r < 1e-9 m): interception already occurred");

    RelativeState rel;
    rel.r = r;
    rel.theta_los = wrap_pi(std::atan2(dy, dx));
    rel.theta_i = wrap_pi(interceptor.gamma - rel.theta_los);
    rel.theta_t = wrap_pi(target.gamma - rel.theta_los);
    rel.v_r = target.speed * std::cos(rel.theta_t) - interceptor.speed * std::cos(rel.theta_i);
    rel.v_theta = target.speed * std::sin(rel.theta_t) - interceptor.speed * std::sin(rel.theta_i);
    rel.theta_dot = rel.v_theta / r;
    return rel;
}

/// Point-mass rates. The achieved acceleration turns the velocity vector
/// through its component normal to it and stretches it through the axial one:
///   gamma_i_dot = a_i cos(theta_i) / V_I,   speed_i_dot = a_i sin(theta_i)
/// The a_i rate itself comes from the saturation model and is passed through.
inline StateDerivative engagement_derivatives(const EngagementState& state, double a_i_rate,
                                              double v_min = kDefaultSpeedFloor) {
    const double v_i = state.interceptor.speed;
    if (v_i < v_min)
        throw SpeedFloorError("interceptor speed " + std::to_string(v_i) +
                              " m/s below floor " + std::to_string(v_min) + " m/s");

    const RelativeState rel = derive_relative_state(state.interceptor, state.target);

    StateDerivative d;
    d.xi_dot = v_i * std::cos(state.interceptor.gamma);
    d.yi_dot = v_i * std::sin(state.interceptor.gamma);
    d.gamma_i_dot = state.a_i * std::cos(rel.theta_i) / v_i;
    d.speed_i_dot = state.a_i * std::sin(rel.theta_i);
    d.xt_dot = state.target.speed * std::cos(state.target.gamma);
    d.yt_dot = state.target.speed * std::sin(state.target.gamma);
    d.a_i_dot = a_i_rate;
    return d;
}

}  // namespace itpn
