#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "relaynet/errors.hpp"

namespace relaynet {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
    double norm_squared() const { return x * x + y * y; }

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2, Point2) = default;
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

/// Which active-interferer sets the relay and the destination hear in a slot.
/// Correlated: one ALOHA-thinned set shared by both receivers.
/// Uncorrelated: the two receivers see independent interferer sets.
enum class InterferenceMode { Correlated, Uncorrelated };

inline const char* to_string(InterferenceMode mode) {
    return mode == InterferenceMode::Correlated ? "IC" : "IU";
}

/// Geometry, transmit powers (linear units), noise and decoding threshold of
/// the source -> relay -> destination chain.
struct RelayScenario {
    Point2 source{2.0, 0.0};
    Point2 relay{1.0, 0.0};
    Point2 destination{0.0, 0.0};
    double power_source = 1.0;
    double power_relay = 1.0;
    double power_interferer = 1.0;
    double noise_psd = 1.0;
    double path_loss_exp = 4.0;
    double sinr_threshold = 1.0;

    void validate() const {
        auto finite = [](Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); };
        if (!finite(source) || !finite(relay) || !finite(destination))
            throw DomainError("node coordinates must be finite");
        if (source == relay)
            throw DomainError("source and relay coincide (singular path loss)");
        if (relay == destination)
            throw DomainError("relay and destination coincide (singular path loss)");
        if (!(power_source > 0.0) || !(power_relay > 0.0) || !(power_interferer > 0.0))
            throw DomainError("transmit powers must be positive");
        if (!(noise_psd >= 0.0) || !std::isfinite(noise_psd))
            throw DomainError("noise_psd must be finite and non-negative");
        if (!(path_loss_exp > 2.0) || !std::isfinite(path_loss_exp))
            throw DomainError("path_loss_exp must exceed 2");
        if (!(sinr_threshold > 0.0) || !std::isfinite(sinr_threshold))
            throw DomainError("sinr_threshold must be positive");
    }
};

/// Normalised quantities shared by every closed form.
struct DerivedParams {
    double p_hat_s = 0.0;   // P_s / P_x
    double p_hat_r = 0.0;   // P_r / P_x
    double n_hat = 0.0;     // N_0 / P_x
    double theta_sr = 0.0;  // theta * |s - r|^alpha
    double theta_rd = 0.0;  // theta * |r - d|^alpha
    double noise_term_b = 0.0;
    double alpha = 0.0;
    double delta = 0.0;     // 2 / alpha
    double c_delta = 0.0;   // 1 / sinc(delta)

    /// theta_sr / P̂_s: interference sensitivity of the first hop.
    double sr_coefficient() const { return theta_sr / p_hat_s; }
    /// theta_rd / P̂_r: interference sensitivity of the second hop.
    double rd_coefficient() const { return theta_rd / p_hat_r; }
};

/// ALOHA medium access: transmit probability, interferer intensity and
/// interference correlation mode.
struct MacModel {
    double transmit_prob = 0.5;
    double density = 0.0;
    InterferenceMode mode = InterferenceMode::Correlated;

    void validate() const {
        if (!(transmit_prob > 0.0 && transmit_prob <= 1.0))
            throw DomainError("transmit_prob must lie in (0, 1]");
        if (!(density >= 0.0) || !std::isfinite(density))
            throw DomainError("density must be finite and non-negative");
    }
};

/// C(delta) = pi*delta / sin(pi*delta), defined on 0 < delta < 1.
inline double inverse_sinc(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("inverse_sinc requires 0 < delta < 1");
    const double x = std::numbers::pi * delta;
    return x / std::sin(x);
}

inline double path_loss(Point2 a, Point2 b, double alpha) {
    if (!(alpha > 2.0))
        throw DomainError("path loss exponent must exceed 2");
    const double d = distance(a, b);
    if (d == 0.0)
        throw DomainError("path loss is singular for coincident points");
    return std::pow(d, -alpha);
}

inline DerivedParams derive_params(const RelayScenario& s) {
    s.validate();
    DerivedParams d;
    d.alpha = s.path_loss_exp;
    d.p_hat_s = s.power_source / s.power_interferer;
    d.p_hat_r = s.power_relay / s.power_interferer;
    d.n_hat = s.noise_psd / s.power_interferer;
    d.theta_sr = s.sinr_threshold * std::pow(distance(s.source, s.relay), d.alpha);
    d.theta_rd = s.sinr_threshold * std::pow(distance(s.relay, s.destination), d.alpha);
    d.noise_term_b = d.n_hat * (d.theta_sr / d.p_hat_s + d.theta_rd / d.p_hat_r);
    d.delta = 2.0 / d.alpha;
    d.c_delta = inverse_sinc(d.delta);
    return d;
}

/// The reference chain: s = (2,0), d = origin, relay on the axis, all powers
/// 5 dB (10^0.5 linear), N_0 = 1, alpha = 4, theta = 1.
inline RelayScenario reference_scenario(double relay_x = 1.0) {
    RelayScenario s;
    const double five_db = std::pow(10.0, 0.5);
    s.relay = {relay_x, 0.0};
    s.power_source = s.power_relay = s.power_interferer = five_db;
    return s;
}

} // namespace relaynet
