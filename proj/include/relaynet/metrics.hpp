#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "relaynet/errors.hpp"
#include "relaynet/model.hpp"
#include "relaynet/quadrature.hpp"

namespace relaynet {

/// Mean local delay in slots. Stored through its logarithm so that very large
/// finite delays never overflow; the divergent p = 1 case is a distinct tag.
class LocalDelay {
public:
    static LocalDelay from_log(double log_slots) { return LocalDelay(log_slots, false); }
    static LocalDelay from_slots(double slots) {
        if (!(slots > 0.0))
            throw DomainError("a local delay must be positive");
        return LocalDelay(std::log(slots), false);
    }
    static LocalDelay infinite() { return LocalDelay(std::numeric_limits<double>::infinity(), true); }

    bool is_infinite() const { return infinite_; }
    /// Slots; +inf when the tag is set or the value exceeds double range.
    double slots() const { return infinite_ ? std::numeric_limits<double>::infinity() : std::exp(log_); }
    double log_slots() const { return log_; }

    /// Scaling keeps the tag.
    friend LocalDelay operator*(double factor, LocalDelay d) {
        if (!(factor > 0.0))
            throw DomainError("delays can only be scaled by a positive factor");
        return d.infinite_ ? d : from_log(d.log_ + std::log(factor));
    }

    friend bool operator<(const LocalDelay& a, const LocalDelay& b) {
        if (a.infinite_ || b.infinite_)
            return !a.infinite_ && b.infinite_;
        return a.log_ < b.log_;
    }
    friend bool operator<=(const LocalDelay& a, const LocalDelay& b) { return !(b < a); }
    friend bool operator>(const LocalDelay& a, const LocalDelay& b) { return b < a; }
    friend bool operator>=(const LocalDelay& a, const LocalDelay& b) { return !(a < b); }

private:
    LocalDelay(double log_slots, bool inf) : log_(log_slots), infinite_(inf) {}
    double log_;
    bool infinite_;
};

enum class Link { SourceRelay, RelayDestination };

/// The first-hop link formula. `AsPrinted` charges the first hop lambda*pi*psi_u,
/// which has no ALOHA factor; `AlohaThinned` uses lambda*p*psi_u, the form
/// that follows from thinning the interferers with probability p.
enum class SrLinkFormula { AsPrinted, AlohaThinned };

struct MetricReport {
    InterferenceMode mode = InterferenceMode::Correlated;
    double transmit_prob = 0.0;
    double success_prob = 0.0;
    LocalDelay mean_local_delay = LocalDelay::from_log(0.0);
    double utility = 0.0;
    double link_success_sr = 0.0;
    double link_success_rd = 0.0;
};

namespace detail {
inline void require_mode(const MacModel& mac, InterferenceMode mode, const char* op) {
    if (mac.mode != mode)
        throw DomainError(std::string(op) + " called with the wrong interference mode");
}
inline void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("transmit probability must lie in [0, 1]");
}
} // namespace detail

/// p * exp(-lambda p psi - B).
inline double success_prob_correlated(const MacModel& mac, const DerivedParams& derived,
                                      double psi_val) {
    detail::require_mode(mac, InterferenceMode::Correlated, "success_prob_correlated");
    const double p = mac.transmit_prob;
    detail::require_probability(p);
    if (p == 0.0)
        return 0.0;
    return p * std::exp(-mac.density * p * psi_val - derived.noise_term_b);
}

/// (1/p) * exp(lambda p phi + B); infinite at p = 1 whenever interferers exist.
inline LocalDelay delay_correlated(const MacModel& mac, const DerivedParams& derived,
                                   double phi_val) {
    detail::require_mode(mac, InterferenceMode::Correlated, "delay_correlated");
    const double p = mac.transmit_prob;
    detail::require_probability(p);
    if (p == 0.0)
        throw DomainError("no transmissions at p = 0: the delay is undefined");
    if (mac.density == 0.0)
        return LocalDelay::from_log(derived.noise_term_b - std::log(p));
    if (p == 1.0)
        return LocalDelay::infinite();
    return LocalDelay::from_log(mac.density * p * phi_val + derived.noise_term_b - std::log(p));
}

/// p * exp(-lambda p psi_u - lambda pi p C(delta) (theta_rd/P̂_r)^delta - B).
inline double success_prob_uncorrelated(const MacModel& mac, const DerivedParams& derived,
                                        double psi_u_val) {
    detail::require_mode(mac, InterferenceMode::Uncorrelated, "success_prob_uncorrelated");
    const double p = mac.transmit_prob;
    detail::require_probability(p);
    if (p == 0.0)
        return 0.0;
    const double second_hop = aloha_disk_integral(derived.rd_coefficient(), derived.delta);
    return p * std::exp(-mac.density * p * (psi_u_val + second_hop) - derived.noise_term_b);
}

/// (1/p) * exp(lambda p phi_u + lambda pi p C(delta) (theta_rd/P̂_r)^delta / (1-p)^(1-delta) + B).
inline LocalDelay delay_uncorrelated(const MacModel& mac, const DerivedParams& derived,
                                     double phi_u_val) {
    detail::require_mode(mac, InterferenceMode::Uncorrelated, "delay_uncorrelated");
    const double p = mac.transmit_prob;
    detail::require_probability(p);
    if (p == 0.0)
        throw DomainError("no transmissions at p = 0: the delay is undefined");
    if (mac.density == 0.0)
        return LocalDelay::from_log(derived.noise_term_b - std::log(p));
    if (p == 1.0)
        return LocalDelay::infinite();
    const double second_hop = aloha_disk_integral(derived.rd_coefficient(), derived.delta) /
                              std::pow(1.0 - p, 1.0 - derived.delta);
    return LocalDelay::from_log(mac.density * p * (phi_u_val + second_hop) + derived.noise_term_b -
                                std::log(p));
}

/// Per-hop SINR success probability (no channel-access factor). Identical in
/// both correlation modes: each receiver alone sees a p-thinned PPP.
inline double link_success(const MacModel& mac, const DerivedParams& derived, Link which,
                           double psi_u_val, SrLinkFormula formula = SrLinkFormula::AsPrinted) {
    const double p = mac.transmit_prob;
    detail::require_probability(p);
    const double lambda = mac.density;
    if (which == Link::RelayDestination) {
        const double coeff = derived.rd_coefficient();
        return std::exp(-derived.n_hat * coeff -
                        lambda * p * aloha_disk_integral(coeff, derived.delta));
    }
    const double interference = formula == SrLinkFormula::AsPrinted
                                    ? lambda * std::numbers::pi * psi_u_val
                                    : lambda * p * psi_u_val;
    return std::exp(-derived.n_hat * derived.sr_coefficient() - interference);
}

/// p * P(C) / D(p); zero when the delay diverges.
inline double utility(double transmit_prob, double success_prob, const LocalDelay& delay) {
    if (delay.is_infinite() || transmit_prob == 0.0 || success_prob == 0.0)
        return 0.0;
    return std::exp(std::log(transmit_prob) + std::log(success_prob) - delay.log_slots());
}

/// Integral values a report is built from; computed once per (scenario, p).
struct MetricIntegrals {
    double psi = 0.0;
    double phi = 0.0;    // unused (0) when p = 1 or lambda = 0
    double psi_u = 0.0;
    double phi_u = 0.0;  // unused (0) when p = 1 or lambda = 0
};

inline MetricIntegrals compute_metric_integrals(const RelayScenario& scenario, const MacModel& mac,
                                                const QuadratureSpec& spec = {}) {
    const auto ctx = IntegrandContext::from(scenario, mac.transmit_prob);
    MetricIntegrals m;
    m.psi_u = psi_u(ctx, spec);  // the sr link needs it in both modes
    const bool phi_needed = mac.density > 0.0 && mac.transmit_prob > 0.0 && mac.transmit_prob < 1.0;
    if (mac.mode == InterferenceMode::Correlated) {
        if (phi_needed) {
            const auto r = integrate_plane<2>({Integrand::Psi, Integrand::Phi}, ctx, spec);
            m.psi = r[0].value;
            m.phi = r[1].value;
        } else {
            m.psi = psi(ctx, spec);
        }
    } else if (phi_needed) {
        m.phi_u = phi_u(ctx, spec);
    }
    return m;
}

inline MetricReport assemble_report(const MacModel& mac, const DerivedParams& derived,
                                    const MetricIntegrals& integrals,
                                    SrLinkFormula formula = SrLinkFormula::AsPrinted) {
    MetricReport r;
    r.mode = mac.mode;
    r.transmit_prob = mac.transmit_prob;
    if (mac.mode == InterferenceMode::Correlated) {
        r.success_prob = success_prob_correlated(mac, derived, integrals.psi);
        r.mean_local_delay = delay_correlated(mac, derived, integrals.phi);
    } else {
        r.success_prob = success_prob_uncorrelated(mac, derived, integrals.psi_u);
        r.mean_local_delay = delay_uncorrelated(mac, derived, integrals.phi_u);
    }
    r.utility = utility(mac.transmit_prob, r.success_prob, r.mean_local_delay);
    r.link_success_sr = link_success(mac, derived, Link::SourceRelay, integrals.psi_u, formula);
    r.link_success_rd = link_success(mac, derived, Link::RelayDestination, integrals.psi_u, formula);
    return r;
}

/// All analytic measures for one (scenario, MAC) point.
inline MetricReport evaluate_metrics(const RelayScenario& scenario, const MacModel& mac,
                                     const QuadratureSpec& spec = {},
                                     SrLinkFormula formula = SrLinkFormula::AsPrinted) {
    mac.validate();
    const DerivedParams derived = derive_params(scenario);
    return assemble_report(mac, derived, compute_metric_integrals(scenario, mac, spec), formula);
}

} // namespace relaynet
