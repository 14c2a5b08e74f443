#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "relaynet/detail/cubature.hpp"
#include "relaynet/errors.hpp"
#include "relaynet/model.hpp"
#include "relaynet/rng.hpp"

namespace relaynet {

enum class DelayEstimator { SemiAnalytic, Empirical };

/// How the uncorrelated mode draws its two interferer sets.
/// IndependentFields: relay and destination hear independent PPPs of the same
/// intensity (the setting in which the uncorrelated closed forms are exact).
/// SharedField: one PPP, with independent ALOHA activity per receiver.
enum class UncorrelatedSampling { IndependentFields, SharedField };

struct SimConfig {
    double sim_radius = 50.0;
    std::size_t trials = 10'000;
    std::size_t slots_per_trial = 10;
    std::uint64_t seed = 1;
    DelayEstimator delay_estimator = DelayEstimator::SemiAnalytic;
    std::size_t empirical_slot_cap = 1'000'000;
    unsigned threads = 0;  // 0: hardware concurrency
    UncorrelatedSampling uncorrelated_sampling = UncorrelatedSampling::IndependentFields;

    void validate(const RelayScenario& scenario) const {
        const double reach = std::max(distance(scenario.source, scenario.destination),
                                      distance(scenario.relay, scenario.destination));
        if (!(sim_radius >= 3.0 * reach) || !std::isfinite(sim_radius))
            throw DomainError("sim_radius must be at least 3x the farthest node distance");
        if (trials < 100)
            throw DomainError("at least 100 trials are required");
        if (trials > std::numeric_limits<std::uint32_t>::max())
            throw DomainError("too many trials for the stream counter");
        if (slots_per_trial == 0)
            throw DomainError("slots_per_trial must be positive");
        if (empirical_slot_cap == 0)
            throw DomainError("empirical_slot_cap must be positive");
    }
};

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials_used = 0;
    InterferenceMode mode = InterferenceMode::Correlated;
    std::size_t censored = 0;  // Empirical delay only: trials that hit the slot cap
};

/// Slot-level success estimates from one batch of realizations.
struct SlotEstimates {
    SimEstimate end_to_end;
    SimEstimate link_sr;
    SimEstimate link_rd;
};

// --- point processes ----------------------------------------------------------

/// Homogeneous PPP on the annulus inner <= |x - centre| < outer.
inline std::vector<Point2> sample_ppp_annulus(double density, double inner, double outer,
                                              RngStream& rng, Point2 centre = {}) {
    if (!(density >= 0.0) || !std::isfinite(density))
        throw DomainError("density must be finite and non-negative");
    if (!(inner >= 0.0 && outer >= inner))
        throw DomainError("invalid annulus");
    std::vector<Point2> pts;
    const double area = std::numbers::pi * (outer * outer - inner * inner);
    if (density == 0.0 || area == 0.0)
        return pts;
    std::poisson_distribution<long long> count(density * area);
    const long long n = count(rng);
    pts.reserve(static_cast<std::size_t>(n));
    const double in2 = inner * inner, span2 = outer * outer - in2;
    for (long long i = 0; i < n; ++i) {
        const double rho = std::sqrt(in2 + span2 * rng.uniform());
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        pts.push_back({centre.x + rho * std::cos(angle), centre.y + rho * std::sin(angle)});
    }
    return pts;
}

/// Homogeneous PPP of the given intensity on the disk |x - centre| < radius.
inline std::vector<Point2> sample_ppp(double density, double radius, RngStream& rng,
                                      Point2 centre = {}) {
    return sample_ppp_annulus(density, 0.0, radius, rng, centre);
}

namespace detail {
// Lane layout of the per-trial streams: low lanes index slots, the high bits
// tag field shells.
inline constexpr std::uint32_t kRelayFieldLane = 0x4000'0000u;
inline constexpr std::uint32_t kDestinationFieldLane = 0x8000'0000u;
inline constexpr std::uint32_t kMaxSlotLane = 0x4000'0000u;
} // namespace detail

/// PPP on a disk built from unit-width shells, each with its own stream, and
/// the outermost shell cut at `radius`. Realizations for two radii agree
/// inside the smaller disk.
inline std::vector<Point2> sample_nested_ppp(double density, double radius, std::uint64_t seed,
                                             std::uint32_t stream, std::uint32_t lane_base,
                                             Point2 centre = {}) {
    std::vector<Point2> pts;
    if (density == 0.0)
        return pts;
    const auto shells = static_cast<std::uint32_t>(std::ceil(radius));
    for (std::uint32_t k = 0; k < shells; ++k) {
        RngStream rng(seed, stream, lane_base + k);
        for (const Point2& x : sample_ppp_annulus(density, k, k + 1.0, rng, centre))
            if (distance(x, centre) < radius)
                pts.push_back(x);
    }
    return pts;
}

/// The interferers of one realization. When `independent` is false both
/// receivers hear `points`; otherwise the destination hears
/// `destination_points`.
struct InterfererField {
    std::vector<Point2> points;
    std::vector<Point2> destination_points;
    bool independent = false;

    std::span<const Point2> relay_side() const { return points; }
    std::span<const Point2> destination_side() const {
        return independent ? std::span<const Point2>(destination_points)
                           : std::span<const Point2>(points);
    }
};

inline bool independent_fields(InterferenceMode mode, UncorrelatedSampling sampling) {
    return mode == InterferenceMode::Uncorrelated &&
           sampling == UncorrelatedSampling::IndependentFields;
}

inline InterfererField sample_field(const RelayScenario& scenario, double density,
                                    InterferenceMode mode, const SimConfig& sim,
                                    std::uint32_t trial) {
    InterfererField f;
    f.points = sample_nested_ppp(density, sim.sim_radius, sim.seed, trial, detail::kRelayFieldLane,
                                 scenario.destination);
    if (independent_fields(mode, sim.uncorrelated_sampling)) {
        f.independent = true;
        f.destination_points = sample_nested_ppp(density, sim.sim_radius, sim.seed, trial,
                                                 detail::kDestinationFieldLane,
                                                 scenario.destination);
    }
    return f;
}

// --- slots ----------------------------------------------------------------------

struct SlotOutcome {
    bool sr_ok = false;
    bool rd_ok = false;
    bool accessed = false;

    bool success() const { return accessed && sr_ok && rd_ok; }
};

namespace detail {

/// Path gains from each interferer to the two receivers, computed once per
/// realization.
struct FieldGains {
    std::vector<double> to_relay;        // l(x, r) for relay-side interferers
    std::vector<double> to_destination;  // l(x, d) for destination-side interferers
    bool shared = true;                  // same interferers on both sides
};

inline FieldGains field_gains(const InterfererField& field, const RelayScenario& s) {
    FieldGains g;
    g.shared = !field.independent;
    const double alpha = s.path_loss_exp;
    for (const Point2& x : field.relay_side())
        g.to_relay.push_back(std::pow(distance(x, s.relay), -alpha));
    for (const Point2& x : field.destination_side())
        g.to_destination.push_back(std::pow(distance(x, s.destination), -alpha));
    return g;
}

struct LinkBudget {
    double sr_signal;  // P̂_s * l(s, r)
    double rd_signal;  // P̂_r * l(r, d)
    double n_hat;
    double theta;
};

inline LinkBudget link_budget(const RelayScenario& s, const DerivedParams& d) {
    return {d.p_hat_s * std::pow(distance(s.source, s.relay), -d.alpha),
            d.p_hat_r * std::pow(distance(s.relay, s.destination), -d.alpha), d.n_hat,
            s.sinr_threshold};
}

/// One slot. Draw order: access, h_sr, h_rd, then interferers, so modes and
/// radii that share a stream see identical outcomes when interferers agree.
inline SlotOutcome run_slot(const FieldGains& g, const LinkBudget& lb, double p,
                            InterferenceMode mode, RngStream& rng) {
    SlotOutcome out;
    out.accessed = rng.bernoulli(p);
    const double h_sr = rng.exponential();
    const double h_rd = rng.exponential();
    double i_r = 0.0, i_d = 0.0;
    if (g.shared && mode == InterferenceMode::Correlated) {
        for (std::size_t k = 0; k < g.to_relay.size(); ++k) {
            if (rng.bernoulli(p)) {
                i_r += rng.exponential() * g.to_relay[k];
                i_d += rng.exponential() * g.to_destination[k];
            }
        }
    } else if (g.shared) {
        for (std::size_t k = 0; k < g.to_relay.size(); ++k) {
            if (rng.bernoulli(p))
                i_r += rng.exponential() * g.to_relay[k];
            if (rng.bernoulli(p))
                i_d += rng.exponential() * g.to_destination[k];
        }
    } else {
        for (double l : g.to_relay)
            if (rng.bernoulli(p))
                i_r += rng.exponential() * l;
        for (double l : g.to_destination)
            if (rng.bernoulli(p))
                i_d += rng.exponential() * l;
    }
    out.sr_ok = lb.sr_signal * h_sr > lb.theta * (lb.n_hat + i_r);
    out.rd_ok = lb.rd_signal * h_rd > lb.theta * (lb.n_hat + i_d);
    return out;
}

} // namespace detail

/// Simulates one slot on a fixed realization: channel access, Rayleigh fades
/// and interferer activity are drawn from `rng`. Interferers share one
/// activity draw in the correlated mode and draw independently per receiver
/// otherwise.
inline SlotOutcome slot_success(const InterfererField& field, const RelayScenario& scenario,
                                const DerivedParams& derived, double p, InterferenceMode mode,
                                RngStream& rng) {
    if (field.independent && mode == InterferenceMode::Correlated)
        throw DomainError("a correlated slot needs a single shared interferer field");
    return detail::run_slot(detail::field_gains(field, scenario),
                            detail::link_budget(scenario, derived), p, mode, rng);
}

/// log P(C | Phi): the end-to-end success probability of one slot given the
/// interferer positions, averaged over fading and ALOHA activity.
inline double log_conditional_success(const InterfererField& field, const RelayScenario& scenario,
                                      const DerivedParams& derived, double p,
                                      InterferenceMode mode) {
    if (!(p > 0.0 && p <= 1.0))
        throw DomainError("conditional success requires 0 < p <= 1");
    const double a = derived.sr_coefficient(), b = derived.rd_coefficient();
    const double alpha = derived.alpha;
    auto keep_r = [&](Point2 x) { return 1.0 / (1.0 + a * std::pow(distance(x, scenario.relay), -alpha)); };
    auto keep_d = [&](Point2 x) {
        return 1.0 / (1.0 + b * std::pow(distance(x, scenario.destination), -alpha));
    };
    detail::CompensatedSum log_sum;
    log_sum.add(std::log(p) - derived.noise_term_b);
    if (mode == InterferenceMode::Correlated) {
        if (field.independent)
            throw DomainError("a correlated realization needs a single shared interferer field");
        for (const Point2& x : field.points)
            log_sum.add(std::log1p(-p * (1.0 - keep_r(x) * keep_d(x))));
    } else {
        for (const Point2& x : field.relay_side())
            log_sum.add(std::log1p(-p * (1.0 - keep_r(x))));
        for (const Point2& x : field.destination_side())
            log_sum.add(std::log1p(-p * (1.0 - keep_d(x))));
    }
    return log_sum.value();
}

inline double conditional_success(const InterfererField& field, const RelayScenario& scenario,
                                  const DerivedParams& derived, double p, InterferenceMode mode) {
    return std::exp(log_conditional_success(field, scenario, derived, p, mode));
}

/// Slots until the first end-to-end success on a fixed realization, capped.
/// Slot k draws from stream lane k, so a given (seed, stream) replays exactly.
inline std::size_t empirical_delay_sample(const InterfererField& field,
                                          const RelayScenario& scenario,
                                          const DerivedParams& derived, double p,
                                          InterferenceMode mode, std::uint64_t seed,
                                          std::uint32_t stream, std::size_t cap) {
    const auto gains = detail::field_gains(field, scenario);
    const auto budget = detail::link_budget(scenario, derived);
    const std::size_t limit = std::min<std::size_t>(cap, detail::kMaxSlotLane);
    for (std::size_t k = 0; k < limit; ++k) {
        RngStream rng(seed, stream, static_cast<std::uint32_t>(k));
        if (detail::run_slot(gains, budget, p, mode, rng).success())
            return k + 1;
    }
    return limit;
}

namespace detail {

/// Runs `fn(trial)` for every trial and returns the results in trial order.
/// The assignment of trials to threads does not affect the output.
template <class T, class Fn>
std::vector<T> run_trials(std::size_t trials, unsigned threads, Fn&& fn) {
    std::vector<T> out(trials);
    unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n = static_cast<unsigned>(std::min<std::size_t>(n, trials));
    if (n <= 1) {
        for (std::size_t t = 0; t < trials; ++t)
            out[t] = fn(t);
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < trials; t += n)
                out[t] = fn(t);
        });
    pool.clear();  // join
    return out;
}

inline SimEstimate summarise(const std::vector<double>& values, InterferenceMode mode) {
    CompensatedSum sum;
    for (double v : values)
        sum.add(v);
    const double n = static_cast<double>(values.size());
    const double mean = sum.value() / n;
    CompensatedSum sq;
    for (double v : values)
        sq.add((v - mean) * (v - mean));
    const double var = values.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), values.size(), mode, 0};
}

} // namespace detail

/// Success rates from trials x slots_per_trial simulated slots. Standard
/// errors come from the spread of the per-realization means, which accounts
/// for the correlation of slots sharing one interferer field.
inline SlotEstimates estimate_slots(const RelayScenario& scenario, const MacModel& mac,
                                    const SimConfig& sim) {
    mac.validate();
    sim.validate(scenario);
    if (sim.slots_per_trial > detail::kMaxSlotLane)
        throw DomainError("slots_per_trial exceeds the stream lane range");
    const DerivedParams derived = derive_params(scenario);
    const auto budget = detail::link_budget(scenario, derived);
    struct Rates {
        double e2e = 0, sr = 0, rd = 0;
    };
    const auto rates = detail::run_trials<Rates>(sim.trials, sim.threads, [&](std::size_t t) {
        const auto trial = static_cast<std::uint32_t>(t);
        const auto field = sample_field(scenario, mac.density, mac.mode, sim, trial);
        const auto gains = detail::field_gains(field, scenario);
        std::size_t e2e = 0, sr = 0, rd = 0;
        for (std::size_t k = 0; k < sim.slots_per_trial; ++k) {
            RngStream rng(sim.seed, trial, static_cast<std::uint32_t>(k));
            const auto o = detail::run_slot(gains, budget, mac.transmit_prob, mac.mode, rng);
            e2e += o.success();
            sr += o.sr_ok;
            rd += o.rd_ok;
        }
        const double n = static_cast<double>(sim.slots_per_trial);
        return Rates{e2e / n, sr / n, rd / n};
    });
    std::vector<double> e2e, sr, rd;
    e2e.reserve(rates.size());
    sr.reserve(rates.size());
    rd.reserve(rates.size());
    for (const Rates& r : rates) {
        e2e.push_back(r.e2e);
        sr.push_back(r.sr);
        rd.push_back(r.rd);
    }
    return {detail::summarise(e2e, mac.mode), detail::summarise(sr, mac.mode),
            detail::summarise(rd, mac.mode)};
}

inline SimEstimate estimate_success(const RelayScenario& scenario, const MacModel& mac,
                                    const SimConfig& sim) {
    return estimate_slots(scenario, mac, sim).end_to_end;
}

/// Mean local delay E[1/P(C | Phi)]. SemiAnalytic evaluates the conditional
/// success of each realization exactly; Empirical counts slots to the first
/// success (capped, with the number of capped trials reported).
inline SimEstimate estimate_delay(const RelayScenario& scenario, const MacModel& mac,
                                  const SimConfig& sim) {
    mac.validate();
    sim.validate(scenario);
    if (mac.transmit_prob >= 1.0 && mac.density > 0.0)
        throw DomainError("the mean local delay diverges at p = 1");
    const DerivedParams derived = derive_params(scenario);
    if (sim.delay_estimator == DelayEstimator::SemiAnalytic) {
        const auto values = detail::run_trials<double>(sim.trials, sim.threads, [&](std::size_t t) {
            const auto field =
                sample_field(scenario, mac.density, mac.mode, sim, static_cast<std::uint32_t>(t));
            return std::exp(-log_conditional_success(field, scenario, derived, mac.transmit_prob,
                                                     mac.mode));
        });
        return detail::summarise(values, mac.mode);
    }
    const auto counts = detail::run_trials<double>(sim.trials, sim.threads, [&](std::size_t t) {
        const auto trial = static_cast<std::uint32_t>(t);
        const auto field = sample_field(scenario, mac.density, mac.mode, sim, trial);
        return static_cast<double>(empirical_delay_sample(field, scenario, derived,
                                                          mac.transmit_prob, mac.mode, sim.seed,
                                                          trial, sim.empirical_slot_cap));
    });
    SimEstimate est = detail::summarise(counts, mac.mode);
    const double cap = static_cast<double>(std::min<std::size_t>(sim.empirical_slot_cap, detail::kMaxSlotLane));
    est.censored = static_cast<std::size_t>(std::count(counts.begin(), counts.end(), cap));
    return est;
}

} // namespace relaynet
