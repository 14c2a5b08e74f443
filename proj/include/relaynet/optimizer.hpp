#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaynet/errors.hpp"
#include "relaynet/model.hpp"
#include "relaynet/quadrature.hpp"

namespace relaynet {

enum class Objective { MinDelay, MaxUtility };

inline const char* to_string(Objective o) {
    return o == Objective::MinDelay ? "min_delay" : "max_utility";
}

struct OptimizerConfig {
    double p_init = 0.5;
    double tol = 1e-8;  // on |Lambda(p)|
    int max_iters = 50;
    Objective objective = Objective::MaxUtility;
    InterferenceMode mode = InterferenceMode::Correlated;

    void validate() const {
        if (!(p_init > 0.0 && p_init < 1.0))
            throw DomainError("p_init must lie in (0, 1)");
        if (!(tol > 0.0 && tol < 1.0))
            throw DomainError("tol must lie in (0, 1)");
        if (max_iters <= 0)
            throw DomainError("max_iters must be positive");
    }
};

struct OptimizerIterate {
    double p = 0.0;
    double residual = 0.0;  // Lambda(p)
    double slope = 0.0;     // Lambda'(p)
    bool bisected = false;  // this point came from the bisection fallback
};

enum class OptimizerStatus { Converged, Boundary, Failed };

inline const char* to_string(OptimizerStatus s) {
    switch (s) {
    case OptimizerStatus::Converged: return "converged";
    case OptimizerStatus::Boundary: return "boundary";
    case OptimizerStatus::Failed: return "failed";
    }
    return "?";
}

struct OptimizerTrace {
    std::vector<OptimizerIterate> scan;      // bracket search
    std::vector<OptimizerIterate> iterates;  // Newton / bisection sequence
    bool converged = false;
    OptimizerStatus status = OptimizerStatus::Failed;
    double p_star = 0.0;
    int bisection_fallbacks = 0;
    std::string note;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, OptimizerTrace trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const OptimizerTrace& trace() const noexcept { return trace_; }

private:
    OptimizerTrace trace_;
};

/// The first-order optimality condition written as Lambda(p) = lhs - rhs.
/// With k = 1 (delay) or 3 (utility):
///   Correlated:   k/(lambda p) - [psi] - phi - p phi'
///   Uncorrelated: k/(lambda p) - [psi_u] - phi_u - p phi_u' - K ([1] + h(p))
/// where the bracketed terms belong to the utility condition only,
/// K = pi C(delta) (theta_rd/P̂_r)^delta and h(p) = (1 - p delta)/(1-p)^(2-delta).
/// Lambda is strictly decreasing on (0, 1), so its root is unique.
class OptimalityCondition {
public:
    struct Value {
        double residual;
        double slope;
    };

    OptimalityCondition(IntegrandContext geometry, double density, Objective objective,
                        InterferenceMode mode, QuadratureSpec spec = {})
        : ctx_(std::move(geometry)), density_(density), objective_(objective), mode_(mode),
          spec_(spec) {
        if (!(density_ > 0.0) || !std::isfinite(density_))
            throw DomainError("the optimality condition needs a positive interferer density");
    }

    Value evaluate(double p) const {
        if (!(p > 0.0 && p < 1.0))
            throw DomainError("Lambda(p) is defined for 0 < p < 1 only");
        IntegrandContext ctx = ctx_;
        ctx.transmit_prob = p;
        const double k = objective_ == Objective::MaxUtility ? 3.0 : 1.0;
        const bool utility = objective_ == Objective::MaxUtility;
        double residual = k / (density_ * p);
        double slope = -k / (density_ * p * p);
        if (mode_ == InterferenceMode::Correlated) {
            const CorrelatedIntegrals in = correlated_integrals(ctx, spec_);
            residual -= (utility ? in.psi : 0.0) + in.phi + p * in.phi_dp;
            slope -= 2.0 * in.phi_dp + p * in.phi_dp2;
        } else {
            const UncorrelatedIntegrals in = uncorrelated_integrals(ctx, spec_);
            const double delta = ctx.derived.delta;
            const double hop = aloha_disk_integral(ctx.derived.rd_coefficient(), delta);
            const double h = (1.0 - p * delta) / std::pow(1.0 - p, 2.0 - delta);
            const double dh = (1.0 - delta) * (2.0 - p * delta) / std::pow(1.0 - p, 3.0 - delta);
            residual -= (utility ? in.psi_u : 0.0) + in.phi_u + p * in.phi_u_dp +
                        hop * ((utility ? 1.0 : 0.0) + h);
            slope -= 2.0 * in.phi_u_dp + p * in.phi_u_dp2 + hop * dh;
        }
        return {residual, slope};
    }

    double residual(double p) const { return evaluate(p).residual; }
    double slope(double p) const { return evaluate(p).slope; }

private:
    IntegrandContext ctx_;
    double density_;
    Objective objective_;
    InterferenceMode mode_;
    QuadratureSpec spec_;
};

inline double lambda_fn(double p, Objective objective, InterferenceMode mode,
                        const IntegrandContext& geometry, double density,
                        const QuadratureSpec& spec = {}) {
    return OptimalityCondition(geometry, density, objective, mode, spec).residual(p);
}

inline double lambda_fn_prime(double p, Objective objective, InterferenceMode mode,
                              const IntegrandContext& geometry, double density,
                              const QuadratureSpec& spec = {}) {
    return OptimalityCondition(geometry, density, objective, mode, spec).slope(p);
}

/// Quadrature settings used inside the root search: Lambda must be resolved
/// well below `tol`, so the relative tolerance is tightened.
inline QuadratureSpec optimizer_quadrature(const QuadratureSpec& spec, double tol) {
    QuadratureSpec inner = spec;
    inner.rel_tol = std::min(spec.rel_tol, 1e-12);
    inner.abs_tol = std::min(spec.abs_tol, 1e-2 * tol);
    return inner;
}

/// Newton-Raphson on Lambda with a sign-change bracket: a step that leaves the
/// bracket (or a non-negative slope) is replaced by bisection.
inline OptimizerTrace optimize(const OptimizerConfig& config, const IntegrandContext& geometry,
                               double density, const QuadratureSpec& spec = {}) {
    config.validate();
    spec.validate();
    if (!(density >= 0.0) || !std::isfinite(density))
        throw DomainError("density must be finite and non-negative");

    OptimizerTrace trace;
    const bool no_interference =
        geometry.derived.sr_coefficient() == 0.0 && geometry.derived.rd_coefficient() == 0.0;
    if (density == 0.0 || no_interference) {
        trace.status = OptimizerStatus::Boundary;
        trace.p_star = 1.0;
        trace.note = density == 0.0 ? "no interferers: transmit in every slot"
                                    : "interference has no effect: transmit in every slot";
        return trace;
    }

    const OptimalityCondition condition(geometry, density, config.objective, config.mode,
                                        optimizer_quadrature(spec, config.tol));
    auto record = [&](std::vector<OptimizerIterate>& into, double p, bool bisected) {
        const auto v = condition.evaluate(p);
        into.push_back({p, v.residual, v.slope, bisected});
        return into.back();
    };

    // Bracket search. Lambda decreases, so look for the first negative value.
    constexpr std::array<double, 7> kScan = {1e-3, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0 - 1e-3};
    double lo = 0.0, hi = 1.0;
    bool have_hi = false;
    for (double p : kScan) {
        const auto it = record(trace.scan, p, false);
        if (it.residual > 0.0) {
            lo = p;
        } else {
            hi = p;
            have_hi = true;
            break;
        }
    }
    if (!have_hi) {
        for (double gap = 1e-4; gap >= 1e-9 && !have_hi; gap *= 0.1) {
            const auto it = record(trace.scan, 1.0 - gap, false);
            if (it.residual > 0.0)
                lo = 1.0 - gap;
            else {
                hi = 1.0 - gap;
                have_hi = true;
            }
        }
        if (!have_hi) {
            trace.status = OptimizerStatus::Boundary;
            trace.p_star = 1.0;
            trace.note = "no interior optimum: Lambda stays positive on (0, 1)";
            return trace;
        }
    }
    if (lo == 0.0) {
        bool have_lo = false;
        for (double p = 1e-4; p >= 1e-12 && !have_lo; p *= 0.1) {
            const auto it = record(trace.scan, p, false);
            if (it.residual > 0.0) {
                lo = p;
                have_lo = true;
            } else {
                hi = p;
            }
        }
        if (!have_lo)
            throw NonConvergenceError("Lambda is negative down to p = 1e-12", trace);
    }

    double p = config.p_init;
    bool bisected = false;
    if (!(p > lo && p < hi)) {
        p = 0.5 * (lo + hi);
        bisected = true;
        ++trace.bisection_fallbacks;
    }
    for (int iter = 0; iter < config.max_iters; ++iter) {
        const auto it = record(trace.iterates, p, bisected);
        if (std::abs(it.residual) <= config.tol) {
            trace.converged = true;
            trace.status = OptimizerStatus::Converged;
            trace.p_star = p;
            return trace;
        }
        if (it.residual > 0.0)
            lo = p;
        else
            hi = p;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            break;
        const double newton = p - it.residual / it.slope;
        bisected = !(it.slope < 0.0) || !std::isfinite(newton) || !(newton > lo && newton < hi);
        if (bisected) {
            p = 0.5 * (lo + hi);
            ++trace.bisection_fallbacks;
        } else {
            p = newton;
        }
    }
    trace.p_star = p;
    trace.note = "no root to the requested tolerance within max_iters";
    throw NonConvergenceError(trace.note, trace);
}

inline OptimizerTrace optimize(const OptimizerConfig& config, const RelayScenario& scenario,
                               double density, const QuadratureSpec& spec = {}) {
    return optimize(config, IntegrandContext::from(scenario, config.p_init), density, spec);
}

} // namespace relaynet
