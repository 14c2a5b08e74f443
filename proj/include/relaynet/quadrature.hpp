#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relaynet/detail/cubature.hpp"
#include "relaynet/detail/tail.hpp"
#include "relaynet/errors.hpp"
#include "relaynet/model.hpp"

namespace relaynet {

/// Controls for the planar integrals. The plane is integrated numerically on
/// the disk of radius `truncation_radius` and the remainder is added from a
/// far-field expansion.
struct QuadratureSpec {
    double truncation_radius = 50.0;
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    std::size_t max_subdivisions = 1'000'000;

    void validate() const {
        if (!(truncation_radius > 0.0) || !std::isfinite(truncation_radius))
            throw DomainError("truncation_radius must be positive");
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw DomainError("rel_tol must lie in (0, 1)");
        if (!(abs_tol > 0.0 && abs_tol < 1.0))
            throw DomainError("abs_tol must lie in (0, 1)");
        if (max_subdivisions == 0)
            throw DomainError("max_subdivisions must be positive");
    }
};

/// Everything an integrand needs: hop coefficients, the two receiver
/// positions, and the ALOHA probability (phi-type integrands only).
struct IntegrandContext {
    DerivedParams derived;
    Point2 relay{1.0, 0.0};
    Point2 destination{0.0, 0.0};
    double transmit_prob = 0.5;

    static IntegrandContext from(const RelayScenario& scenario, double transmit_prob) {
        return {derive_params(scenario), scenario.relay, scenario.destination, transmit_prob};
    }
};

/// The integrand families. With A = theta_sr*l(x,r)/P̂_s, B = theta_rd*l(x,d)/P̂_r,
/// f = (1+A)(1+B) - 1, g = A and q = 1 - p:
///   Psi      1 - 1/(1+f)            PsiU     g/(1+g)
///   Phi      f/(1+q f)              PhiU     g/(1+q g)
///   PhiDp    (f/(1+q f))^2          PhiUDp   (g/(1+q g))^2
///   PhiDp2   2 (f/(1+q f))^3        PhiUDp2  2 (g/(1+q g))^3
/// The Dp/Dp2 families are the first and second p-derivatives of Phi/PhiU.
enum class Integrand { Psi, Phi, PhiDp, PhiDp2, PsiU, PhiU, PhiUDp, PhiUDp2 };

inline const char* to_string(Integrand i) {
    switch (i) {
    case Integrand::Psi: return "psi";
    case Integrand::Phi: return "phi";
    case Integrand::PhiDp: return "phi_dp";
    case Integrand::PhiDp2: return "phi_dp2";
    case Integrand::PsiU: return "psi_u";
    case Integrand::PhiU: return "phi_u";
    case Integrand::PhiUDp: return "phi_u_dp";
    case Integrand::PhiUDp2: return "phi_u_dp2";
    }
    return "?";
}

inline bool depends_on_p(Integrand i) { return i != Integrand::Psi && i != Integrand::PsiU; }
inline bool relay_hop_only(Integrand i) {
    return i == Integrand::PsiU || i == Integrand::PhiU || i == Integrand::PhiUDp ||
           i == Integrand::PhiUDp2;
}

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t cells = 0;
};

namespace detail {

/// |v|^alpha given |v|^2, with a fast path for the common alpha = 4.
inline double pow_alpha_from_squared(double r2, double alpha) {
    if (alpha == 4.0)
        return r2 * r2;
    return std::pow(r2, 0.5 * alpha);
}

/// Evaluates one family from the hop fractions. `a_frac` = A/(1+A) and
/// `a_keep` = 1/(1+A) are passed separately so that neither 1 - a_keep nor
/// 1 - p*m suffers cancellation.
inline double family_value(Integrand family, double a_frac, double a_keep, double b_frac,
                           double b_keep, double p, double q) {
    double m, den;
    if (relay_hop_only(family)) {
        m = a_frac;
        den = q + p * a_keep;
    } else {
        m = a_frac + b_frac - a_frac * b_frac;
        den = q + p * a_keep * b_keep;
    }
    switch (family) {
    case Integrand::Psi:
    case Integrand::PsiU:
        return m;
    case Integrand::Phi:
    case Integrand::PhiU:
        return m / den;
    case Integrand::PhiDp:
    case Integrand::PhiUDp: {
        const double v = m / den;
        return v * v;
    }
    case Integrand::PhiDp2:
    case Integrand::PhiUDp2: {
        const double v = m / den;
        return 2.0 * v * v * v;
    }
    }
    return 0.0;
}

inline double hop_fraction(double coeff, double dist_alpha) {
    return coeff == 0.0 ? 0.0 : coeff / (dist_alpha + coeff);
}
inline double hop_keep(double coeff, double dist_alpha) {
    return coeff == 0.0 ? 1.0 : dist_alpha / (dist_alpha + coeff);
}

inline TaylorCoefficients taylor_coefficients(Integrand family, double q) {
    TaylorCoefficients c{};
    switch (family) {
    case Integrand::Psi:
        c[1][0] = c[0][1] = 1.0;
        c[2][0] = c[1][1] = c[0][2] = -1.0;
        c[3][0] = c[2][1] = c[1][2] = c[0][3] = 1.0;
        break;
    case Integrand::Phi:
        c[1][0] = c[0][1] = 1.0;
        c[2][0] = c[0][2] = -q;
        c[1][1] = 1.0 - 2.0 * q;
        c[3][0] = c[0][3] = q * q;
        c[2][1] = c[1][2] = -2.0 * q + 3.0 * q * q;
        break;
    case Integrand::PhiDp:
        c[2][0] = c[0][2] = 1.0;
        c[1][1] = 2.0;
        c[3][0] = c[0][3] = -2.0 * q;
        c[2][1] = c[1][2] = 2.0 - 6.0 * q;
        break;
    case Integrand::PhiDp2:
        c[3][0] = c[0][3] = 2.0;
        c[2][1] = c[1][2] = 6.0;
        break;
    case Integrand::PsiU:
        c[1][0] = 1.0;
        c[2][0] = -1.0;
        c[3][0] = 1.0;
        break;
    case Integrand::PhiU:
        c[1][0] = 1.0;
        c[2][0] = -q;
        c[3][0] = q * q;
        break;
    case Integrand::PhiUDp:
        c[2][0] = 1.0;
        c[3][0] = -2.0 * q;
        break;
    case Integrand::PhiUDp2:
        c[3][0] = 2.0;
        break;
    }
    return c;
}

inline void check_transmit_prob(Integrand family, double p) {
    if (depends_on_p(family) && !(p >= 0.0 && p < 1.0))
        throw DomainError(std::string(to_string(family)) +
                          " requires 0 <= p < 1 (the integral diverges at p = 1)");
}

inline void check_tail_validity(double a, double b, double alpha, double offset, double radius) {
    const double reach = radius - offset;
    if (!(reach > 0.0) || std::max(a, b) * std::pow(reach, -alpha) > 0.25)
        throw DomainError("truncation_radius too small for the far-field expansion");
}

inline void check_accuracy(const char* what, double value, double error, bool converged,
                           const QuadratureSpec& spec) {
    if (!converged || error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value)))
        throw AccuracyError(std::string(what) + ": requested accuracy not reached", value, error);
}

} // namespace detail

/// Generic planar quadrature of several integrand families on one adaptive
/// mesh. Polar coordinates are centred midway between relay and destination,
/// with both receivers on cell corners so no node lands on a singular point.
template <std::size_t N>
std::array<QuadratureResult, N> integrate_plane(const std::array<Integrand, N>& families,
                                                const IntegrandContext& ctx,
                                                const QuadratureSpec& spec) {
    spec.validate();
    const double p = ctx.transmit_prob;
    for (Integrand f : families)
        detail::check_transmit_prob(f, p);
    const double q = 1.0 - p;
    const double a = ctx.derived.sr_coefficient();
    const double b = ctx.derived.rd_coefficient();
    const double alpha = ctx.derived.alpha;
    if (!(alpha > 2.0))
        throw DomainError("path loss exponent must exceed 2");
    if (ctx.relay == ctx.destination)
        throw DomainError("relay and destination coincide");

    const Point2 centre = 0.5 * (ctx.relay + ctx.destination);
    const double offset = 0.5 * distance(ctx.relay, ctx.destination);
    const double radius = spec.truncation_radius;
    detail::check_tail_validity(a, b, alpha, offset, radius);

    // Radial breaks refine geometrically away from the ring through r and d.
    std::vector<double> rho_breaks{0.0};
    for (double r : {0.5 * offset, offset, 1.5 * offset, 2.0 * offset})
        if (r < radius)
            rho_breaks.push_back(r);
    for (double r = 4.0 * offset; r < radius; r *= 2.0)
        rho_breaks.push_back(r);
    rho_breaks.push_back(radius);

    const Point2 to_relay = ctx.relay - centre;
    const double theta0 = std::atan2(to_relay.y, to_relay.x);
    constexpr int kSectors = 8;
    std::vector<detail::Rect> cells;
    for (std::size_t i = 0; i + 1 < rho_breaks.size(); ++i)
        for (int k = 0; k < kSectors; ++k)
            cells.push_back({rho_breaks[i], rho_breaks[i + 1],
                             theta0 + 2.0 * std::numbers::pi * k / kSectors,
                             theta0 + 2.0 * std::numbers::pi * (k + 1) / kSectors});

    auto integrand = [&](double rho, double theta) {
        const Point2 x{centre.x + rho * std::cos(theta), centre.y + rho * std::sin(theta)};
        const double ta = detail::pow_alpha_from_squared((x - ctx.relay).norm_squared(), alpha);
        const double tb = detail::pow_alpha_from_squared((x - ctx.destination).norm_squared(), alpha);
        const double af = detail::hop_fraction(a, ta), ak = detail::hop_keep(a, ta);
        const double bf = detail::hop_fraction(b, tb), bk = detail::hop_keep(b, tb);
        std::array<double, N> out{};
        for (std::size_t k = 0; k < N; ++k)
            out[k] = rho * detail::family_value(families[k], af, ak, bf, bk, p, q);
        return out;
    };

    // Half the budget goes to the mesh, the rest covers the tail and re-summation.
    const auto cub = detail::adaptive_cubature<N>(integrand, cells, 0.5 * spec.rel_tol,
                                                  0.5 * spec.abs_tol, spec.max_subdivisions);
    std::array<QuadratureResult, N> results{};
    for (std::size_t k = 0; k < N; ++k) {
        const auto coeffs = detail::taylor_coefficients(families[k], q);
        const auto tail = detail::far_field_tail(coeffs, a, relay_hop_only(families[k]) ? 0.0 : b,
                                                 alpha, offset, radius);
        results[k].value = cub.value[k] + tail.value;
        results[k].error = cub.error[k] + tail.error;
        results[k].cells = cub.cells;
        detail::check_accuracy(to_string(families[k]), results[k].value, results[k].error,
                               cub.converged, spec);
    }
    return results;
}

inline QuadratureResult integrate_plane(Integrand family, const IntegrandContext& ctx,
                                        const QuadratureSpec& spec) {
    return integrate_plane<1>({family}, ctx, spec)[0];
}

/// Relay-hop-only families depend on |x - r| alone, so the plane integral
/// reduces to 2*pi * Int_0^R rho h(rho) d rho plus the radial tail.
inline QuadratureResult integrate_radial(Integrand family, const IntegrandContext& ctx,
                                         const QuadratureSpec& spec) {
    spec.validate();
    if (!relay_hop_only(family))
        throw DomainError(std::string(to_string(family)) + " has no radial reduction");
    const double p = ctx.transmit_prob;
    detail::check_transmit_prob(family, p);
    const double q = 1.0 - p;
    const double a = ctx.derived.sr_coefficient();
    const double alpha = ctx.derived.alpha;
    if (!(alpha > 2.0))
        throw DomainError("path loss exponent must exceed 2");
    const double radius = spec.truncation_radius;
    if (a == 0.0)
        return {};
    detail::check_tail_validity(a, 0.0, alpha, 0.0, radius);

    auto integrand = [&](double rho) {
        const double t = std::pow(rho, alpha);
        return 2.0 * std::numbers::pi * rho *
               detail::family_value(family, detail::hop_fraction(a, t), detail::hop_keep(a, t), 0.0,
                                    1.0, p, q);
    };

    // Break points on a geometric ladder around the bump width a^(1/alpha).
    const double width = std::pow(a, 1.0 / alpha);
    std::vector<double> breaks{0.0};
    for (double r = 0.25 * width; r < radius; r *= 2.0)
        breaks.push_back(r);
    breaks.push_back(radius);

    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    detail::CompensatedSum value, error;
    std::size_t pieces = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        value.add(Kronrod::integrate(integrand, breaks[i], breaks[i + 1], 30,
                                     0.1 * spec.rel_tol, &err));
        error.add(err);
        ++pieces;
    }
    const auto tail =
        detail::far_field_tail(detail::taylor_coefficients(family, q), a, 0.0, alpha, 0.0, radius);
    QuadratureResult r{value.value() + tail.value, error.value() + tail.error, pieces};
    detail::check_accuracy(to_string(family), r.value, r.error, true, spec);
    return r;
}

// --- the named integrals -----------------------------------------------------

inline double psi(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_plane(Integrand::Psi, ctx, spec).value;
}
inline double phi(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_plane(Integrand::Phi, ctx, spec).value;
}
inline double phi_dp(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_plane(Integrand::PhiDp, ctx, spec).value;
}
inline double phi_dp2(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_plane(Integrand::PhiDp2, ctx, spec).value;
}
inline double psi_u(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_radial(Integrand::PsiU, ctx, spec).value;
}
inline double phi_u(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_radial(Integrand::PhiU, ctx, spec).value;
}
inline double phi_u_dp(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_radial(Integrand::PhiUDp, ctx, spec).value;
}
inline double phi_u_dp2(const IntegrandContext& ctx, const QuadratureSpec& spec = {}) {
    return integrate_radial(Integrand::PhiUDp2, ctx, spec).value;
}

/// psi and the phi family at one p, from a single adaptive mesh.
struct CorrelatedIntegrals {
    double psi = 0.0;
    double phi = 0.0;
    double phi_dp = 0.0;
    double phi_dp2 = 0.0;
};

inline CorrelatedIntegrals correlated_integrals(const IntegrandContext& ctx,
                                                const QuadratureSpec& spec = {}) {
    const auto r = integrate_plane<4>(
        {Integrand::Psi, Integrand::Phi, Integrand::PhiDp, Integrand::PhiDp2}, ctx, spec);
    return {r[0].value, r[1].value, r[2].value, r[3].value};
}

struct UncorrelatedIntegrals {
    double psi_u = 0.0;
    double phi_u = 0.0;
    double phi_u_dp = 0.0;
    double phi_u_dp2 = 0.0;
};

inline UncorrelatedIntegrals uncorrelated_integrals(const IntegrandContext& ctx,
                                                    const QuadratureSpec& spec = {}) {
    return {psi_u(ctx, spec), phi_u(ctx, spec), phi_u_dp(ctx, spec), phi_u_dp2(ctx, spec)};
}

/// pi * C(delta) * x^delta: the plane integral of 1/(1 + |y|^alpha / x) with
/// delta = 2/alpha. This is (1/p) * Int [1 - mu_2] for the relay->destination
/// hop with x = theta_rd / P̂_r.
inline double aloha_disk_integral(double theta_over_p, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("aloha_disk_integral requires 0 < delta < 1");
    if (!(theta_over_p >= 0.0) || !std::isfinite(theta_over_p))
        throw DomainError("aloha_disk_integral requires a non-negative coefficient");
    return std::numbers::pi * inverse_sinc(delta) * std::pow(theta_over_p, delta);
}

} // namespace relaynet
