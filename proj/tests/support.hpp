#pragma once

#include <cmath>

#include "relaynet/relaynet.hpp"

namespace relaynet::fixtures {

// Reference chain (relay at the midpoint, 5 dB powers, N0 = 1, alpha = 4, theta = 1):
// a = b = 1 and B = 2 * 10^-0.5.
inline constexpr double kB = 0.6324555320336759;
inline constexpr double kExpMinusB = 0.5312856091329679;
inline constexpr double kSuccessNoInterference = 0.2656428045664839;  // p = 0.5
inline constexpr double kDelayNoInterference = 3.764453554960584;     // p = 0.5
inline constexpr double kUtilityNoInterference = 0.03528304980897358; // p = 0.5

// Midpoint-rule oracle (tests/oracles/riemann_oracle.py, step 0.01, radius 30
// plus leading tail) for the reference chain.
inline constexpr double kOraclePsi = 8.22130756;
struct OraclePhi {
    double p, phi, phi_dp;
};
inline constexpr OraclePhi kOraclePhi[] = {
    {0.3, 10.06574586, 8.21149772},
    {0.5, 12.21207354, 14.11374571},
    {0.7, 16.44856364, 32.24386704},
};
inline constexpr double kOracleRelTol = 1e-5;

inline QuadratureSpec tight_spec() {
    QuadratureSpec s;
    s.rel_tol = 1e-12;
    s.abs_tol = 1e-14;
    return s;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace relaynet::fixtures
