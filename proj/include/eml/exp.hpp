#pragma once

#include <cmath>
#include <vector>

#include "eml/config.hpp"

namespace eml {

// Plaintext mirror of the shared negative-exponential evaluation: reduce by
// 2^k, degree-d Taylor via Horner, then k squarings — in double arithmetic.
// This is the oracle the shared computation is tested against; its distance
// to true exp(-u) obeys ExpConfig::analytic_bound() on [0, u_max].
inline double exp_neg_reference(double u, const ExpConfig& cfg) {
    const double t = std::ldexp(u, -cfg.k);
    double b = 0.0;
    // Horner over coefficients (-1)^j / j!
    double fact = 1.0;
    std::vector<double> coef(cfg.d + 1);
    for (int j = 0; j <= cfg.d; ++j) {
        coef[j] = 1.0 / fact;
        fact *= (j + 1);
    }
    b = coef[cfg.d];
    for (int j = cfg.d - 1; j >= 0; --j) b = b * (-t) + coef[j];
    for (int i = 0; i < cfg.k; ++i) b = b * b;
    return b;
}

inline std::vector<double> taylor_coefficients(int d) {
    std::vector<double> coef(d + 1);
    double fact = 1.0;
    for (int j = 0; j <= d; ++j) {
        coef[j] = 1.0 / fact;
        fact *= (j + 1);
    }
    return coef;
}

}  // namespace eml
