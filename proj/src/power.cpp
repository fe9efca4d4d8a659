#include "slopeflow/power.hpp"

#include <algorithm>
#include <cmath>

namespace slopeflow {

double phi_pow(double q, double z) {
    if (q <= 1.0) throw std::domain_error("phi_pow: q must exceed 1");
    if (z == 0.0) return 0.0;
    // Exact shortcuts for the common integer exponents (also much faster
    // than pow, which matters in the time-stepping loops).
    if (q == 2.0) return z;
    if (q == 3.0) return z * std::abs(z);
    if (q == 4.0) return z * z * z;
    return std::pow(std::abs(z), q - 1.0) * (z > 0.0 ? 1.0 : -1.0);
}

double conjugate_exponent(double p) {
    if (p <= 1.0) throw std::domain_error("conjugate_exponent: p must exceed 1");
    return p / (p - 1.0);
}

double truncate(double value, double k) {
    if (k < 0.0) throw std::domain_error("truncate: k must be nonnegative");
    return std::max(-k, std::min(value, k));
}

double theta_integral(double a, double b, double p) {
    if (p <= 1.0) throw std::domain_error("theta_integral: p must exceed 1");
    const double threshold = 1e-12 * std::max(1.0, std::abs(a));
    if (a == 0.0 && b != 0.0 && p < 2.0) {
        // Integrable endpoint singularity; the closed form handles it exactly.
        return (phi_pow(p, b) - 0.0) / ((p - 1.0) * b);
    }
    if (std::abs(b) <= threshold) {
        // Constant-integrand limit with first-order correction in b.
        if (a == 0.0 && b == 0.0 && p < 2.0)
            throw std::domain_error("theta_integral: singular at a=b=0 for p<2");
        const double base = std::pow(std::abs(a), p - 2.0);
        double correction = 0.0;
        if (b != 0.0 && a != 0.0) {
            correction = 0.5 * (p - 2.0) * std::pow(std::abs(a), p - 4.0) * a * b;
        }
        return base + correction;
    }
    // Antiderivative of |a+theta b|^(p-2) in theta is phi_pow(p, a+theta b)/((p-1) b).
    return (phi_pow(p, a + b) - phi_pow(p, a)) / ((p - 1.0) * b);
}

}  // namespace slopeflow
