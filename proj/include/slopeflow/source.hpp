/**
 * @file source.hpp
 * @brief Piecewise-polynomial rainfall/evaporation profiles with exact calculus.
 *
 * Restricting sources to piecewise polynomials keeps every integral that the
 * model needs (tail integrals, nested double integrals, L1 norms) exact, so
 * quadrature error never mixes with solver error.
 */

#pragma once

#include <string>
#include <vector>

namespace slopeflow {

/// Dense polynomial, coefficients in ascending degree.
struct Polynomial {
    std::vector<double> coeffs;

    double eval(double x) const;
    Polynomial derivative() const;
    Polynomial antiderivative() const;  // constant term zero
    /// Exact integral over [a, b].
    double integrate(double a, double b) const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    /// All real roots inside [a, b], ascending, deduplicated.
    /// Found by recursive critical-point isolation plus bisection.
    std::vector<double> roots_in(double a, double b) const;
};

struct SourcePiece {
    double lo = -1.0;
    double hi = 1.0;
    Polynomial poly;
};

/// f on [-1,1] as an ordered list of polynomial pieces partitioning [-1,1].
class SourceFunction {
public:
    SourceFunction();  // f == 0
    explicit SourceFunction(std::vector<SourcePiece> pieces);

    static SourceFunction constant(double c);
    /// Single polynomial on all of [-1,1].
    static SourceFunction polynomial(std::vector<double> coeffs);

    double eval(double x) const;
    /// Tail integral F(x) = int_x^1 f, exact. F(1) = 0.
    double tail(double x) const;
    /// int_{a}^{b} f, exact.
    double integral(double a, double b) const;
    /// ||f||_{L1(-1,1)}, exact (pieces are split at their sign changes).
    double l1_norm() const;
    /// True iff f >= 0 on [-1,1] (checked via piece roots and extrema signs).
    bool is_nonnegative() const;
    bool is_zero() const;

    /// Exact integral of f(x) * q(x) over [a, b] for a polynomial q.
    double integral_against(const Polynomial& q, double a, double b) const;

    const std::vector<SourcePiece>& pieces() const { return pieces_; }

    /// On-disk scenario format: JSON array of
    /// {"interval":[a,b],"coeffs":[c0,c1,...]}.
    std::string to_json() const;
    static SourceFunction from_json(const std::string& text);

private:
    std::vector<SourcePiece> pieces_;
};

}  // namespace slopeflow
