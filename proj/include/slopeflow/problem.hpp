/**
 * @file problem.hpp
 * @brief Physical/numerical problem description and shared grid type.
 */

#pragma once

#include <vector>

#include "slopeflow/source.hpp"

namespace slopeflow {

/// Strictly increasing nodes spanning [-1, 1].
struct Grid {
    std::vector<double> nodes;

    static Grid uniform(int n_cells);

    int n_cells() const { return static_cast<int>(nodes.size()) - 1; }
    double spacing(int cell) const { return nodes[cell + 1] - nodes[cell]; }
    void validate() const;
};

/// Steady/transient problem parameters.
///
/// p > 1 is the constitutive exponent (p = m+1 of the power law), H > 0 the
/// ditch water level, phi in (0, pi/2) the bed inclination, conductivity the
/// factor c (1 under the normalization used by the steady problem).
struct ProblemSpec {
    double p = 3.0;
    double H = 1.0;
    double phi = 0.2;
    double conductivity = 1.0;
    SourceFunction source;

    // Transient-only boundary/initial data.
    double H_minus = 1.0;
    double H_plus = 1.0;
    std::vector<double> initial_profile;  // empty: h0 == H

    double conj_p() const;           ///< p' = p/(p-1)
    double sin_phi_pow(double e) const;  ///< (sin phi)^e
    double lambda() const;           ///< (sin phi)^(p-1), the drift coefficient

    void validate() const;
};

}  // namespace slopeflow
