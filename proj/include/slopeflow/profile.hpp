/**
 * @file profile.hpp
 * @brief Gridded solution data shared by the solvers and checkers.
 */

#pragma once

#include <string>
#include <vector>

#include "slopeflow/problem.hpp"

namespace slopeflow {

/// Gridded steady solution (u, u') with its residual certificates.
struct SolutionProfile {
    Grid grid;
    std::vector<double> u;
    std::vector<double> du;
    double s_end = 0.0;                  ///< shooting value u'(1)
    double kappa = 0.0;                  ///< H * phi_pow(p, u'(1) cos phi + sin phi)
    double residual_first_order = 0.0;   ///< max-norm residual of the first-order identity
    double min_head = 0.0;               ///< min over nodes of u + H

    double sup_norm_u() const;
    double sup_norm_du() const;

    /// CSV export: header "x,u,du", 17 significant digits.
    std::string to_csv() const;
    static SolutionProfile from_csv(const std::string& text);
};

/// Diffusion coefficient D(x) of the linearization, with its certified floor.
struct DiffusionProfile {
    Grid grid;
    std::vector<double> D;
    double floor_used = 0.0;
    std::string floor_name;  ///< "nonnegative-source", "uniform", or "min-head"

    double min_D() const;
    std::string to_csv() const;  ///< header "x,D"
};

/// Tabulated exponential weights and Green's function of the linearized operator.
struct GreensTable {
    Grid grid;
    std::vector<double> E_minus;
    std::vector<double> E_plus;
    std::vector<double> G;  ///< row-major, G[i*n + j] = G(x_i, y_j)
    double lambda = 0.0;    ///< (sin phi)^(p-1)
    std::vector<double> D;  ///< diffusion values the weights were built from

    int n_nodes() const { return static_cast<int>(grid.nodes.size()); }
    double g(int i, int j) const { return G[static_cast<std::size_t>(i) * n_nodes() + j]; }
};

}  // namespace slopeflow
