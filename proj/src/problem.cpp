#include "slopeflow/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slopeflow {

Grid Grid::uniform(int n_cells) {
    if (n_cells < 1) throw std::invalid_argument("Grid: need at least one cell");
    Grid g;
    g.nodes.resize(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i)
        g.nodes[i] = -1.0 + 2.0 * static_cast<double>(i) / n_cells;
    g.nodes.front() = -1.0;
    g.nodes.back() = 1.0;
    return g;
}

void Grid::validate() const {
    if (nodes.size() < 2) throw std::invalid_argument("Grid: need at least two nodes");
    if (nodes.front() != -1.0 || nodes.back() != 1.0)
        throw std::invalid_argument("Grid: must span [-1,1]");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (nodes[i + 1] <= nodes[i]) throw std::invalid_argument("Grid: nodes must increase");
    }
}

double ProblemSpec::conj_p() const { return p / (p - 1.0); }

double ProblemSpec::sin_phi_pow(double e) const { return std::pow(std::sin(phi), e); }

double ProblemSpec::lambda() const { return sin_phi_pow(p - 1.0); }

void ProblemSpec::validate() const {
    if (p <= 1.0) throw std::invalid_argument("ProblemSpec: p must exceed 1");
    if (H <= 0.0) throw std::invalid_argument("ProblemSpec: H must be positive");
    if (phi <= 0.0 || phi >= std::numbers::pi / 2.0)
        throw std::invalid_argument("ProblemSpec: phi must lie in (0, pi/2)");
    if (conductivity <= 0.0) throw std::invalid_argument("ProblemSpec: conductivity must be positive");
    if (H_minus < 0.0 || H_plus < 0.0)
        throw std::invalid_argument("ProblemSpec: boundary levels must be nonnegative");
    // Consistency of the derived conjugate exponent.
    if (std::abs(conj_p() * (p - 1.0) - p) > 1e-12 * p)
        throw std::logic_error("ProblemSpec: conjugate exponent inconsistent");
}

}  // namespace slopeflow
