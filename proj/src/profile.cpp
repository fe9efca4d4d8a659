#include "slopeflow/profile.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace slopeflow {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

double SolutionProfile::sup_norm_u() const { return max_abs(u); }
double SolutionProfile::sup_norm_du() const { return max_abs(du); }

std::string SolutionProfile::to_csv() const {
    std::string out = "x,u,du\n";
    char buf[128];
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.nodes[i], u[i], du[i]);
        out += buf;
    }
    return out;
}

SolutionProfile SolutionProfile::from_csv(const std::string& text) {
    SolutionProfile p;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,u,du", 0) != 0)
        throw std::invalid_argument("SolutionProfile: bad CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, u, du;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &u, &du) != 3)
            throw std::invalid_argument("SolutionProfile: bad CSV row: " + line);
        p.grid.nodes.push_back(x);
        p.u.push_back(u);
        p.du.push_back(du);
    }
    p.grid.validate();
    double mh = p.u.empty() ? 0.0 : p.u[0];
    for (double v : p.u) mh = std::min(mh, v);
    p.min_head = mh;  // caller re-derives with H; stored here as min u
    return p;
}

double DiffusionProfile::min_D() const {
    double m = D.empty() ? 0.0 : D[0];
    for (double v : D) m = std::min(m, v);
    return m;
}

std::string DiffusionProfile::to_csv() const {
    std::string out = "x,D\n";
    char buf[96];
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", grid.nodes[i], D[i]);
        out += buf;
    }
    return out;
}

}  // namespace slopeflow
