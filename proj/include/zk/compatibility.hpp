#pragma once

#include <string>
#include <vector>

#include "zk/grid.hpp"
#include "zk/model.hpp"

namespace zk {

/// Boundary residuals of the strong-solution compatibility conditions for the
/// initial data and for the induced initial time derivative
///   u_t0 = -Delta u_0x - u_0 u_0x - c u_0x + f(0).
/// Transverse wall entries are identically zero in the spectral
/// representation and are reported as such.
struct CompatibilityReport {
    struct Entry {
        std::string condition;
        double residual = 0.0;
    };
    std::vector<Entry> u0_residuals;
    std::vector<Entry> ut0_residuals;
    double tolerance = 0.0;
    bool passed = false;

    double max_residual() const;
};

CompatibilityReport check_compatibility(const Field& u0, const ModelParams& params, double tol);

}  // namespace zk
