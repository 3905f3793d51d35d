#pragma once

#include <cstddef>
#include <vector>

#include "gll/fields.hpp"

namespace gll {

/// One diagnostics sample. Serialized as a CSV row in declaration order.
struct DiagnosticsRecord {
    double t = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
    double h12 = 0.0;  // ||u_x||_{H^{1,2}}
    double h22 = 0.0;  // ||u_x||_{H^{2,2}}
    double w32 = 0.0;  // ||u||_{W^{3,2}}
    double sup_ux = 0.0;
    double constraint_err = 0.0;
    double de2_residual = 0.0;  // finite-difference dE2/dt minus the closed-form rate

    friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SphereField> states;
    std::vector<DiagnosticsRecord> diagnostics;
    /// Closed-form dE2/dt at each sample; de2_residual is measured against it.
    std::vector<double> de2_formula;
    std::size_t steps = 0;
    double dt = 0.0;

    std::size_t size() const noexcept { return times.size(); }
};

}  // namespace gll
