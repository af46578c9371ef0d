#pragma once

// Period matrices: integrals of closed forms over cycles.

#include "periodlab/chain.hpp"
#include "periodlab/form.hpp"
#include "periodlab/quad.hpp"

#include <string>
#include <vector>

namespace periodlab {

struct GeometricCycle {
    std::string name;
    Chain chain;
    std::string provenance;  ///< free text, e.g. "triangulation T, cycle 1"
};

struct NamedForm {
    std::string name;
    Form form;
};

struct CycleCheck {
    bool closed = false;
    bool exact = false;  ///< ∂ cancels structurally
    std::string detail;
};

/// ∂c = 0, structurally or after merging faces that agree pointwise to `tol`.
CycleCheck check_cycle(const Chain& c, double tol = 1e-10);

struct PeriodMatrix {
    std::vector<std::string> cycles;
    std::vector<std::string> forms;
    std::vector<std::vector<QuadResult>> entries;  ///< [cycle][form]
    bool converged = true;
};

/// Rejects non-closed forms and non-cycles with an InputError naming them.
PeriodMatrix period_matrix(const std::vector<GeometricCycle>& cycles, const std::vector<NamedForm>& forms,
                           const QuadOptions& opts = {});

struct RepresentativeComparison {
    struct Entry {
        std::string form;
        double first = 0;
        double second = 0;
        double difference = 0;
        bool converged = false;
        bool ok = false;
    };
    std::vector<Entry> entries;
    double tolerance = 0;
    bool ok = true;
};

/// Periods of two cycles assumed homologous; each difference must be ≤ tol.
RepresentativeComparison compare_representatives(const GeometricCycle& c1, const GeometricCycle& c2,
                                                 const std::vector<NamedForm>& forms, double tol = 2e-6,
                                                 const QuadOptions& opts = {});

}  // namespace periodlab
