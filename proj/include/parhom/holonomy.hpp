#pragma once

#include "parhom/jet.hpp"

#include <random>
#include <vector>

namespace parhom {

/// span{R(u,v)} over p-basis pairs, as a bracket-closed operator subspace.
Subspace hol_ambient(const SymmetricSpaceModel& space, const Tolerances& tol);

struct MbarHolonomy {
    Subspace hol;          // operators on W-coordinates
    bool irreducible = false;
    int trivial_dim = 0;   // dimension of the subspace on which it acts trivially
    int block_count = 0;
};

/// span{R(x,y)|W} for a curvature invariant W, with the module decomposition.
MbarHolonomy hol_mbar(const TwoJet& jet, const Tolerances& tol, std::mt19937_64& rng);

struct OscHolonomy {
    OsculatingFrame frame;
    Subspace hol;    // operators on O in frame coordinates
    Subspace plus;   // hol intersected with the sigma-even part
    Subspace minus;  // hol intersected with the sigma-odd part
    double sigma_invariance_residual = 0.0;
    double splitting_defect = 0.0;        // dim hol - dim plus - dim minus
    double curvature_plus_residual = 0.0; // restricted curvature ops inside the + part
    double derivation_residual = 0.0;     // [bold_b(x), hol] back inside hol
};

/// Wang-type closure surrogate for the holonomy algebra of the osculating
/// bundle: close the restricted curvature operators under brackets and under
/// bracketing with the bold_b(x). The structural facts (sigma-invariance,
/// splitting, curvature in the + part) are checked on the result, not forced.
OscHolonomy hol_osculating(const TwoJet& jet, const Tolerances& tol);

struct DefectReport {
    std::vector<double> defect_norms;     // |bold_b(x) - P(bold_b(x))| per W-basis vector
    std::vector<Matrix> p_images;         // P(bold_b(x)) frame operators
    double centralizer_residual = 0.0;    // defect commutes with hol
    double p_minus_residual = 0.0;        // P(bold_b(x)) sigma-odd
};

/// Orthogonal projection onto hol under the trace metric <A,B> = -tr(AB).
DefectReport project_defect(const TwoJet& jet, const OscHolonomy& osc, const Tolerances& tol);

/// Intertwiner space between paired operator lists (thin alias for the kernel
/// solver).
Subspace intertwiners(const std::vector<Matrix>& ops_w, const std::vector<Matrix>& ops_u,
                      const Tolerances& tol);

struct SchurReport {
    int d = 0;
    bool irreducible = false;
    bool in_124 = true;  // meaningful only when irreducible
};

/// d = dim of the commutant of span{R(x,y)|W} acting on W.
SchurReport schur_dimension(const TwoJet& jet, const Tolerances& tol, std::mt19937_64& rng);

struct HolonomyReport {
    int dim_hol_ambient = 0;
    int dim_hol_mbar = 0;
    bool mbar_irreducible = false;
    int dim_hol_osc = 0, dim_hol_osc_plus = 0, dim_hol_osc_minus = 0;
    double sigma_invariance_residual = 0.0;
    double splitting_defect = 0.0;
    double curvature_plus_residual = 0.0;
    int centralizer_minus_dim = 0;
    std::vector<double> defect_norms;
    int schur_d = 0;
    bool schur_in_124 = true;
    int dim_first_normal = 0;
    std::vector<GammaResult> gamma;
    Verdict verdict = Verdict::indeterminate;     // homogeneous / not homogeneous
    bool defect_chain_homogeneous = false;
    bool surrogate_checks_ok = true;
    bool consistent = true;   // defect chain success must imply direct feasibility
};

/// Full report: the verdict is decided by the direct feasibility test; the
/// holonomy chain (defect norms, centralizer) is diagnostic. If the surrogate's
/// structural checks fail on a jet that passed the model test, the verdict is
/// downgraded to indeterminate.
HolonomyReport homogeneity_verdict(const TwoJet& jet, const Tolerances& tol,
                                   std::mt19937_64& rng);

/// Instance form of: dim(first normal) > d implies hol(Of)_- nonzero.
bool check_minus_nonzero(const TwoJet& jet, const HolonomyReport& report);

}  // namespace parhom
