#pragma once

#include "parhom/jet.hpp"

#include <map>
#include <string>

namespace parhom {

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
    std::map<std::string, double> residuals;
    ConstructionError(const std::string& what, std::map<std::string, double> res)
        : std::runtime_error(what), residuals(std::move(res)) {}
};

struct HatGammaResult {
    Matrix hat;    // dim_g x dim_W: Gamma_x + bhat(x) per W-basis vector
    Matrix bhat;   // dim_g x dim_W: the isotropy components (in k)
    bool full = true;          // O(b) not contained in a proper curvature invariant subspace
    Subspace osc_closure;      // smallest curvature invariant subspace containing O(b)
    std::vector<GammaResult> solves;
};

/// Solve the realization problem for every W-basis vector and assemble the
/// linear map x -> Gamma_x + bhat(x). Unique for full jets; otherwise the
/// minimum-norm solutions are taken and `full` is false.
HatGammaResult hat_gamma(const TwoJet& jet, const Tolerances& tol);

struct NomizuResult {
    Matrix hat_gamma;   // dim_g x dim_W, ambient g-coordinates
    Matrix bhat;        // dim_g x dim_W
    Subspace m_basis;   // span of the hat columns
    Subspace h_basis;   // [m, m]
    Subspace g_basis;   // h + m
    Subspace m0_basis;  // reductive-complement characterization, re-embedded
    std::map<std::string, double> residuals;  // triple_1, triple_5, direct_sum, m_eq_m0,
                                              // jacobi, roundtrip
    int dim_m = 0, dim_h = 0, dim_g = 0;
    bool full = true;
    bool reduced = false;          // construction ran in a totally geodesic reduction
    int reduced_dim_p = 0;         // dim p of the reduction when reduced
};

/// Extrinsic Nomizu construction: from an infinitesimal model build m, h =
/// [m,m] and g = h + m, verify the bracket identities and the reductive
/// complement characterization. Non-full jets are first reduced to the
/// smallest curvature invariant subspace containing O(b) and the result is
/// re-embedded. Throws PreconditionError for non-model jets and
/// ConstructionError (with the residual map) when an identity exceeds
/// 10 x residual_abs.
NomizuResult construct(const TwoJet& jet, const Tolerances& tol);

/// Solution space of the homogeneous system pi1(X) in W, pi2(X)(O) in O,
/// pi2(X)|O = bold_b(pi1(X)) in the ambient model; defined for any jet.
Subspace compute_m0(const TwoJet& jet, const Tolerances& tol);

/// Algebraic 2-jet recovery: proj_{W-perp}(pi2(hat(x)) y) must equal b(x,y).
std::pair<bool, double> orbit_jet_roundtrip(const NomizuResult& result, const TwoJet& jet,
                                            const Tolerances& tol);

}  // namespace parhom
