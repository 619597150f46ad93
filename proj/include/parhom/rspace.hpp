#pragma once

#include "parhom/jet.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace parhom {

/// Algebraic data of a symmetric R-space orbit: X in p with ad(X)^3 = -ad(X),
/// the induced splitting of k and the tangent operators of the orbit.
struct RSpaceDatum {
    const SymmetricSpaceModel* space = nullptr;
    Vector X;                         // g-coordinates, lies in p
    Subspace k0;                      // k-coordinates: centralizer of X in k
    Subspace kminus;                  // k-coordinates: (-1)-eigenspace of ad(X)^2 on k
    Subspace center;                  // k-coordinates: center of k
    std::vector<Matrix> tangent_ops;  // ad(Z)|p for a kminus basis
    double ad_cube_residual = 0.0;
    double eigenvalue_deviation = 0.0;  // worst distance of spec(ad X) from {0, +-i}
};

/// Random search with eigenvalue snapping for an element with
/// spec(ad(X)) in {0, +-i}. Returns nothing when the model is not of compact
/// type or no element is found within the attempt budget.
std::optional<RSpaceDatum> find_rspace_element(const SymmetricSpaceModel& space, int attempts,
                                               std::uint64_t rng_seed, const Tolerances& tol);

/// Build the datum for a given (already valid) element X.
RSpaceDatum make_rspace_datum(const SymmetricSpaceModel& space, const Vector& X,
                              const Tolerances& tol);

/// k0 = kernel of ad(X) on k; kminus = (-1)-eigenspace of ad(X)^2 on k.
std::pair<Subspace, Subspace> split_k(const SymmetricSpaceModel& space, const Vector& X,
                                      const Tolerances& tol);

/// Instance of k0 = [kminus, kminus] (two-sided containment residual).
std::pair<bool, double> verify_k0_equals_bracket(const RSpaceDatum& datum, const Tolerances& tol);

/// Instance of: the commutant of ad(k)|p inside skew operators equals
/// ad(center of k)|p. Requires a single irreducible catalog factor.
std::pair<bool, double> verify_commutant_is_center(const RSpaceDatum& datum,
                                                   const Tolerances& tol);

/// dim(center of k intersect kminus); positive dimension flags that the orbit
/// splits a euclidean factor.
int verify_center_meets_kminus(const RSpaceDatum& datum, const Tolerances& tol);

/// Algebraic 2-jet of the orbit at X, hosted in a euclidean model of dimension
/// dim p (tangent = [kminus, X], b from normal projections of double brackets).
TwoJet rspace_orbit_jet(const RSpaceDatum& datum, const SymmetricSpaceModel& flat_model,
                        const Tolerances& tol);

/// Two-sided span distance between the orbit jet's bold_b operators (extended
/// to p) and the tangent operators ad(kminus)|p.
double rspace_boldb_match_residual(const RSpaceDatum& datum, const TwoJet& orbit_jet,
                                   const Tolerances& tol);

struct FlatReport {
    bool applicable = false;          // local model checks + W curvature isotropic
    std::string blocked_link;         // first failing precondition, when any
    bool tangent_isotropic = false;
    bool first_normal_isotropic = false;
    double fundamental_residual = 0.0;
    int centralizer_minus_dim = 0;    // c(bold_b(W)) intersect so(O)_-
    bool chain_concludes = false;     // centralizer trivial: the lemma predicts osc isotropic
    bool osc_isotropic = false;
    bool chain_agrees = true;         // prediction vs the direct isotropy check
    bool reduced_to_flat = false;     // O(b) exponentiates to a flat
};

/// Flat-case chain: isotropy of W, isotropy of the first normal space, the
/// centralizer criterion and the direct isotropy check of O(b).
FlatReport flat_case_pipeline(const TwoJet& jet, const Tolerances& tol);

}  // namespace parhom
