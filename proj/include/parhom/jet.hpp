#pragma once

#include "parhom/lie_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parhom {

/// A formal 2-jet (W, b) at the origin: a subspace of the tangent space plus a
/// symmetric bilinear map with values orthogonal to W. W is held as
/// metric-orthonormal columns in p-coordinates; b is indexed by that basis.
struct TwoJet {
    const SymmetricSpaceModel* space = nullptr;
    Matrix W;                             // dim_p x m
    std::vector<std::vector<Vector>> b;   // m x m symmetric, p-coordinate values

    int dim_W() const { return static_cast<int>(W.cols()); }
    int dim_p() const { return space ? space->dim_p() : 0; }

    Vector b_value(const Vector& x_wcoords, const Vector& y_wcoords) const;
    bool b_is_zero(double tol_abs) const;
    void validate(const Tolerances& tol) const;
};

TwoJet make_totally_geodesic_jet(const SymmetricSpaceModel& space, const Matrix& w_columns,
                                 const Tolerances& tol);
/// b(x,y) = kappa <x,y> xi. If w_columns is empty, W defaults to the metric
/// complement of xi.
TwoJet make_umbilic_jet(const SymmetricSpaceModel& space, double kappa, const Vector& xi,
                        const Matrix& w_columns, const Tolerances& tol);
/// 1-dimensional jet of the circle with initial velocity x and acceleration y.
TwoJet make_circle_jet(const SymmetricSpaceModel& space, const Vector& x, const Vector& y,
                       const Tolerances& tol);

/// Metric-orthonormal frame of the second osculating space O(b) = W + span(b),
/// with the reflection fixing the first normal space and the skew operators
/// bold_b(x) acting on frame coordinates.
struct OsculatingFrame {
    const SymmetricSpaceModel* space = nullptr;
    Matrix frame;   // dim_p x dim_O, first dim_W columns span W
    int dim_W = 0;
    int dim_N1 = 0;
    Matrix sigma;                 // reflection: -Id on W, +Id on the first normal space
    std::vector<Matrix> bold_b;   // one skew frame operator per W-basis vector

    int dim_O() const { return dim_W + dim_N1; }
    Vector to_frame(const Vector& p_vec) const;        // frame coordinates
    Vector from_frame(const Vector& coords) const;     // back to p-coordinates
    /// Restriction of a p-operator to the frame; meaningful when the operator
    /// preserves O.
    Matrix restrict_op(const Matrix& p_op) const;
    /// Largest rejection of p_op * (frame column) from O.
    double closure_residual(const Matrix& p_op) const;
    /// Zero extension of a frame operator to a p-operator.
    Matrix extend_op(const Matrix& frame_op) const;
    Matrix bold_b_of(const Vector& x_wcoords) const;
};

OsculatingFrame build_frame(const TwoJet& jet, const Tolerances& tol);

/// Skew sigma-even / sigma-odd operator subspaces of so(O) in frame
/// coordinates (eigenspaces of conjugation by the reflection).
Subspace so_plus_subspace(int dim_w, int dim_n1);
Subspace so_minus_subspace(int dim_w, int dim_n1);
Subspace so_subspace(int dim_o);

struct SemiparallelReport {
    bool holds = false;
    double worst_residual = 0.0;
    bool osc_closed = true;       // O(b) preserved by R(x,y) for x,y in W
    double closure_residual = 0.0;
    bool used_full_basis = false; // evaluated over the full p-basis with zero extensions
    bool argument_in_w = true;    // argument of the outer bold_b stayed in W
};

SemiparallelReport check_semiparallel(const TwoJet& jet, const Tolerances& tol);

struct GammaResult {
    Feasibility verdict = Feasibility::indeterminate;
    Vector X;              // g-coordinates of the minimum-norm solution in k
    double residual = 0.0;
    double target_norm = 0.0;
};

/// Linear feasibility of realizing bold_b(x) by an isotropy Killing field:
/// find X in k with pi2(X)(O) in O and pi2(X)|O = bold_b(x).
GammaResult check_gamma_feasibility(const TwoJet& jet, const Vector& x_pcoords,
                                    const Tolerances& tol);

struct ModelVerdict {
    bool curvature_invariant = false;
    double curvature_invariance_residual = 0.0;
    SemiparallelReport semiparallel;
    std::vector<GammaResult> gamma_per_basis;
    Verdict overall = Verdict::indeterminate;
};

ModelVerdict check_infinitesimal_model(const TwoJet& jet, const Tolerances& tol);

/// Shape operator S_xi on W-coordinates: <S_xi x, y> = <b(x,y), xi>.
Matrix shape_operator(const TwoJet& jet, const Vector& xi_pcoords);

/// Gauss-equation tangent curvature R^M(x,y)z (a p-vector lying in W).
Vector derived_tangent_curvature(const TwoJet& jet, const Vector& x, const Vector& y,
                                 const Vector& z, const Tolerances& tol);

struct FundamentalReport {
    bool holds = false;
    double worst_residual = 0.0;
    bool osc_closed = true;
};

/// Instance check of the curvature identity tying R^N(b(x,x), b(y,y)) to
/// nested bold_b commutators; expected to hold on jets of parallel immersions.
FundamentalReport check_fundamental_identity(const TwoJet& jet, const Tolerances& tol);

/// Residual of the four-slot derivation identity sum_i R^b(v1,..,bold_b(x)v_i,..,v4) = 0.
double fetth3_residual(const TwoJet& jet, const Tolerances& tol);

/// Residual of the normal-curvature compatibility identity, with R_perp derived
/// from the Ricci equation.
double semiparallel_one_residual(const TwoJet& jet, const Tolerances& tol);

}  // namespace parhom
