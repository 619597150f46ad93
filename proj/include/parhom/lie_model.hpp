#pragma once

#include "parhom/numeric.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace parhom {

/// A real matrix Lie algebra given by a basis of ambient matrices. Structure
/// constants are extracted from matrix brackets at construction; the Killing
/// form is computed from the adjoint representation.
class LieAlgebraPresentation {
public:
    LieAlgebraPresentation() = default;
    static LieAlgebraPresentation from_basis(std::vector<Matrix> basis, const Tolerances& tol);

    int dim() const { return static_cast<int>(basis_.size()); }
    int ambient_size() const { return ambient_size_; }
    const std::vector<Matrix>& basis() const { return basis_; }
    const Matrix& killing() const { return killing_; }
    const Matrix& ad_basis(int i) const { return ad_[i]; }

    /// Coordinates of [x, y] for coordinate vectors x, y.
    Vector bracket(const Vector& x, const Vector& y) const;
    /// Matrix of ad(x) acting on coordinates.
    Matrix ad(const Vector& x) const;
    /// Ambient matrix of a coordinate vector.
    Matrix ambient(const Vector& x) const;

    double antisymmetry_residual() const;
    double jacobi_residual() const;
    /// Defect of [e_i, e_j] (ambient) against its expansion in the basis.
    double expansion_residual() const;
    double killing_symmetry_residual() const;
    /// killing vs trace(ad . ad) recomputed.
    double killing_trace_residual() const;

private:
    int ambient_size_ = 0;
    std::vector<Matrix> basis_;
    std::vector<Matrix> ad_;  // ad_[i] * y = coords of [e_i, y]
    Matrix killing_;
    Matrix gram_;  // trace Gram matrix of the basis, kept for expansions
};

enum class SpaceType { compact, noncompact, euclidean, product };
const char* to_string(SpaceType t);

struct FactorInfo {
    std::string name;
    std::vector<int> params;
    double scale = 1.0;
    int k_offset = 0, k_dim = 0;
    int p_offset = 0, p_dim = 0;
};

enum class IsotropyMethod { op, bracket, sectional };

class SymmetricSpaceModel;

struct ModelReduction;

/// An orthogonal symmetric Lie algebra (g, theta, k, p) with a Riemannian
/// metric on p. By construction of the catalog the g-basis is ordered with the
/// k-basis first and the p-basis second, the transvection map is the identity
/// inclusion of p-coordinates, and the p-basis is scaled so the metric matrix
/// is the identity.
class SymmetricSpaceModel {
public:
    SymmetricSpaceModel() = default;
    SymmetricSpaceModel(LieAlgebraPresentation g, Matrix theta, int dim_k, int dim_p,
                        Matrix metric, SpaceType type, std::vector<FactorInfo> factors,
                        std::string name, std::vector<int> params, double scale,
                        const Tolerances& tol);

    const LieAlgebraPresentation& algebra() const { return g_; }
    int dim_g() const { return g_.dim(); }
    int dim_k() const { return dim_k_; }
    int dim_p() const { return dim_p_; }
    const Matrix& theta() const { return theta_; }
    const Matrix& metric() const { return metric_; }
    SpaceType type_tag() const { return type_; }
    const std::vector<FactorInfo>& factors() const { return factors_; }
    const std::string& name() const { return name_; }
    const std::vector<int>& params() const { return params_; }
    double scale() const { return scale_; }

    Subspace k_subspace() const;
    Subspace p_subspace() const;

    bool killing_definite_on_p(int sign) const;  // -1 compact-type, +1 noncompact-type
    bool is_definite_type() const { return killing_definite_on_p(-1) || killing_definite_on_p(+1); }

    // p-coordinate inner product through the metric.
    double inner(const Vector& u, const Vector& v) const;
    double norm(const Vector& u) const;

    /// Transvection: p-coordinates -> g-coordinates (identity inclusion).
    Vector transvection(const Vector& x) const;
    /// pi1: g-coordinates -> p-coordinates (left inverse of the transvection,
    /// zero on k).
    Vector pi1(const Vector& X) const;
    Vector k_part(const Vector& X) const;  // k-coordinates (length dim_k)
    Vector embed_k(const Vector& Xk) const;
    double k_membership_residual(const Vector& X) const;

    /// Linearized isotropy representation pi2(X) = ad(X)|p as a matrix on
    /// p-coordinates. Errors unless X lies in k within residual_abs.
    Matrix isotropy_action(const Vector& X, const Tolerances& tol) const;
    /// pi2 extended to all of i(N) by projecting to the k-component first.
    Matrix pi2(const Vector& X) const;

    /// R(x,y)z in p-coordinates.
    Vector curvature(const Vector& x, const Vector& y, const Vector& z) const;
    /// R(x,y) as an operator on p-coordinates.
    Matrix curvature_operator(const Vector& x, const Vector& y) const;
    /// Curvature operator for a pair of p-basis indices (cached).
    const Matrix& curvature_operator_basis(int i, int j) const;
    /// [Gamma_x, Gamma_y] in g-coordinates.
    Vector gamma_bracket(const Vector& x, const Vector& y) const;

    bool is_curvature_invariant(const Subspace& W, const Tolerances& tol) const;
    double curvature_invariance_residual(const Subspace& W) const;
    bool is_curvature_isotropic(const Subspace& W, IsotropyMethod method,
                                const Tolerances& tol) const;

    int rank(const Tolerances& tol) const;

    /// Smallest curvature invariant subspace containing V.
    Subspace curvature_invariant_closure(const Subspace& V, const Tolerances& tol) const;

    /// Totally geodesic reduction along a curvature invariant V: p' = Gamma(V),
    /// k' = [Gamma(V), Gamma(V)], with the inherited metric.
    ModelReduction totally_geodesic_reduce_full(const Subspace& V, const Tolerances& tol) const;
    SymmetricSpaceModel totally_geodesic_reduce(const Subspace& V, const Tolerances& tol) const;

    struct InvariantReport {
        double antisymmetry = 0, jacobi = 0, expansion = 0;
        double killing_symmetry = 0, killing_trace = 0;
        double theta_involution = 0, theta_automorphism = 0;
        double cartan_relations = 0;     // [k,k] in k, [k,p] in p, [p,p] in k
        double metric_skew = 0;          // pi2(k) metric-skew
        double metric_positivity = 0;    // min metric eigenvalue (must be > 0)
        double killing_proportionality = 0;  // metric vs -+ B|p per definite factor
        double worst() const;
    };
    InvariantReport validate(const Tolerances& tol) const;

private:
    void build_caches();

    LieAlgebraPresentation g_;
    Matrix theta_;
    int dim_k_ = 0, dim_p_ = 0;
    Matrix metric_;
    SpaceType type_ = SpaceType::euclidean;
    std::vector<FactorInfo> factors_;
    std::string name_;
    std::vector<int> params_;
    double scale_ = 1.0;
    std::vector<Matrix> pair_brackets_;  // [Gamma e_i, Gamma e_j] g-coords, i<j flattened
    std::vector<Matrix> curv_ops_;       // R(e_i, e_j) on p-coords, i<j flattened
    std::vector<Matrix> ad_p_;           // pi2 of k-basis vectors
};

struct ModelReduction {
    SymmetricSpaceModel model;
    Matrix g_embed;  // dim_g(parent) x dim_g(sub): sub basis in parent coordinates
    Matrix p_embed;  // dim_p(parent) x dim_p(sub)
};

/// Built-in model families:
///   sphere [n]            so(n+1)/so(n), sectional curvature = scale
///   euclidean [n]         so(n) |x R^n, flat
///   cp [n]                su(n+1)/u(n), holomorphic sectional curvature 4*scale
///   grassmannian_su [n]   su(2n)/s(u(n)+u(n))
///   dual_sphere [n]       so(n,1)/so(n), sectional curvature -scale
///   dual_cp [n]           su(n,1)/u(n)
///   dual_grassmannian_su [n]  su(n,n)/s(u(n)+u(n))
SymmetricSpaceModel catalog(const std::string& name, const std::vector<int>& params,
                            double scale = 1.0, const Tolerances& tol = {});
SymmetricSpaceModel catalog_product(const std::vector<SymmetricSpaceModel>& factors,
                                    const Tolerances& tol = {});
bool catalog_has(const std::string& name);
std::vector<std::string> catalog_family_names();

}  // namespace parhom
