#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace parhom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thresholds governing every rank decision, residual test and feasibility
/// verdict in the workbench. All defaults are configurable; nothing below
/// hard-codes its own epsilon.
struct Tolerances {
    double rank_rel = 1e-9;            // relative singular-value cut for rank
    double residual_abs = 1e-8;        // absolute threshold for identity residuals
    double feas_rel = 1e-8;            // relative threshold for feasibility verdicts
    double indeterminate_band = 1e3;   // width of the feasible/infeasible guard band

    void validate() const {
        if (rank_rel <= 0 || residual_abs <= 0 || feas_rel <= 0)
            throw std::invalid_argument("Tolerances: thresholds must be strictly positive");
        if (indeterminate_band <= 1.0)
            throw std::invalid_argument("Tolerances: indeterminate_band must exceed 1");
    }
};

enum class Feasibility { feasible, infeasible, indeterminate };

/// Three-valued verdict for composite checks.
enum class Verdict { yes, no, indeterminate };

const char* to_string(Feasibility f);
const char* to_string(Verdict v);

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StructuralError : std::runtime_error {
    double residual;
    explicit StructuralError(const std::string& what, double res = 0.0)
        : std::runtime_error(what), residual(res) {}
};

/// A linear subspace of R^n held as an orthonormal basis (columns).
/// dim() == 0 subspaces are legal everywhere.
class Subspace {
public:
    Subspace() = default;

    /// Orthonormalize the span of the given column vectors; the dimension is
    /// the numerical rank under tol.rank_rel (relative to the top singular value).
    static Subspace span(const Matrix& vectors, int ambient_dim, const Tolerances& tol);
    static Subspace span_vectors(const std::vector<Vector>& vectors, int ambient_dim,
                                 const Tolerances& tol);

    /// Adopt columns that are already orthonormal (checked loosely).
    static Subspace from_onb(Matrix onb, int ambient_dim);
    static Subspace zero(int ambient_dim);
    static Subspace full(int ambient_dim);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(onb_.cols()); }
    const Matrix& onb() const { return onb_; }

    Vector project(const Vector& v) const;
    Vector reject(const Vector& v) const;          // v minus its projection
    Vector coords(const Vector& v) const;          // onb^T v
    Vector lift(const Vector& c) const;            // onb * c
    double containment_residual(const Vector& v) const;
    bool contains(const Vector& v, double tol_abs) const;
    double containment_residual(const Subspace& s) const;  // max over s.onb columns
    bool contains_subspace(const Subspace& s, double tol_abs) const;

    Subspace complement() const;
    /// Frobenius distance of the orthogonal projectors.
    double distance(const Subspace& other) const;

private:
    int ambient_dim_ = 0;
    Matrix onb_;  // ambient_dim_ x dim
};

struct LeastSquaresResult {
    Vector solution;
    double residual = 0.0;
    Feasibility verdict = Feasibility::indeterminate;
};

/// Minimum-norm least-squares solve of constraint * x = target with a
/// three-valued feasibility verdict:
///   feasible      residual <= feas_rel * max(1, |target|)
///   infeasible    residual >= feas_rel * indeterminate_band * max(1, |target|)
///   indeterminate otherwise
LeastSquaresResult solve_least_squares(const Matrix& constraint, const Vector& target,
                                       const Tolerances& tol);

/// Numerical intersection via the nullspace of stacked orthogonal complements.
Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol);

/// Nullspace of a (possibly rectangular) matrix as a Subspace of R^cols.
Subspace nullspace(const Matrix& a, const Tolerances& tol);

// Operators on R^n are n x n matrices; subspaces of the operator space live in
// R^(n^2) via column-major vectorization.
Vector op_vec(const Matrix& a);
Matrix op_unvec(const Vector& v, int rows, int cols);
Matrix op_unvec(const Vector& v, int n);

/// Basis operators of an operator-space subspace.
std::vector<Matrix> subspace_ops(const Subspace& s, int n);
Subspace span_ops(const std::vector<Matrix>& ops, int n, const Tolerances& tol);

/// Smallest subspace of the operator space containing `seed`, closed under
/// commutators of its own elements and under commutators with `derivations`.
/// Grows a span until the dimension stabilizes.
Subspace bracket_closure(const std::vector<Matrix>& seed, const std::vector<Matrix>& derivations,
                         const Tolerances& tol);

/// Full matrix commutant {A : AB = BA for all B in ops} as an operator-space
/// subspace (callers intersect with skew subspaces where needed). An empty
/// operator list yields the full operator space; ambient_hint supplies the
/// dimension in that case.
Subspace commutant(const std::vector<Matrix>& ops, const Tolerances& tol, int ambient_hint = -1);

struct IsotypicSplit {
    Subspace trivial_part;          // joint kernel of the operators
    std::vector<Subspace> blocks;   // minimal invariant subspaces of the complement
};

/// Randomized invariant-subspace decomposition for a set of skew operators:
/// split the complement of the joint kernel along eigenspaces of a random
/// symmetric commutant element and recurse. Deterministic given the RNG state;
/// blocks are reported in descending dimension, ties broken lexicographically
/// by rounded basis coordinates.
IsotypicSplit isotypic_split(const std::vector<Matrix>& ops, const Tolerances& tol,
                             std::mt19937_64& rng, int ambient_hint = -1);

/// Intertwiner space Hom(U1,U2) for paired operator lists: all L with
/// L * ops_w[i] = ops_u[i] * L. Returned as a subspace of R^(dim2*dim1).
Subspace intertwiner_space(const std::vector<Matrix>& ops_w, const std::vector<Matrix>& ops_u,
                           const Tolerances& tol);

// Deterministic random values (Box-Muller over explicit mt19937_64 draws so
// reports do not depend on the standard library's distribution internals).
double uniform01(std::mt19937_64& rng);
double gaussian(std::mt19937_64& rng);
Vector gaussian_vector(int n, std::mt19937_64& rng);
Vector random_unit_vector(int n, std::mt19937_64& rng);

}  // namespace parhom
