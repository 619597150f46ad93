#include "parhom/numeric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

namespace parhom {

const char* to_string(Feasibility f) {
    switch (f) {
        case Feasibility::feasible: return "feasible";
        case Feasibility::infeasible: return "infeasible";
        case Feasibility::indeterminate: return "indeterminate";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

Subspace Subspace::span(const Matrix& vectors, int ambient_dim, const Tolerances& tol) {
    if (vectors.size() != 0 && vectors.rows() != ambient_dim)
        throw InputError("span: vector length does not match ambient dimension");
    Subspace s;
    s.ambient_dim_ = ambient_dim;
    if (vectors.cols() == 0 || vectors.norm() == 0.0) {
        s.onb_ = Matrix::Zero(ambient_dim, 0);
        return s;
    }
    Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_rel * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    s.onb_ = svd.matrixU().leftCols(rank);
    return s;
}

Subspace Subspace::span_vectors(const std::vector<Vector>& vectors, int ambient_dim,
                                const Tolerances& tol) {
    Matrix m(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
    for (size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != ambient_dim)
            throw InputError("span: vector length does not match ambient dimension");
        m.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return span(m, ambient_dim, tol);
}

Subspace Subspace::from_onb(Matrix onb, int ambient_dim) {
    if (onb.size() != 0 && onb.rows() != ambient_dim)
        throw InputError("from_onb: shape mismatch");
    Subspace s;
    s.ambient_dim_ = ambient_dim;
    s.onb_ = std::move(onb);
    if (s.onb_.size() == 0) s.onb_ = Matrix::Zero(ambient_dim, 0);
    return s;
}

Subspace Subspace::zero(int ambient_dim) { return from_onb(Matrix::Zero(ambient_dim, 0), ambient_dim); }

Subspace Subspace::full(int ambient_dim) {
    return from_onb(Matrix::Identity(ambient_dim, ambient_dim), ambient_dim);
}

Vector Subspace::project(const Vector& v) const {
    if (dim() == 0) return Vector::Zero(ambient_dim_);
    return onb_ * (onb_.transpose() * v);
}

Vector Subspace::reject(const Vector& v) const { return v - project(v); }

Vector Subspace::coords(const Vector& v) const { return onb_.transpose() * v; }

Vector Subspace::lift(const Vector& c) const {
    if (dim() == 0) return Vector::Zero(ambient_dim_);
    return onb_ * c;
}

double Subspace::containment_residual(const Vector& v) const { return reject(v).norm(); }

bool Subspace::contains(const Vector& v, double tol_abs) const {
    return containment_residual(v) <= tol_abs * std::max(1.0, v.norm());
}

double Subspace::containment_residual(const Subspace& s) const {
    double worst = 0.0;
    for (int i = 0; i < s.dim(); ++i)
        worst = std::max(worst, containment_residual(s.onb().col(i)));
    return worst;
}

bool Subspace::contains_subspace(const Subspace& s, double tol_abs) const {
    return containment_residual(s) <= tol_abs;
}

Subspace Subspace::complement() const {
    const int n = ambient_dim_;
    if (dim() == 0) return full(n);
    if (dim() == n) return zero(n);
    // kernel of onb^T
    Eigen::JacobiSVD<Matrix> svd(onb_.transpose(), Eigen::ComputeFullV);
    return from_onb(svd.matrixV().rightCols(n - dim()), n);
}

double Subspace::distance(const Subspace& other) const {
    if (ambient_dim_ != other.ambient_dim_)
        throw InputError("Subspace::distance: ambient mismatch");
    Matrix p1 = dim() ? Matrix(onb_ * onb_.transpose()) : Matrix::Zero(ambient_dim_, ambient_dim_);
    Matrix p2 = other.dim() ? Matrix(other.onb_ * other.onb_.transpose())
                            : Matrix::Zero(ambient_dim_, ambient_dim_);
    return (p1 - p2).norm();
}

LeastSquaresResult solve_least_squares(const Matrix& constraint, const Vector& target,
                                       const Tolerances& tol) {
    if (constraint.rows() != target.size())
        throw InputError("solve_least_squares: row/target mismatch");
    LeastSquaresResult r;
    const double tnorm = target.norm();
    if (constraint.cols() == 0 || constraint.norm() == 0.0) {
        r.solution = Vector::Zero(constraint.cols());
        r.residual = tnorm;
    } else {
        Eigen::JacobiSVD<Matrix> svd(constraint, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(tol.rank_rel);
        r.solution = svd.solve(target);
        r.residual = (constraint * r.solution - target).norm();
    }
    const double scale = std::max(1.0, tnorm);
    if (r.residual <= tol.feas_rel * scale)
        r.verdict = Feasibility::feasible;
    else if (r.residual >= tol.feas_rel * tol.indeterminate_band * scale)
        r.verdict = Feasibility::infeasible;
    else
        r.verdict = Feasibility::indeterminate;
    return r;
}

Subspace nullspace(const Matrix& a, const Tolerances& tol) {
    const int n = static_cast<int>(a.cols());
    if (a.rows() == 0 || a.norm() == 0.0) return Subspace::full(n);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_rel * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return Subspace::from_onb(svd.matrixV().rightCols(n - rank), n);
}

Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    if (a.ambient_dim() != b.ambient_dim())
        throw InputError("intersect: ambient dimension mismatch");
    const int n = a.ambient_dim();
    Subspace ca = a.complement();
    Subspace cb = b.complement();
    Matrix rows(ca.dim() + cb.dim(), n);
    if (ca.dim()) rows.topRows(ca.dim()) = ca.onb().transpose();
    if (cb.dim()) rows.bottomRows(cb.dim()) = cb.onb().transpose();
    if (rows.rows() == 0) return Subspace::full(n);
    return nullspace(rows, tol);
}

Vector op_vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix op_unvec(const Vector& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols)
        throw InputError("op_unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix op_unvec(const Vector& v, int n) { return op_unvec(v, n, n); }

std::vector<Matrix> subspace_ops(const Subspace& s, int n) {
    std::vector<Matrix> ops;
    ops.reserve(s.dim());
    for (int i = 0; i < s.dim(); ++i) ops.push_back(op_unvec(s.onb().col(i), n));
    return ops;
}

Subspace span_ops(const std::vector<Matrix>& ops, int n, const Tolerances& tol) {
    Matrix cols(n * n, static_cast<Eigen::Index>(ops.size()));
    for (size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].rows() != n || ops[i].cols() != n)
            throw InputError("span_ops: operator shape mismatch");
        cols.col(static_cast<Eigen::Index>(i)) = op_vec(ops[i]);
    }
    return Subspace::span(cols, n * n, tol);
}

Subspace bracket_closure(const std::vector<Matrix>& seed, const std::vector<Matrix>& derivations,
                         const Tolerances& tol) {
    int n = -1;
    for (const auto& m : seed) {
        if (m.rows() != m.cols()) throw InputError("bracket_closure: non-square seed operator");
        if (n < 0) n = static_cast<int>(m.rows());
        if (m.rows() != n) throw InputError("bracket_closure: seed sizes differ");
    }
    for (const auto& m : derivations) {
        if (m.rows() != m.cols()) throw InputError("bracket_closure: non-square derivation");
        if (n < 0) n = static_cast<int>(m.rows());
        if (m.rows() != n) throw InputError("bracket_closure: derivation size differs");
    }
    if (n < 0) n = 0;
    Subspace s = span_ops(seed, n, tol);
    while (true) {
        std::vector<Matrix> basis = subspace_ops(s, n);
        std::vector<Matrix> next = basis;
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i + 1; j < basis.size(); ++j)
                next.push_back(basis[i] * basis[j] - basis[j] * basis[i]);
        for (const auto& d : derivations)
            for (const auto& bop : basis)
                next.push_back(d * bop - bop * d);
        Subspace grown = span_ops(next, n, tol);
        if (grown.dim() == s.dim()) return grown;
        s = grown;
    }
}

Subspace commutant(const std::vector<Matrix>& ops, const Tolerances& tol, int ambient_hint) {
    int n = ambient_hint;
    for (const auto& m : ops) {
        if (m.rows() != m.cols()) throw InputError("commutant: non-square operator");
        if (n < 0) n = static_cast<int>(m.rows());
        if (m.rows() != n) throw InputError("commutant: operator sizes differ");
    }
    if (n < 0) throw InputError("commutant: cannot infer dimension from empty input");
    if (ops.empty()) return Subspace::full(n * n);
    // vec(AB - BA) = (B^T (x) I - I (x) B) vec(A)
    Matrix stacked(static_cast<Eigen::Index>(ops.size()) * n * n, n * n);
    const Matrix id = Matrix::Identity(n, n);
    for (size_t k = 0; k < ops.size(); ++k) {
        Matrix block = Eigen::kroneckerProduct(ops[k].transpose(), id) -
                       Eigen::kroneckerProduct(id, ops[k]);
        stacked.middleRows(static_cast<Eigen::Index>(k) * n * n, n * n) = block;
    }
    return nullspace(stacked, tol);
}

Subspace intertwiner_space(const std::vector<Matrix>& ops_w, const std::vector<Matrix>& ops_u,
                           const Tolerances& tol) {
    if (ops_w.size() != ops_u.size())
        throw InputError("intertwiner_space: operator lists must be paired");
    if (ops_w.empty()) throw InputError("intertwiner_space: empty operator lists");
    const int d1 = static_cast<int>(ops_w[0].rows());
    const int d2 = static_cast<int>(ops_u[0].rows());
    // vec(L * W - U * L) = (W^T (x) I_{d2} - I_{d1} (x) U) vec(L), L is d2 x d1
    Matrix stacked(static_cast<Eigen::Index>(ops_w.size()) * d1 * d2, d1 * d2);
    for (size_t k = 0; k < ops_w.size(); ++k) {
        if (ops_w[k].rows() != d1 || ops_w[k].cols() != d1 || ops_u[k].rows() != d2 ||
            ops_u[k].cols() != d2)
            throw InputError("intertwiner_space: inconsistent operator shapes");
        Matrix block = Eigen::kroneckerProduct(ops_w[k].transpose(), Matrix::Identity(d2, d2)) -
                       Eigen::kroneckerProduct(Matrix::Identity(d1, d1), ops_u[k]);
        stacked.middleRows(static_cast<Eigen::Index>(k) * d1 * d2, d1 * d2) = block;
    }
    return nullspace(stacked, tol);
}

namespace {

// Restrict an ambient operator to a subspace given by onb columns Q: Q^T A Q.
Matrix restrict_op(const Matrix& a, const Matrix& q) { return q.transpose() * a * q; }

// Deterministic tie-break key for a subspace: rounded onb coordinates.
bool block_less(const Subspace& a, const Subspace& b) {
    if (a.dim() != b.dim()) return a.dim() > b.dim();
    const auto round6 = [](double x) { return std::round(x * 1e6); };
    for (int c = 0; c < a.dim(); ++c)
        for (int r = 0; r < a.ambient_dim(); ++r) {
            const double x = round6(a.onb()(r, c)), y = round6(b.onb()(r, c));
            if (x != y) return x < y;
        }
    return false;
}

void split_recursive(const std::vector<Matrix>& ops, const Matrix& q, const Tolerances& tol,
                     std::mt19937_64& rng, std::vector<Subspace>& out) {
    const int n = static_cast<int>(q.rows());
    const int m = static_cast<int>(q.cols());
    if (m == 0) return;
    if (m == 1) {
        out.push_back(Subspace::from_onb(q, n));
        return;
    }
    std::vector<Matrix> rops;
    rops.reserve(ops.size());
    for (const auto& a : ops) rops.push_back(restrict_op(a, q));
    Subspace comm = commutant(rops, tol);
    // Symmetric part of the commutant: for skew operator sets it is R*Id exactly
    // when the module is irreducible.
    std::vector<Vector> sym_vecs;
    for (int i = 0; i < comm.dim(); ++i) {
        Matrix c = op_unvec(comm.onb().col(i), m);
        Matrix s = 0.5 * (c + c.transpose());
        sym_vecs.push_back(op_vec(s));
    }
    Subspace sym_comm = Subspace::span_vectors(sym_vecs, m * m, tol);
    if (sym_comm.dim() <= 1) {
        out.push_back(Subspace::from_onb(q, n));
        return;
    }
    // Random symmetric commutant element; split along its eigenvalue clusters.
    // A degenerate draw gets a few retries before the block is kept whole.
    for (int attempt = 0; attempt < 5; ++attempt) {
        Vector w = Vector::Zero(m * m);
        for (int i = 0; i < sym_comm.dim(); ++i) w += gaussian(rng) * sym_comm.onb().col(i);
        Matrix s = op_unvec(w, m);
        s = 0.5 * (s + s.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(s);
        const Vector ev = es.eigenvalues();
        const Matrix evec = es.eigenvectors();
        const double spread = std::max(1.0, ev.cwiseAbs().maxCoeff());
        const double gap = 1e-6 * spread;
        int start = 0;
        std::vector<std::pair<int, int>> clusters;
        for (int i = 1; i <= m; ++i) {
            if (i == m || ev(i) - ev(i - 1) > gap) {
                clusters.emplace_back(start, i - start);
                start = i;
            }
        }
        if (clusters.size() <= 1) continue;
        for (auto [off, len] : clusters) {
            Matrix sub = q * evec.middleCols(off, len);
            split_recursive(ops, sub, tol, rng, out);
        }
        return;
    }
    out.push_back(Subspace::from_onb(q, n));
}

}  // namespace

IsotypicSplit isotypic_split(const std::vector<Matrix>& ops, const Tolerances& tol,
                             std::mt19937_64& rng, int ambient_hint) {
    int n = ambient_hint;
    for (const auto& m : ops) {
        if (m.rows() != m.cols()) throw InputError("isotypic_split: non-square operator");
        if (n < 0) n = static_cast<int>(m.rows());
        if (m.rows() != n) throw InputError("isotypic_split: operator sizes differ");
    }
    if (n < 0) throw InputError("isotypic_split: cannot infer dimension from empty input");
    IsotypicSplit result;
    if (ops.empty()) {
        result.trivial_part = Subspace::full(n);
        return result;
    }
    Matrix stacked(static_cast<Eigen::Index>(ops.size()) * n, n);
    for (size_t k = 0; k < ops.size(); ++k)
        stacked.middleRows(static_cast<Eigen::Index>(k) * n, n) = ops[k];
    result.trivial_part = nullspace(stacked, tol);
    Subspace comp = result.trivial_part.complement();
    split_recursive(ops, comp.onb(), tol, rng, result.blocks);
    std::sort(result.blocks.begin(), result.blocks.end(), block_less);
    return result;
}

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa draw, independent of distribution internals
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

double gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 1e-300) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Vector gaussian_vector(int n, std::mt19937_64& rng) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian(rng);
    return v;
}

Vector random_unit_vector(int n, std::mt19937_64& rng) {
    Vector v = gaussian_vector(n, rng);
    double nrm = v.norm();
    while (nrm < 1e-12) {
        v = gaussian_vector(n, rng);
        nrm = v.norm();
    }
    return v / nrm;
}

}  // namespace parhom
