#include "parhom/lie_model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace parhom {

const char* to_string(SpaceType t) {
    switch (t) {
        case SpaceType::compact: return "compact";
        case SpaceType::noncompact: return "noncompact";
        case SpaceType::euclidean: return "euclidean";
        case SpaceType::product: return "product";
    }
    return "?";
}

LieAlgebraPresentation LieAlgebraPresentation::from_basis(std::vector<Matrix> basis,
                                                          const Tolerances& tol) {
    LieAlgebraPresentation g;
    g.basis_ = std::move(basis);
    const int n = g.dim();
    if (n == 0) {
        g.killing_ = Matrix::Zero(0, 0);
        return g;
    }
    g.ambient_size_ = static_cast<int>(g.basis_[0].rows());
    for (const auto& b : g.basis_)
        if (b.rows() != g.ambient_size_ || b.cols() != g.ambient_size_)
            throw InputError("LieAlgebraPresentation: basis matrices must be square and equal size");

    g.gram_ = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            g.gram_(i, j) = g.gram_(j, i) = (g.basis_[i].transpose() * g.basis_[j]).trace();
    Eigen::LDLT<Matrix> gram_solver(g.gram_);
    if (gram_solver.info() != Eigen::Success)
        throw InputError("LieAlgebraPresentation: basis is numerically dependent");

    // Expand all pairwise brackets in the basis; c[i][j][k] sits in column k.
    std::vector<std::vector<Vector>> c(n, std::vector<Vector>(n));
    double expansion_defect = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Matrix br = g.basis_[i] * g.basis_[j] - g.basis_[j] * g.basis_[i];
            Vector rhs(n);
            for (int k = 0; k < n; ++k) rhs(k) = (g.basis_[k].transpose() * br).trace();
            Vector coef = gram_solver.solve(rhs);
            Matrix recon = Matrix::Zero(g.ambient_size_, g.ambient_size_);
            for (int k = 0; k < n; ++k) recon += coef(k) * g.basis_[k];
            expansion_defect = std::max(expansion_defect, (recon - br).norm());
            c[i][j] = coef;
        }
    }
    if (expansion_defect > tol.residual_abs * 1e3)
        throw InputError("LieAlgebraPresentation: basis does not close under brackets");

    g.ad_.resize(n);
    for (int i = 0; i < n; ++i) {
        Matrix adi(n, n);
        for (int j = 0; j < n; ++j) adi.col(j) = c[i][j];
        g.ad_[i] = adi;
    }
    g.killing_ = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            g.killing_(i, j) = g.killing_(j, i) = (g.ad_[i] * g.ad_[j]).trace();
    return g;
}

Vector LieAlgebraPresentation::bracket(const Vector& x, const Vector& y) const {
    Vector out = Vector::Zero(dim());
    for (int i = 0; i < dim(); ++i)
        if (x(i) != 0.0) out += x(i) * (ad_[i] * y);
    return out;
}

Matrix LieAlgebraPresentation::ad(const Vector& x) const {
    Matrix out = Matrix::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
        if (x(i) != 0.0) out += x(i) * ad_[i];
    return out;
}

Matrix LieAlgebraPresentation::ambient(const Vector& x) const {
    Matrix out = Matrix::Zero(ambient_size_, ambient_size_);
    for (int i = 0; i < dim(); ++i)
        if (x(i) != 0.0) out += x(i) * basis_[i];
    return out;
}

double LieAlgebraPresentation::antisymmetry_residual() const {
    double worst = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            worst = std::max(worst, (ad_[i].col(j) + ad_[j].col(i)).norm());
    return worst;
}

double LieAlgebraPresentation::jacobi_residual() const {
    const int n = dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        Vector ei = Vector::Unit(n, i);
        for (int j = i + 1; j < n; ++j) {
            Vector ej = Vector::Unit(n, j);
            for (int k = j + 1; k < n; ++k) {
                Vector ek = Vector::Unit(n, k);
                Vector sum = bracket(bracket(ei, ej), ek) + bracket(bracket(ej, ek), ei) +
                             bracket(bracket(ek, ei), ej);
                worst = std::max(worst, sum.norm());
            }
        }
    }
    return worst;
}

double LieAlgebraPresentation::expansion_residual() const {
    const int n = dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Matrix br = basis_[i] * basis_[j] - basis_[j] * basis_[i];
            Matrix recon = Matrix::Zero(ambient_size_, ambient_size_);
            for (int k = 0; k < n; ++k) recon += ad_[i](k, j) * basis_[k];
            worst = std::max(worst, (recon - br).norm());
        }
    return worst;
}

double LieAlgebraPresentation::killing_symmetry_residual() const {
    return (killing_ - killing_.transpose()).norm();
}

double LieAlgebraPresentation::killing_trace_residual() const {
    double worst = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            worst = std::max(worst, std::abs(killing_(i, j) - (ad_[i] * ad_[j]).trace()));
    return worst;
}

SymmetricSpaceModel::SymmetricSpaceModel(LieAlgebraPresentation g, Matrix theta, int dim_k,
                                         int dim_p, Matrix metric, SpaceType type,
                                         std::vector<FactorInfo> factors, std::string name,
                                         std::vector<int> params, double scale,
                                         const Tolerances& tol)
    : g_(std::move(g)),
      theta_(std::move(theta)),
      dim_k_(dim_k),
      dim_p_(dim_p),
      metric_(std::move(metric)),
      type_(type),
      factors_(std::move(factors)),
      name_(std::move(name)),
      params_(std::move(params)),
      scale_(scale) {
    if (dim_k_ + dim_p_ != g_.dim())
        throw InputError("SymmetricSpaceModel: dim k + dim p must equal dim g");
    if (metric_.rows() != dim_p_ || metric_.cols() != dim_p_)
        throw InputError("SymmetricSpaceModel: metric shape mismatch");
    (void)tol;
    build_caches();
}

void SymmetricSpaceModel::build_caches() {
    ad_p_.resize(dim_k_);
    for (int a = 0; a < dim_k_; ++a) {
        Vector X = Vector::Zero(g_.dim());
        X(a) = 1.0;
        ad_p_[a] = g_.ad(X).block(dim_k_, dim_k_, dim_p_, dim_p_);
    }
    const int p = dim_p_;
    pair_brackets_.assign(static_cast<size_t>(p) * p, Matrix());
    curv_ops_.assign(static_cast<size_t>(p) * p, Matrix());
    for (int i = 0; i < p; ++i) {
        Vector gi = transvection(Vector::Unit(p, i));
        for (int j = i + 1; j < p; ++j) {
            Vector gj = transvection(Vector::Unit(p, j));
            Vector br = g_.bracket(gi, gj);
            pair_brackets_[static_cast<size_t>(i) * p + j] = br;
            curv_ops_[static_cast<size_t>(i) * p + j] = -pi2(br);
        }
    }
}

Subspace SymmetricSpaceModel::k_subspace() const {
    Matrix onb = Matrix::Zero(dim_g(), dim_k_);
    onb.topRows(dim_k_) = Matrix::Identity(dim_k_, dim_k_);
    return Subspace::from_onb(onb, dim_g());
}

Subspace SymmetricSpaceModel::p_subspace() const {
    Matrix onb = Matrix::Zero(dim_g(), dim_p_);
    onb.bottomRows(dim_p_) = Matrix::Identity(dim_p_, dim_p_);
    return Subspace::from_onb(onb, dim_g());
}

bool SymmetricSpaceModel::killing_definite_on_p(int sign) const {
    if (dim_p_ == 0) return false;
    Matrix bp = g_.killing().block(dim_k_, dim_k_, dim_p_, dim_p_);
    Eigen::SelfAdjointEigenSolver<Matrix> es(bp);
    const double margin = 1e-9 * std::max(1.0, bp.norm());
    for (int i = 0; i < dim_p_; ++i)
        if (sign * es.eigenvalues()(i) <= margin) return false;
    return true;
}

double SymmetricSpaceModel::inner(const Vector& u, const Vector& v) const {
    return u.dot(metric_ * v);
}

double SymmetricSpaceModel::norm(const Vector& u) const { return std::sqrt(std::max(0.0, inner(u, u))); }

Vector SymmetricSpaceModel::transvection(const Vector& x) const {
    if (x.size() != dim_p_) throw InputError("transvection: p-coordinate length mismatch");
    Vector X = Vector::Zero(dim_g());
    X.tail(dim_p_) = x;
    return X;
}

Vector SymmetricSpaceModel::pi1(const Vector& X) const {
    if (X.size() != dim_g()) throw InputError("pi1: g-coordinate length mismatch");
    return X.tail(dim_p_);
}

Vector SymmetricSpaceModel::k_part(const Vector& X) const { return X.head(dim_k_); }

Vector SymmetricSpaceModel::embed_k(const Vector& Xk) const {
    if (Xk.size() != dim_k_) throw InputError("embed_k: k-coordinate length mismatch");
    Vector X = Vector::Zero(dim_g());
    X.head(dim_k_) = Xk;
    return X;
}

double SymmetricSpaceModel::k_membership_residual(const Vector& X) const {
    return X.tail(dim_p_).norm();
}

Matrix SymmetricSpaceModel::isotropy_action(const Vector& X, const Tolerances& tol) const {
    if (k_membership_residual(X) > tol.residual_abs * std::max(1.0, X.norm()))
        throw InputError("isotropy_action: argument is not in k");
    return pi2(X);
}

Matrix SymmetricSpaceModel::pi2(const Vector& X) const {
    Matrix out = Matrix::Zero(dim_p_, dim_p_);
    for (int a = 0; a < dim_k_; ++a)
        if (X(a) != 0.0) out += X(a) * ad_p_[a];
    return out;
}

const Matrix& SymmetricSpaceModel::curvature_operator_basis(int i, int j) const {
    return curv_ops_[static_cast<size_t>(std::min(i, j)) * dim_p_ + std::max(i, j)];
}

Vector SymmetricSpaceModel::gamma_bracket(const Vector& x, const Vector& y) const {
    Vector out = Vector::Zero(dim_g());
    for (int i = 0; i < dim_p_; ++i) {
        if (x(i) == 0.0 && y(i) == 0.0) continue;
        for (int j = i + 1; j < dim_p_; ++j) {
            const double w = x(i) * y(j) - x(j) * y(i);
            if (w != 0.0) out += w * pair_brackets_[static_cast<size_t>(i) * dim_p_ + j];
        }
    }
    return out;
}

Matrix SymmetricSpaceModel::curvature_operator(const Vector& x, const Vector& y) const {
    Matrix out = Matrix::Zero(dim_p_, dim_p_);
    for (int i = 0; i < dim_p_; ++i) {
        if (x(i) == 0.0 && y(i) == 0.0) continue;
        for (int j = i + 1; j < dim_p_; ++j) {
            const double w = x(i) * y(j) - x(j) * y(i);
            if (w != 0.0) out += w * curv_ops_[static_cast<size_t>(i) * dim_p_ + j];
        }
    }
    return out;
}

Vector SymmetricSpaceModel::curvature(const Vector& x, const Vector& y, const Vector& z) const {
    return curvature_operator(x, y) * z;
}

double SymmetricSpaceModel::curvature_invariance_residual(const Subspace& W) const {
    const int m = W.dim();
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Matrix r = curvature_operator(W.onb().col(i), W.onb().col(j));
            for (int k = 0; k < m; ++k)
                worst = std::max(worst, W.reject(r * W.onb().col(k)).norm());
        }
    return worst;
}

bool SymmetricSpaceModel::is_curvature_invariant(const Subspace& W, const Tolerances& tol) const {
    return curvature_invariance_residual(W) <= tol.residual_abs;
}

bool SymmetricSpaceModel::is_curvature_isotropic(const Subspace& W, IsotropyMethod method,
                                                 const Tolerances& tol) const {
    const int m = W.dim();
    const Matrix& U = W.onb();
    switch (method) {
        case IsotropyMethod::op: {
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (curvature_operator(U.col(i), U.col(j)).norm() > tol.residual_abs)
                        return false;
            return true;
        }
        case IsotropyMethod::bracket: {
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (gamma_bracket(U.col(i), U.col(j)).norm() > tol.residual_abs) return false;
            return true;
        }
        case IsotropyMethod::sectional: {
            // Vanishing of <R(u,v)v,u> for all u,v in W is equivalent to the
            // vanishing of its polarization over basis 4-tuples.
            for (int a = 0; a < m; ++a)
                for (int b = a; b < m; ++b)
                    for (int c = 0; c < m; ++c)
                        for (int d = c; d < m; ++d) {
                            const Vector &u1 = U.col(a), &u2 = U.col(b), &v1 = U.col(c),
                                         &v2 = U.col(d);
                            double t = inner(curvature(u1, v1, v2), u2) +
                                       inner(curvature(u1, v2, v1), u2) +
                                       inner(curvature(u2, v1, v2), u1) +
                                       inner(curvature(u2, v2, v1), u1);
                            if (std::abs(t) > tol.residual_abs) return false;
                        }
            return true;
        }
    }
    return false;
}

int SymmetricSpaceModel::rank(const Tolerances& tol) const {
    const int p = dim_p_;
    int best = 0;
    for (int seed = 0; seed < p; ++seed) {
        std::vector<Vector> abelian{Vector::Unit(p, seed)};
        while (true) {
            // v must centralize every chosen direction: [Gamma a, Gamma v] = 0.
            Matrix stacked(static_cast<Eigen::Index>(abelian.size()) * dim_g(), p);
            for (size_t a = 0; a < abelian.size(); ++a) {
                Matrix block(dim_g(), p);
                for (int j = 0; j < p; ++j)
                    block.col(j) = gamma_bracket(abelian[a], Vector::Unit(p, j));
                stacked.middleRows(static_cast<Eigen::Index>(a) * dim_g(), dim_g()) = block;
            }
            Subspace central = nullspace(stacked, tol);
            Subspace fresh = intersect(
                central, Subspace::span_vectors(abelian, p, tol).complement(), tol);
            if (fresh.dim() == 0) break;
            abelian.push_back(fresh.onb().col(0));
        }
        best = std::max(best, static_cast<int>(abelian.size()));
    }
    return best;
}

Subspace SymmetricSpaceModel::curvature_invariant_closure(const Subspace& V,
                                                          const Tolerances& tol) const {
    Subspace s = V;
    while (true) {
        std::vector<Vector> gen;
        for (int i = 0; i < s.dim(); ++i) gen.push_back(s.onb().col(i));
        const int base = s.dim();
        for (int i = 0; i < base; ++i)
            for (int j = i + 1; j < base; ++j) {
                Matrix r = curvature_operator(s.onb().col(i), s.onb().col(j));
                for (int k = 0; k < base; ++k) gen.push_back(r * s.onb().col(k));
            }
        Subspace grown = Subspace::span_vectors(gen, dim_p_, tol);
        if (grown.dim() == s.dim()) return grown;
        s = grown;
    }
}

ModelReduction SymmetricSpaceModel::totally_geodesic_reduce_full(const Subspace& V,
                                                                 const Tolerances& tol) const {
    if (!is_curvature_invariant(V, tol))
        throw StructuralError("totally_geodesic_reduce: subspace is not curvature invariant",
                              curvature_invariance_residual(V));
    const int m = V.dim();
    // p' = Gamma(V); k' = [Gamma(V), Gamma(V)]
    std::vector<Vector> bracket_gens;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            bracket_gens.push_back(gamma_bracket(V.onb().col(i), V.onb().col(j)));
    Subspace kprime = Subspace::span_vectors(bracket_gens, dim_g(), tol);

    const int nk = kprime.dim();
    Matrix g_embed(dim_g(), nk + m);
    for (int i = 0; i < nk; ++i) g_embed.col(i) = kprime.onb().col(i);
    for (int i = 0; i < m; ++i) g_embed.col(nk + i) = transvection(V.onb().col(i));

    std::vector<Matrix> sub_basis;
    for (int i = 0; i < nk + m; ++i) sub_basis.push_back(g_.ambient(g_embed.col(i)));
    LieAlgebraPresentation sub = LieAlgebraPresentation::from_basis(std::move(sub_basis), tol);

    Matrix theta = Matrix::Identity(nk + m, nk + m);
    theta.bottomRightCorner(m, m) *= -1.0;
    Matrix sub_metric = V.onb().transpose() * metric_ * V.onb();

    // Classify by the definiteness of the Killing form on p'.
    Matrix bp = sub.killing().bottomRightCorner(m, m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(bp);
    const double margin = 1e-9 * std::max(1.0, sub.killing().norm());
    bool all_neg = true, all_pos = true, all_zero = true;
    for (int i = 0; i < m; ++i) {
        const double ev = es.eigenvalues()(i);
        all_neg = all_neg && ev < -margin;
        all_pos = all_pos && ev > margin;
        all_zero = all_zero && std::abs(ev) <= margin;
    }
    SpaceType type = SpaceType::product;
    if (all_neg) type = SpaceType::compact;
    else if (all_pos) type = SpaceType::noncompact;
    else if (all_zero) type = SpaceType::euclidean;

    FactorInfo info{"reduced", {}, 1.0, 0, nk, 0, m};
    ModelReduction red{SymmetricSpaceModel(std::move(sub), std::move(theta), nk, m,
                                           std::move(sub_metric), type, {info}, "reduced", {},
                                           scale_, tol),
                       std::move(g_embed), Matrix(V.onb())};
    return red;
}

SymmetricSpaceModel SymmetricSpaceModel::totally_geodesic_reduce(const Subspace& V,
                                                                 const Tolerances& tol) const {
    return totally_geodesic_reduce_full(V, tol).model;
}

double SymmetricSpaceModel::InvariantReport::worst() const {
    double w = std::max({antisymmetry, jacobi, expansion, killing_symmetry, killing_trace,
                         theta_involution, theta_automorphism, cartan_relations, metric_skew,
                         killing_proportionality});
    if (metric_positivity <= 0) w = std::max(w, 1.0);
    return w;
}

SymmetricSpaceModel::InvariantReport SymmetricSpaceModel::validate(const Tolerances& tol) const {
    InvariantReport rep;
    rep.antisymmetry = g_.antisymmetry_residual();
    rep.jacobi = g_.jacobi_residual();
    rep.expansion = g_.expansion_residual();
    rep.killing_symmetry = g_.killing_symmetry_residual();
    rep.killing_trace = g_.killing_trace_residual();
    rep.theta_involution = (theta_ * theta_ - Matrix::Identity(dim_g(), dim_g())).norm();

    const int n = dim_g();
    double auto_res = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vector lhs = theta_ * g_.bracket(Vector::Unit(n, i), Vector::Unit(n, j));
            Vector rhs = g_.bracket(theta_ * Vector::Unit(n, i), theta_ * Vector::Unit(n, j));
            auto_res = std::max(auto_res, (lhs - rhs).norm());
        }
    rep.theta_automorphism = auto_res;

    double cartan = 0.0;
    for (int i = 0; i < dim_k_; ++i)
        for (int j = i + 1; j < dim_k_; ++j) {
            Vector br = g_.bracket(Vector::Unit(n, i), Vector::Unit(n, j));
            cartan = std::max(cartan, br.tail(dim_p_).norm());  // [k,k] in k
        }
    for (int i = 0; i < dim_k_; ++i)
        for (int j = 0; j < dim_p_; ++j) {
            Vector br = g_.bracket(Vector::Unit(n, i), Vector::Unit(n, dim_k_ + j));
            cartan = std::max(cartan, br.head(dim_k_).norm());  // [k,p] in p
        }
    for (int i = 0; i < dim_p_; ++i)
        for (int j = i + 1; j < dim_p_; ++j) {
            Vector br = g_.bracket(Vector::Unit(n, dim_k_ + i), Vector::Unit(n, dim_k_ + j));
            cartan = std::max(cartan, br.tail(dim_p_).norm());  // [p,p] in k
        }
    rep.cartan_relations = cartan;

    double skew = 0.0;
    for (int a = 0; a < dim_k_; ++a)
        skew = std::max(skew, (ad_p_[a].transpose() * metric_ + metric_ * ad_p_[a]).norm());
    rep.metric_skew = skew;

    Eigen::SelfAdjointEigenSolver<Matrix> es(metric_);
    rep.metric_positivity = es.eigenvalues().minCoeff();

    double prop = 0.0;
    for (const auto& f : factors_) {
        const bool compact_family =
            f.name == "sphere" || f.name == "cp" || f.name == "grassmannian_su";
        const bool dual = f.name.rfind("dual_", 0) == 0;
        Matrix bp = g_.killing().block(dim_k_ + f.p_offset, dim_k_ + f.p_offset, f.p_dim, f.p_dim);
        if (f.name == "euclidean") {
            prop = std::max(prop, bp.norm());
            continue;
        }
        if (!compact_family && !dual) continue;  // reduced / inline factors are not pinned
        Matrix mp = metric_.block(f.p_offset, f.p_offset, f.p_dim, f.p_dim);
        const double c = (bp.cwiseProduct(mp)).sum() / (mp.cwiseProduct(mp)).sum();
        double res = (bp - c * mp).norm() / std::max(1.0, bp.norm());
        if ((dual && c <= 0) || (!dual && c >= 0)) res = std::max(res, 1.0);
        prop = std::max(prop, res);
    }
    rep.killing_proportionality = prop;
    (void)tol;
    return rep;
}

}  // namespace parhom
