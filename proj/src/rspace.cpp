#include "parhom/rspace.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace parhom {

namespace {

// Worst distance of the spectrum from {0, +-i}.
double spectrum_deviation(const Matrix& a) {
    Eigen::EigenSolver<Matrix> es(a);
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        const std::complex<double> ev = es.eigenvalues()(i);
        const double d0 = std::abs(ev);
        const double di = std::min(std::abs(ev - std::complex<double>(0, 1)),
                                   std::abs(ev + std::complex<double>(0, 1)));
        worst = std::max(worst, std::min(d0, di));
    }
    return worst;
}

// One eigenvalue-snapping step: diagonalize ad(X), project every eigenvalue to
// the nearest of {0, +-i}, rebuild, and solve back for the closest element of
// ad(p).
Vector snap_step(const SymmetricSpaceModel& space, const Vector& x_p, const Tolerances& tol) {
    const int n = space.dim_g();
    Matrix a = space.algebra().ad(space.transvection(x_p));
    Eigen::EigenSolver<Matrix> es(a);
    Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::VectorXcd d = es.eigenvalues();
    for (int i = 0; i < n; ++i) {
        const std::complex<double> ev = d(i);
        const double d0 = std::abs(ev);
        const double dplus = std::abs(ev - std::complex<double>(0, 1));
        const double dminus = std::abs(ev + std::complex<double>(0, 1));
        if (d0 <= dplus && d0 <= dminus)
            d(i) = 0.0;
        else if (dplus <= dminus)
            d(i) = std::complex<double>(0, 1);
        else
            d(i) = std::complex<double>(0, -1);
    }
    Matrix target = (v * d.asDiagonal() * v.inverse()).real();
    // least squares for X' in p with ad(X') closest to the snapped operator
    const int p = space.dim_p();
    Matrix cols(n * n, p);
    for (int t = 0; t < p; ++t)
        cols.col(t) = op_vec(space.algebra().ad(space.transvection(Vector::Unit(p, t))));
    LeastSquaresResult ls = solve_least_squares(cols, op_vec(target), tol);
    return ls.solution;
}

Subspace center_of_k(const SymmetricSpaceModel& space, const Tolerances& tol) {
    const int dk = space.dim_k();
    if (dk == 0) return Subspace::zero(0);
    Matrix rows(static_cast<Eigen::Index>(dk) * dk, dk);
    for (int b = 0; b < dk; ++b) {
        Vector eb = space.embed_k(Vector::Unit(dk, b));
        for (int c = 0; c < dk; ++c) {
            Vector br = space.algebra().bracket(space.embed_k(Vector::Unit(dk, c)), eb);
            rows.block(static_cast<Eigen::Index>(b) * dk, c, dk, 1) = br.head(dk);
        }
    }
    return nullspace(rows, tol);
}

}  // namespace

std::pair<Subspace, Subspace> split_k(const SymmetricSpaceModel& space, const Vector& X,
                                      const Tolerances& tol) {
    if (X.norm() < tol.residual_abs) throw InputError("split_k: X must be nonzero");
    const int dk = space.dim_k();
    const int n = space.dim_g();
    Matrix adx = space.algebra().ad(X);
    Matrix ad_on_k(n, dk);
    Matrix ad2_on_k(dk, dk);
    double leak = 0.0;
    for (int a = 0; a < dk; ++a) {
        Vector e = space.embed_k(Vector::Unit(dk, a));
        Vector first = adx * e;
        ad_on_k.col(a) = first;
        Vector second = adx * first;
        leak = std::max(leak, second.tail(space.dim_p()).norm());
        ad2_on_k.col(a) = second.head(dk);
    }
    if (leak > tol.residual_abs * std::max(1.0, adx.norm()))
        throw StructuralError("split_k: ad(X)^2 does not preserve k", leak);
    Subspace k0 = nullspace(ad_on_k, tol);
    Subspace kminus = nullspace(ad2_on_k + Matrix::Identity(dk, dk), tol);
    if (k0.dim() + kminus.dim() != dk)
        throw StructuralError("split_k: k0 + kminus does not exhaust k",
                              static_cast<double>(dk - k0.dim() - kminus.dim()));
    return {k0, kminus};
}

RSpaceDatum make_rspace_datum(const SymmetricSpaceModel& space, const Vector& X,
                              const Tolerances& tol) {
    RSpaceDatum d;
    d.space = &space;
    d.X = X;
    Matrix adx = space.algebra().ad(X);
    d.ad_cube_residual = (adx * adx * adx + adx).norm();
    d.eigenvalue_deviation = spectrum_deviation(adx);
    auto [k0, kminus] = split_k(space, X, tol);
    d.k0 = k0;
    d.kminus = kminus;
    d.center = center_of_k(space, tol);
    for (int i = 0; i < d.kminus.dim(); ++i)
        d.tangent_ops.push_back(space.pi2(space.embed_k(d.kminus.onb().col(i))));
    return d;
}

std::optional<RSpaceDatum> find_rspace_element(const SymmetricSpaceModel& space, int attempts,
                                               std::uint64_t rng_seed, const Tolerances& tol) {
    if (!space.killing_definite_on_p(-1)) return std::nullopt;  // compact type only
    std::mt19937_64 rng(rng_seed);
    const int p = space.dim_p();
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Vector x = random_unit_vector(p, rng);
        for (int iter = 0; iter < 50; ++iter) {
            x = snap_step(space, x, tol);
            if (x.norm() < 1e-6) break;  // collapsed to zero, restart
            Matrix adx = space.algebra().ad(space.transvection(x));
            if ((adx * adx * adx + adx).norm() <= tol.residual_abs &&
                adx.norm() > tol.residual_abs)
                return make_rspace_datum(space, space.transvection(x), tol);
        }
    }
    return std::nullopt;
}

std::pair<bool, double> verify_k0_equals_bracket(const RSpaceDatum& datum, const Tolerances& tol) {
    const SymmetricSpaceModel& space = *datum.space;
    const int dk = space.dim_k();
    std::vector<Vector> gens;
    for (int i = 0; i < datum.kminus.dim(); ++i)
        for (int j = i + 1; j < datum.kminus.dim(); ++j) {
            Vector br = space.algebra().bracket(space.embed_k(datum.kminus.onb().col(i)),
                                                space.embed_k(datum.kminus.onb().col(j)));
            gens.push_back(br.head(dk));
        }
    Subspace span_br = Subspace::span_vectors(gens, dk, tol);
    const double res = std::max(datum.k0.containment_residual(span_br),
                                span_br.containment_residual(datum.k0));
    const bool ok = span_br.dim() == datum.k0.dim() && res <= tol.residual_abs;
    return {ok, res};
}

std::pair<bool, double> verify_commutant_is_center(const RSpaceDatum& datum,
                                                   const Tolerances& tol) {
    const SymmetricSpaceModel& space = *datum.space;
    if (space.factors().size() != 1 || space.type_tag() == SpaceType::euclidean ||
        space.type_tag() == SpaceType::product)
        throw InputError("verify_commutant_is_center: model must be a single irreducible factor");
    const int p = space.dim_p();
    std::vector<Matrix> ops;
    for (int a = 0; a < space.dim_k(); ++a)
        ops.push_back(space.pi2(space.embed_k(Vector::Unit(space.dim_k(), a))));
    Subspace comm_skew = intersect(commutant(ops, tol), so_subspace(p), tol);
    std::vector<Matrix> center_ops;
    for (int i = 0; i < datum.center.dim(); ++i)
        center_ops.push_back(space.pi2(space.embed_k(datum.center.onb().col(i))));
    Subspace center_span = span_ops(center_ops, p, tol);
    const double res = comm_skew.distance(center_span);
    return {comm_skew.dim() == center_span.dim() && res <= tol.residual_abs, res};
}

int verify_center_meets_kminus(const RSpaceDatum& datum, const Tolerances& tol) {
    return intersect(datum.center, datum.kminus, tol).dim();
}

TwoJet rspace_orbit_jet(const RSpaceDatum& datum, const SymmetricSpaceModel& flat_model,
                        const Tolerances& tol) {
    const SymmetricSpaceModel& space = *datum.space;
    const int p = space.dim_p();
    if (flat_model.dim_p() != p)
        throw InputError("rspace_orbit_jet: flat model dimension must equal dim p");
    // tangent space of the orbit at X: [kminus, X] inside p
    const int t = datum.kminus.dim();
    Matrix tangent_cols(p, t);
    for (int i = 0; i < t; ++i)
        tangent_cols.col(i) =
            space.pi1(space.algebra().bracket(space.embed_k(datum.kminus.onb().col(i)), datum.X));
    Subspace tangent = Subspace::span(tangent_cols, p, tol);

    TwoJet jet;
    jet.space = &flat_model;
    jet.W = tangent.onb();
    const int m = tangent.dim();
    // Z_i in kminus with [Z_i, X] = w_i
    Matrix sols(space.dim_k(), m);
    for (int i = 0; i < m; ++i) {
        LeastSquaresResult ls = solve_least_squares(tangent_cols, jet.W.col(i), tol);
        // combine back into k-coordinates through the kminus basis
        Vector z = Vector::Zero(space.dim_k());
        for (int a = 0; a < t; ++a) z += ls.solution(a) * datum.kminus.onb().col(a);
        sols.col(i) = z;
    }
    jet.b.assign(m, std::vector<Vector>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Vector zi = space.embed_k(sols.col(i));
            Vector zj = space.embed_k(sols.col(j));
            Vector second = space.algebra().bracket(zi, space.algebra().bracket(zj, datum.X));
            Vector second_p = space.pi1(second);
            jet.b[i][j] = tangent.reject(second_p);
        }
    // enforce exact symmetry (the brackets differ by a tangent vector)
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Vector sym = 0.5 * (jet.b[i][j] + jet.b[j][i]);
            jet.b[i][j] = sym;
            jet.b[j][i] = sym;
        }
    jet.validate(tol);
    return jet;
}

double rspace_boldb_match_residual(const RSpaceDatum& datum, const TwoJet& orbit_jet,
                                   const Tolerances& tol) {
    const int p = orbit_jet.dim_p();
    OsculatingFrame f = build_frame(orbit_jet, tol);
    std::vector<Matrix> bold_ext;
    for (const auto& bb : f.bold_b) bold_ext.push_back(f.extend_op(bb));
    Subspace bold_span = span_ops(bold_ext, p, tol);
    Subspace tangent_span = span_ops(datum.tangent_ops, p, tol);
    return bold_span.distance(tangent_span);
}

FlatReport flat_case_pipeline(const TwoJet& jet, const Tolerances& tol) {
    FlatReport rep;
    const SymmetricSpaceModel& space = *jet.space;
    Subspace w_sub = Subspace::span(jet.W, jet.dim_p(), tol);
    if (!space.is_curvature_invariant(w_sub, tol)) {
        rep.blocked_link = "curvature_invariant";
        return rep;
    }
    SemiparallelReport sp = check_semiparallel(jet, tol);
    if (!sp.holds) {
        rep.blocked_link = "semiparallel";
        return rep;
    }
    rep.tangent_isotropic = space.is_curvature_isotropic(w_sub, IsotropyMethod::bracket, tol);
    if (!rep.tangent_isotropic) {
        rep.blocked_link = "tangent_isotropic";
        return rep;
    }
    rep.applicable = true;

    OsculatingFrame f = build_frame(jet, tol);
    std::vector<Vector> values;
    for (const auto& row : jet.b)
        for (const auto& v : row) values.push_back(v);
    Subspace n1 = Subspace::span_vectors(values, jet.dim_p(), tol);
    rep.first_normal_isotropic =
        space.is_curvature_isotropic(n1, IsotropyMethod::sectional, tol);
    rep.fundamental_residual = check_fundamental_identity(jet, tol).worst_residual;

    Subspace cent = f.bold_b.empty()
                        ? Subspace::full(f.dim_O() * f.dim_O())
                        : commutant(f.bold_b, tol);
    rep.centralizer_minus_dim =
        intersect(cent, so_minus_subspace(f.dim_W, f.dim_N1), tol).dim();
    rep.chain_concludes = rep.centralizer_minus_dim == 0;

    Subspace osc = Subspace::span(f.frame, jet.dim_p(), tol);
    rep.osc_isotropic = space.is_curvature_isotropic(osc, IsotropyMethod::sectional, tol);
    rep.chain_agrees = !rep.chain_concludes || rep.osc_isotropic;
    rep.reduced_to_flat = rep.osc_isotropic;
    return rep;
}

}  // namespace parhom
