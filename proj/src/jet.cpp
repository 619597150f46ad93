#include "parhom/jet.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace parhom {

namespace {

// Metric-orthonormal basis of the span of the given p-vectors.
Matrix metric_span(const SymmetricSpaceModel& space, const std::vector<Vector>& vectors,
                   const Tolerances& tol) {
    const int p = space.dim_p();
    if (vectors.empty()) return Matrix::Zero(p, 0);
    Eigen::LLT<Matrix> llt(space.metric());
    Matrix lt = llt.matrixL().transpose();
    Matrix cols(p, static_cast<Eigen::Index>(vectors.size()));
    for (size_t i = 0; i < vectors.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = vectors[i];
    Subspace euc = Subspace::span(lt * cols, p, tol);
    if (euc.dim() == 0) return Matrix::Zero(p, 0);
    return lt.triangularView<Eigen::Upper>().solve(euc.onb());
}

Matrix metric_orthonormalize(const SymmetricSpaceModel& space, const Matrix& columns,
                             const Tolerances& tol) {
    std::vector<Vector> v;
    for (int i = 0; i < columns.cols(); ++i) v.push_back(columns.col(i));
    return metric_span(space, v, tol);
}

// M-orthogonal projection onto the column span of a metric-onb matrix.
Vector metric_project(const SymmetricSpaceModel& space, const Matrix& onb, const Vector& v) {
    if (onb.cols() == 0) return Vector::Zero(v.size());
    return onb * (onb.transpose() * (space.metric() * v));
}

}  // namespace

Vector TwoJet::b_value(const Vector& x_wcoords, const Vector& y_wcoords) const {
    Vector out = Vector::Zero(dim_p());
    for (int i = 0; i < dim_W(); ++i)
        for (int j = 0; j < dim_W(); ++j)
            if (x_wcoords(i) != 0.0 && y_wcoords(j) != 0.0)
                out += x_wcoords(i) * y_wcoords(j) * b[i][j];
    return out;
}

bool TwoJet::b_is_zero(double tol_abs) const {
    for (const auto& row : b)
        for (const auto& v : row)
            if (v.norm() > tol_abs) return false;
    return true;
}

void TwoJet::validate(const Tolerances& tol) const {
    if (!space) throw InputError("TwoJet: missing model");
    const int m = dim_W();
    if (W.rows() != dim_p()) throw InputError("TwoJet: W has wrong ambient dimension");
    Matrix gram = W.transpose() * space->metric() * W;
    if ((gram - Matrix::Identity(m, m)).norm() > 1e-8 * std::max(1.0, gram.norm()))
        throw InputError("TwoJet: W columns are not metric-orthonormal");
    if (static_cast<int>(b.size()) != m) throw InputError("TwoJet: b has wrong shape");
    for (const auto& row : b)
        if (static_cast<int>(row.size()) != m) throw InputError("TwoJet: b has wrong shape");
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (b[i][j].size() != dim_p()) throw InputError("TwoJet: b value has wrong length");
            if ((b[i][j] - b[j][i]).norm() > tol.residual_abs)
                throw InputError("TwoJet: b is not symmetric");
            Vector proj = metric_project(*space, W, b[i][j]);
            if (proj.norm() > tol.residual_abs * std::max(1.0, b[i][j].norm()))
                throw InputError("TwoJet: b values must be orthogonal to W");
        }
}

TwoJet make_totally_geodesic_jet(const SymmetricSpaceModel& space, const Matrix& w_columns,
                                 const Tolerances& tol) {
    TwoJet j;
    j.space = &space;
    j.W = metric_orthonormalize(space, w_columns, tol);
    const int m = j.dim_W();
    j.b.assign(m, std::vector<Vector>(m, Vector::Zero(space.dim_p())));
    j.validate(tol);
    return j;
}

TwoJet make_umbilic_jet(const SymmetricSpaceModel& space, double kappa, const Vector& xi,
                        const Matrix& w_columns, const Tolerances& tol) {
    const double xi_norm = space.norm(xi);
    if (xi_norm < tol.residual_abs) throw InputError("make_umbilic_jet: zero normal direction");
    Vector unit_xi = xi / xi_norm;
    TwoJet j;
    j.space = &space;
    if (w_columns.cols() > 0) {
        j.W = metric_orthonormalize(space, w_columns, tol);
    } else {
        // default: metric complement of xi
        Matrix rows = (space.metric() * unit_xi).transpose();
        Subspace comp = nullspace(rows, tol);
        j.W = metric_orthonormalize(space, comp.onb(), tol);
    }
    const int m = j.dim_W();
    for (int i = 0; i < m; ++i) {
        const Vector wi = j.W.col(i);
        if (std::abs(space.inner(wi, unit_xi)) > tol.residual_abs)
            throw InputError("make_umbilic_jet: W must be orthogonal to the normal direction");
    }
    j.b.assign(m, std::vector<Vector>(m, Vector::Zero(space.dim_p())));
    for (int i = 0; i < m; ++i) j.b[i][i] = kappa * unit_xi;
    j.validate(tol);
    return j;
}

TwoJet make_circle_jet(const SymmetricSpaceModel& space, const Vector& x, const Vector& y,
                       const Tolerances& tol) {
    const double xn = space.norm(x);
    if (xn < tol.residual_abs) throw InputError("make_circle_jet: zero velocity");
    if (std::abs(space.inner(x, y)) > tol.residual_abs * std::max(1.0, space.norm(y)) * xn)
        throw InputError("make_circle_jet: acceleration must be orthogonal to velocity");
    TwoJet j;
    j.space = &space;
    j.W = x / xn;
    j.b.assign(1, std::vector<Vector>(1, Vector(y / (xn * xn))));
    j.validate(tol);
    return j;
}

Vector OsculatingFrame::to_frame(const Vector& p_vec) const {
    return frame.transpose() * (space->metric() * p_vec);
}

Vector OsculatingFrame::from_frame(const Vector& coords) const { return frame * coords; }

Matrix OsculatingFrame::restrict_op(const Matrix& p_op) const {
    return frame.transpose() * space->metric() * p_op * frame;
}

double OsculatingFrame::closure_residual(const Matrix& p_op) const {
    double worst = 0.0;
    for (int i = 0; i < dim_O(); ++i) {
        Vector img = p_op * frame.col(i);
        Vector rej = img - frame * to_frame(img);
        worst = std::max(worst, rej.norm());
    }
    return worst;
}

Matrix OsculatingFrame::extend_op(const Matrix& frame_op) const {
    return frame * frame_op * frame.transpose() * space->metric();
}

Matrix OsculatingFrame::bold_b_of(const Vector& x_wcoords) const {
    Matrix out = Matrix::Zero(dim_O(), dim_O());
    for (int i = 0; i < dim_W; ++i)
        if (x_wcoords(i) != 0.0) out += x_wcoords(i) * bold_b[i];
    return out;
}

OsculatingFrame build_frame(const TwoJet& jet, const Tolerances& tol) {
    OsculatingFrame f;
    f.space = jet.space;
    const int m = jet.dim_W();
    std::vector<Vector> values;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) values.push_back(jet.b[i][j]);
    Matrix n1 = metric_span(*jet.space, values, tol);
    f.dim_W = m;
    f.dim_N1 = static_cast<int>(n1.cols());
    f.frame = Matrix(jet.dim_p(), f.dim_O());
    f.frame.leftCols(m) = jet.W;
    if (f.dim_N1 > 0) f.frame.rightCols(f.dim_N1) = n1;

    f.sigma = Matrix::Identity(f.dim_O(), f.dim_O());
    f.sigma.topLeftCorner(m, m) *= -1.0;

    f.bold_b.resize(m);
    for (int i = 0; i < m; ++i) {
        Matrix c(f.dim_N1, m);
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < f.dim_N1; ++k)
                c(k, j) = jet.space->inner(jet.b[i][j], n1.col(k));
        Matrix op = Matrix::Zero(f.dim_O(), f.dim_O());
        op.bottomLeftCorner(f.dim_N1, m) = c;
        op.topRightCorner(m, f.dim_N1) = -c.transpose();
        f.bold_b[i] = op;
    }
    return f;
}

Subspace so_subspace(int dim_o) {
    std::vector<Vector> gens;
    for (int a = 0; a < dim_o; ++a)
        for (int b = a + 1; b < dim_o; ++b) {
            Matrix m = Matrix::Zero(dim_o, dim_o);
            m(a, b) = 1.0;
            m(b, a) = -1.0;
            gens.push_back(op_vec(m / std::sqrt(2.0)));
        }
    Matrix cols(dim_o * dim_o, static_cast<Eigen::Index>(gens.size()));
    for (size_t i = 0; i < gens.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = gens[i];
    return Subspace::from_onb(cols, dim_o * dim_o);
}

namespace {
Subspace so_graded(int dim_w, int dim_n1, bool odd) {
    const int n = dim_w + dim_n1;
    std::vector<Vector> gens;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            const bool crosses = (a < dim_w) != (b < dim_w);
            if (crosses != odd) continue;
            Matrix m = Matrix::Zero(n, n);
            m(a, b) = 1.0;
            m(b, a) = -1.0;
            gens.push_back(op_vec(m / std::sqrt(2.0)));
        }
    Matrix cols(n * n, static_cast<Eigen::Index>(gens.size()));
    for (size_t i = 0; i < gens.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = gens[i];
    return Subspace::from_onb(cols, n * n);
}
}  // namespace

Subspace so_plus_subspace(int dim_w, int dim_n1) { return so_graded(dim_w, dim_n1, false); }
Subspace so_minus_subspace(int dim_w, int dim_n1) { return so_graded(dim_w, dim_n1, true); }

SemiparallelReport check_semiparallel(const TwoJet& jet, const Tolerances& tol) {
    SemiparallelReport rep;
    const int m = jet.dim_W();
    if (m <= 1) {
        // all terms vanish by antisymmetry in (x,y)
        rep.holds = true;
        return rep;
    }
    OsculatingFrame f = build_frame(jet, tol);
    const SymmetricSpaceModel& space = *jet.space;

    // Does R(x,y) preserve O for all W-basis pairs?
    std::vector<Matrix> amb_ops(static_cast<size_t>(m) * m);
    double closure = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Matrix r = space.curvature_operator(jet.W.col(i), jet.W.col(j));
            closure = std::max(closure, f.closure_residual(r));
            amb_ops[static_cast<size_t>(i) * m + j] = r;
        }
    rep.closure_residual = closure;
    rep.osc_closed = closure <= tol.residual_abs;
    rep.used_full_basis = !rep.osc_closed;

    const int p = jet.dim_p();
    double worst = 0.0;
    for (int i = 0; i < m && rep.argument_in_w; ++i) {
        for (int j = i + 1; j < m && rep.argument_in_w; ++j) {
            const Matrix& r_amb = amb_ops[static_cast<size_t>(i) * m + j];
            for (int k = 0; k < m; ++k) {
                // argument of the outer bold_b: R(x,y)z - [b(x),b(y)]z
                Vector rz = r_amb * jet.W.col(k);
                Vector rz_w = jet.W.transpose() * (space.metric() * rz);
                double leak = (rz - jet.W * rz_w).norm();
                Matrix comm = f.bold_b[i] * f.bold_b[j] - f.bold_b[j] * f.bold_b[i];
                Vector comm_z = comm.col(k);  // frame coords of [b(x),b(y)] w_k
                Vector arg_w = rz_w - comm_z.head(m);
                leak = std::max(leak, comm_z.tail(f.dim_N1).norm());
                if (leak > tol.residual_abs * 10) {
                    rep.argument_in_w = false;
                    rep.worst_residual = leak;
                    break;
                }
                if (rep.osc_closed) {
                    Matrix r_frame = f.restrict_op(r_amb);
                    Matrix t = r_frame - comm;
                    Matrix lhs_op = f.bold_b_of(arg_w);
                    Matrix rhs_op = t * f.bold_b[k] - f.bold_b[k] * t;
                    worst = std::max(worst, (lhs_op - rhs_op).norm());
                } else {
                    // evaluate over the full p-basis with zero-extended operators
                    Matrix bx = f.extend_op(f.bold_b[i]);
                    Matrix by = f.extend_op(f.bold_b[j]);
                    Matrix bz = f.extend_op(f.bold_b[k]);
                    Matrix t = r_amb - (bx * by - by * bx);
                    Matrix lhs_op = f.extend_op(f.bold_b_of(arg_w));
                    Matrix rhs_op = t * bz - bz * t;
                    worst = std::max(worst, (lhs_op - rhs_op).norm());
                }
            }
        }
    }
    (void)p;
    if (!rep.argument_in_w) {
        rep.holds = false;
        return rep;
    }
    rep.worst_residual = worst;
    rep.holds = worst <= tol.residual_abs;
    return rep;
}

GammaResult check_gamma_feasibility(const TwoJet& jet, const Vector& x_pcoords,
                                    const Tolerances& tol) {
    const SymmetricSpaceModel& space = *jet.space;
    Vector x_w = jet.W.transpose() * (space.metric() * x_pcoords);
    if ((x_pcoords - jet.W * x_w).norm() > tol.residual_abs * std::max(1.0, x_pcoords.norm()))
        throw InputError("check_gamma_feasibility: x is not in W");

    OsculatingFrame f = build_frame(jet, tol);
    Matrix bold = f.bold_b_of(x_w);

    const int dim_o = f.dim_O();
    const int p = space.dim_p();
    const int dk = space.dim_k();
    // rows: pi2(X) v_a = F * bold(:,a) as p-vectors, for every frame vector v_a
    Matrix constraint(static_cast<Eigen::Index>(dim_o) * p, dk);
    Vector target(static_cast<Eigen::Index>(dim_o) * p);
    for (int a = 0; a < dim_o; ++a) {
        const Vector va = f.frame.col(a);
        for (int c = 0; c < dk; ++c) {
            Vector Xk = Vector::Zero(space.dim_g());
            Xk(c) = 1.0;
            constraint.block(static_cast<Eigen::Index>(a) * p, c, p, 1) = space.pi2(Xk) * va;
        }
        target.segment(static_cast<Eigen::Index>(a) * p, p) = f.from_frame(bold.col(a));
    }
    LeastSquaresResult ls = solve_least_squares(constraint, target, tol);
    GammaResult g;
    g.verdict = ls.verdict;
    g.residual = ls.residual;
    g.target_norm = target.norm();
    g.X = space.embed_k(ls.solution);
    return g;
}

ModelVerdict check_infinitesimal_model(const TwoJet& jet, const Tolerances& tol) {
    ModelVerdict v;
    const SymmetricSpaceModel& space = *jet.space;
    Subspace w_sub = Subspace::span(jet.W, jet.dim_p(), tol);
    // With a non-identity metric the euclidean span of W equals its metric span.
    v.curvature_invariance_residual = 0.0;
    const int m = jet.dim_W();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Matrix r = space.curvature_operator(jet.W.col(i), jet.W.col(j));
            for (int k = 0; k < m; ++k) {
                Vector img = r * jet.W.col(k);
                Vector rej = img - jet.W * (jet.W.transpose() * (space.metric() * img));
                v.curvature_invariance_residual =
                    std::max(v.curvature_invariance_residual, rej.norm());
            }
        }
    v.curvature_invariant = v.curvature_invariance_residual <= tol.residual_abs;
    (void)w_sub;

    v.semiparallel = check_semiparallel(jet, tol);

    bool any_infeasible = false, any_indeterminate = false;
    for (int i = 0; i < m; ++i) {
        v.gamma_per_basis.push_back(check_gamma_feasibility(jet, jet.W.col(i), tol));
        if (v.gamma_per_basis.back().verdict == Feasibility::infeasible) any_infeasible = true;
        if (v.gamma_per_basis.back().verdict == Feasibility::indeterminate)
            any_indeterminate = true;
    }

    const bool local_ok =
        v.curvature_invariant && v.semiparallel.holds && v.semiparallel.osc_closed;
    if (!local_ok || any_infeasible)
        v.overall = Verdict::no;
    else if (any_indeterminate)
        v.overall = Verdict::indeterminate;
    else
        v.overall = Verdict::yes;
    return v;
}

Matrix shape_operator(const TwoJet& jet, const Vector& xi_pcoords) {
    const int m = jet.dim_W();
    Matrix s(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s(i, j) = jet.space->inner(jet.b[i][j], xi_pcoords);
    return s;
}

Vector derived_tangent_curvature(const TwoJet& jet, const Vector& x, const Vector& y,
                                 const Vector& z, const Tolerances& tol) {
    const SymmetricSpaceModel& space = *jet.space;
    const Matrix& W = jet.W;
    auto wcoords = [&](const Vector& v) { return Vector(W.transpose() * (space.metric() * v)); };
    for (const Vector* v : {&x, &y, &z})
        if ((*v - W * wcoords(*v)).norm() > tol.residual_abs * std::max(1.0, v->norm()))
            throw InputError("derived_tangent_curvature: arguments must lie in W");
    Vector rn = space.curvature(x, y, z);
    Vector rn_w = W * wcoords(rn);  // proj_W
    Vector xi_yz = jet.b_value(wcoords(y), wcoords(z));
    Vector xi_xz = jet.b_value(wcoords(x), wcoords(z));
    Vector term1 = W * (shape_operator(jet, xi_yz) * wcoords(x));
    Vector term2 = W * (shape_operator(jet, xi_xz) * wcoords(y));
    return rn_w + term1 - term2;
}

FundamentalReport check_fundamental_identity(const TwoJet& jet, const Tolerances& tol) {
    FundamentalReport rep;
    const SymmetricSpaceModel& space = *jet.space;
    const int m = jet.dim_W();
    OsculatingFrame f = build_frame(jet, tol);

    double closure = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            closure = std::max(
                closure, f.closure_residual(space.curvature_operator(jet.W.col(i), jet.W.col(j))));
    rep.osc_closed = closure <= tol.residual_abs;
    if (!rep.osc_closed) {
        rep.holds = false;
        rep.worst_residual = closure;
        return rep;
    }

    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const Vector x = jet.W.col(i), y = jet.W.col(j);
            const Vector bxx = jet.b[i][i], byy = jet.b[j][j];
            Matrix lhs_op = space.curvature_operator(bxx, byy);
            Matrix r_frame = f.restrict_op(space.curvature_operator(x, y));
            Matrix nested =
                f.bold_b[i] * (f.bold_b[j] * r_frame - r_frame * f.bold_b[j]) -
                (f.bold_b[j] * r_frame - r_frame * f.bold_b[j]) * f.bold_b[i];
            // bold_b(x) bold_b(y) x resp. y, as p-vectors in W
            Vector bbx = f.from_frame(f.bold_b[i] * (f.bold_b[j] * f.to_frame(x)));
            Vector bby = f.from_frame(f.bold_b[i] * (f.bold_b[j] * f.to_frame(y)));
            Matrix t2 = space.curvature_operator(bbx, y);
            Matrix t3 = space.curvature_operator(x, bby);
            for (int a = 0; a < f.dim_O(); ++a) {
                const Vector v = f.frame.col(a);
                Vector lhs = lhs_op * v;
                Vector rhs = f.from_frame(nested.col(a)) - t2 * v - t3 * v;
                worst = std::max(worst, (lhs - rhs).norm());
            }
        }
    rep.worst_residual = worst;
    rep.holds = worst <= tol.residual_abs;
    return rep;
}

double fetth3_residual(const TwoJet& jet, const Tolerances& tol) {
    const SymmetricSpaceModel& space = *jet.space;
    OsculatingFrame f = build_frame(jet, tol);
    const int n = f.dim_O();
    const int m = jet.dim_W();
    // R^b on frame indices
    std::vector<double> rb(static_cast<size_t>(n) * n * n * n);
    auto idx = [n](int a, int b, int c, int d) {
        return ((static_cast<size_t>(a) * n + b) * n + c) * n + d;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Matrix r = space.curvature_operator(f.frame.col(a), f.frame.col(b));
            for (int c = 0; c < n; ++c) {
                Vector rc = r * f.frame.col(c);
                for (int d = 0; d < n; ++d) rb[idx(a, b, c, d)] = space.inner(rc, f.frame.col(d));
            }
        }
    double worst = 0.0;
    for (int x = 0; x < m; ++x) {
        const Matrix& bb = f.bold_b[x];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        double sum = 0.0;
                        for (int t = 0; t < n; ++t) {
                            sum += bb(t, a) * rb[idx(t, b, c, d)];
                            sum += bb(t, b) * rb[idx(a, t, c, d)];
                            sum += bb(t, c) * rb[idx(a, b, t, d)];
                            sum += bb(t, d) * rb[idx(a, b, c, t)];
                        }
                        worst = std::max(worst, std::abs(sum));
                    }
    }
    return worst;
}

double semiparallel_one_residual(const TwoJet& jet, const Tolerances& tol) {
    const SymmetricSpaceModel& space = *jet.space;
    const int m = jet.dim_W();
    OsculatingFrame f = build_frame(jet, tol);
    auto wcoords = [&](const Vector& v) {
        return Vector(jet.W.transpose() * (space.metric() * v));
    };
    auto proj_n1 = [&](const Vector& v) {
        if (f.dim_N1 == 0) return Vector(Vector::Zero(v.size()));
        Matrix n1 = f.frame.rightCols(f.dim_N1);
        return Vector(n1 * (n1.transpose() * (space.metric() * v)));
    };
    double worst = 0.0;
    for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < m; ++i2)
            for (int j1 = 0; j1 < m; ++j1)
                for (int j2 = 0; j2 < m; ++j2) {
                    const Vector x1 = jet.W.col(i1), x2 = jet.W.col(i2);
                    Vector h = jet.b[j1][j2];
                    // R_perp(x1,x2) h, via the Ricci equation
                    Matrix s_h = shape_operator(jet, h);
                    Vector rperp = proj_n1(space.curvature(x1, x2, h)) +
                                   jet.b_value(Vector::Unit(m, i1), s_h.col(i2)) -
                                   jet.b_value(s_h.col(i1), Vector::Unit(m, i2));
                    Vector rm1 = derived_tangent_curvature(jet, x1, x2, jet.W.col(j1), tol);
                    Vector rm2 = derived_tangent_curvature(jet, x1, x2, jet.W.col(j2), tol);
                    Vector rhs = jet.b_value(wcoords(rm1), Vector::Unit(m, j2)) +
                                 jet.b_value(Vector::Unit(m, j1), wcoords(rm2));
                    worst = std::max(worst, (rperp - rhs).norm());
                }
    return worst;
}

}  // namespace parhom
