#include "parhom/holonomy.hpp"

#include <algorithm>
#include <cmath>

namespace parhom {

Subspace hol_ambient(const SymmetricSpaceModel& space, const Tolerances& tol) {
    const int p = space.dim_p();
    std::vector<Matrix> ops;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) ops.push_back(space.curvature_operator_basis(i, j));
    Subspace s = span_ops(ops, p, tol);
    // must already be bracket-closed
    Subspace closed = bracket_closure(subspace_ops(s, p), {}, tol);
    if (closed.dim() != s.dim())
        throw StructuralError("hol_ambient: curvature span is not bracket-closed",
                              static_cast<double>(closed.dim() - s.dim()));
    return s;
}

MbarHolonomy hol_mbar(const TwoJet& jet, const Tolerances& tol, std::mt19937_64& rng) {
    const SymmetricSpaceModel& space = *jet.space;
    const int m = jet.dim_W();
    Subspace w_sub = Subspace::span(jet.W, jet.dim_p(), tol);
    if (!space.is_curvature_invariant(w_sub, tol))
        throw StructuralError("hol_mbar: W is not curvature invariant",
                              space.curvature_invariance_residual(w_sub));
    std::vector<Matrix> ops;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Matrix r = space.curvature_operator(jet.W.col(i), jet.W.col(j));
            ops.push_back(jet.W.transpose() * space.metric() * r * jet.W);
        }
    MbarHolonomy out;
    out.hol = m > 0 ? span_ops(ops, m, tol) : Subspace::zero(0);
    if (m == 0) return out;
    if (ops.empty() || out.hol.dim() == 0) {
        out.trivial_dim = m;
        out.block_count = 0;
        out.irreducible = (m == 1);
        return out;
    }
    IsotypicSplit split = isotypic_split(subspace_ops(out.hol, m), tol, rng);
    out.trivial_dim = split.trivial_part.dim();
    out.block_count = static_cast<int>(split.blocks.size());
    out.irreducible = (out.trivial_dim == 0 && out.block_count == 1) || m == 1;
    return out;
}

OscHolonomy hol_osculating(const TwoJet& jet, const Tolerances& tol) {
    OscHolonomy out;
    out.frame = build_frame(jet, tol);
    const SymmetricSpaceModel& space = *jet.space;
    const int m = jet.dim_W();
    const int dim_o = out.frame.dim_O();

    std::vector<Matrix> seed;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Matrix r = space.curvature_operator(jet.W.col(i), jet.W.col(j));
            const double leak = out.frame.closure_residual(r);
            if (leak > tol.residual_abs)
                throw StructuralError("hol_osculating: curvature does not preserve O(b)", leak);
            seed.push_back(out.frame.restrict_op(r));
        }
    out.hol = bracket_closure(seed, out.frame.bold_b, tol);

    // validation checks on the surrogate (not construction consequences)
    double sigma_res = 0.0;
    for (int i = 0; i < out.hol.dim(); ++i) {
        Matrix a = op_unvec(out.hol.onb().col(i), dim_o);
        Matrix conj = out.frame.sigma * a * out.frame.sigma;
        sigma_res = std::max(sigma_res, out.hol.reject(op_vec(conj)).norm());
    }
    out.sigma_invariance_residual = sigma_res;

    Subspace so_p = so_plus_subspace(out.frame.dim_W, out.frame.dim_N1);
    Subspace so_m = so_minus_subspace(out.frame.dim_W, out.frame.dim_N1);
    out.plus = intersect(out.hol, so_p, tol);
    out.minus = intersect(out.hol, so_m, tol);
    out.splitting_defect =
        static_cast<double>(out.hol.dim() - out.plus.dim() - out.minus.dim());

    double curv_res = 0.0;
    for (const auto& s : seed) curv_res = std::max(curv_res, out.plus.reject(op_vec(s)).norm());
    out.curvature_plus_residual = curv_res;

    double der_res = 0.0;
    for (const auto& bb : out.frame.bold_b)
        for (int i = 0; i < out.hol.dim(); ++i) {
            Matrix a = op_unvec(out.hol.onb().col(i), dim_o);
            der_res = std::max(der_res, out.hol.reject(op_vec(bb * a - a * bb)).norm());
        }
    out.derivation_residual = der_res;
    return out;
}

DefectReport project_defect(const TwoJet& jet, const OscHolonomy& osc, const Tolerances& tol) {
    // For skew operators the trace metric -tr(AB) equals the Frobenius inner
    // product, so the projection is the euclidean one in vec coordinates.
    DefectReport rep;
    const int dim_o = osc.frame.dim_O();
    std::vector<Matrix> hol_ops = subspace_ops(osc.hol, dim_o);
    for (int i = 0; i < jet.dim_W(); ++i) {
        const Matrix& bb = osc.frame.bold_b[i];
        Vector proj = osc.hol.project(op_vec(bb));
        Matrix p_img = op_unvec(proj, dim_o);
        rep.p_images.push_back(p_img);
        rep.defect_norms.push_back((op_vec(bb) - proj).norm());
        Matrix defect_op = bb - p_img;
        for (const auto& h : hol_ops)
            rep.centralizer_residual =
                std::max(rep.centralizer_residual, (defect_op * h - h * defect_op).norm());
        rep.p_minus_residual = std::max(
            rep.p_minus_residual, (osc.frame.sigma * p_img * osc.frame.sigma + p_img).norm());
    }
    (void)tol;
    return rep;
}

Subspace intertwiners(const std::vector<Matrix>& ops_w, const std::vector<Matrix>& ops_u,
                      const Tolerances& tol) {
    return intertwiner_space(ops_w, ops_u, tol);
}

SchurReport schur_dimension(const TwoJet& jet, const Tolerances& tol, std::mt19937_64& rng) {
    SchurReport rep;
    const int m = jet.dim_W();
    if (m == 0) return rep;
    MbarHolonomy mbar = hol_mbar(jet, tol, rng);
    rep.irreducible = mbar.irreducible;
    std::vector<Matrix> ops = subspace_ops(mbar.hol, m);
    if (ops.empty()) ops.push_back(Matrix::Zero(m, m));
    rep.d = commutant(ops, tol).dim();
    rep.in_124 = !rep.irreducible || rep.d == 1 || rep.d == 2 || rep.d == 4;
    return rep;
}

HolonomyReport homogeneity_verdict(const TwoJet& jet, const Tolerances& tol,
                                   std::mt19937_64& rng) {
    const SymmetricSpaceModel& space = *jet.space;
    HolonomyReport rep;
    rep.dim_hol_ambient = hol_ambient(space, tol).dim();
    MbarHolonomy mbar = hol_mbar(jet, tol, rng);
    rep.dim_hol_mbar = mbar.hol.dim();
    rep.mbar_irreducible = mbar.irreducible;

    OscHolonomy osc = hol_osculating(jet, tol);
    rep.dim_hol_osc = osc.hol.dim();
    rep.dim_hol_osc_plus = osc.plus.dim();
    rep.dim_hol_osc_minus = osc.minus.dim();
    rep.sigma_invariance_residual = osc.sigma_invariance_residual;
    rep.splitting_defect = osc.splitting_defect;
    rep.curvature_plus_residual = osc.curvature_plus_residual;
    rep.dim_first_normal = osc.frame.dim_N1;

    const int dim_o = osc.frame.dim_O();
    Subspace cent = osc.hol.dim() > 0 ? commutant(subspace_ops(osc.hol, dim_o), tol)
                                      : Subspace::full(dim_o * dim_o);
    Subspace cent_minus =
        intersect(cent, so_minus_subspace(osc.frame.dim_W, osc.frame.dim_N1), tol);
    rep.centralizer_minus_dim = cent_minus.dim();

    DefectReport defect = project_defect(jet, osc, tol);
    rep.defect_norms = defect.defect_norms;

    SchurReport schur = schur_dimension(jet, tol, rng);
    rep.schur_d = schur.d;
    rep.schur_in_124 = schur.in_124;

    bool any_infeasible = false, any_indeterminate = false;
    for (int i = 0; i < jet.dim_W(); ++i) {
        rep.gamma.push_back(check_gamma_feasibility(jet, jet.W.col(i), tol));
        if (rep.gamma.back().verdict == Feasibility::infeasible) any_infeasible = true;
        if (rep.gamma.back().verdict == Feasibility::indeterminate) any_indeterminate = true;
    }
    if (any_infeasible)
        rep.verdict = Verdict::no;
    else if (any_indeterminate)
        rep.verdict = Verdict::indeterminate;
    else
        rep.verdict = Verdict::yes;

    rep.defect_chain_homogeneous = true;
    for (double d : rep.defect_norms)
        if (d > tol.residual_abs) rep.defect_chain_homogeneous = false;

    rep.surrogate_checks_ok = osc.sigma_invariance_residual <= tol.residual_abs &&
                              std::abs(osc.splitting_defect) < 0.5 &&
                              osc.curvature_plus_residual <= tol.residual_abs &&
                              defect.centralizer_residual <= 10 * tol.residual_abs &&
                              defect.p_minus_residual <= 10 * tol.residual_abs;

    // The defect chain is sufficient for homogeneity; it can never contradict
    // the direct test on sound data.
    rep.consistent = !(rep.defect_chain_homogeneous && rep.verdict == Verdict::no);
    if (!rep.consistent) rep.verdict = Verdict::indeterminate;
    if (rep.verdict == Verdict::yes && !rep.surrogate_checks_ok)
        rep.verdict = Verdict::indeterminate;
    return rep;
}

bool check_minus_nonzero(const TwoJet& jet, const HolonomyReport& report) {
    (void)jet;
    return report.dim_first_normal <= report.schur_d || report.dim_hol_osc_minus > 0;
}

}  // namespace parhom
