#include "parhom/lie_model.hpp"

#include <cmath>
#include <complex>

namespace parhom {

namespace {

using CMatrix = Eigen::MatrixXcd;

// z = a + ib  ->  [[a, -b], [b, a]]; brackets and traces commute with this.
Matrix realify(const CMatrix& z) {
    const int m = static_cast<int>(z.rows());
    Matrix out(2 * m, 2 * m);
    out.topLeftCorner(m, m) = z.real();
    out.topRightCorner(m, m) = -z.imag();
    out.bottomLeftCorner(m, m) = z.imag();
    out.bottomRightCorner(m, m) = z.real();
    return out;
}

Matrix elem_skew(int n, int i, int j) {  // E_ij - E_ji
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    m(j, i) = -1.0;
    return m;
}

struct Blocks {
    std::vector<Matrix> k_basis;
    std::vector<Matrix> p_basis;
};

Blocks sphere_blocks(int n, double scale, int p_sign) {
    // so(n+1) for p_sign = -1, so(n,1) for p_sign = +1
    Blocks b;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b.k_basis.push_back(elem_skew(n + 1, i, j));
    const double s = std::sqrt(scale);
    for (int i = 0; i < n; ++i) {
        Matrix m = Matrix::Zero(n + 1, n + 1);
        m(i, n) = 1.0;
        m(n, i) = static_cast<double>(p_sign);
        b.p_basis.push_back(s * m);
    }
    return b;
}

Blocks euclidean_blocks(int n) {
    Blocks b;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b.k_basis.push_back(elem_skew(n + 1, i, j));
    for (int i = 0; i < n; ++i) {
        Matrix m = Matrix::Zero(n + 1, n + 1);
        m(i, n) = 1.0;
        b.p_basis.push_back(m);
    }
    return b;
}

// Anti-hermitian traceless basis of su(q) placed in rows/cols [off, off+q) of an
// m x m complex matrix.
void append_su_block(std::vector<CMatrix>& out, int m, int off, int q) {
    const std::complex<double> I(0.0, 1.0);
    for (int j = 0; j + 1 < q; ++j) {
        CMatrix z = CMatrix::Zero(m, m);
        z(off + j, off + j) = I;
        z(off + j + 1, off + j + 1) = -I;
        out.push_back(z);
    }
    for (int j = 0; j < q; ++j)
        for (int k = j + 1; k < q; ++k) {
            CMatrix z = CMatrix::Zero(m, m);
            z(off + j, off + k) = 1.0;
            z(off + k, off + j) = -1.0;
            out.push_back(z);
            CMatrix w = CMatrix::Zero(m, m);
            w(off + j, off + k) = I;
            w(off + k, off + j) = I;
            out.push_back(w);
        }
}

// p-type element of su(a+b) (or the dual signature): off-diagonal block from a
// complex a x b matrix Z: [[0, -Z^*], [sign*Z, 0]] placed after the first a
// rows. For the compact form sign = +1 pairs with -Z^*; the dual flips the
// lower-left sign.
CMatrix hermitian_pair(int m, int a, const CMatrix& z, int dual) {
    CMatrix out = CMatrix::Zero(m, m);
    const int b = static_cast<int>(z.cols());
    out.block(0, a, a, b) = -z.adjoint();
    out.block(a, 0, b, a) = (dual ? -1.0 : 1.0) * z;
    return out;
}

Blocks hermitian_blocks(int a, int b, double scale, bool dual) {
    // su(a+b) / s(u(a) x u(b)) resp. su(a,b)
    const int m = a + b;
    const std::complex<double> I(0.0, 1.0);
    std::vector<CMatrix> kc;
    append_su_block(kc, m, 0, a);
    append_su_block(kc, m, a, b);
    {
        // center of s(u(a) + u(b)): i * diag(b*I_a, -a*I_b) (traceless)
        CMatrix z = CMatrix::Zero(m, m);
        for (int i = 0; i < a; ++i) z(i, i) = I * static_cast<double>(b);
        for (int i = 0; i < b; ++i) z(a + i, a + i) = -I * static_cast<double>(a);
        kc.push_back(z);
    }
    std::vector<CMatrix> pc;
    const double s = std::sqrt(scale);
    for (int r = 0; r < a; ++r)
        for (int c = 0; c < b; ++c) {
            CMatrix z = CMatrix::Zero(a, b);
            z(r, c) = s;
            pc.push_back(hermitian_pair(m, a, z, dual));
            z(r, c) = s * I;
            pc.push_back(hermitian_pair(m, a, z, dual));
        }
    Blocks out;
    for (const auto& z : kc) out.k_basis.push_back(realify(z));
    for (const auto& z : pc) out.p_basis.push_back(realify(z));
    return out;
}

SymmetricSpaceModel assemble(Blocks blocks, SpaceType type, const std::string& name,
                             const std::vector<int>& params, double scale,
                             const Tolerances& tol) {
    std::vector<Matrix> basis = blocks.k_basis;
    for (auto& m : blocks.p_basis) basis.push_back(std::move(m));
    const int dim_k = static_cast<int>(blocks.k_basis.size());
    const int dim_p = static_cast<int>(blocks.p_basis.size());
    LieAlgebraPresentation g = LieAlgebraPresentation::from_basis(std::move(basis), tol);
    Matrix theta = Matrix::Identity(dim_k + dim_p, dim_k + dim_p);
    theta.bottomRightCorner(dim_p, dim_p) *= -1.0;
    FactorInfo info{name, params, scale, 0, dim_k, 0, dim_p};
    return SymmetricSpaceModel(std::move(g), std::move(theta), dim_k, dim_p,
                               Matrix::Identity(dim_p, dim_p), type, {info}, name, params, scale,
                               tol);
}

void require_params(const std::string& name, const std::vector<int>& params, size_t count,
                    int min_value) {
    if (params.size() != count)
        throw InputError("catalog: family '" + name + "' takes " + std::to_string(count) +
                         " parameter(s)");
    for (int p : params)
        if (p < min_value)
            throw InputError("catalog: parameter out of range for family '" + name + "'");
}

}  // namespace

bool catalog_has(const std::string& name) {
    for (const auto& n : catalog_family_names())
        if (n == name) return true;
    return name == "product";
}

std::vector<std::string> catalog_family_names() {
    return {"sphere",      "euclidean", "cp",      "grassmannian_su",
            "dual_sphere", "dual_cp",   "dual_grassmannian_su"};
}

SymmetricSpaceModel catalog(const std::string& name, const std::vector<int>& params, double scale,
                            const Tolerances& tol) {
    if (scale <= 0) throw InputError("catalog: scale must be positive");
    if (name == "sphere") {
        require_params(name, params, 1, 2);
        return assemble(sphere_blocks(params[0], scale, -1), SpaceType::compact, name, params,
                        scale, tol);
    }
    if (name == "dual_sphere") {
        require_params(name, params, 1, 2);
        return assemble(sphere_blocks(params[0], scale, +1), SpaceType::noncompact, name, params,
                        scale, tol);
    }
    if (name == "euclidean") {
        require_params(name, params, 1, 1);
        return assemble(euclidean_blocks(params[0]), SpaceType::euclidean, name, params, scale,
                        tol);
    }
    if (name == "cp") {
        require_params(name, params, 1, 1);
        return assemble(hermitian_blocks(1, params[0], scale, false), SpaceType::compact, name,
                        params, scale, tol);
    }
    if (name == "dual_cp") {
        require_params(name, params, 1, 1);
        return assemble(hermitian_blocks(1, params[0], scale, true), SpaceType::noncompact, name,
                        params, scale, tol);
    }
    if (name == "grassmannian_su") {
        require_params(name, params, 1, 2);
        return assemble(hermitian_blocks(params[0], params[0], scale, false), SpaceType::compact,
                        name, params, scale, tol);
    }
    if (name == "dual_grassmannian_su") {
        require_params(name, params, 1, 2);
        return assemble(hermitian_blocks(params[0], params[0], scale, true), SpaceType::noncompact,
                        name, params, scale, tol);
    }
    throw InputError("catalog: unknown family '" + name + "'");
}

SymmetricSpaceModel catalog_product(const std::vector<SymmetricSpaceModel>& factors,
                                    const Tolerances& tol) {
    if (factors.size() < 2) throw InputError("catalog_product: need at least two factors");
    int ambient = 0, dim_k = 0, dim_p = 0;
    for (const auto& f : factors) {
        ambient += f.algebra().ambient_size();
        dim_k += f.dim_k();
        dim_p += f.dim_p();
    }
    std::vector<Matrix> basis;
    std::vector<FactorInfo> infos;
    // k-bases of every factor first, then the p-bases, both in factor order.
    int a_off = 0, k_off = 0, p_off = 0;
    for (const auto& f : factors) {
        const int as = f.algebra().ambient_size();
        for (int i = 0; i < f.dim_k(); ++i) {
            Matrix m = Matrix::Zero(ambient, ambient);
            m.block(a_off, a_off, as, as) = f.algebra().basis()[i];
            basis.push_back(std::move(m));
        }
        FactorInfo info{f.name(), f.params(), f.scale(), k_off, f.dim_k(), p_off, f.dim_p()};
        infos.push_back(info);
        a_off += as;
        k_off += f.dim_k();
        p_off += f.dim_p();
    }
    a_off = 0;
    for (const auto& f : factors) {
        const int as = f.algebra().ambient_size();
        for (int i = 0; i < f.dim_p(); ++i) {
            Matrix m = Matrix::Zero(ambient, ambient);
            m.block(a_off, a_off, as, as) = f.algebra().basis()[f.dim_k() + i];
            basis.push_back(std::move(m));
        }
        a_off += as;
    }
    LieAlgebraPresentation g = LieAlgebraPresentation::from_basis(std::move(basis), tol);
    Matrix theta = Matrix::Identity(dim_k + dim_p, dim_k + dim_p);
    theta.bottomRightCorner(dim_p, dim_p) *= -1.0;
    return SymmetricSpaceModel(std::move(g), std::move(theta), dim_k, dim_p,
                               Matrix::Identity(dim_p, dim_p), SpaceType::product, infos,
                               "product", {}, 1.0, tol);
}

}  // namespace parhom
