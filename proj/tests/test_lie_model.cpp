#include "parhom/lie_model.hpp"

#include <doctest.h>

#include <cmath>

using namespace parhom;

namespace {
const Tolerances tol;

Vector unit(int n, int i) { return Vector::Unit(n, i); }

std::vector<SymmetricSpaceModel> representative_models() {
    std::vector<SymmetricSpaceModel> models;
    models.push_back(catalog("sphere", {2}));
    models.push_back(catalog("sphere", {3}));
    models.push_back(catalog("sphere", {4}));
    models.push_back(catalog("euclidean", {3}));
    models.push_back(catalog("cp", {1}));
    models.push_back(catalog("cp", {2}));
    models.push_back(catalog("grassmannian_su", {2}));
    models.push_back(catalog("dual_sphere", {3}));
    models.push_back(catalog("dual_cp", {2}));
    models.push_back(catalog("dual_grassmannian_su", {2}));
    models.push_back(catalog_product({catalog("sphere", {2}), catalog("sphere", {2})}));
    models.push_back(catalog_product({catalog("sphere", {2}), catalog("euclidean", {2})}));
    return models;
}
}  // namespace

TEST_CASE("every catalog model passes its structural invariants") {
    for (const auto& m : representative_models()) {
        CAPTURE(m.name());
        auto rep = m.validate(tol);
        CHECK(rep.antisymmetry <= 1e-9);
        CHECK(rep.jacobi <= 1e-9);
        CHECK(rep.expansion <= 1e-9);
        CHECK(rep.killing_symmetry <= 1e-9);
        CHECK(rep.killing_trace <= 1e-9);
        CHECK(rep.theta_involution <= 1e-9);
        CHECK(rep.theta_automorphism <= 1e-9);
        CHECK(rep.cartan_relations <= 1e-9);
        CHECK(rep.metric_skew <= 1e-9);
        CHECK(rep.metric_positivity > 0);
        CHECK(rep.killing_proportionality <= 1e-9);
    }
}

TEST_CASE("catalog rejects unknown names and bad parameters") {
    CHECK_THROWS_AS(catalog("moebius", {2}), InputError);
    CHECK_THROWS_AS(catalog("sphere", {1}), InputError);
    CHECK_THROWS_AS(catalog("sphere", {2, 3}), InputError);
    CHECK_THROWS_AS(catalog("sphere", {2}, -1.0), InputError);
}

TEST_CASE("catalog dimensions: sphere, euclidean, product") {
    auto s2 = catalog("sphere", {2});
    CHECK(s2.dim_p() == 2);
    CHECK(s2.dim_k() == 1);
    CHECK(s2.rank(tol) == 1);

    auto prod = catalog_product({catalog("sphere", {2}), catalog("sphere", {2})});
    CHECK(prod.dim_p() == 4);
    CHECK(prod.rank(tol) == 2);

    auto e3 = catalog("euclidean", {3});
    CHECK(e3.rank(tol) == 3);
    // abelian p: all curvature operators vanish
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(e3.curvature_operator_basis(i, j).norm() == 0.0);
}

TEST_CASE("transvection is linear and inverts pi1") {
    auto s2 = catalog("sphere", {2});
    CHECK(s2.transvection(Vector::Zero(2)).norm() == 0.0);
    Vector x = unit(2, 0), y = unit(2, 1);
    CHECK((s2.transvection(x + y) - s2.transvection(x) - s2.transvection(y)).norm() <
          tol.residual_abs);
    CHECK((s2.pi1(s2.transvection(x)) - x).norm() == 0.0);
    // so(3) matrix of the first tangent direction: E_13 - E_31
    Matrix amb = s2.algebra().ambient(s2.transvection(x));
    Matrix expect = Matrix::Zero(3, 3);
    expect(0, 2) = 1;
    expect(2, 0) = -1;
    CHECK((amb - expect).norm() < 1e-12);
}

TEST_CASE("isotropy action on the sphere rotates the tangent plane") {
    auto s2 = catalog("sphere", {2});
    CHECK(s2.isotropy_action(Vector::Zero(3), tol).norm() == 0.0);
    Vector gen = s2.embed_k(Vector::Unit(1, 0));  // generator of so(2)
    Matrix a = s2.isotropy_action(gen, tol);
    // rotation generator: skew, nonzero, squares to a negative multiple of Id
    CHECK((a + a.transpose()).norm() < 1e-12);
    Matrix a2 = a * a;
    CHECK((a2 - a2(0, 0) * Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(a2(0, 0) < 0);
    CHECK_THROWS_AS(s2.isotropy_action(s2.transvection(unit(2, 0)), tol), InputError);
}

TEST_CASE("isotropy action is metric-skew on random inputs") {
    std::mt19937_64 rng(23);
    for (const auto& m : representative_models()) {
        if (m.dim_k() == 0) continue;
        Vector xk = gaussian_vector(m.dim_k(), rng);
        Matrix a = m.pi2(m.embed_k(xk));
        CHECK((a.transpose() * m.metric() + m.metric() * a).norm() <= 1e-9 * (1 + a.norm()));
    }
}

TEST_CASE("unit sphere has sectional curvature one") {
    auto s2 = catalog("sphere", {2});
    Vector x = unit(2, 0), y = unit(2, 1);
    CHECK((s2.curvature(x, y, y) - x).norm() < 1e-12);
    CHECK(s2.curvature(x, x, y).norm() == 0.0);

    auto s4 = catalog("sphere", {4});
    Vector u = unit(4, 1), v = unit(4, 3);
    CHECK((s4.curvature(u, v, v) - u).norm() < 1e-12);
}

TEST_CASE("curvature scale multiplier rescales sectional curvature") {
    auto s2k = catalog("sphere", {2}, 2.5);
    Vector x = unit(2, 0), y = unit(2, 1);
    CHECK((s2k.curvature(x, y, y) - 2.5 * x).norm() < 1e-10);
    auto h2 = catalog("dual_sphere", {2});
    CHECK((h2.curvature(x, y, y) + x).norm() < 1e-12);
}

TEST_CASE("cp normalization: holomorphic pinching between 1 and 4") {
    auto cp2 = catalog("cp", {2});
    // basis ordering: X_{e1}, X_{i e1}, X_{e2}, X_{i e2}; {x, Jx} spans a
    // holomorphic plane, {x, y} with y from another complex line a real one
    Vector x = unit(4, 0), jx = unit(4, 1), y = unit(4, 2);
    CHECK((cp2.curvature(x, jx, jx) - 4.0 * x).norm() < 1e-10);
    CHECK((cp2.curvature(x, y, y) - 1.0 * x).norm() < 1e-10);
    auto dual = catalog("dual_cp", {2});
    CHECK((dual.curvature(x, jx, jx) + 4.0 * x).norm() < 1e-10);
}

TEST_CASE("curvature symmetries hold on random triples") {
    std::mt19937_64 rng(31);
    for (const auto& m : representative_models()) {
        const int p = m.dim_p();
        for (int trial = 0; trial < 5; ++trial) {
            Vector x = gaussian_vector(p, rng), y = gaussian_vector(p, rng),
                   z = gaussian_vector(p, rng), w = gaussian_vector(p, rng);
            CHECK((m.curvature(x, y, z) + m.curvature(y, x, z)).norm() <= 1e-8 * (1 + x.norm()));
            const double pair_sym =
                m.inner(m.curvature(x, y, z), w) - m.inner(m.curvature(z, w, x), y);
            CHECK(std::abs(pair_sym) <= 1e-8 * (1 + x.norm() * y.norm() * z.norm() * w.norm()));
            Vector bianchi = m.curvature(x, y, z) + m.curvature(y, z, x) + m.curvature(z, x, y);
            CHECK(bianchi.norm() <= 1e-8 * (1 + x.norm() * y.norm() * z.norm()));
        }
    }
}

TEST_CASE("curvature invariance of trivial and full subspaces") {
    auto s4 = catalog("sphere", {4});
    CHECK(s4.is_curvature_invariant(Subspace::zero(4), tol));
    CHECK(s4.is_curvature_invariant(Subspace::full(4), tol));
    // constant curvature: any 2-plane is curvature invariant
    Matrix w(4, 2);
    w.setZero();
    w(0, 0) = 1;
    w(2, 1) = 1;
    CHECK(s4.is_curvature_invariant(Subspace::span(w, 4, tol), tol));
}

TEST_CASE("every line in a product is curvature invariant") {
    auto prod = catalog_product({catalog("sphere", {2}), catalog("sphere", {2})});
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix w(4, 1);
        w.col(0) = random_unit_vector(4, rng);
        CHECK(prod.is_curvature_invariant(Subspace::span(w, 4, tol), tol));
    }
}

TEST_CASE("curvature isotropy: the three methods agree") {
    auto prod = catalog_product({catalog("sphere", {2}), catalog("sphere", {2})});
    // split flat: one direction in each factor
    Matrix flat(4, 2);
    flat.setZero();
    flat(0, 0) = 1;
    flat(2, 1) = 1;
    Subspace flat_sub = Subspace::span(flat, 4, tol);
    for (auto method : {IsotropyMethod::op, IsotropyMethod::bracket, IsotropyMethod::sectional})
        CHECK(prod.is_curvature_isotropic(flat_sub, method, tol));

    auto s2 = catalog("sphere", {2});
    Subspace full2 = Subspace::full(2);
    for (auto method : {IsotropyMethod::op, IsotropyMethod::bracket, IsotropyMethod::sectional})
        CHECK_FALSE(s2.is_curvature_isotropic(full2, method, tol));

    auto e3 = catalog("euclidean", {3});
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix w(3, 2);
        w.col(0) = random_unit_vector(3, rng);
        w.col(1) = random_unit_vector(3, rng);
        Subspace s = Subspace::span(w, 3, tol);
        for (auto method :
             {IsotropyMethod::op, IsotropyMethod::bracket, IsotropyMethod::sectional})
            CHECK(e3.is_curvature_isotropic(s, method, tol));
    }
}

TEST_CASE("isotropy methods agree on random subspaces of several models") {
    std::mt19937_64 rng(41);
    for (const auto& m : representative_models()) {
        for (int trial = 0; trial < 8; ++trial) {
            const int dim = 1 + static_cast<int>(rng() % 3);
            Matrix w(m.dim_p(), dim);
            for (int c = 0; c < dim; ++c) w.col(c) = gaussian_vector(m.dim_p(), rng);
            Subspace s = Subspace::span(w, m.dim_p(), tol);
            const bool a = m.is_curvature_isotropic(s, IsotropyMethod::op, tol);
            const bool b = m.is_curvature_isotropic(s, IsotropyMethod::bracket, tol);
            const bool c = m.is_curvature_isotropic(s, IsotropyMethod::sectional, tol);
            CHECK(a == b);
            CHECK(b == c);
        }
    }
}

TEST_CASE("rank by greedy extension matches brute force on the product") {
    auto prod = catalog_product({catalog("sphere", {2}), catalog("sphere", {2})});
    CHECK(prod.rank(tol) == 2);
    // brute force over coordinate pairs: no abelian triple exists
    int best = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (prod.gamma_bracket(Vector::Unit(4, i), Vector::Unit(4, j)).norm() >
                tol.residual_abs)
                continue;
            best = std::max(best, 2);
            for (int k = 0; k < 4; ++k) {
                if (k == i || k == j) continue;
                if (prod.gamma_bracket(Vector::Unit(4, i), Vector::Unit(4, k)).norm() <=
                        tol.residual_abs &&
                    prod.gamma_bracket(Vector::Unit(4, j), Vector::Unit(4, k)).norm() <=
                        tol.residual_abs)
                    best = std::max(best, 3);
            }
        }
    CHECK(best == 2);
    CHECK(catalog("sphere", {5}).rank(tol) == 1);
    CHECK(catalog("grassmannian_su", {2}).rank(tol) == 2);
}

TEST_CASE("totally geodesic reduction of the full space is the space") {
    auto s3 = catalog("sphere", {3});
    auto red = s3.totally_geodesic_reduce(Subspace::full(3), tol);
    CHECK(red.dim_p() == 3);
    CHECK(red.dim_g() == s3.dim_g());
    CHECK(red.validate(tol).worst() <= 1e-9);
}

TEST_CASE("a 2-plane in the 4-sphere reduces to a 2-sphere of the same curvature") {
    auto s4 = catalog("sphere", {4});
    Matrix w(4, 2);
    w.setZero();
    w(0, 0) = 1;
    w(1, 1) = 1;
    auto red = s4.totally_geodesic_reduce(Subspace::span(w, 4, tol), tol);
    CHECK(red.dim_p() == 2);
    CHECK(red.dim_k() == 1);
    CHECK(red.type_tag() == SpaceType::compact);
    Vector x = unit(2, 0), y = unit(2, 1);
    CHECK((red.curvature(x, y, y) - x).norm() < 1e-10);
}

TEST_CASE("an abelian plane in the product reduces to a euclidean model") {
    auto prod = catalog_product({catalog("sphere", {2}), catalog("sphere", {2})});
    Matrix w(4, 2);
    w.setZero();
    w(0, 0) = 1;
    w(2, 1) = 1;
    auto red = prod.totally_geodesic_reduce(Subspace::span(w, 4, tol), tol);
    CHECK(red.dim_p() == 2);
    CHECK(red.dim_k() == 0);
    CHECK(red.type_tag() == SpaceType::euclidean);
}

TEST_CASE("reduction rejects non-invariant subspaces") {
    auto cp2 = catalog("cp", {2});
    // span{x, (Jx + y)/sqrt(2)} is neither complex nor totally real
    Matrix w(4, 2);
    w.setZero();
    w(0, 0) = 1;
    w(1, 1) = 1.0 / std::sqrt(2.0);
    w(2, 1) = 1.0 / std::sqrt(2.0);
    Subspace s = Subspace::span(w, 4, tol);
    CHECK_FALSE(cp2.is_curvature_invariant(s, tol));
    CHECK_THROWS_AS(cp2.totally_geodesic_reduce(s, tol), StructuralError);
}

TEST_CASE("reduced curvature is the restriction of the ambient curvature") {
    auto s4 = catalog("sphere", {4});
    Matrix w(4, 3);
    w.setZero();
    w(0, 0) = 1;
    w(1, 1) = 1;
    w(3, 2) = 1;
    Subspace v = Subspace::span(w, 4, tol);
    auto red = s4.totally_geodesic_reduce_full(v, tol);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        Vector a = gaussian_vector(3, rng), b = gaussian_vector(3, rng),
               c = gaussian_vector(3, rng);
        Vector inner = red.model.curvature(a, b, c);
        Vector outer = s4.curvature(red.p_embed * a, red.p_embed * b, red.p_embed * c);
        CHECK((red.p_embed * inner - outer).norm() < 1e-9);
    }
}

TEST_CASE("ambient curvature span sits inside the isotropy image") {
    for (const auto& m : representative_models()) {
        CAPTURE(m.name());
        const int p = m.dim_p();
        std::vector<Vector> curv, isot;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) curv.push_back(op_vec(m.curvature_operator_basis(i, j)));
        for (int a = 0; a < m.dim_k(); ++a)
            isot.push_back(op_vec(m.pi2(m.embed_k(Vector::Unit(m.dim_k(), a)))));
        Subspace curv_span = Subspace::span_vectors(curv, p * p, tol);
        Subspace isot_span = Subspace::span_vectors(isot, p * p, tol);
        CHECK(isot_span.containment_residual(curv_span) <= 1e-9);
        if (m.killing_definite_on_p(-1) || m.killing_definite_on_p(+1))
            CHECK(curv_span.dim() == isot_span.dim());
    }
}
