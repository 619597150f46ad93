#include "parhom/numeric.hpp"

#include <doctest.h>

#include <cmath>

using namespace parhom;

namespace {
Matrix cols2(std::initializer_list<Vector> vs) {
    Matrix m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
    int i = 0;
    for (const auto& v : vs) m.col(i++) = v;
    return m;
}
Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}
Vector vec3(double a, double b, double c) {
    Vector v(3);
    v << a, b, c;
    return v;
}
Matrix skew3(int i, int j) {
    Matrix m = Matrix::Zero(3, 3);
    m(i, j) = 1.0;
    m(j, i) = -1.0;
    return m;
}
}  // namespace

TEST_CASE("tolerances must be positive with a nonempty band") {
    Tolerances tol;
    CHECK_NOTHROW(tol.validate());
    tol.rank_rel = 0.0;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
    tol = Tolerances{};
    tol.indeterminate_band = 1.0;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
}

TEST_CASE("span of collinear vectors has dimension one") {
    Tolerances tol;
    Subspace s = Subspace::span(cols2({vec2(1, 0), vec2(2, 0)}), 2, tol);
    CHECK(s.dim() == 1);
    CHECK(std::abs(std::abs(s.onb()(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(s.onb()(1, 0)) < 1e-12);
}

TEST_CASE("span of nothing is the zero subspace") {
    Tolerances tol;
    Subspace s = Subspace::span(Matrix(3, 0), 3, tol);
    CHECK(s.dim() == 0);
    CHECK(s.ambient_dim() == 3);
}

TEST_CASE("near-collapsed vector still spans a line under the relative cut") {
    // singular value of the single column (1, 1e-14) is its norm, far above
    // rank_rel times itself
    Tolerances tol;
    tol.rank_rel = 1e-9;
    Subspace s = Subspace::span(cols2({vec2(1, 1e-14)}), 2, tol);
    REQUIRE(s.dim() == 1);
    Vector u = s.onb().col(0);
    if (u(0) < 0) u = -u;
    CHECK(std::abs(u(0) - 1.0) < 1e-12);
    CHECK(std::abs(u(1)) < 1e-12);
}

TEST_CASE("span dimension mismatch is an input error") {
    Tolerances tol;
    CHECK_THROWS_AS(Subspace::span(Matrix::Identity(3, 3), 2, tol), InputError);
}

TEST_CASE("span is idempotent") {
    Tolerances tol;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix v(5, 3);
        for (int c = 0; c < 3; ++c) v.col(c) = gaussian_vector(5, rng);
        Subspace s1 = Subspace::span(v, 5, tol);
        Subspace s2 = Subspace::span(s1.onb(), 5, tol);
        CHECK(s1.distance(s2) <= tol.residual_abs);
    }
}

TEST_CASE("least squares: identity constraint returns the target") {
    Tolerances tol;
    Vector t = vec3(1, -2, 0.5);
    auto r = solve_least_squares(Matrix::Identity(3, 3), t, tol);
    CHECK(r.verdict == Feasibility::feasible);
    CHECK((r.solution - t).norm() < 1e-12);
    CHECK(r.residual < 1e-12);
}

TEST_CASE("least squares: zero constraint with nonzero target is infeasible") {
    Tolerances tol;
    Vector t = vec2(3, 4);
    auto r = solve_least_squares(Matrix::Zero(2, 2), t, tol);
    CHECK(r.verdict == Feasibility::infeasible);
    CHECK(r.residual == doctest::Approx(5.0));
    CHECK(r.solution.norm() == 0.0);
}

TEST_CASE("least squares: column (1,1) against (1,-1), by normal equations") {
    // A^T A x = A^T b gives 2x = 0, so x = 0 and the residual is |b| = sqrt(2)
    Tolerances tol;
    Matrix a(2, 1);
    a << 1, 1;
    auto r = solve_least_squares(a, vec2(1, -1), tol);
    CHECK(std::abs(r.solution(0)) < 1e-14);
    CHECK(r.residual == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.verdict == Feasibility::infeasible);
}

TEST_CASE("least squares: residuals inside the guard band are indeterminate") {
    Tolerances tol;  // feas_rel 1e-8, band 1e3: indeterminate in (1e-8, 1e-5)
    Matrix a(2, 1);
    a << 1, 0;
    Vector t(2);
    t << 1, 3e-7;
    auto r = solve_least_squares(a, t, tol);
    CHECK(r.verdict == Feasibility::indeterminate);
}

TEST_CASE("least squares residual is literally |Ax - b|") {
    Tolerances tol;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix a(4, 2);
        for (int c = 0; c < 2; ++c) a.col(c) = gaussian_vector(4, rng);
        Vector b = gaussian_vector(4, rng);
        auto r = solve_least_squares(a, b, tol);
        CHECK(std::abs(r.residual - (a * r.solution - b).norm()) < 1e-13);
    }
}

TEST_CASE("intersect: coordinate axes meet in zero") {
    Tolerances tol;
    Subspace x = Subspace::span(cols2({vec2(1, 0)}), 2, tol);
    Subspace y = Subspace::span(cols2({vec2(0, 1)}), 2, tol);
    CHECK(intersect(x, y, tol).dim() == 0);
}

TEST_CASE("intersect is idempotent on a subspace") {
    Tolerances tol;
    Subspace v = Subspace::span(cols2({vec3(1, 2, 0), vec3(0, 1, 1)}), 3, tol);
    Subspace w = intersect(v, v, tol);
    CHECK(w.dim() == v.dim());
    CHECK(w.distance(v) <= tol.residual_abs);
}

TEST_CASE("intersect of two planes in R^3 is the shared line") {
    Tolerances tol;
    Subspace a = Subspace::span(cols2({vec3(1, 0, 0), vec3(0, 1, 0)}), 3, tol);
    Subspace b = Subspace::span(cols2({vec3(0, 1, 0), vec3(0, 0, 1)}), 3, tol);
    Subspace c = intersect(a, b, tol);
    REQUIRE(c.dim() == 1);
    CHECK(std::abs(std::abs(c.onb()(1, 0)) - 1.0) < 1e-12);
}

TEST_CASE("intersect rejects ambient mismatch") {
    Tolerances tol;
    CHECK_THROWS_AS(intersect(Subspace::full(2), Subspace::full(3), tol), InputError);
}

TEST_CASE("bracket closure of a complex structure is one-dimensional") {
    Tolerances tol;
    Matrix j(2, 2);
    j << 0, -1, 1, 0;
    Subspace s = bracket_closure({j}, {}, tol);
    CHECK(s.dim() == 1);
}

TEST_CASE("bracket closure of two so(3) generators is all of so(3)") {
    Tolerances tol;
    Subspace s = bracket_closure({skew3(0, 1), skew3(1, 2)}, {}, tol);
    CHECK(s.dim() == 3);
    // closure property: brackets of returned basis operators stay inside
    auto ops = subspace_ops(s, 3);
    for (const auto& a : ops)
        for (const auto& b : ops)
            CHECK(s.containment_residual(op_vec(a * b - b * a)) <= tol.residual_abs);
}

TEST_CASE("bracket closure of an empty seed is zero even with derivations") {
    Tolerances tol;
    Subspace s = bracket_closure({}, {skew3(0, 1)}, tol);
    CHECK(s.dim() == 0);
}

TEST_CASE("bracket closure is closed under the derivation set") {
    Tolerances tol;
    Subspace s = bracket_closure({skew3(0, 1)}, {skew3(1, 2)}, tol);
    CHECK(s.dim() == 3);
    auto ops = subspace_ops(s, 3);
    Matrix d = skew3(1, 2);
    for (const auto& a : ops)
        CHECK(s.containment_residual(op_vec(d * a - a * d)) <= tol.residual_abs);
}

TEST_CASE("bracket closure rejects non-square input") {
    Tolerances tol;
    CHECK_THROWS_AS(bracket_closure({Matrix::Zero(2, 3)}, {}, tol), InputError);
}

TEST_CASE("commutant of the identity is the full operator space") {
    Tolerances tol;
    CHECK(commutant({Matrix::Identity(3, 3)}, tol).dim() == 9);
}

TEST_CASE("commutant of so(3) acting on R^3 is the scalars") {
    Tolerances tol;
    Subspace c = commutant({skew3(0, 1), skew3(0, 2), skew3(1, 2)}, tol);
    REQUIRE(c.dim() == 1);
    Matrix rep = op_unvec(c.onb().col(0), 3);
    const double lead = rep(0, 0);
    CHECK((rep - lead * Matrix::Identity(3, 3)).norm() < 1e-10);
    for (const auto& b : {skew3(0, 1), skew3(0, 2), skew3(1, 2)})
        CHECK((rep * b - b * rep).norm() <= tol.residual_abs);
}

TEST_CASE("commutant of an empty list is everything") {
    Tolerances tol;
    CHECK(commutant({}, tol, 4).dim() == 16);
}

TEST_CASE("isotypic split with no operators is all-trivial") {
    Tolerances tol;
    std::mt19937_64 rng(3);
    auto split = isotypic_split({}, tol, rng, 3);
    CHECK(split.trivial_part.dim() == 3);
    CHECK(split.blocks.empty());
}

TEST_CASE("isotypic split of so(2) + 0 on R^3") {
    Tolerances tol;
    std::mt19937_64 rng(3);
    Matrix r = Matrix::Zero(3, 3);
    r(0, 1) = -1;
    r(1, 0) = 1;
    auto split = isotypic_split({r}, tol, rng);
    REQUIRE(split.trivial_part.dim() == 1);
    CHECK(std::abs(std::abs(split.trivial_part.onb()(2, 0)) - 1.0) < 1e-10);
    REQUIRE(split.blocks.size() == 1);
    CHECK(split.blocks[0].dim() == 2);
}

TEST_CASE("isotypic split of so(3) on R^3 is a single irreducible block") {
    Tolerances tol;
    std::mt19937_64 rng(5);
    auto split = isotypic_split({skew3(0, 1), skew3(0, 2), skew3(1, 2)}, tol, rng);
    CHECK(split.trivial_part.dim() == 0);
    REQUIRE(split.blocks.size() == 1);
    CHECK(split.blocks[0].dim() == 3);
}

TEST_CASE("isotypic blocks are invariant and recover the complement") {
    Tolerances tol;
    std::mt19937_64 rng(17);
    // so(2) + so(2) block-diagonal on R^5 with one fixed axis
    Matrix a = Matrix::Zero(5, 5), b = Matrix::Zero(5, 5);
    a(0, 1) = -1;
    a(1, 0) = 1;
    b(2, 3) = -2;
    b(3, 2) = 2;
    auto split = isotypic_split({a, b}, tol, rng);
    CHECK(split.trivial_part.dim() == 1);
    REQUIRE(split.blocks.size() == 2);
    int total = split.trivial_part.dim();
    for (const auto& blk : split.blocks) {
        total += blk.dim();
        for (const auto& op : {a, b})
            for (int i = 0; i < blk.dim(); ++i)
                CHECK(blk.containment_residual(op * blk.onb().col(i)) <= 1e-9);
    }
    CHECK(total == 5);
    // descending dimension order
    for (size_t i = 1; i < split.blocks.size(); ++i)
        CHECK(split.blocks[i - 1].dim() >= split.blocks[i].dim());
}

TEST_CASE("intertwiner space between paired representations") {
    Tolerances tol;
    std::vector<Matrix> so3 = {skew3(0, 1), skew3(0, 2), skew3(1, 2)};
    SUBCASE("all-zero operators impose no constraint") {
        std::vector<Matrix> zero(3, Matrix::Zero(3, 3));
        CHECK(intertwiner_space(zero, zero, tol).dim() == 9);
    }
    SUBCASE("standard so(3) with itself: multiples of the identity") {
        CHECK(intertwiner_space(so3, so3, tol).dim() == 1);
    }
    SUBCASE("irreducible to trivial: none") {
        std::vector<Matrix> zero(3, Matrix::Zero(3, 3));
        CHECK(intertwiner_space(so3, zero, tol).dim() == 0);
    }
    SUBCASE("length mismatch is an input error") {
        CHECK_THROWS_AS(intertwiner_space(so3, {skew3(0, 1)}, tol), InputError);
    }
}

TEST_CASE("deterministic gaussian stream") {
    std::mt19937_64 a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(gaussian(a) == gaussian(b));
}
