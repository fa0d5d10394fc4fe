#include <catch2/catch_amalgamated.hpp>

#include "qrf/group.hpp"
#include "test_util.hpp"

using namespace qrf;

TEST_CASE("irrep dimensions", "[group]") {
    CHECK(irrep_dim(IrrepLabel::su2(0)) == 1);
    CHECK(irrep_dim(IrrepLabel::su2(3)) == 4);
    CHECK(irrep_dim(IrrepLabel::u1(7)) == 1);
}

TEST_CASE("irrep_matrix at the identity", "[group]") {
    for (int two_j : {0, 1, 2, 5}) {
        const Matrix d = irrep_matrix(IrrepLabel::su2(two_j), GroupElement::identity(GroupId::SU2));
        CHECK((d - Matrix::identity(two_j + 1)).max_abs() < 1e-14);
    }
    const Matrix u = irrep_matrix(IrrepLabel::u1(3), GroupElement::identity(GroupId::U1));
    CHECK(std::abs(u(0, 0) - cplx(1)) < 1e-15);
    CHECK_THROWS_AS(irrep_matrix(IrrepLabel::u1(1), GroupElement::identity(GroupId::SU2)),
                    std::invalid_argument);
}

TEST_CASE("z-axis rotation matches exponentiated J_z", "[group]") {
    // Oracle: e^{i w Jz} with Jz = diag(-1/2, +1/2) in the m-ascending basis.
    for (double omega : {0.3, 1.1, 2.7}) {
        const Matrix d = irrep_matrix(IrrepLabel::su2(1), GroupElement::axis_angle(omega, 0, 0));
        CHECK(std::abs(d(0, 0) - std::exp(cplx(0, -omega / 2))) < 1e-14);
        CHECK(std::abs(d(1, 1) - std::exp(cplx(0, omega / 2))) < 1e-14);
        CHECK(std::abs(d(0, 1)) < 1e-14);
        CHECK(std::abs(d(1, 0)) < 1e-14);
    }
}

TEST_CASE("irrep_matrix homomorphism via fundamental composition", "[group]") {
    auto gen = test::rng(21);
    for (int t = 0; t < 20; ++t) {
        const GroupElement g1 = test::random_su2(gen);
        const GroupElement g2 = test::random_su2(gen);
        const GroupElement g12 = compose(g1, g2);  // composed in the 2x2 fundamental rep
        for (int two_j : {1, 2, 3}) {
            const IrrepLabel q = IrrepLabel::su2(two_j);
            const Matrix lhs = irrep_matrix(q, g1) * irrep_matrix(q, g2);
            CHECK((lhs - irrep_matrix(q, g12)).max_abs() < 1e-10);
        }
    }
}

TEST_CASE("irrep_matrix unitarity up to two_j = 10", "[group]") {
    auto gen = test::rng(22);
    for (int two_j = 0; two_j <= 10; ++two_j) {
        const GroupElement g = test::random_su2(gen);
        const Matrix d = irrep_matrix(IrrepLabel::su2(two_j), g);
        CHECK((d * d.dagger() - Matrix::identity(two_j + 1)).max_abs() < 1e-10);
    }
}

TEST_CASE("characters", "[group]") {
    for (int two_j : {0, 1, 4}) {
        const cplx chi =
            character(IrrepLabel::su2(two_j), GroupElement::identity(GroupId::SU2));
        CHECK(std::abs(chi - cplx(two_j + 1)) < 1e-12);
    }

    // chi^{1/2}(w) = 2 cos(w/2); the trace of the fundamental as oracle.
    const GroupElement g = GroupElement::axis_angle(M_PI / 3, 1.0, 2.0);
    const cplx tr = su2_fundamental(g).trace();
    CHECK(std::abs(character(IrrepLabel::su2(1), g) - tr) < 1e-14);
    CHECK(std::abs(character(IrrepLabel::su2(1), g) - cplx(std::sqrt(3.0))) < 1e-14);

    auto gen = test::rng(23);
    std::uniform_real_distribution<double> u(0, M_PI);
    for (int t = 0; t < 10; ++t) {
        const GroupElement h = GroupElement::axis_angle(u(gen), 0.7, 0.3);
        for (int two_j = 0; two_j <= 5; ++two_j) {
            const IrrepLabel q = IrrepLabel::su2(two_j);
            CHECK(std::abs(character(q, h) - irrep_matrix(q, h).trace()) < 1e-10);
        }
    }

    // The removable singularity at w = 0 and the endpoint w = 2pi.
    CHECK(std::abs(character(IrrepLabel::su2(2), GroupElement::axis_angle(1e-12, 0.2, 0.1)) -
                   cplx(3)) < 1e-10);
}

TEST_CASE("clebsch_gordan stretched and two-qubit singlet", "[group]") {
    for (int two_j : {1, 2, 5}) {
        CHECK(std::abs(clebsch_gordan(two_j, two_j, 1, 1, two_j + 1, two_j + 1) - 1.0) < 1e-14);
    }

    // Oracle: diagonalize J^2 on the two-qubit M=0 block spanned by
    // {|+->, |-+>}; in that basis J^2 = [[1,1],[1,1]].
    Matrix jsq(2, 2);
    jsq(0, 0) = jsq(0, 1) = jsq(1, 0) = jsq(1, 1) = 1.0;
    auto [ev, vecs] = hermitian_eig(jsq);
    REQUIRE(std::abs(ev[0]) < 1e-14);  // singlet eigenvalue J(J+1) = 0
    cplx c0 = vecs(0, 0), c1 = vecs(1, 0);
    if (c0.real() < 0) {  // Condon-Shortley: highest m1 component positive
        c0 = -c0;
        c1 = -c1;
    }
    CHECK(std::abs(clebsch_gordan(1, 1, 1, -1, 0, 0) - c0.real()) < 1e-12);
    CHECK(std::abs(clebsch_gordan(1, -1, 1, 1, 0, 0) - c1.real()) < 1e-12);
    CHECK(std::abs(clebsch_gordan(1, 1, 1, -1, 0, 0) - M_SQRT1_2) < 1e-14);

    // Selection rules return 0.
    CHECK(clebsch_gordan(1, 1, 1, 1, 0, 0) == 0.0);
    CHECK(clebsch_gordan(2, 0, 1, 1, 5, 1) == 0.0);
    CHECK(clebsch_gordan(2, 1, 1, 1, 3, 2) == 0.0);  // parity violation
}

TEST_CASE("clebsch_gordan symmetry identity", "[group]") {
    // (j1,m1;j2,m2|j,m) = (-1)^{j2+m2} sqrt((2j+1)/(2j1+1)) (j,-m;j2,m2|j1,-m1).
    auto gen = test::rng(24);
    std::uniform_int_distribution<int> dj(0, 8);
    int checked = 0;
    while (checked < 50) {
        const int two_j1 = dj(gen), two_j2 = dj(gen);
        const auto js = couple(two_j1, two_j2);
        const int two_j = js[std::uniform_int_distribution<size_t>(0, js.size() - 1)(gen)];
        std::uniform_int_distribution<int> dm1(0, two_j1), dm2(0, two_j2);
        const int two_m1 = -two_j1 + 2 * dm1(gen);
        const int two_m2 = -two_j2 + 2 * dm2(gen);
        const int two_m = two_m1 + two_m2;
        if (std::abs(two_m) > two_j) continue;
        const double lhs = clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_j, two_m);
        const double phase = ((two_j2 + two_m2) / 2 % 2) ? -1.0 : 1.0;
        const double rhs = phase * std::sqrt(double(two_j + 1) / (two_j1 + 1)) *
                           clebsch_gordan(two_j, -two_m, two_j2, two_m2, two_j1, -two_m1);
        CHECK(std::abs(lhs - rhs) < 1e-10);
        ++checked;
    }
}

TEST_CASE("clebsch_gordan orthogonality and completeness", "[group]") {
    auto gen = test::rng(25);
    std::uniform_int_distribution<int> dj(0, 8);
    for (int t = 0; t < 6; ++t) {
        const int two_j1 = dj(gen), two_j2 = dj(gen);
        const auto js = couple(two_j1, two_j2);
        // Orthogonality over (m1, m2) for every (J, J', M).
        for (int two_J : js)
            for (int two_Jp : js) {
                const int two_M = std::min(two_J, two_Jp) % 2 == 0 ? 0 : 1;
                double s = 0;
                for (int two_m1 = -two_j1; two_m1 <= two_j1; two_m1 += 2) {
                    const int two_m2 = two_M - two_m1;
                    if (std::abs(two_m2) > two_j2) continue;
                    s += clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_J, two_M) *
                         clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_Jp, two_M);
                }
                CHECK(std::abs(s - (two_J == two_Jp ? 1.0 : 0.0)) < 1e-10);
            }
        // Completeness over (J, M).
        std::uniform_int_distribution<int> dm1(0, two_j1), dm2(0, two_j2);
        const int two_m1 = -two_j1 + 2 * dm1(gen), two_m2 = -two_j2 + 2 * dm2(gen);
        const int two_m1p = -two_j1 + 2 * dm1(gen), two_m2p = -two_j2 + 2 * dm2(gen);
        double s = 0;
        for (int two_J : js)
            s += clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_J, two_m1 + two_m2) *
                 clebsch_gordan(two_j1, two_m1p, two_j2, two_m2p, two_J, two_m1p + two_m2p);
        const double want = (two_m1 == two_m1p && two_m2 == two_m2p) ? 1.0 : 0.0;
        CHECK(std::abs(s - want) < 1e-10);
    }
}

TEST_CASE("couple", "[group]") {
    CHECK(couple(1, 1) == std::vector<int>{0, 2});
    CHECK(couple(4, 1) == std::vector<int>{3, 5});
    auto gen = test::rng(26);
    std::uniform_int_distribution<int> dj(0, 12);
    for (int t = 0; t < 20; ++t) {
        const int a = dj(gen), b = dj(gen);
        int dims = 0;
        for (int two_J : couple(a, b)) dims += two_J + 1;
        CHECK(dims == (a + 1) * (b + 1));
    }
}

TEST_CASE("haar_quadrature normalization and orthogonality", "[group]") {
    for (int order : {1, 5, 12}) {
        for (GroupId g : {GroupId::U1, GroupId::SU2}) {
            const QuadratureRule rule = haar_quadrature(g, order);
            double s = 0;
            for (double w : rule.weights) s += w;
            CHECK(std::abs(s - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(haar_quadrature(GroupId::U1, 0), std::invalid_argument);

    // Character orthonormality for SU(2).
    const QuadratureRule rule = haar_quadrature(GroupId::SU2, 8);
    double s = 0;
    for (size_t k = 0; k < rule.nodes.size(); ++k)
        s += rule.weights[k] * std::norm(character(IrrepLabel::su2(1), rule.nodes[k]));
    CHECK(std::abs(s - 1.0) < 1e-10);

    // U(1) discrete Fourier orthogonality for |k| < order.
    const QuadratureRule u1 = haar_quadrature(GroupId::U1, 9);
    for (int k = -8; k <= 8; ++k) {
        cplx acc = 0;
        for (size_t i = 0; i < u1.nodes.size(); ++i)
            acc += u1.weights[i] * std::exp(cplx(0, k * u1.nodes[i].u1_theta()));
        CHECK(std::abs(acc - (k == 0 ? cplx(1) : cplx(0))) < 1e-12);
    }
}

TEST_CASE("character orthogonality under quadrature", "[group]") {
    const int max_two_j = 4;
    const QuadratureRule rule =
        haar_quadrature(GroupId::SU2, default_quadrature_order(max_two_j));
    for (int a = 0; a <= max_two_j; ++a)
        for (int b = 0; b <= max_two_j; ++b) {
            cplx s = 0;
            for (size_t k = 0; k < rule.nodes.size(); ++k)
                s += rule.weights[k] * character(IrrepLabel::su2(a), rule.nodes[k]) *
                     std::conj(character(IrrepLabel::su2(b), rule.nodes[k]));
            CHECK(std::abs(s - (a == b ? cplx(1) : cplx(0))) < 1e-8);
        }
}
