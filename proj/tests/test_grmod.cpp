#include <catch2/catch_amalgamated.hpp>

#include <ncmf/grmod.hpp>

using namespace ncmf;

namespace {

FieldSpec Q = FieldSpec::rationals();
FieldElem q(std::int64_t n, std::int64_t d = 1) { return FieldElem::rational(n, d); }

AlgebraPtr square_zero_xy() { return make_free_algebra(Q, 2, {0, 1}); }

AlgebraPtr poly(int n) {
    return make_skew_algebra(Q, n, constant_alpha(Q, n, -FieldElem::one(Q)));
}

AlgebraPtr exterior(int n) {
    std::set<int> squares;
    for (int i = 0; i < n; ++i) squares.insert(i);
    return make_skew_algebra(Q, n, constant_alpha(Q, n, FieldElem::one(Q)), squares);
}

AlgebraElement el(const AlgebraPtr& A, std::vector<std::pair<FieldElem, Word>> sum) {
    return normal_form(A, sum);
}

GradedMatrix matrix1x1(const Ring& ring, const AlgebraElement& entry, int target_shift) {
    GradedMatrix m(ring.algebra(), {target_shift}, {target_shift + entry.degree()});
    m.set(0, 0, entry);
    return m;
}

} // namespace

TEST_CASE("compose with identity and zero") {
    auto S = square_zero_xy();
    Ring ring = Ring::plain(S);
    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    GradedMatrix phi(S, {0, 1}, {1, 2});
    phi.set(0, 0, AlgebraElement::generator(S, 0));
    phi.set(0, 1, f);
    phi.set(1, 1, AlgebraElement::generator(S, 1));

    CHECK(compose(ring, phi, GradedMatrix::identity(S, phi.source())) == phi);
    CHECK(compose(ring, GradedMatrix::identity(S, phi.target()), phi) == phi);

    GradedMatrix zero(S, phi.source(), {3, 3});
    CHECK(compose(ring, phi, zero).is_zero());
}

TEST_CASE("rank-one composition equals f") {
    auto S = square_zero_xy();
    Ring ring = Ring::plain(S);
    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    GradedMatrix phi0 = matrix1x1(ring, el(S, {{q(3), {0}}, {q(5), {1}}}), 0);
    GradedMatrix phi1 = matrix1x1(ring, el(S, {{q(1, 5), {0}}, {q(2, 3), {1}}}), 1);
    GradedMatrix prod = compose(ring, phi0, phi1);
    CHECK(prod.rows() == 1);
    CHECK(prod.at(0, 0) == f);
}

TEST_CASE("degreewise map ranks") {
    auto S = square_zero_xy();
    Ring ring = Ring::plain(S);

    GradedMatrix id = GradedMatrix::identity(S, {0, 1});
    FieldMatrix m = degreewise_map(ring, id, 2);
    CHECK(m == FieldMatrix::identity(Q, m.rows()));

    GradedMatrix x = matrix1x1(ring, AlgebraElement::generator(S, 0), 0);
    FieldMatrix mx = degreewise_map(ring, x, 2); // maps {x,y} to {0, xy}
    CHECK(mx.rank() == 1);

    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    GradedMatrix mf = matrix1x1(ring, f, 0);
    FieldMatrix mfe = degreewise_map(ring, mf, 2);
    CHECK(mfe.cols() == 1);
    CHECK(mfe.rank() == 1);
}

TEST_CASE("degreewise realization is functorial") {
    auto S = square_zero_xy();
    Ring ring = Ring::plain(S);
    AlgebraElement x = AlgebraElement::generator(S, 0);
    AlgebraElement y = AlgebraElement::generator(S, 1);

    GradedMatrix phi(S, {0, 0}, {1, 1});
    phi.set(0, 0, x);
    phi.set(0, 1, y);
    phi.set(1, 0, y);
    phi.set(1, 1, x * q(3));
    GradedMatrix psi(S, {1, 1}, {2, 2});
    psi.set(0, 0, y);
    psi.set(1, 0, x);
    psi.set(0, 1, x + y * q(2));
    psi.set(1, 1, y);

    GradedMatrix comp = compose(ring, phi, psi);
    for (int e = 0; e <= 5; ++e) {
        FieldMatrix lhs = degreewise_map(ring, comp, e);
        FieldMatrix rhs = degreewise_map(ring, phi, e) * degreewise_map(ring, psi, e);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("compose is associative on composable triples") {
    auto T = poly(2);
    Ring ring = Ring::plain(T);
    Rng rng(17);
    auto rand_matrix = [&](ShiftVector tgt, ShiftVector src) {
        GradedMatrix m(T, tgt, src);
        for (std::size_t s = 0; s < tgt.size(); ++s)
            for (std::size_t t = 0; t < src.size(); ++t) {
                int d = src[t] - tgt[s];
                if (d < 0) continue;
                std::size_t n = T->dim_of_degree(d);
                std::vector<FieldElem> v;
                for (std::size_t i = 0; i < n; ++i) v.push_back(rng.field_elem(Q));
                m.set(s, t, AlgebraElement::from_coords(T, d, v));
            }
        return m;
    };
    for (int trial = 0; trial < 5; ++trial) {
        GradedMatrix a = rand_matrix({0, 1}, {1, 2});
        GradedMatrix b = rand_matrix({1, 2}, {2, 3});
        GradedMatrix c = rand_matrix({2, 3}, {3, 4});
        CHECK(compose(ring, compose(ring, a, b), c) ==
              compose(ring, a, compose(ring, b, c)));
    }
}

TEST_CASE("kernel windows") {
    auto L = exterior(2);
    AlgebraElement x = AlgebraElement::generator(L, 0);
    Ring ring = Ring::plain(L);

    GradedMatrix mx = matrix1x1(ring, x, 0);
    KernelWindow kw = kernel_window(ring, mx, 3);
    // ker(x. : L(-1) -> L): degree 2 spanned by x itself
    CHECK(kw.degrees[0].second.empty());
    CHECK(kw.degrees[1].second.empty());
    REQUIRE(kw.degrees[2].second.size() == 1);
    CHECK(kw.degrees[2].second[0][0] == x);

    // injective map: multiplication by x on k[x,y]
    auto P = poly(2);
    Ring pring = Ring::plain(P);
    GradedMatrix px = matrix1x1(pring, AlgebraElement::generator(P, 0), 0);
    KernelWindow pkw = kernel_window(pring, px, 4);
    for (const auto& [e, vecs] : pkw.degrees) CHECK(vecs.empty());

    // zero matrix: kernel is the whole source
    GradedMatrix zero(P, {0}, {1});
    KernelWindow zkw = kernel_window(pring, zero, 3);
    for (const auto& [e, vecs] : zkw.degrees)
        CHECK(vecs.size() == pring.dim(e - 1));
}

TEST_CASE("solve preimage") {
    auto S = square_zero_xy();
    Ring ring = Ring::plain(S);
    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    GradedMatrix phi = matrix1x1(ring, el(S, {{q(3), {0}}, {q(5), {1}}}), 0);

    auto sol = solve_preimage(ring, phi, {f}, 2);
    REQUIRE(sol.has_value());
    CHECK(sol->v[0] == el(S, {{q(1, 5), {0}}, {q(2, 3), {1}}}));
    // check phi(v) = w exactly
    Column img = apply_matrix(ring, phi, sol->v, 2);
    CHECK(img[0] == f);

    auto zero_sol = solve_preimage(ring, phi, {AlgebraElement::zero(S, 1)}, 1);
    REQUIRE(zero_sol.has_value());
    CHECK(zero_sol->v[0].is_zero());
    CHECK(zero_sol->unique); // phi injective in degree 1

    GradedMatrix phiy = matrix1x1(ring, AlgebraElement::generator(S, 1), 0);
    auto bad = solve_preimage(ring, phiy, {AlgebraElement::generator(S, 0)}, 1);
    CHECK(!bad.has_value());
}

TEST_CASE("exactness windows") {
    auto S = square_zero_xy();
    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    Ring A = Ring::quotient(S, f);

    // trivial factorization complex over A: identity maps alternate with
    // multiplication by f, which reduces to zero; three-term window [0,2]
    ComplexWindow C(A, 0);
    GradedMatrix id0 = GradedMatrix::identity(S, {0});
    GradedMatrix fmap(S, {0}, {2});
    fmap.set(0, 0, f);
    GradedMatrix id2 = GradedMatrix::identity(S, {2});
    C.maps = {id0, fmap.reduced(A), id2};
    C.validate();
    ExactnessReport r0 = exactness_window(C, 0, 6);
    CHECK(r0.exact);
    ExactnessReport r1 = exactness_window(C, 1, 6);
    CHECK(r1.exact);

    // both maps zero on a nonzero module: defect = dim of module per degree
    ComplexWindow Z(Ring::plain(S), 0);
    Z.maps.push_back(GradedMatrix(S, {0}, {0}));
    Z.maps.push_back(GradedMatrix(S, {0}, {0}));
    ExactnessReport zr = exactness_window(Z, 0, 3);
    CHECK(!zr.exact);
    REQUIRE(zr.defects.size() == 4);
    for (const auto& [e, d] : zr.defects) CHECK(d == S->dim_of_degree(e));
}

TEST_CASE("minimal resolution of N_p over the exterior algebra in two variables") {
    auto L = exterior(2);
    Ring ring = Ring::plain(L);
    AlgebraElement x = AlgebraElement::generator(L, 0);
    ModulePresentation M{ring, matrix1x1(ring, x, 0)};

    ResolutionWindow res = minimal_resolution_window(M, 4, 8);
    REQUIRE(res.differentials.size() == 4);
    for (int j = 0; j < 4; ++j) {
        CHECK(res.differentials[j].rows() == 1);
        CHECK(res.differentials[j].cols() == 1);
        CHECK(res.differentials[j].at(0, 0) == x);
        CHECK(res.generator_degrees[j] == std::vector<int>{j});
    }
    // consecutive composites vanish
    for (int j = 0; j + 1 < 4; ++j)
        CHECK(compose(ring, res.differentials[j], res.differentials[j + 1]).is_zero());
}

TEST_CASE("minimal resolution Betti numbers of a point module over k[x1,x2,x3]") {
    auto P = poly(3);
    Ring ring = Ring::plain(P);
    // M_p for p = (1,0,0): presentation by the forms vanishing at p
    GradedMatrix pres(P, {0}, {1, 1});
    pres.set(0, 0, AlgebraElement::generator(P, 1));
    pres.set(0, 1, AlgebraElement::generator(P, 2));
    ModulePresentation M{ring, pres};

    ResolutionWindow res = minimal_resolution_window(M, 2, 8);
    REQUIRE(res.generator_degrees.size() >= 3);
    CHECK(res.generator_degrees[0] == std::vector<int>{0});
    CHECK(res.generator_degrees[1] == std::vector<int>{1, 1});
    CHECK(res.generator_degrees[2] == std::vector<int>{2});
    CHECK(compose(ring, res.differentials[0], res.differentials[1]).is_zero());
}

TEST_CASE("free module resolution stops immediately") {
    auto P = poly(2);
    Ring ring = Ring::plain(P);
    GradedMatrix zero_pres(P, {0, 1}, {});
    ModulePresentation M{ring, zero_pres};
    ResolutionWindow res = minimal_resolution_window(M, 3, 6);
    CHECK(res.differentials[1].cols() == 0);
}

TEST_CASE("module hilbert windows") {
    auto S = square_zero_xy();
    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    Ring A = Ring::quotient(S, f);

    // A as a module over itself
    ModulePresentation freeA{A, GradedMatrix(S, {0}, {})};
    CHECK(freeA.hilbert(4).dims == std::vector<std::size_t>{1, 2, 1, 0, 0});

    // N_p = A/(3x+5y)A
    ModulePresentation Np{A, matrix1x1(A, el(S, {{q(3), {0}}, {q(5), {1}}}), 0)};
    CHECK(Np.hilbert(5).dims == std::vector<std::size_t>{1, 1, 0, 0, 0, 0});
}

TEST_CASE("ext1 between point modules") {
    auto P = poly(3);
    Ring ring = Ring::plain(P);
    auto point_module = [&](const std::vector<int>& gens) {
        GradedMatrix pres(P, {0}, ShiftVector(gens.size(), 1));
        for (std::size_t i = 0; i < gens.size(); ++i)
            pres.set(0, i, AlgebraElement::generator(P, gens[i]));
        return ModulePresentation{ring, pres};
    };
    ModulePresentation Mp = point_module({1, 2}); // p = (1,0,0)
    ModulePresentation Mq = point_module({0, 1}); // q = (0,0,1)
    CHECK(graded_ext1_dim(Mp, Mp, 8) == 2);
    CHECK(graded_ext1_dim(Mp, Mq, 8) == 0);
    CHECK(graded_ext1_dim(Mq, Mq, 8) == 2);

    auto P2 = poly(2);
    Ring ring2 = Ring::plain(P2);
    GradedMatrix pres2(P2, {0}, {1});
    pres2.set(0, 0, AlgebraElement::generator(P2, 1));
    ModulePresentation M2{ring2, pres2};
    CHECK(graded_ext1_dim(M2, M2, 8) == 1);
}

TEST_CASE("chain map space finds scalar chain maps between equal presentations") {
    auto S = square_zero_xy();
    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    Ring A = Ring::quotient(S, f);
    GradedMatrix pres = matrix1x1(A, el(S, {{q(3), {0}}, {q(5), {1}}}), 0);
    auto maps = chain_map_space(A, pres, pres);
    REQUIRE(maps.size() == 1); // (c id, c id) only
    CHECK(!maps[0].u0.at(0, 0).is_zero());

    // the presentation-level wrapper agrees and validates contexts
    ModulePresentation M{A, pres};
    auto maps2 = graded_hom_space(M, M);
    REQUIRE(maps2.size() == 1);
    CHECK(maps2[0].u0 == maps[0].u0);
    ModulePresentation other{Ring::plain(S), matrix1x1(Ring::plain(S),
                                                       el(S, {{q(1), {0}}}), 0)};
    CHECK_THROWS_AS(graded_hom_space(M, other), MixedContexts);

    // found chain maps satisfy the commuting condition exactly
    for (const auto& pair : maps)
        CHECK(compose(A, pair.u0, pres).reduced(A) ==
              compose(A, pres, pair.u1).reduced(A));
}

TEST_CASE("quotient ring arithmetic") {
    auto S = square_zero_xy();
    AlgebraElement f = el(S, {{q(2), {0, 1}}, {q(1), {1, 0}}});
    Ring A = Ring::quotient(S, f);

    CHECK(A.dim(0) == 1);
    CHECK(A.dim(1) == 2);
    CHECK(A.dim(2) == 1);
    CHECK(A.dim(3) == 0);
    CHECK(A.is_zero(f));

    // yx = -2xy mod f
    AlgebraElement yx = el(S, {{q(1), {1, 0}}});
    AlgebraElement xy = el(S, {{q(1), {0, 1}}});
    CHECK(A.reduce(yx) == A.reduce(xy * q(-2)));

    // quotient module dims agree with quotient_hilbert_window
    auto qh = quotient_hilbert_window(S, f, 6);
    for (int e = 0; e <= 6; ++e) CHECK(A.dim(e) == qh.dims[e]);
}
