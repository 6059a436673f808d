#include <catch2/catch_amalgamated.hpp>

#include <ncmf/parse.hpp>

#include "helpers.hpp"

using namespace ncmf;
using namespace testutil;

namespace {
FieldSpec Q = FieldSpec::rationals();
}

TEST_CASE("parse basic polynomials") {
    AlgebraPtr S = square_zero_xy(Q);
    // f = alpha xy + yx with alpha = 2
    AlgebraElement f = parse_poly("2*x1*x2 + x2*x1", S);
    CHECK(f == example_f(S, q(2)));

    CHECK(parse_poly("x1^2", S).is_zero());
    CHECK(parse_poly("0", S).is_zero());
    CHECK(parse_poly("3/4", S) == AlgebraElement::scalar(S, q(3, 4)));
    CHECK(parse_poly("-x1*x2", S) == el(S, {{q(-1), {0, 1}}}));
    CHECK(parse_poly("x1 - x2", S) == el(S, {{q(1), {0}}, {q(-1), {1}}}));

    // exponents expand into repeated letters
    AlgebraPtr P = poly(Q, 2);
    CHECK(parse_poly("x1^2*x2", P) == el(P, {{q(1), {0, 0, 1}}}));
}

TEST_CASE("parser errors") {
    AlgebraPtr S = square_zero_xy(Q);
    CHECK_THROWS_AS(parse_poly("x1 + x2*x3", S), UnknownGenerator);
    CHECK_THROWS_AS(parse_poly("x1 + x1*x2", S), InhomogeneousInput);
    CHECK_THROWS_AS(parse_poly("x1 +", S), SyntaxError);
    CHECK_THROWS_AS(parse_poly("* x1", S), SyntaxError);
    CHECK_THROWS_AS(parse_poly("x1^", S), SyntaxError);
    CHECK_THROWS_AS(parse_poly("2 x1", S), SyntaxError); // juxtaposition needs '*'
    CHECK_THROWS_AS(parse_poly("", S), SyntaxError);

    // error positions are reported
    try {
        parse_poly("x1 + @", S);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& err) {
        CHECK(err.position == 5);
    }

    FieldSpec F13 = FieldSpec::prime_field(13);
    AlgebraPtr SF = square_zero_xy(F13);
    CHECK_THROWS_AS(parse_poly("1/2*x1", SF), SyntaxError); // no fractions mod p
}

TEST_CASE("print/parse round trip on generated expressions") {
    FieldSpec F13 = FieldSpec::prime_field(13);
    std::vector<AlgebraPtr> algebras = {square_zero_xy(Q), poly(Q, 3),
                                        exterior(F13, 3), square_zero_xy(F13)};
    Rng rng(2024);
    int count = 0;
    for (const auto& A : algebras) {
        const FieldSpec& field = A->field();
        for (int trial = 0; trial < 30; ++trial) {
            int d = static_cast<int>(rng.next_in(0, 4));
            std::size_t n = A->dim_of_degree(d);
            if (n == 0) continue;
            std::vector<FieldElem> v;
            for (std::size_t i = 0; i < n; ++i) v.push_back(rng.field_elem(field));
            AlgebraElement e = AlgebraElement::from_coords(A, d, v);
            AlgebraElement back = parse_poly(print_poly(e), A);
            CHECK(back == e);
            ++count;
        }
    }
    CHECK(count >= 100);
}
