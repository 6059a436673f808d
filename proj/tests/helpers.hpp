#pragma once

#include <ncmf/nmf.hpp>

namespace testutil {

using namespace ncmf;

inline FieldElem q(std::int64_t n, std::int64_t d = 1) { return FieldElem::rational(n, d); }

// k<x,y>/(x^2, y^2)
inline AlgebraPtr square_zero_xy(const FieldSpec& field) {
    return make_free_algebra(field, 2, {0, 1});
}

inline AlgebraPtr poly(const FieldSpec& field, int n) {
    return make_skew_algebra(field, n, constant_alpha(field, n, -FieldElem::one(field)));
}

inline AlgebraPtr exterior(const FieldSpec& field, int n) {
    std::set<int> squares;
    for (int i = 0; i < n; ++i) squares.insert(i);
    return make_skew_algebra(field, n, constant_alpha(field, n, FieldElem::one(field)),
                             squares);
}

inline AlgebraElement el(const AlgebraPtr& A,
                         std::vector<std::pair<FieldElem, Word>> sum) {
    return normal_form(A, sum);
}

// f = alpha xy + yx in k<x,y>/(x^2,y^2)
inline AlgebraElement example_f(const AlgebraPtr& S, const FieldElem& alpha) {
    return el(S, {{alpha, {0, 1}}, {FieldElem::one(S->field()), {1, 0}}});
}

inline GradedMatrix matrix1x1(const AlgebraPtr& A, const AlgebraElement& entry,
                              int target_shift) {
    GradedMatrix m(A, {target_shift}, {target_shift + entry.degree()});
    m.set(0, 0, entry);
    return m;
}

// strict rank-1 factorization of f = alpha xy + yx:
// Psi^0 = a x + b y, Psi^1 = b^{-1} x + alpha a^{-1} y
inline NMF alpha_family_nmf(const FieldSpec& field, const FieldElem& alpha,
                         const FieldElem& a, const FieldElem& b, int N = 8) {
    AlgebraPtr S = square_zero_xy(field);
    AlgebraElement f = example_f(S, alpha);
    NormalElement nf = normalizing_automorphism(S, f, N);
    AlgebraElement x = AlgebraElement::generator(S, 0);
    AlgebraElement y = AlgebraElement::generator(S, 1);
    GradedMatrix phi0 = matrix1x1(S, x * a + y * b, 0);
    GradedMatrix phi1 = matrix1x1(S, x * b.inverse() + y * (alpha / a), 1);
    return nmf_complete(S, nf, phi0, phi1, N);
}

} // namespace testutil
