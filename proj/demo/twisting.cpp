// Walkthrough: normalize an automorphism with sigma(f) = lambda f and carry a
// factorization of f = xy + yx over F_17 through the twist.

#include <cstdio>

#include <ncmf/parse.hpp>
#include <ncmf/twist.hpp>

using namespace ncmf;

int main() {
    FieldSpec F17 = FieldSpec::prime_field(17);
    AlgebraPtr S = make_free_algebra(F17, 2, {0, 1}); // k<x,y>/(x^2, y^2)
    AlgebraElement f = parse_poly("x1*x2 + x2*x1", S);
    NormalElement nf = normalizing_automorphism(S, f, 8);

    GradedMatrix phi0(S, {0}, {1});
    phi0.set(0, 0, parse_poly("3*x1 + 5*x2", S));
    GradedMatrix phi1(S, {1}, {2});
    phi1.set(0, 0, parse_poly("7*x1 + 6*x2", S));
    NMF phi = nmf_complete(S, nf, phi0, phi1, 8);

    auto sigma_prime =
        GradedAutomorphism::diagonal(S, {FieldElem::from_integer(F17, 4),
                                         FieldElem::one(F17)});
    auto [sigma, lambda] = eps_normalize(sigma_prime, f, 2);
    std::printf("sigma' scales f by %s; normalized sigma = diag(%s, %s)\n",
                lambda.str().c_str(), sigma.matrix().at(0, 0).str().c_str(),
                sigma.matrix().at(1, 1).str().c_str());

    TwistedNMF tw = twist_nmf(phi, sigma, 8);
    for (int i = 0; i <= 3; ++i)
        std::printf("Psi^%d = %s\n", i, print_poly(tw.component(i).at(0, 0)).c_str());

    NMF back = untwist_nmf(tw, 8);
    std::printf("round trip %s\n",
                back.phi0() == phi.phi0() && back.phi1() == phi.phi1() ? "ok" : "FAILED");
    return 0;
}
