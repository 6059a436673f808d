// Walkthrough: build the exterior context on three generators, lift the
// point (1,1,1) to a rank-1 factorization of x3^2, inspect its components,
// and find its period.

#include <cstdio>

#include <ncmf/copoint.hpp>
#include <ncmf/parse.hpp>

using namespace ncmf;

int main() {
    FieldSpec Q = FieldSpec::rationals();
    SkewContext C = build_context(Q, constant_alpha(Q, 3, FieldElem::one(Q)), 8);

    std::printf("S = T/(x1^2, x2^2) with f = x3^2; A = S/(f)\n");
    HilbertWindow hs = hilbert_window(C.S, 6);
    std::printf("dim S_e: ");
    for (std::size_t d : hs.dims) std::printf("%zu ", d);
    std::printf("\n");

    Point p = Point::of({FieldElem::one(Q), FieldElem::one(Q), FieldElem::one(Q)});
    PointFactorization pf = nmf_from_point(C, p, 6, 8);
    std::printf("Phi^0 = %s\n", print_poly(pf.nmf.phi0().at(0, 0)).c_str());
    std::printf("Phi^1 = %s\n", print_poly(pf.nmf.phi1().at(0, 0)).c_str());

    PeriodResult pr = nmf_period(pf.nmf, 6, 8, 1, 16);
    if (pr.period)
        std::printf("period %d with shift %d\n", *pr.period, pr.shift);

    ModulePresentation coker = nmf_coker(pf.nmf);
    ResolutionWindow res = minimal_resolution_window(coker, 4, 8);
    std::printf("resolution generator degrees:");
    for (const auto& step : res.generator_degrees) {
        std::printf(" [");
        for (std::size_t i = 0; i < step.size(); ++i)
            std::printf(i ? " %d" : "%d", step[i]);
        std::printf("]");
    }
    std::printf("\n");
    return 0;
}
