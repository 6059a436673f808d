#pragma once

#include <optional>
#include <utility>

#include "algebra.hpp"
#include "grmod.hpp"
#include "nmf.hpp"

namespace ncmf {

/// Algebraic twisting system theta_i = sigma^i on S, with theta_0 = id.
/// lambda records sigma(f) = lambda f when the data is attached to an f.
struct TwistData {
    AlgebraPtr base;
    GradedAutomorphism sigma;
    FieldElem lambda;
};

/// S^sigma: same underlying graded space, product a * b = a sigma^{deg a}(b)
/// computed in the base algebra.  Never re-presented; all verification goes
/// through this wrapped product.
struct TwistedAlgebra {
    AlgebraPtr base;
    GradedAutomorphism sigma;

    Ring ring() const { return Ring::twisted(base, sigma); }

    Ring quotient_ring(const AlgebraElement& f) const {
        return Ring::twisted_quotient(base, sigma, f);
    }
};

inline AlgebraElement twisted_multiply(const TwistedAlgebra& T, const AlgebraElement& a,
                                       const AlgebraElement& b) {
    if (!same_algebra(T.base, a.algebra()) || !same_algebra(T.base, b.algebra()))
        throw MixedAlgebras();
    return a * T.sigma.power(a.degree()).apply(b);
}

/// Twisting S^sigma by {sigma^{-i}} recovers the base product.
inline TwistedAlgebra untwist(const TwistedAlgebra& T) {
    return TwistedAlgebra{T.base, T.sigma.inverse()};
}

/// eps_mu scales degree-1 generators by mu.  Given sigma(f) = lambda f, the
/// normalized sigma' = eps_{lambda^{-1/d}} sigma fixes f; the d-th root is
/// taken as 1/nth_root(lambda, d).
inline std::pair<GradedAutomorphism, FieldElem> eps_normalize(const GradedAutomorphism& sigma,
                                                              const AlgebraElement& f,
                                                              int d) {
    if (f.is_zero() || f.degree() != d)
        throw InputError("eps_normalize needs nonzero f of degree d");
    AlgebraElement image = sigma.apply(f);
    // lambda with image = lambda f
    const auto& terms = f.terms();
    FieldElem lambda = image.coefficient(terms.begin()->first) / terms.begin()->second;
    if (image != f * lambda) throw NotEigenvector();
    if (lambda.is_zero()) throw NotEigenvector();
    if (lambda.is_one()) return {sigma, lambda};
    auto root = nth_root(lambda, d);
    if (!root) throw NoRootInField();
    FieldElem mu = root->inverse();
    FieldMatrix scaled = sigma.matrix();
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j) scaled.at(i, j) *= mu;
    return {GradedAutomorphism(sigma.algebra(), scaled), lambda};
}

/// The matrix form of the twist functor: entry (s,t) of a map with target
/// shift m_s is replaced by sigma^{-m_s}(entry).  The power depends on the
/// row, not on the whole matrix.
inline GradedMatrix row_twist(const GradedAutomorphism& sigma, const GradedMatrix& m) {
    GradedMatrix out(m.algebra(), m.target(), m.source());
    for (std::size_t s = 0; s < m.rows(); ++s) {
        GradedAutomorphism power = sigma.power(-m.target()[s]);
        for (std::size_t t = 0; t < m.cols(); ++t)
            out.set(s, t, power.apply(m.at(s, t)));
    }
    return out;
}

inline GradedMatrix row_untwist(const GradedAutomorphism& sigma, const GradedMatrix& m) {
    return row_twist(sigma.inverse(), m);
}

/// A factorization carried over the twist: stores the transformed pair and
/// the underlying untwisted factorization it came from.  Components on demand
/// are the row-twists of the untwisted components; products of consecutive
/// components, computed with the twisted multiplication, equal f (viewed in
/// S^sigma).
struct TwistedNMF {
    TwistedAlgebra context;
    NMF untwisted; // source factorization over the base algebra
    GradedMatrix phi0, phi1;

    GradedMatrix component(int i) const {
        return row_twist(context.sigma, untwisted.component(i));
    }

    const AlgebraElement& f() const { return untwisted.f().f; }
};

/// Twist of a factorization by sigma with sigma(f) = f; the components
/// transform row-wise and the result is verified under the twisted product
/// for |i| <= 4.
inline TwistedNMF twist_nmf(const NMF& phi, const GradedAutomorphism& sigma, int N) {
    if (!same_algebra(phi.algebra(), sigma.algebra())) throw MixedAlgebras();
    if (sigma.apply(phi.f().f) != phi.f().f) throw NotFixed();
    TwistedAlgebra T{phi.algebra(), sigma};
    TwistedNMF out{T, phi, row_twist(sigma, phi.phi0()), row_twist(sigma, phi.phi1())};
    Ring tw = T.ring();
    for (int i = -4; i <= 4; ++i) {
        GradedMatrix prod = compose(tw, out.component(i), out.component(i + 1));
        GradedMatrix expect =
            GradedMatrix::scaled_identity(phi.f().f, out.component(i).target());
        if (prod != expect) throw VerificationFailed();
    }
    if (!injective_on_window(tw, out.phi0, N)) throw VerificationFailed();
    return out;
}

/// Inverse functor: row-untwist the stored pair and rebuild over the base
/// algebra.  Round trip is the identity on stored matrices.
inline NMF untwist_nmf(const TwistedNMF& tphi, int N) {
    const GradedAutomorphism& sigma = tphi.context.sigma;
    GradedMatrix phi0 = row_untwist(sigma, tphi.phi0);
    GradedMatrix phi1 = row_untwist(sigma, tphi.phi1);
    return nmf_complete(tphi.untwisted.algebra(), tphi.untwisted.f(), phi0, phi1, N);
}

/// Hilbert window of Coker(psi0 mod f) over the twisted quotient
/// S^sigma/(f^sigma); used to compare normalized and unnormalized twists.
inline HilbertWindow twisted_coker_hilbert(const TwistedAlgebra& T,
                                           const AlgebraElement& f,
                                           const GradedMatrix& psi0, int N) {
    Ring A = T.quotient_ring(f);
    ModulePresentation M{A, psi0.reduced(A)};
    return M.hilbert(N);
}

} // namespace ncmf
