#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "grmod.hpp"

namespace ncmf {

/**
 * A noncommutative graded right matrix factorization of f over S, stored as
 * the pair (Phi^0 : F^1 -> F^0, Phi^1 : F^2 -> F^1) together with f and its
 * normalizing automorphism nu.  Every other component derives from the
 * two-step recurrence Phi^{i+2} = nu(Phi^i) shifted by -deg f, so
 *
 *   Phi^{2j}   = nu^j(Phi^0),   Phi^{2j+1} = nu^j(Phi^1),
 *
 * with shifts offset by j*deg f.  F^2 always has the shifts of F^0 plus d.
 */
class NMF {
public:
    NMF(AlgebraPtr algebra, NormalElement f, GradedMatrix phi0, GradedMatrix phi1)
        : algebra_(std::move(algebra)), f_(std::move(f)), phi0_(std::move(phi0)),
          phi1_(std::move(phi1)) {
        if (!same_algebra(algebra_, f_.f.algebra())) throw MixedAlgebras();
        if (phi0_.source() != phi1_.target()) throw ShiftMismatch();
        if (phi1_.source() != shifted(phi0_.target(), f_.degree)) throw ShiftMismatch();
    }

    const AlgebraPtr& algebra() const { return algebra_; }
    const NormalElement& f() const { return f_; }
    int degree_of_f() const { return f_.degree; }
    const GradedAutomorphism& nu() const { return f_.nu; }
    std::size_t rank() const { return phi0_.rows(); }
    const ShiftVector& shifts0() const { return phi0_.target(); }
    const ShiftVector& shifts1() const { return phi1_.target(); }
    const GradedMatrix& phi0() const { return phi0_; }
    const GradedMatrix& phi1() const { return phi1_; }

    Ring base_ring() const { return Ring::plain(algebra_); }
    Ring quotient_ring() const { return Ring::quotient(algebra_, f_.f); }

    /// Phi^i by the two-step recurrence; negative i via nu^{-1}.
    GradedMatrix component(int i) const {
        int parity = ((i % 2) + 2) % 2;
        int j = (i - parity) / 2;
        const GradedMatrix& base = parity == 0 ? phi0_ : phi1_;
        if (j == 0) return base;
        return base.map_entries(f_.nu.power(j)).with_shift(j * f_.degree);
    }

    bool operator==(const NMF& o) const {
        return same_algebra(algebra_, o.algebra_) && f_.f == o.f_.f &&
               phi0_ == o.phi0_ && phi1_ == o.phi1_;
    }

private:
    AlgebraPtr algebra_;
    NormalElement f_;
    GradedMatrix phi0_, phi1_;
};

struct VerifyReport {
    bool ok = true;
    int window = 0;
    std::vector<std::string> failures;

    void fail(const std::string& what) {
        ok = false;
        failures.push_back(what);
    }
};

/// Injectivity on the first N+1 degrees where the source module is nonzero
/// (shift vectors may be negative, e.g. for duals).
inline bool injective_on_window(const Ring& ring, const GradedMatrix& phi, int N) {
    if (phi.cols() == 0) return true;
    int lo = *std::min_element(phi.source().begin(), phi.source().end());
    for (int e = lo; e <= lo + N; ++e) {
        FieldMatrix m = degreewise_map(ring, phi, e);
        if (m.rank() != m.cols()) return false;
    }
    return true;
}

/// Checks the two product identities, shift compatibility and windowed
/// injectivity of Phi^0.  Returns a report instead of throwing.
inline VerifyReport nmf_verify(const NMF& phi, int N) {
    VerifyReport report;
    report.window = N;
    Ring S = phi.base_ring();
    GradedMatrix fE0 = GradedMatrix::scaled_identity(phi.f().f, phi.shifts0());
    GradedMatrix fE1 = GradedMatrix::scaled_identity(phi.f().f, phi.shifts1());
    if (compose(S, phi.phi0(), phi.phi1()) != fE0)
        report.fail("Phi^0 Phi^1 != f E");
    if (compose(S, phi.phi1(), phi.component(2)) != fE1)
        report.fail("Phi^1 Phi^2 != f E");
    for (int j = 0; j < phi.algebra()->generator_count(); ++j) {
        AlgebraElement a = AlgebraElement::generator(phi.algebra(), j);
        if (a * phi.f().f != phi.f().f * phi.nu().apply(a)) {
            report.fail("nu does not normalize f");
            break;
        }
    }
    if (!injective_on_window(S, phi.phi0(), N))
        report.fail("Phi^0 not injective in the degree window");
    return report;
}

/// Builds the unique factorization extending (Phi^0, Phi^1).  Requires
/// Phi^0 Phi^1 = f E and windowed injectivity of Phi^0; the second identity
/// Phi^1 nu(Phi^0) = f E is then checked as a consequence.
inline NMF nmf_complete(const AlgebraPtr& S, const NormalElement& f,
                        const GradedMatrix& phi0, const GradedMatrix& phi1, int N) {
    if (phi0.source() != phi1.target()) throw ShiftMismatch();
    if (phi1.source() != shifted(phi0.target(), f.degree)) throw ShiftMismatch();
    Ring ring = Ring::plain(S);
    if (compose(ring, phi0, phi1) != GradedMatrix::scaled_identity(f.f, phi0.target()))
        throw ProductNotF();
    if (!injective_on_window(ring, phi0, N)) throw NotInjectiveInWindow();
    NMF out(S, f, phi0, phi1);
    if (compose(ring, phi1, out.component(2)) !=
        GradedMatrix::scaled_identity(f.f, phi1.target()))
        throw VerificationFailed();
    return out;
}

/// Strict factorization from a family with Phi^i Phi^{i+1} = lambda_i f E:
/// Psi^0 = Phi^0, Psi^1 = (1/lambda_0) Phi^1, and the remaining scalars
/// follow the recurrence c_0 = 1, c_{i+1} = 1/(c_i lambda_i).  All supplied
/// components are checked against the completed factorization.
inline NMF nmf_rescale(const AlgebraPtr& S, const NormalElement& f,
                       const std::vector<GradedMatrix>& phis,
                       const std::vector<FieldElem>& lambdas, int N) {
    if (phis.size() < 2 || lambdas.size() + 1 < phis.size())
        throw InputError("need Phi^0, Phi^1 and lambda_0 at least");
    Ring ring = Ring::plain(S);
    for (std::size_t i = 0; i + 1 < phis.size(); ++i) {
        if (lambdas[i].is_zero()) throw NotScalarMultiple();
        GradedMatrix expect =
            GradedMatrix::scaled_identity(f.f * lambdas[i], phis[i].target());
        if (compose(ring, phis[i], phis[i + 1]) != expect) throw NotScalarMultiple();
    }
    GradedMatrix psi1(phis[1]);
    {
        FieldElem c1 = lambdas[0].inverse();
        GradedMatrix scaled(S, phis[1].target(), phis[1].source());
        for (std::size_t s = 0; s < phis[1].rows(); ++s)
            for (std::size_t t = 0; t < phis[1].cols(); ++t)
                scaled.set(s, t, phis[1].at(s, t) * c1);
        psi1 = scaled;
    }
    NMF out = nmf_complete(S, f, phis[0], psi1, N);
    // remaining supplied components must match c_i Phi^i
    FieldElem c = FieldElem::one(S->field());
    for (std::size_t i = 1; i < phis.size(); ++i) {
        c = (c * lambdas[i - 1]).inverse();
        GradedMatrix expect(S, phis[i].target(), phis[i].source());
        for (std::size_t s = 0; s < phis[i].rows(); ++s)
            for (std::size_t t = 0; t < phis[i].cols(); ++t)
                expect.set(s, t, phis[i].at(s, t) * c);
        if (out.component(static_cast<int>(i)) != expect) throw VerificationFailed();
    }
    return out;
}

enum class TrivialKind { Right, Left }; // phi_F and _F phi

/// phi_F = (id, f.) or _F phi = (f., id) on the free module with the given
/// shifts.
inline NMF nmf_trivial(TrivialKind kind, const AlgebraPtr& S, const NormalElement& f,
                       const ShiftVector& F) {
    if (kind == TrivialKind::Right) {
        GradedMatrix phi0 = GradedMatrix::identity(S, F);
        GradedMatrix phi1 = GradedMatrix::scaled_identity(f.f, F);
        return NMF(S, f, phi0, phi1);
    }
    GradedMatrix phi0 = GradedMatrix::scaled_identity(f.f, F);
    GradedMatrix phi1 = GradedMatrix::identity(S, shifted(F, f.degree));
    return NMF(S, f, phi0, phi1);
}

inline NMF nmf_shift(const NMF& phi, int j) {
    return NMF(phi.algebra(), phi.f(), phi.component(j), phi.component(j + 1));
}

inline NMF nmf_direct_sum(const NMF& a, const NMF& b) {
    if (!same_algebra(a.algebra(), b.algebra()) || a.f().f != b.f().f)
        throw MixedContexts();
    auto block = [&](const GradedMatrix& x, const GradedMatrix& y) {
        ShiftVector target = x.target(), source = x.source();
        target.insert(target.end(), y.target().begin(), y.target().end());
        source.insert(source.end(), y.source().begin(), y.source().end());
        GradedMatrix out(a.algebra(), target, source);
        for (std::size_t s = 0; s < x.rows(); ++s)
            for (std::size_t t = 0; t < x.cols(); ++t) out.set(s, t, x.at(s, t));
        for (std::size_t s = 0; s < y.rows(); ++s)
            for (std::size_t t = 0; t < y.cols(); ++t)
                out.set(x.rows() + s, x.cols() + t, y.at(s, t));
        return out;
    };
    return NMF(a.algebra(), a.f(), block(a.phi0(), b.phi0()), block(a.phi1(), b.phi1()));
}

/// Entrywise word reversal composed with transpose: D(M)_{st} = rev(M_{ts}).
/// Multiplicativity reverses, D(M) D(N) = D(N M), which is what turns a left
/// factorization over S into a right factorization over S^op.
inline GradedMatrix dual_matrix(const OppositeAlgebra& op, const GradedMatrix& m) {
    ShiftVector target, source;
    for (int t : m.source()) target.push_back(-t);
    for (int s : m.target()) source.push_back(-s);
    GradedMatrix out(op.algebra, target, source);
    for (std::size_t s = 0; s < m.cols(); ++s)
        for (std::size_t t = 0; t < m.rows(); ++t)
            out.set(s, t, op.reverse(m.at(t, s)));
    return out;
}

struct DualNMF {
    NMF nmf;              // right factorization of rev(f) over S^op
    OppositeAlgebra op;   // carries the reversal map back to S
};

/// Hom_S(phi, S) as a factorization over the opposite algebra: component i is
/// D(Phi^{-i-1}) and f dualizes to rev(f) with normalizing automorphism
/// nu^{-1} (as a matrix on generators).
inline DualNMF nmf_dual(const NMF& phi, int N) {
    OppositeAlgebra op = opposite_algebra(phi.algebra());
    AlgebraElement f_op = op.reverse(phi.f().f);
    GradedAutomorphism nu_op(op.algebra, phi.nu().inverse().matrix());
    for (int j = 0; j < op.algebra->generator_count(); ++j) {
        AlgebraElement a = AlgebraElement::generator(op.algebra, j);
        if (a * f_op != f_op * nu_op.apply(a)) throw VerificationFailed();
    }
    NormalElement nf{f_op, phi.degree_of_f(), nu_op, N};
    GradedMatrix d0 = dual_matrix(op, phi.component(-1));
    GradedMatrix d1 = dual_matrix(op, phi.component(-2));
    return DualNMF{nmf_complete(op.algebra, nf, d0, d1, N), op};
}

/// Morphism mu : phi -> psi with mu^i Phi^i = Psi^i mu^{i+1}; determined by
/// (mu^0, mu^1), later squares derived by mu^{i+2} = nu(mu^i).
struct NMFMorphism {
    GradedMatrix mu0, mu1;
};

inline NMFMorphism morphism_complete(const NMF& phi, const NMF& psi,
                                     const GradedMatrix& mu0, const GradedMatrix& mu1) {
    if (!same_algebra(phi.algebra(), psi.algebra()) || phi.f().f != psi.f().f)
        throw MixedContexts();
    Ring S = phi.base_ring();
    if (compose(S, mu0, phi.phi0()) != compose(S, psi.phi0(), mu1))
        throw SquareDoesNotCommute();
    GradedMatrix mu2 = mu0.map_entries(phi.nu()).with_shift(phi.degree_of_f());
    if (compose(S, mu1, phi.phi1()) != compose(S, psi.phi1(), mu2))
        throw SquareDoesNotCommute();
    return NMFMorphism{mu0, mu1};
}

/// Twisted-pair form (psi : F -> G, tau) where tau represents the
/// nu-semilinear map x -> tau nu(x); the pair identity is psi tau = f E.
struct TMFPair {
    GradedMatrix psi;
    GradedMatrix tau;
    GradedAutomorphism nu;
};

inline TMFPair to_tmf(const NMF& phi) {
    return TMFPair{phi.phi0(), phi.phi1(), phi.nu()};
}

inline NMF from_tmf(const AlgebraPtr& S, const NormalElement& f, const TMFPair& t, int N) {
    // psi := phi^0 and tau nu^{-1} := phi^1 act identically on matrices
    return nmf_complete(S, f, t.psi, t.tau, N);
}

/// Coker phi := Coker(Phi^0 mod f) as a module over A = S/(f); syzygies come
/// from the other components.
inline ModulePresentation nmf_coker(const NMF& phi, int i = 0) {
    Ring A = phi.quotient_ring();
    return ModulePresentation{A, phi.component(i).reduced(A)};
}

inline HilbertWindow coker_hilbert(const NMF& phi, int N) {
    return nmf_coker(phi).hilbert(N);
}

/// C(phi): reductions of the components mod f over A, for i in [lo, hi].
inline ComplexWindow complex_from_nmf(const NMF& phi, int lo, int hi) {
    Ring A = phi.quotient_ring();
    ComplexWindow C(A, lo);
    for (int i = lo; i <= hi; ++i) C.maps.push_back(phi.component(i).reduced(A));
    C.validate();
    return C;
}

/// Factorization from a module: given a square presentation G -> F of M over
/// S with f F contained in the image, psi is solved from phi psi = f E column
/// by column.
inline NMF nmf_from_module(const AlgebraPtr& S, const NormalElement& f,
                           const GradedMatrix& presentation, int N) {
    if (presentation.rows() != presentation.cols()) throw NotSquare();
    Ring ring = Ring::plain(S);
    if (!injective_on_window(ring, presentation, N)) throw NotInjectiveInWindow();
    const ShiftVector& F = presentation.target();
    const int d = f.degree;
    GradedMatrix psi(S, presentation.source(), shifted(F, d));
    for (std::size_t t = 0; t < F.size(); ++t) {
        Column w = zero_column(ring, F, F[t] + d);
        w[t] = f.f;
        auto sol = solve_preimage(ring, presentation, w, F[t] + d);
        if (!sol) throw FNotInImage();
        for (std::size_t s = 0; s < psi.rows(); ++s) psi.set(s, t, sol->v[s]);
    }
    return nmf_complete(S, f, presentation, psi, N);
}

/// A graded matrix over a connected algebra is invertible iff its scalar part
/// (the degree-0 entries, viewed between generator slots) is invertible.
inline bool invertible_graded(const GradedMatrix& m) {
    if (m.rows() != m.cols()) return false;
    const FieldSpec& field = m.algebra()->field();
    FieldMatrix scalar(field, m.rows(), m.cols());
    for (std::size_t s = 0; s < m.rows(); ++s)
        for (std::size_t t = 0; t < m.cols(); ++t)
            if (m.entry_degree(s, t) == 0 && !m.at(s, t).is_zero())
                scalar.at(s, t) = m.at(s, t).scalar_value();
    return scalar.inverse().has_value();
}

/// Record of one split-off trivial summand.
struct TrivialSummand {
    TrivialKind kind;
    int shift; // the summand is phi_{S(-shift)} or _{S(-shift)}phi
};

struct ReduceResult {
    NMF reduced;
    std::vector<TrivialSummand> summands;
};

namespace detail {

/// Mutable change-of-basis state for the stored pair.  Every operation keeps
/// the pair isomorphic to the original via Psi^i = P^i Phi^i (P^{i+1})^{-1}
/// with P^2 = nu(P^0).
struct ReduceState {
    AlgebraPtr S;
    const GradedAutomorphism* nu;
    ShiftVector shifts0, shifts1;
    std::vector<std::vector<AlgebraElement>> m0, m1; // entries of Phi^0, Phi^1

    AlgebraElement& at0(std::size_t s, std::size_t t) { return m0[s][t]; }
    AlgebraElement& at1(std::size_t s, std::size_t t) { return m1[s][t]; }

    // row s' of Phi^0 += c * row s  (P^0 elementary), mirrored on Phi^1:
    // column s of Phi^1 += column s' * (-nu(c))
    void row_op_phi0(std::size_t s_dst, std::size_t s_src, const AlgebraElement& c) {
        for (std::size_t t = 0; t < m0[s_dst].size(); ++t)
            m0[s_dst][t] = m0[s_dst][t] + c * m0[s_src][t];
        AlgebraElement nc = -nu->apply(c);
        for (std::size_t t = 0; t < m1.size(); ++t)
            m1[t][s_src] = m1[t][s_src] + m1[t][s_dst] * nc;
    }

    // column t_dst of Phi^0 += column t_src * c  ((P^1)^{-1} elementary),
    // mirrored: row t_src of Phi^1 += (-c) * row t_dst
    void col_op_phi0(std::size_t t_dst, std::size_t t_src, const AlgebraElement& c) {
        for (std::size_t s = 0; s < m0.size(); ++s)
            m0[s][t_dst] = m0[s][t_dst] + m0[s][t_src] * c;
        AlgebraElement nc = -c;
        for (std::size_t u = 0; u < m1[t_src].size(); ++u)
            m1[t_src][u] = m1[t_src][u] + nc * m1[t_dst][u];
    }

    // row t' of Phi^1 += c * row t  (P^1 elementary), mirrored:
    // column t of Phi^0 += column t' * (-c)
    void row_op_phi1(std::size_t t_dst, std::size_t t_src, const AlgebraElement& c) {
        for (std::size_t u = 0; u < m1[t_dst].size(); ++u)
            m1[t_dst][u] = m1[t_dst][u] + c * m1[t_src][u];
        AlgebraElement nc = -c;
        for (std::size_t s = 0; s < m0.size(); ++s)
            m0[s][t_src] = m0[s][t_src] + m0[s][t_dst] * nc;
    }

    // column s_dst of Phi^1 += column s_src * c  ((P^2)^{-1} elementary),
    // mirrored: row s_src of Phi^0 += (-nu^{-1}(c)) * row s_dst
    void col_op_phi1(std::size_t s_dst, std::size_t s_src, const AlgebraElement& c) {
        for (std::size_t t = 0; t < m1.size(); ++t)
            m1[t][s_dst] = m1[t][s_dst] + m1[t][s_src] * c;
        AlgebraElement nc = -nu->inverse().apply(c);
        for (std::size_t t = 0; t < m0[s_src].size(); ++t)
            m0[s_src][t] = m0[s_src][t] + nc * m0[s_dst][t];
    }

    // scale row s of Phi^0 by unit scalar u; mirrored: column s of Phi^1 by 1/u
    void scale_row_phi0(std::size_t s, const FieldElem& u) {
        for (auto& e : m0[s]) e = e * u;
        FieldElem inv = u.inverse();
        for (std::size_t t = 0; t < m1.size(); ++t) m1[t][s] = m1[t][s] * inv;
    }

    // scale row t of Phi^1 by unit scalar u; mirrored: column t of Phi^0 by 1/u
    void scale_row_phi1(std::size_t t, const FieldElem& u) {
        for (auto& e : m1[t]) e = e * u;
        FieldElem inv = u.inverse();
        for (std::size_t s = 0; s < m0.size(); ++s) m0[s][t] = m0[s][t] * inv;
    }

    void erase(std::size_t s, std::size_t t) {
        // drop F^0 slot s and F^1 slot t
        shifts0.erase(shifts0.begin() + s);
        shifts1.erase(shifts1.begin() + t);
        m0.erase(m0.begin() + s);
        for (auto& row : m0) row.erase(row.begin() + t);
        m1.erase(m1.begin() + t);
        for (auto& row : m1) row.erase(row.begin() + s);
    }

    NMF to_nmf(const NormalElement& f) const {
        GradedMatrix phi0(S, shifts0, shifts1);
        GradedMatrix phi1(S, shifts1, shifted(shifts0, f.degree));
        for (std::size_t s = 0; s < m0.size(); ++s)
            for (std::size_t t = 0; t < m0[s].size(); ++t) phi0.set(s, t, m0[s][t]);
        for (std::size_t t = 0; t < m1.size(); ++t)
            for (std::size_t s = 0; s < m1[t].size(); ++s) phi1.set(t, s, m1[t][s]);
        return NMF(S, f, phi0, phi1);
    }
};

inline bool scalar_entry(const AlgebraElement& e) {
    return !e.is_zero() && e.degree() == 0;
}

} // namespace detail

/// Splits off trivial summands while Phi^0 or Phi^1 has an invertible scalar
/// entry, by invertible changes of basis P^i with P^{i+2} = nu(P^i).  A pivot in Phi^0 yields a
/// phi_F block (id, f), a pivot in Phi^1 an _F phi block (f, id).
inline ReduceResult nmf_reduce(const NMF& phi) {
    detail::ReduceState st;
    st.S = phi.algebra();
    st.nu = &phi.nu();
    st.shifts0 = phi.shifts0();
    st.shifts1 = phi.shifts1();
    st.m0.resize(phi.rank());
    st.m1.resize(phi.rank());
    for (std::size_t s = 0; s < phi.rank(); ++s)
        for (std::size_t t = 0; t < phi.rank(); ++t) {
            st.m0[s].push_back(phi.phi0().at(s, t));
            st.m1[s].push_back(phi.phi1().at(s, t));
        }

    std::vector<TrivialSummand> summands;
    for (;;) {
        bool found = false;
        // pivot in Phi^0 -> phi_F summand
        for (std::size_t s = 0; s < st.m0.size() && !found; ++s)
            for (std::size_t t = 0; t < st.shifts1.size() && !found; ++t) {
                if (!detail::scalar_entry(st.m0[s][t])) continue;
                found = true;
                FieldElem pivot = st.m0[s][t].scalar_value();
                for (std::size_t t2 = 0; t2 < st.shifts1.size(); ++t2) {
                    if (t2 == t || st.m0[s][t2].is_zero()) continue;
                    st.col_op_phi0(t2, t, st.m0[s][t2] * pivot.inverse() * FieldElem::from_integer(st.S->field(), -1));
                }
                for (std::size_t s2 = 0; s2 < st.m0.size(); ++s2) {
                    if (s2 == s || st.m0[s2][t].is_zero()) continue;
                    st.row_op_phi0(s2, s, st.m0[s2][t] * pivot.inverse() * FieldElem::from_integer(st.S->field(), -1));
                }
                st.scale_row_phi0(s, pivot.inverse());
                summands.push_back({TrivialKind::Right, st.shifts0[s]});
                st.erase(s, t);
            }
        if (found) continue;
        // pivot in Phi^1 -> _F phi summand
        for (std::size_t t = 0; t < st.m1.size() && !found; ++t)
            for (std::size_t s = 0; s < st.shifts0.size() && !found; ++s) {
                if (!detail::scalar_entry(st.m1[t][s])) continue;
                found = true;
                FieldElem pivot = st.m1[t][s].scalar_value();
                for (std::size_t s2 = 0; s2 < st.shifts0.size(); ++s2) {
                    if (s2 == s || st.m1[t][s2].is_zero()) continue;
                    st.col_op_phi1(s2, s, st.m1[t][s2] * pivot.inverse() * FieldElem::from_integer(st.S->field(), -1));
                }
                for (std::size_t t2 = 0; t2 < st.m1.size(); ++t2) {
                    if (t2 == t || st.m1[t2][s].is_zero()) continue;
                    st.row_op_phi1(t2, t, st.m1[t2][s] * pivot.inverse() * FieldElem::from_integer(st.S->field(), -1));
                }
                st.scale_row_phi1(t, pivot.inverse());
                summands.push_back({TrivialKind::Left, st.shifts0[s]});
                st.erase(s, t);
            }
        if (!found) break;
    }
    return ReduceResult{st.to_nmf(phi.f()), std::move(summands)};
}

inline bool is_reduced(const NMF& phi) {
    for (std::size_t s = 0; s < phi.rank(); ++s)
        for (std::size_t t = 0; t < phi.rank(); ++t)
            if (detail::scalar_entry(phi.phi0().at(s, t)) ||
                detail::scalar_entry(phi.phi1().at(s, t)))
                return false;
    return true;
}

/// Isomorphism search between two factorizations: the degree-0 morphism space
/// is computed exactly, then random combinations are tested for invertibility
/// (sound: any returned pair is a certified isomorphism).
inline std::optional<NMFMorphism> nmf_isomorphism(const NMF& phi, const NMF& psi,
                                                  std::uint64_t seed, int trials) {
    if (!same_algebra(phi.algebra(), psi.algebra()) || phi.f().f != psi.f().f)
        return std::nullopt;
    Ring S = phi.base_ring();
    auto space = chain_map_space(S, phi.phi0(), psi.phi0());
    if (space.empty()) return std::nullopt;
    const FieldSpec& field = phi.algebra()->field();
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(mix_seed(seed, 0xd0a1, trial));
        GradedMatrix u0(phi.algebra(), psi.shifts0(), phi.shifts0());
        GradedMatrix u1(phi.algebra(), psi.shifts1(), phi.shifts1());
        for (const auto& pair : space) {
            FieldElem c = rng.field_elem(field);
            for (std::size_t s = 0; s < u0.rows(); ++s)
                for (std::size_t t = 0; t < u0.cols(); ++t)
                    u0.set(s, t, u0.at(s, t) + pair.u0.at(s, t) * c);
            for (std::size_t s = 0; s < u1.rows(); ++s)
                for (std::size_t t = 0; t < u1.cols(); ++t)
                    u1.set(s, t, u1.at(s, t) + pair.u1.at(s, t) * c);
        }
        if (!invertible_graded(u0) || !invertible_graded(u1)) continue;
        return morphism_complete(phi, psi, u0, u1);
    }
    return std::nullopt;
}

/// Certificate for a found period: degree-0 chain maps between the coker
/// presentations, bijective per degree across the window and surjective
/// globally (the cokernel of the map is generated within the window).
struct PeriodCertificate {
    int ell = 0;
    int shift = 0;
    ChainMapPair maps;
};

struct PeriodResult {
    std::optional<int> period; // empty = NotFoundWithinBound
    int shift = 0;
    std::optional<PeriodCertificate> certificate;
    int window = 0;
    int max_ell = 0;
};

namespace detail {

/// Checks that the chain map (u0, u1) : pres_a -> pres_b induces a bijection
/// on cokernels in every degree of the window.
inline bool chain_map_is_window_iso(const Ring& A, const GradedMatrix& pres_a,
                                    const GradedMatrix& pres_b, const GradedMatrix& u0,
                                    int N) {
    QuotientModule Ma(A, pres_a);
    QuotientModule Mb(A, pres_b);
    int lo = pres_a.target().empty()
                 ? 0
                 : *std::min_element(pres_a.target().begin(), pres_a.target().end());
    for (int e = lo; e <= lo + N; ++e) {
        std::size_t da = Ma.dim(e), db = Mb.dim(e);
        if (da != db) return false;
        if (da == 0) continue;
        FieldMatrix m(A.field(), db, da);
        for (std::size_t b = 0; b < da; ++b) {
            Column rep = Ma.from_coords(e, unit_vector(A.field(), da, b));
            Column img = apply_matrix(A, u0, rep, e);
            std::vector<FieldElem> coords = Mb.coords(img, e);
            for (std::size_t i = 0; i < db; ++i) m.at(i, b) = coords[i];
        }
        if (m.rank() != da) return false;
    }
    return true;
}

} // namespace detail

/// Period search: the least ell with Coker(Phi^ell mod f) isomorphic to a
/// shift of Coker(Phi^0 mod f).  For each candidate (ell, m) with matching
/// generator degrees, the space of degree-0 chain maps
/// Coker(Phi^ell mod f) -> Coker(Phi^0 mod f)(-m) is computed exactly and
/// seeded random combinations are tested for invertibility.  A returned
/// period always carries a verified certificate; NotFoundWithinBound may be
/// a false negative.
inline PeriodResult nmf_period(const NMF& phi, int max_ell, int N, std::uint64_t seed,
                               int trials) {
    if (!is_reduced(phi)) throw InputError("nmf_period requires a reduced factorization");
    PeriodResult result;
    result.window = N;
    result.max_ell = max_ell;
    Ring A = phi.quotient_ring();
    GradedMatrix pres0 = phi.phi0().reduced(A);
    const FieldSpec& field = phi.algebra()->field();

    for (int ell = 1; ell <= max_ell; ++ell) {
        GradedMatrix presL = phi.component(ell).reduced(A);
        // candidate shifts: generator-degree multisets must match
        std::set<int> candidates;
        for (int a : presL.target())
            for (int b : pres0.target()) candidates.insert(a - b);
        for (int m : candidates) {
            ShiftVector shifted0 = shifted(pres0.target(), m);
            ShiftVector sortedL = presL.target();
            std::sort(sortedL.begin(), sortedL.end());
            ShiftVector sorted0 = shifted0;
            std::sort(sorted0.begin(), sorted0.end());
            if (sortedL != sorted0) continue;
            // the window must cover all generator degrees, otherwise the
            // surjectivity part of the certificate is out of reach
            if (sortedL.back() - sortedL.front() > N) continue;
            GradedMatrix presT = pres0.with_shift(m);
            auto space = chain_map_space(A, presL, presT);
            if (space.empty()) continue;
            for (int trial = 0; trial < trials; ++trial) {
                Rng rng(mix_seed(seed, static_cast<std::uint64_t>(ell),
                                 static_cast<std::uint64_t>(m + 1000), trial));
                GradedMatrix u0(phi.algebra(), presT.target(), presL.target());
                GradedMatrix u1(phi.algebra(), presT.source(), presL.source());
                for (const auto& pair : space) {
                    FieldElem c = rng.field_elem(field);
                    for (std::size_t s = 0; s < u0.rows(); ++s)
                        for (std::size_t t = 0; t < u0.cols(); ++t)
                            u0.set(s, t, u0.at(s, t) + pair.u0.at(s, t) * c);
                    for (std::size_t s = 0; s < u1.rows(); ++s)
                        for (std::size_t t = 0; t < u1.cols(); ++t)
                            u1.set(s, t, u1.at(s, t) + pair.u1.at(s, t) * c);
                }
                if (!detail::chain_map_is_window_iso(A, presL, presT, u0, N)) continue;
                result.period = ell;
                result.shift = m;
                result.certificate = PeriodCertificate{ell, m, ChainMapPair{u0, u1}};
                return result;
            }
        }
    }
    return result;
}

} // namespace ncmf
