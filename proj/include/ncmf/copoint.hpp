#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "grmod.hpp"
#include "nmf.hpp"

namespace ncmf {

/// Projective point, normalized so the last nonzero coordinate is 1.
struct Point {
    std::vector<FieldElem> coords;

    static Point of(std::vector<FieldElem> c) {
        bool nonzero = false;
        for (const auto& v : c) nonzero = nonzero || !v.is_zero();
        if (!nonzero) throw InputError("point must have a nonzero coordinate");
        std::size_t last = c.size();
        for (std::size_t i = c.size(); i-- > 0;)
            if (!c[i].is_zero()) { last = i; break; }
        FieldElem inv = c[last].inverse();
        for (auto& v : c) v *= inv;
        return Point{std::move(c)};
    }

    bool operator==(const Point& o) const { return coords == o.coords; }
    bool operator!=(const Point& o) const { return !(*this == o); }

    const FieldElem& last_coord() const { return coords.back(); }
    bool on_xn() const { return coords.back().is_zero(); }
};

/**
 * The skew exterior setup: T the skew polynomial algebra on n generators,
 * S = T/(x_1^2, ..., x_{n-1}^2), f = x_n^2 in S_2 regular normal, and
 * A = S/(f) the skew exterior algebra.
 */
struct SkewContext {
    int n = 0;
    AlgebraPtr T;
    AlgebraPtr S;
    NormalElement f;
    Ring A;

    AlgebraElement linear_form(const Point& p) const {
        AlgebraElement out(S, 1);
        for (int j = 0; j < n; ++j) out.add_term(p.coords[j], Word{j});
        return out;
    }

    Point point_of_form(const AlgebraElement& ell) const {
        std::vector<FieldElem> c(n, FieldElem::zero(S->field()));
        for (const auto& [w, coeff] : ell.terms()) c[w[0]] = coeff;
        return Point::of(std::move(c));
    }
};

inline SkewContext build_context(const FieldSpec& field,
                                 const std::vector<std::vector<FieldElem>>& alpha,
                                 int window = 8) {
    const int n = static_cast<int>(alpha.size());
    AlgebraPtr T = make_skew_algebra(field, n, alpha); // validates alpha
    std::set<int> squares;
    for (int i = 0; i + 1 < n; ++i) squares.insert(i);
    AlgebraPtr S = make_skew_algebra(field, n, alpha, squares);
    AlgebraElement f(S, 2);
    f.add_term(FieldElem::one(field), Word{n - 1, n - 1});
    NormalElement nf = normalizing_automorphism(S, f, window); // NotNormal cannot occur here
    Ring A = Ring::quotient(S, f);
    return SkewContext{n, T, S, nf, A};
}

/// tau-orbit data: points p_0..p_L, their forms, and the scalar certificates
/// c_i with ell_i ell_{i+1} = c_i f in S.
struct CopointOrbit {
    std::vector<Point> points;
    std::vector<AlgebraElement> linear_forms; // in S
    std::vector<FieldElem> scalars;           // c_i, size = points.size() - 1
};

/// One step of tau on E: the kernel-of-multiplication characterization.
/// Finds the unique (up to scalar) linear ell' with ell_p ell' = 0 in A
/// and certifies exactness of A(-2) -> A(-1) -> A in degrees <= N; throws
/// NotCopointHere when the solution space is not a line or exactness fails.
inline Point tau_step(const SkewContext& C, const Point& p, int N) {
    const FieldSpec& field = C.S->field();
    AlgebraElement ell = C.linear_form(p);
    std::size_t dim2 = C.A.dim(2);
    FieldMatrix m(field, dim2, C.n);
    for (int j = 0; j < C.n; ++j) {
        std::vector<FieldElem> col =
            C.A.coords(C.A.mul(ell, AlgebraElement::generator(C.S, j)));
        for (std::size_t i = 0; i < dim2; ++i) m.at(i, j) = col[i];
    }
    auto null_basis = m.nullspace();
    if (null_basis.size() != 1) throw NotCopointHere();
    AlgebraElement ell_next(C.S, 1);
    for (int j = 0; j < C.n; ++j) ell_next.add_term(null_basis[0][j], Word{j});

    GradedMatrix first(C.S, {0}, {1});
    first.set(0, 0, C.A.reduce(ell));
    GradedMatrix second(C.S, {1}, {2});
    second.set(0, 0, C.A.reduce(ell_next));
    for (int e = 0; e <= N; ++e) {
        FieldMatrix mf = degreewise_map(C.A, first, e);
        FieldMatrix ms = degreewise_map(C.A, second, e);
        if (mf.cols() - mf.rank() != ms.rank()) throw NotCopointHere();
    }
    return C.point_of_form(ell_next);
}

struct CopointCheck {
    bool ok = false;
    CopointOrbit orbit;
};

/// Iterates tau_step L times; success is a windowed certificate that N_p has
/// a linear resolution prefix.  The scalar certificates ell_i ell_{i+1} = c_i f
/// are extracted in S along the way.
inline CopointCheck is_copoint(const SkewContext& C, const Point& p, int steps, int N) {
    CopointCheck out;
    out.orbit.points.push_back(p);
    out.orbit.linear_forms.push_back(C.linear_form(p));
    Point cur = p;
    for (int step = 0; step < steps; ++step) {
        Point next(cur);
        try {
            next = tau_step(C, cur, N);
        } catch (const NotCopointHere&) {
            out.ok = false;
            return out;
        }
        out.orbit.points.push_back(next);
        out.orbit.linear_forms.push_back(C.linear_form(next));
        // ell_i ell_{i+1} lies in (f)_2 = k f; extract the scalar
        AlgebraElement prod =
            out.orbit.linear_forms[step] * out.orbit.linear_forms[step + 1];
        FieldElem c = FieldElem::zero(C.S->field());
        if (!prod.is_zero()) {
            const auto& fterms = C.f.f.terms();
            c = prod.coefficient(fterms.begin()->first) / fterms.begin()->second;
            if (prod != C.f.f * c) throw VerificationFailed();
        }
        out.orbit.scalars.push_back(c);
        cur = next;
    }
    out.ok = true;
    return out;
}

struct PointFactorization {
    NMF nmf;
    CopointOrbit orbit;
    std::optional<int> orbit_period; // least l <= L with p_l = p_0
};

/// Lift of a tau-orbit: the orbit forms Phi^i = ell_i satisfy
/// Phi^i Phi^{i+1} = a_{i,n} a_{i+1,n} f, so after rescaling they give a
/// rank-1 factorization with Coker = N_p.  Any orbit point on V(x_n) is the
/// obstruction PointOnXn.
inline PointFactorization nmf_from_point(const SkewContext& C, const Point& p, int steps,
                                         int N) {
    CopointCheck check = is_copoint(C, p, std::max(steps, 1), N);
    if (!check.ok) throw NotCopointHere();
    for (const Point& q : check.orbit.points)
        if (q.on_xn()) throw PointOnXn();
    // certificates: c_i = a_{i,n} a_{i+1,n} (the cross terms cancel in S)
    for (std::size_t i = 0; i + 1 < check.orbit.points.size(); ++i) {
        FieldElem expect = check.orbit.points[i].last_coord() *
                           check.orbit.points[i + 1].last_coord();
        if (check.orbit.scalars[i] != expect) throw VerificationFailed();
    }
    GradedMatrix phi0(C.S, {0}, {1});
    phi0.set(0, 0, check.orbit.linear_forms[0]);
    GradedMatrix phi1(C.S, {1}, {2});
    phi1.set(0, 0, check.orbit.linear_forms[1] * check.orbit.scalars[0].inverse());
    NMF nmf = nmf_complete(C.S, C.f, phi0, phi1, N);

    std::optional<int> period;
    for (std::size_t l = 1; l < check.orbit.points.size(); ++l)
        if (check.orbit.points[l] == check.orbit.points[0]) {
            period = static_cast<int>(l);
            break;
        }
    return PointFactorization{std::move(nmf), std::move(check.orbit), period};
}

struct ExtensionResult {
    NMF nmf;
    bool nontrivial = false; // a non-split adjacent extension was found
    ResolutionWindow resolution;
};

/**
 * Rank-r factorization whose cokernel is an extension of the co-point modules
 * N_{p_1}, ..., N_{p_r}: diagonal blocks are the rescaled point forms and the
 * strictly upper entries are solved superdiagonal by superdiagonal from
 * compose(Phi^0, Phi^1) = f E, which is linear at each level.  The seeded
 * choice prefers, per adjacent pair, a solution outside the split subspace
 * (the base-change orbit of zero); when only split solutions exist the split
 * factorization is returned with nontrivial = false.
 */
inline ExtensionResult build_extension_nmf(const SkewContext& C,
                                           const std::vector<Point>& points, int N,
                                           std::uint64_t seed) {
    if (points.empty()) throw InputError("need at least one point");
    const FieldSpec& field = C.S->field();
    const int r = static_cast<int>(points.size());

    std::vector<AlgebraElement> diag0, diag1;
    for (const Point& p : points) {
        PointFactorization pf = nmf_from_point(C, p, 1, N);
        diag0.push_back(pf.nmf.phi0().at(0, 0));
        diag1.push_back(pf.nmf.phi1().at(0, 0));
    }

    // entries of Phi^0 and Phi^1 above the diagonal, filled by level
    std::vector<std::vector<AlgebraElement>> u0(r), u1(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            u0[i].push_back(AlgebraElement::zero(C.S, 1));
            u1[i].push_back(AlgebraElement::zero(C.S, 1));
        }
    for (int i = 0; i < r; ++i) {
        u0[i][i] = diag0[i];
        u1[i][i] = diag1[i];
    }

    bool nontrivial = false;
    const std::size_t dim1 = C.S->dim_of_degree(1);
    const std::size_t dim2 = C.S->dim_of_degree(2);

    for (int level = 1; level < r; ++level) {
        for (int i = 0; i + level < r; ++i) {
            int j = i + level;
            // equation: diag0[i] * u1[i][j] + u0[i][j] * diag1[j] = -known
            AlgebraElement known(C.S, 2);
            for (int k = i + 1; k < j; ++k) known = known + u0[i][k] * u1[k][j];
            // unknowns: coords of u0[i][j] (dim1) then u1[i][j] (dim1)
            FieldMatrix system(field, dim2, 2 * dim1);
            for (std::size_t b = 0; b < dim1; ++b) {
                AlgebraElement basis_el = AlgebraElement::from_coords(
                    C.S, 1, unit_vector(field, dim1, b));
                std::vector<FieldElem> col0 = (basis_el * diag1[j]).coords();
                std::vector<FieldElem> col1 = (diag0[i] * basis_el).coords();
                for (std::size_t row = 0; row < dim2; ++row) {
                    system.at(row, b) = col0[row];
                    system.at(row, dim1 + b) = col1[row];
                }
            }
            std::vector<FieldElem> rhs = (-known).coords();
            auto particular = system.solve(rhs);
            if (!particular)
                throw DomainError("extension system inconsistent at level " +
                                  std::to_string(level));
            auto homogeneous = system.nullspace();

            // split subspace for an adjacent pair: entries reachable from zero
            // by the triangular base change (u0, u1) += (c0 g0 - l0 c1, c1 g1 - l1 c0)
            std::optional<Subspace> split;
            if (level == 1) {
                split.emplace(field, 2 * dim1);
                auto pack = [&](const AlgebraElement& a, const AlgebraElement& b) {
                    std::vector<FieldElem> v = a.coords();
                    std::vector<FieldElem> w = b.coords();
                    v.insert(v.end(), w.begin(), w.end());
                    return v;
                };
                split->add(pack(diag0[j], -diag1[i]));                 // c0 direction
                split->add(pack(-diag0[i], diag1[j]));                 // c1 direction
            }

            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(level),
                             static_cast<std::uint64_t>(i)));
            std::vector<FieldElem> chosen = particular->first;
            bool found_nonsplit = false;
            for (int trial = 0; trial < 32; ++trial) {
                std::vector<FieldElem> cand = particular->first;
                for (const auto& h : homogeneous) {
                    FieldElem c = rng.field_elem(field);
                    for (std::size_t idx = 0; idx < cand.size(); ++idx)
                        cand[idx] += h[idx] * c;
                }
                if (!split || !split->contains(cand)) {
                    chosen = cand;
                    found_nonsplit = split.has_value();
                    break;
                }
                chosen = cand;
            }
            if (level == 1 && found_nonsplit) nontrivial = true;
            u0[i][j] = AlgebraElement::from_coords(
                C.S, 1, {chosen.begin(), chosen.begin() + dim1});
            u1[i][j] = AlgebraElement::from_coords(
                C.S, 1, {chosen.begin() + dim1, chosen.end()});
        }
    }

    ShiftVector zeros(r, 0), ones(r, 1), twos(r, 2);
    GradedMatrix phi0(C.S, zeros, ones);
    GradedMatrix phi1(C.S, ones, twos);
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) {
            phi0.set(i, j, u0[i][j]);
            phi1.set(i, j, u1[i][j]);
        }
    NMF nmf = nmf_complete(C.S, C.f, phi0, phi1, N);

    ModulePresentation M{Ring::quotient(C.S, C.f.f), nmf.phi0().reduced(C.A)};
    ResolutionWindow res = minimal_resolution_window(M, std::min(N, 5), N);
    for (std::size_t step = 0; step < res.generator_degrees.size(); ++step)
        for (int g : res.generator_degrees[step])
            if (g != static_cast<int>(step)) throw VerificationFailed();
    return ExtensionResult{std::move(nmf), nontrivial, std::move(res)};
}

/// Point-module presentation M_p = A/(forms vanishing at p) over the
/// commutative polynomial context, and dim Ext^1 in internal degree zero.
inline ModulePresentation point_module_presentation(const Ring& ring, const Point& p) {
    const AlgebraPtr& A = ring.algebra();
    const FieldSpec& field = A->field();
    const int n = A->generator_count();
    FieldMatrix row(field, 1, n);
    for (int j = 0; j < n; ++j) row.at(0, j) = p.coords[j];
    auto forms = row.nullspace();
    GradedMatrix pres(A, {0}, ShiftVector(forms.size(), 1));
    for (std::size_t t = 0; t < forms.size(); ++t) {
        AlgebraElement ell(A, 1);
        for (int j = 0; j < n; ++j) ell.add_term(forms[t][j], Word{j});
        pres.set(0, t, ell);
    }
    return ModulePresentation{ring, pres};
}

inline std::size_t point_ext1_dim(const AlgebraPtr& poly_algebra, const Point& p,
                                  const Point& q, int window) {
    for (int i = 0; i < poly_algebra->generator_count(); ++i)
        for (int j = i + 1; j < poly_algebra->generator_count(); ++j)
            if (poly_algebra->alpha(i, j) != -FieldElem::one(poly_algebra->field()))
                throw InputError("point_ext1_dim requires the commutative context");
    Ring ring = Ring::plain(poly_algebra);
    ModulePresentation Mp = point_module_presentation(ring, p);
    ModulePresentation Mq = point_module_presentation(ring, q);
    return graded_ext1_dim(Mp, Mq, window);
}

} // namespace ncmf
