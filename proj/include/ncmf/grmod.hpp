#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace ncmf {

/// Shifts m_1..m_r of a graded free module (+) S(-m_s); order significant.
using ShiftVector = std::vector<int>;

inline ShiftVector shifted(const ShiftVector& v, int d) {
    ShiftVector out = v;
    for (int& m : out) m += d;
    return out;
}

/**
 * Evaluation context for per-degree linear algebra: the base algebra S,
 * optionally twisted by an automorphism (product a*b = a sigma^{deg a}(b)),
 * optionally modulo the two-sided ideal (f).  Quotient arithmetic reduces
 * against a cached per-degree spanning set of (f); the coset basis is the
 * set of non-pivot normal words.
 *
 * Rings are cheap value handles over a shared, mutex-guarded cache.
 */
class Ring {
public:
    static Ring plain(AlgebraPtr A) { return Ring(std::move(A), std::nullopt, std::nullopt); }

    static Ring quotient(AlgebraPtr A, AlgebraElement f) {
        return Ring(std::move(A), std::nullopt, std::move(f));
    }

    static Ring twisted(AlgebraPtr A, GradedAutomorphism sigma) {
        return Ring(std::move(A), std::move(sigma), std::nullopt);
    }

    static Ring twisted_quotient(AlgebraPtr A, GradedAutomorphism sigma, AlgebraElement f) {
        return Ring(std::move(A), std::move(sigma), std::move(f));
    }

    const AlgebraPtr& algebra() const { return impl_->base; }
    const FieldSpec& field() const { return impl_->base->field(); }
    bool is_quotient() const { return impl_->modulus.has_value(); }
    bool is_twisted() const { return impl_->twist.has_value(); }
    const std::optional<AlgebraElement>& modulus() const { return impl_->modulus; }
    const std::optional<GradedAutomorphism>& twist() const { return impl_->twist; }

    bool same_context(const Ring& o) const {
        if (!same_algebra(impl_->base, o.impl_->base)) return false;
        if (impl_->modulus.has_value() != o.impl_->modulus.has_value()) return false;
        if (impl_->modulus && *impl_->modulus != *o.impl_->modulus) return false;
        if (impl_->twist.has_value() != o.impl_->twist.has_value()) return false;
        if (impl_->twist && !(*impl_->twist == *o.impl_->twist)) return false;
        return true;
    }

    std::size_t dim(int e) const {
        if (e < 0) return 0;
        if (!is_quotient()) return impl_->base->dim_of_degree(e);
        return degree_data(e).coset_positions.size();
    }

    /// sigma^k(b) for the twist (identity for untwisted rings).
    AlgebraElement twist_power(int k, const AlgebraElement& b) const {
        if (!impl_->twist || k == 0) return b;
        return impl_->twist->power(k).apply(b);
    }

    /// Product in the ring: a sigma^{deg a}(b), reduced mod (f) if present.
    AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const {
        AlgebraElement raw = a * twist_power(a.degree(), b);
        return reduce(raw);
    }

    /// Canonical representative modulo the per-degree ideal span.
    AlgebraElement reduce(const AlgebraElement& a) const {
        if (!is_quotient() || a.is_zero()) return a;
        const DegreeData& data = degree_data(a.degree());
        return AlgebraElement::from_coords(impl_->base, a.degree(),
                                           data.ideal.reduce(a.coords()));
    }

    /// Coordinates of the class of a in the coset basis of its degree.
    std::vector<FieldElem> coords(const AlgebraElement& a) const {
        if (!is_quotient()) return a.coords();
        const DegreeData& data = degree_data(a.degree());
        std::vector<FieldElem> full = data.ideal.reduce(a.coords());
        std::vector<FieldElem> out;
        out.reserve(data.coset_positions.size());
        for (std::size_t pos : data.coset_positions) out.push_back(full[pos]);
        return out;
    }

    AlgebraElement from_coords(int e, const std::vector<FieldElem>& v) const {
        if (!is_quotient()) return AlgebraElement::from_coords(impl_->base, e, v);
        const DegreeData& data = degree_data(e);
        if (v.size() != data.coset_positions.size())
            throw InputError("coordinate size mismatch");
        std::vector<FieldElem> full(impl_->base->dim_of_degree(e),
                                    FieldElem::zero(field()));
        for (std::size_t i = 0; i < v.size(); ++i) full[data.coset_positions[i]] = v[i];
        return AlgebraElement::from_coords(impl_->base, e, full);
    }

    bool is_zero(const AlgebraElement& a) const { return reduce(a).is_zero(); }

    /// Basis of the degree-e component as canonical representatives.
    std::vector<AlgebraElement> basis_elements(int e) const {
        std::vector<AlgebraElement> out;
        const std::size_t d = dim(e);
        for (std::size_t i = 0; i < d; ++i)
            out.push_back(from_coords(e, unit_vector(field(), d, i)));
        return out;
    }

private:
    struct DegreeData {
        Subspace ideal;
        std::vector<std::size_t> coset_positions;
        DegreeData(const FieldSpec& field, std::size_t dim) : ideal(field, dim) {}
    };

    struct Impl {
        AlgebraPtr base;
        std::optional<GradedAutomorphism> twist;
        std::optional<AlgebraElement> modulus;
        mutable std::mutex mutex;
        mutable std::map<int, DegreeData> cache;
    };

    std::shared_ptr<Impl> impl_;

    Ring(AlgebraPtr A, std::optional<GradedAutomorphism> twist,
         std::optional<AlgebraElement> modulus) {
        impl_ = std::make_shared<Impl>();
        impl_->base = std::move(A);
        impl_->twist = std::move(twist);
        impl_->modulus = std::move(modulus);
        if (impl_->modulus && impl_->modulus->is_zero()) impl_->modulus = std::nullopt;
    }

    const DegreeData& degree_data(int e) const {
        std::lock_guard<std::mutex> lock(impl_->mutex);
        auto it = impl_->cache.find(e);
        if (it != impl_->cache.end()) return it->second;

        const AlgebraPtr& A = impl_->base;
        const AlgebraElement& f = *impl_->modulus;
        const int d = f.degree();
        DegreeData data(field(), A->dim_of_degree(e));
        if (e >= d) {
            for (int i = 0; i + d <= e; ++i) {
                int j = e - d - i;
                for (const Word& u : A->basis_of_degree(i)) {
                    AlgebraElement ue = normal_form(A, {{FieldElem::one(field()), u}});
                    AlgebraElement uf = ue * twist_power(i, f);
                    if (uf.is_zero()) continue;
                    for (const Word& v : A->basis_of_degree(j)) {
                        AlgebraElement ve = normal_form(A, {{FieldElem::one(field()), v}});
                        AlgebraElement ufv = uf * twist_power(i + d, ve);
                        if (!ufv.is_zero()) data.ideal.add(ufv.coords());
                    }
                }
            }
        }
        std::vector<bool> is_pivot(A->dim_of_degree(e), false);
        for (std::size_t p : data.ideal.pivots()) is_pivot[p] = true;
        for (std::size_t p = 0; p < is_pivot.size(); ++p)
            if (!is_pivot[p]) data.coset_positions.push_back(p);
        auto [pos, inserted] = impl_->cache.emplace(e, std::move(data));
        (void)inserted;
        return pos->second;
    }
};

/// Matrix of homogeneous elements between graded free modules.  Entry (s,t)
/// maps S(-source[t]) -> S(-target[s]) by left multiplication, so it is zero
/// or homogeneous of degree source[t] - target[s].
class GradedMatrix {
public:
    GradedMatrix() = default;

    GradedMatrix(AlgebraPtr algebra, ShiftVector target, ShiftVector source)
        : algebra_(std::move(algebra)), target_(std::move(target)), source_(std::move(source)) {
        entries_.resize(target_.size());
        for (std::size_t s = 0; s < target_.size(); ++s)
            for (std::size_t t = 0; t < source_.size(); ++t)
                entries_[s].push_back(AlgebraElement::zero(
                    algebra_, std::max(0, source_[t] - target_[s])));
    }

    static GradedMatrix identity(const AlgebraPtr& algebra, const ShiftVector& shifts) {
        GradedMatrix m(algebra, shifts, shifts);
        for (std::size_t s = 0; s < shifts.size(); ++s)
            m.set(s, s, AlgebraElement::unit(algebra));
        return m;
    }

    /// f * E : (+) S(-m_s - deg f) -> (+) S(-m_s).
    static GradedMatrix scaled_identity(const AlgebraElement& f, const ShiftVector& target) {
        GradedMatrix m(f.algebra(), target, shifted(target, f.degree()));
        for (std::size_t s = 0; s < target.size(); ++s) m.set(s, s, f);
        return m;
    }

    const AlgebraPtr& algebra() const { return algebra_; }
    const ShiftVector& target() const { return target_; }
    const ShiftVector& source() const { return source_; }
    std::size_t rows() const { return target_.size(); }
    std::size_t cols() const { return source_.size(); }

    const AlgebraElement& at(std::size_t s, std::size_t t) const { return entries_[s][t]; }

    int entry_degree(std::size_t s, std::size_t t) const { return source_[t] - target_[s]; }

    void set(std::size_t s, std::size_t t, const AlgebraElement& value) {
        if (!same_algebra(value.algebra(), algebra_)) throw MixedAlgebras();
        if (!value.is_zero() && value.degree() != entry_degree(s, t))
            throw ShiftMismatch();
        if (value.is_zero()) {
            entries_[s][t] = AlgebraElement::zero(algebra_, std::max(0, entry_degree(s, t)));
        } else {
            entries_[s][t] = value;
        }
    }

    bool is_zero() const {
        for (const auto& row : entries_)
            for (const auto& e : row)
                if (!e.is_zero()) return false;
        return true;
    }

    bool operator==(const GradedMatrix& o) const {
        return same_algebra(algebra_, o.algebra_) && target_ == o.target_ &&
               source_ == o.source_ && entries_ == o.entries_;
    }
    bool operator!=(const GradedMatrix& o) const { return !(*this == o); }

    /// Entrywise application of a graded automorphism (degrees preserved).
    GradedMatrix map_entries(const GradedAutomorphism& sigma) const {
        GradedMatrix out(algebra_, target_, source_);
        for (std::size_t s = 0; s < rows(); ++s)
            for (std::size_t t = 0; t < cols(); ++t)
                out.set(s, t, sigma.apply(entries_[s][t]));
        return out;
    }

    GradedMatrix with_shift(int d) const {
        GradedMatrix out = *this;
        out.target_ = shifted(target_, d);
        out.source_ = shifted(source_, d);
        return out;
    }

    GradedMatrix reduced(const Ring& ring) const {
        GradedMatrix out(algebra_, target_, source_);
        for (std::size_t s = 0; s < rows(); ++s)
            for (std::size_t t = 0; t < cols(); ++t)
                out.set(s, t, ring.reduce(entries_[s][t]));
        return out;
    }

    GradedMatrix transpose_raw() const {
        // entries moved without degree checks; callers fix algebra/shift
        GradedMatrix out;
        out.algebra_ = algebra_;
        out.target_ = source_;
        out.source_ = target_;
        out.entries_.assign(cols(), {});
        for (std::size_t t = 0; t < cols(); ++t)
            for (std::size_t s = 0; s < rows(); ++s)
                out.entries_[t].push_back(entries_[s][t]);
        return out;
    }

private:
    AlgebraPtr algebra_;
    ShiftVector target_, source_;
    std::vector<std::vector<AlgebraElement>> entries_;
};

/// Matrix product with entries multiplied in the ring; shift bookkeeping
/// preserved.
inline GradedMatrix compose(const Ring& ring, const GradedMatrix& phi,
                            const GradedMatrix& psi) {
    if (phi.source() != psi.target()) throw ShiftMismatch();
    GradedMatrix out(phi.algebra(), phi.target(), psi.source());
    for (std::size_t s = 0; s < phi.rows(); ++s)
        for (std::size_t u = 0; u < psi.cols(); ++u) {
            AlgebraElement acc =
                AlgebraElement::zero(phi.algebra(), std::max(0, psi.source()[u] - phi.target()[s]));
            for (std::size_t t = 0; t < phi.cols(); ++t) {
                if (phi.at(s, t).is_zero() || psi.at(t, u).is_zero()) continue;
                acc = acc + ring.mul(phi.at(s, t), psi.at(t, u));
            }
            out.set(s, u, ring.reduce(acc));
        }
    return out;
}

/// Degree-e part of a free module (+) R(-m_t): slot offsets into the
/// concatenated coordinate space.
struct DegreeLayout {
    std::vector<std::size_t> offsets; // per slot
    std::size_t total = 0;

    DegreeLayout(const Ring& ring, const ShiftVector& shifts, int e) {
        for (int m : shifts) {
            offsets.push_back(total);
            total += ring.dim(e - m);
        }
    }
};

/// A homogeneous column of the free module (+) R(-m_s): one element per slot,
/// where slot s has degree e - m_s.
using Column = std::vector<AlgebraElement>;

inline Column zero_column(const Ring& ring, const ShiftVector& shifts, int e) {
    Column c;
    for (int m : shifts)
        c.push_back(AlgebraElement::zero(ring.algebra(), std::max(0, e - m)));
    return c;
}

inline std::vector<FieldElem> column_coords(const Ring& ring, const ShiftVector& shifts,
                                            int e, const Column& col) {
    DegreeLayout layout(ring, shifts, e);
    std::vector<FieldElem> v(layout.total, FieldElem::zero(ring.field()));
    for (std::size_t s = 0; s < shifts.size(); ++s) {
        if (col[s].is_zero()) continue;
        std::vector<FieldElem> part = ring.coords(col[s]);
        for (std::size_t i = 0; i < part.size(); ++i) v[layout.offsets[s] + i] = part[i];
    }
    return v;
}

inline Column column_from_coords(const Ring& ring, const ShiftVector& shifts, int e,
                                 const std::vector<FieldElem>& v) {
    DegreeLayout layout(ring, shifts, e);
    Column col;
    for (std::size_t s = 0; s < shifts.size(); ++s) {
        std::size_t n = ring.dim(e - shifts[s]);
        std::vector<FieldElem> part(v.begin() + layout.offsets[s],
                                    v.begin() + layout.offsets[s] + n);
        col.push_back(n == 0 ? AlgebraElement::zero(ring.algebra(), std::max(0, e - shifts[s]))
                             : ring.from_coords(e - shifts[s], part));
    }
    return col;
}

/// phi applied to a degree-e column of its source module.
inline Column apply_matrix(const Ring& ring, const GradedMatrix& phi, const Column& col,
                           int e) {
    Column out;
    for (std::size_t s = 0; s < phi.rows(); ++s) {
        AlgebraElement acc =
            AlgebraElement::zero(ring.algebra(), std::max(0, e - phi.target()[s]));
        for (std::size_t t = 0; t < phi.cols(); ++t) {
            if (phi.at(s, t).is_zero() || col[t].is_zero()) continue;
            acc = acc + ring.mul(phi.at(s, t), col[t]);
        }
        out.push_back(acc);
    }
    return out;
}

/// The k-linear map realized by phi on the degree-e components, in canonical
/// bases.
inline FieldMatrix degreewise_map(const Ring& ring, const GradedMatrix& phi, int e) {
    DegreeLayout rows(ring, phi.target(), e);
    DegreeLayout cols(ring, phi.source(), e);
    FieldMatrix m(ring.field(), rows.total, cols.total);
    for (std::size_t t = 0; t < phi.cols(); ++t) {
        int src_deg = e - phi.source()[t];
        if (src_deg < 0) continue;
        std::size_t n = ring.dim(src_deg);
        for (std::size_t b = 0; b < n; ++b) {
            AlgebraElement w = ring.from_coords(src_deg, unit_vector(ring.field(), n, b));
            for (std::size_t s = 0; s < phi.rows(); ++s) {
                if (phi.at(s, t).is_zero()) continue;
                std::vector<FieldElem> out = ring.coords(ring.mul(phi.at(s, t), w));
                for (std::size_t i = 0; i < out.size(); ++i)
                    m.at(rows.offsets[s] + i, cols.offsets[t] + b) = out[i];
            }
        }
    }
    return m;
}

struct KernelWindow {
    // per degree e = 0..N: basis of ker(phi)_e as free-module columns
    std::vector<std::pair<int, std::vector<Column>>> degrees;
};

inline KernelWindow kernel_window(const Ring& ring, const GradedMatrix& phi, int N) {
    KernelWindow out;
    for (int e = 0; e <= N; ++e) {
        FieldMatrix m = degreewise_map(ring, phi, e);
        std::vector<Column> cols;
        for (const auto& v : m.nullspace())
            cols.push_back(column_from_coords(ring, phi.source(), e, v));
        out.degrees.emplace_back(e, std::move(cols));
    }
    return out;
}

inline bool injective_in_window(const Ring& ring, const GradedMatrix& phi, int N) {
    for (int e = 0; e <= N; ++e) {
        FieldMatrix m = degreewise_map(ring, phi, e);
        if (m.rank() != m.cols()) return false;
    }
    return true;
}

struct PreimageSolution {
    Column v;
    bool unique = false;
};

/// Any v with phi v = w in degree e, where w_s in R_{e - target[s]}.
inline std::optional<PreimageSolution> solve_preimage(const Ring& ring,
                                                      const GradedMatrix& phi,
                                                      const Column& w, int e) {
    for (std::size_t s = 0; s < phi.rows(); ++s)
        if (!w[s].is_zero() && w[s].degree() != e - phi.target()[s])
            throw ShiftMismatch();
    FieldMatrix m = degreewise_map(ring, phi, e);
    auto sol = m.solve(column_coords(ring, phi.target(), e, w));
    if (!sol) return std::nullopt;
    return PreimageSolution{column_from_coords(ring, phi.source(), e, sol->first),
                            sol->second};
}

/// Module given as Coker of a graded matrix over a ring.
struct ModulePresentation {
    Ring ring;
    GradedMatrix matrix;

    HilbertWindow hilbert(int N) const {
        HilbertWindow h;
        for (int e = 0; e <= N; ++e) {
            DegreeLayout layout(ring, matrix.target(), e);
            h.dims.push_back(layout.total - degreewise_map(ring, matrix, e).rank());
        }
        return h;
    }
};

/// Indexed family of composable graded matrices phi^i for i in
/// [lo, lo + maps.size()), with maps[i - lo] = phi^i : F^{i+1} -> F^i.
struct ComplexWindow {
    Ring ring;
    int lo = 0;
    std::vector<GradedMatrix> maps;

    ComplexWindow(Ring r, int lo_index, std::vector<GradedMatrix> ms = {})
        : ring(std::move(r)), lo(lo_index), maps(std::move(ms)) {}

    const GradedMatrix& map_at(int i) const {
        if (i < lo || i >= lo + static_cast<int>(maps.size()))
            throw InputError("complex index out of range");
        return maps[i - lo];
    }

    void validate() const {
        for (std::size_t k = 0; k + 1 < maps.size(); ++k)
            if (maps[k].source() != maps[k + 1].target()) throw ShiftMismatch();
    }
};

struct ExactnessReport {
    bool exact = true;
    bool composite_zero = true;
    // degrees where dim ker(phi^i)_e != dim im(phi^{i+1})_e, with the defect
    std::vector<std::pair<int, std::size_t>> defects;
};

/// Exactness at position i: ker(phi^i) = im(phi^{i+1}) in all degrees <= N.
inline ExactnessReport exactness_window(const ComplexWindow& C, int i, int N) {
    const GradedMatrix& phi = C.map_at(i);
    const GradedMatrix& psi = C.map_at(i + 1);
    if (phi.source() != psi.target()) throw ShiftMismatch();
    ExactnessReport report;
    GradedMatrix comp = compose(C.ring, phi, psi);
    if (!comp.reduced(C.ring).is_zero()) {
        report.composite_zero = false;
        report.exact = false;
    }
    for (int e = 0; e <= N; ++e) {
        FieldMatrix mphi = degreewise_map(C.ring, phi, e);
        FieldMatrix mpsi = degreewise_map(C.ring, psi, e);
        std::size_t ker = mphi.cols() - mphi.rank();
        std::size_t im = mpsi.rank();
        if (ker != im) {
            report.exact = false;
            report.defects.emplace_back(e, ker > im ? ker - im : im - ker);
        }
    }
    return report;
}

struct ResolutionWindow {
    std::vector<GradedMatrix> differentials;       // d_1 .. d_s
    std::vector<std::vector<int>> generator_degrees; // shifts of F_0 .. F_s
    bool truncated = true; // kernel generators beyond the window cannot be ruled out
};

/// Degree e0 <= N+1 with R_{e0} = 0, if any; connected algebras generated in
/// degree 1 then vanish in all higher degrees too.
inline std::optional<int> vanishing_degree(const Ring& ring, int bound) {
    for (int e = 0; e <= bound; ++e)
        if (ring.dim(e) == 0) return e;
    return std::nullopt;
}

/// Steps of a minimal free resolution, found degree-by-degree: at each degree
/// <= N the kernel basis is scanned in canonical order and vectors outside the
/// submodule generated so far become new generators.
inline ResolutionWindow minimal_resolution_window(const ModulePresentation& M, int steps,
                                                  int N) {
    for (std::size_t s = 0; s < M.matrix.rows(); ++s)
        for (std::size_t t = 0; t < M.matrix.cols(); ++t)
            if (!M.matrix.at(s, t).is_zero() && M.matrix.entry_degree(s, t) < 1)
                throw InputError("presentation is not minimal: entry of degree < 1");

    ResolutionWindow out;
    out.generator_degrees.push_back(M.matrix.target());
    out.differentials.push_back(M.matrix);
    out.generator_degrees.push_back(M.matrix.source());

    const Ring& ring = M.ring;
    std::optional<int> vanish = vanishing_degree(ring, N + 1);
    bool all_complete = true;

    GradedMatrix cur = M.matrix;
    for (int step = 2; step <= steps; ++step) {
        const ShiftVector& shifts = cur.source();
        std::vector<Column> gens;
        std::vector<int> gen_degrees;
        // per-degree span of the submodule generated by chosen generators
        for (int e = 0; e <= N; ++e) {
            DegreeLayout layout(ring, shifts, e);
            if (layout.total == 0) continue;
            Subspace span(ring.field(), layout.total);
            for (std::size_t g = 0; g < gens.size(); ++g) {
                int gd = gen_degrees[g];
                std::size_t n = ring.dim(e - gd);
                for (std::size_t b = 0; b < n; ++b) {
                    AlgebraElement w =
                        ring.from_coords(e - gd, unit_vector(ring.field(), n, b));
                    Column gw;
                    for (std::size_t s = 0; s < shifts.size(); ++s)
                        gw.push_back(gens[g][s].is_zero()
                                         ? AlgebraElement::zero(ring.algebra(),
                                                                std::max(0, e - shifts[s]))
                                         : ring.mul(gens[g][s], w));
                    span.add(column_coords(ring, shifts, e, gw));
                }
            }
            FieldMatrix m = degreewise_map(ring, cur, e);
            for (const auto& v : m.nullspace()) {
                if (span.contains(v)) continue;
                span.add(v);
                gens.push_back(column_from_coords(ring, shifts, e, v));
                gen_degrees.push_back(e);
            }
        }
        GradedMatrix d(ring.algebra(), shifts, gen_degrees);
        for (std::size_t g = 0; g < gens.size(); ++g)
            for (std::size_t s = 0; s < shifts.size(); ++s)
                d.set(s, g, gens[g][s]);
        // the kernel was seen in full iff F_step vanishes beyond the window
        bool complete = false;
        if (vanish) {
            int max_shift = 0;
            for (int m : shifts) max_shift = std::max(max_shift, m);
            complete = max_shift + *vanish <= N + 1;
        }
        all_complete = all_complete && complete;
        out.differentials.push_back(d);
        out.generator_degrees.push_back(gen_degrees);
        cur = d;
        if (gens.empty()) break;
    }
    out.truncated = !all_complete;
    return out;
}

/// Degree-0 chain maps (U0, U1) between two presentations over the same ring:
/// U0 D_M = D_N U1.  Returned as a basis of the solution space.
struct ChainMapPair {
    GradedMatrix u0, u1;
};

inline std::vector<ChainMapPair> chain_map_space(const Ring& ring, const GradedMatrix& DM,
                                                 const GradedMatrix& DN) {
    const FieldSpec& field = ring.field();
    const AlgebraPtr& A = ring.algebra();

    struct Slot {
        int which;              // 0 = U0, 1 = U1
        std::size_t s, t;       // entry position (row, col)
        int degree;             // entry degree
        std::size_t offset;     // offset into the unknown vector
        std::size_t count;      // ring.dim(degree)
    };
    std::vector<Slot> slots;
    std::size_t unknowns = 0;
    // U0 is |DN.target()| x |DM.target()| with entry (a,b) of degree
    // DM.target()[b] - DN.target()[a]; U1 analogously on the sources.
    auto add_matrix_slots = [&](int which, const ShiftVector& rows_shifts,
                                const ShiftVector& cols_shifts) {
        for (std::size_t a = 0; a < rows_shifts.size(); ++a)
            for (std::size_t b = 0; b < cols_shifts.size(); ++b) {
                int deg = cols_shifts[b] - rows_shifts[a];
                std::size_t count = deg < 0 ? 0 : ring.dim(deg);
                slots.push_back({which, a, b, deg, unknowns, count});
                unknowns += count;
            }
    };
    add_matrix_slots(0, DN.target(), DM.target());
    add_matrix_slots(1, DN.source(), DM.source());
    auto find_slot = [&](int which, std::size_t a, std::size_t b) -> const Slot& {
        for (const Slot& sl : slots)
            if (sl.which == which && sl.s == a && sl.t == b) return sl;
        throw InputError("internal: chain map slot not found");
    };

    // Equations: for each (a, u), sum_b U0[a][b] DM[b][u] - sum_b DN[a][b] U1[b][u] = 0
    // in R_{DM.source()[u] - DN.target()[a]}.
    std::vector<std::vector<FieldElem>> eq_rows;
    for (std::size_t a = 0; a < DN.target().size(); ++a)
        for (std::size_t u = 0; u < DM.source().size(); ++u) {
            int eq_deg = DM.source()[u] - DN.target()[a];
            if (eq_deg < 0) continue;
            std::size_t eq_dim = ring.dim(eq_deg);
            if (eq_dim == 0) continue;
            std::vector<std::vector<FieldElem>> block(
                eq_dim, std::vector<FieldElem>(unknowns, FieldElem::zero(field)));
            // LHS: U0[a][b] * DM[b][u]
            for (std::size_t b = 0; b < DM.target().size(); ++b) {
                const Slot& sl = find_slot(0, a, b);
                if (sl.count == 0 || DM.at(b, u).is_zero()) continue;
                for (std::size_t k = 0; k < sl.count; ++k) {
                    AlgebraElement basis_el =
                        ring.from_coords(sl.degree, unit_vector(field, sl.count, k));
                    std::vector<FieldElem> prod = ring.coords(ring.mul(basis_el, DM.at(b, u)));
                    for (std::size_t i = 0; i < eq_dim; ++i)
                        block[i][sl.offset + k] += prod[i];
                }
            }
            // RHS: DN[a][b] * U1[b][u], subtracted
            for (std::size_t b = 0; b < DN.source().size(); ++b) {
                const Slot& sl = find_slot(1, b, u);
                if (sl.count == 0 || DN.at(a, b).is_zero()) continue;
                for (std::size_t k = 0; k < sl.count; ++k) {
                    AlgebraElement basis_el =
                        ring.from_coords(sl.degree, unit_vector(field, sl.count, k));
                    std::vector<FieldElem> prod = ring.coords(ring.mul(DN.at(a, b), basis_el));
                    for (std::size_t i = 0; i < eq_dim; ++i)
                        block[i][sl.offset + k] -= prod[i];
                }
            }
            for (auto& row : block) eq_rows.push_back(std::move(row));
        }

    FieldMatrix system(field, eq_rows.size(), unknowns);
    for (std::size_t i = 0; i < eq_rows.size(); ++i)
        for (std::size_t j = 0; j < unknowns; ++j) system.at(i, j) = eq_rows[i][j];

    std::vector<ChainMapPair> basis;
    for (const auto& sol : system.nullspace()) {
        GradedMatrix u0(A, DN.target(), DM.target());
        GradedMatrix u1(A, DN.source(), DM.source());
        for (const Slot& sl : slots) {
            if (sl.count == 0) continue;
            std::vector<FieldElem> coords(sol.begin() + sl.offset,
                                          sol.begin() + sl.offset + sl.count);
            AlgebraElement value = ring.from_coords(sl.degree, coords);
            if (sl.which == 0) u0.set(sl.s, sl.t, value);
            else u1.set(sl.s, sl.t, value);
        }
        basis.push_back({std::move(u0), std::move(u1)});
    }
    return basis;
}

/// Cyclic-or-not module N = Coker(P) with per-degree coset coordinates and
/// right multiplication, for Hom/Ext computations.
class QuotientModule {
public:
    QuotientModule(Ring ring, GradedMatrix presentation)
        : ring_(std::move(ring)), pres_(std::move(presentation)) {}

    const Ring& ring() const { return ring_; }
    const ShiftVector& free_shifts() const { return pres_.target(); }

    std::size_t dim(int e) const { return data(e).coset.size(); }

    std::vector<FieldElem> coords(const Column& rep, int e) const {
        const DegreeData& d = data(e);
        std::vector<FieldElem> full = d.image.reduce(column_coords(ring_, pres_.target(), e, rep));
        std::vector<FieldElem> out;
        for (std::size_t pos : d.coset) out.push_back(full[pos]);
        return out;
    }

    Column from_coords(int e, const std::vector<FieldElem>& v) const {
        const DegreeData& d = data(e);
        DegreeLayout layout(ring_, pres_.target(), e);
        std::vector<FieldElem> full(layout.total, FieldElem::zero(ring_.field()));
        for (std::size_t i = 0; i < v.size(); ++i) full[d.coset[i]] = v[i];
        return column_from_coords(ring_, pres_.target(), e, full);
    }

    /// Class of rep * a, as coset coordinates of degree e + deg a.
    std::vector<FieldElem> right_mul_coords(const Column& rep, int e,
                                            const AlgebraElement& a) const {
        Column out;
        for (std::size_t s = 0; s < rep.size(); ++s)
            out.push_back(rep[s].is_zero()
                              ? AlgebraElement::zero(ring_.algebra(),
                                                     std::max(0, e + a.degree() -
                                                                     pres_.target()[s]))
                              : ring_.mul(rep[s], a));
        return coords(out, e + a.degree());
    }

private:
    struct DegreeData {
        Subspace image;
        std::vector<std::size_t> coset;
        DegreeData(const FieldSpec& f, std::size_t n) : image(f, n) {}
    };

    Ring ring_;
    GradedMatrix pres_;
    mutable std::mutex mutex_;
    mutable std::map<int, DegreeData> cache_;

    const DegreeData& data(int e) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(e);
        if (it != cache_.end()) return it->second;
        DegreeLayout layout(ring_, pres_.target(), e);
        DegreeData d(ring_.field(), layout.total);
        FieldMatrix m = degreewise_map(ring_, pres_, e);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::vector<FieldElem> col(m.rows(), FieldElem::zero(ring_.field()));
            for (std::size_t r = 0; r < m.rows(); ++r) col[r] = m.at(r, c);
            d.image.add(col);
        }
        std::vector<bool> is_pivot(layout.total, false);
        for (std::size_t p : d.image.pivots()) is_pivot[p] = true;
        for (std::size_t p = 0; p < layout.total; ++p)
            if (!is_pivot[p]) d.coset.push_back(p);
        auto [pos, inserted] = cache_.emplace(e, std::move(d));
        (void)inserted;
        return pos->second;
    }
};

/// Basis of the space of degree-0 chain maps between two module
/// presentations over the same ring.
inline std::vector<ChainMapPair> graded_hom_space(const ModulePresentation& M,
                                                  const ModulePresentation& N) {
    if (!M.ring.same_context(N.ring)) throw MixedContexts();
    return chain_map_space(M.ring, M.matrix, N.matrix);
}

/// dim Ext^1 in internal degree 0 between Coker(M.matrix) and Coker(N.matrix),
/// computed from two minimal resolution steps of M.  Honest within the window:
/// resolution generators beyond N are flagged by minimal_resolution_window.
inline std::size_t graded_ext1_dim(const ModulePresentation& M, const ModulePresentation& N,
                                   int window) {
    if (!M.ring.same_context(N.ring)) throw MixedContexts();
    const Ring& ring = M.ring;
    ResolutionWindow res = minimal_resolution_window(M, 2, window);
    if (res.differentials.size() < 2) throw WindowTooSmall();
    const GradedMatrix& d1 = res.differentials[0];
    const GradedMatrix& d2 = res.differentials[1];

    QuotientModule NN(N.ring, N.matrix);

    // Hom(F_j, N)_0 = (+)_t N_{m_j[t]}
    auto hom_layout = [&](const ShiftVector& shifts) {
        std::vector<std::size_t> offsets;
        std::size_t total = 0;
        for (int m : shifts) {
            offsets.push_back(total);
            total += m < 0 ? 0 : NN.dim(m);
        }
        return std::make_pair(offsets, total);
    };
    auto [off0, tot0] = hom_layout(d1.target());
    auto [off1, tot1] = hom_layout(d1.source());
    auto [off2, tot2] = hom_layout(d2.source());

    // map Hom(F_j, N)_0 -> Hom(F_{j+1}, N)_0 : theta -> theta o d
    auto hom_map = [&](const GradedMatrix& d, const std::vector<std::size_t>& src_off,
                       std::size_t src_tot, const std::vector<std::size_t>& dst_off,
                       std::size_t dst_tot) {
        FieldMatrix m(ring.field(), dst_tot, src_tot);
        for (std::size_t t = 0; t < d.target().size(); ++t) {
            int deg = d.target()[t];
            std::size_t n = deg < 0 ? 0 : NN.dim(deg);
            for (std::size_t b = 0; b < n; ++b) {
                Column rep = NN.from_coords(deg, unit_vector(ring.field(), n, b));
                for (std::size_t u = 0; u < d.source().size(); ++u) {
                    if (d.at(t, u).is_zero()) continue;
                    std::vector<FieldElem> img = NN.right_mul_coords(rep, deg, d.at(t, u));
                    for (std::size_t i = 0; i < img.size(); ++i)
                        m.at(dst_off[u] + i, src_off[t] + b) += img[i];
                }
            }
        }
        return m;
    };

    FieldMatrix pre1 = hom_map(d1, off0, tot0, off1, tot1); // Hom(F0,N) -> Hom(F1,N)
    FieldMatrix pre2 = hom_map(d2, off1, tot1, off2, tot2); // Hom(F1,N) -> Hom(F2,N)

    std::size_t ker = pre2.cols() - pre2.rank();
    std::size_t im = pre1.rank();
    if (im > ker) throw DomainError("hom complex is not a complex; inconsistent input");
    return ker - im;
}

} // namespace ncmf
