#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "scalar.hpp"

namespace ncmf {

/// A word in the generators; letters are 0-based generator indices and the
/// order is significant (noncommutative).
using Word = std::vector<int>;

/**
 * A finitely presented graded algebra k<x_1..x_n>/I with all generators in
 * degree 1, where I is one of the two confluent shapes:
 *
 *   Skew: relations a_ij x_i x_j + x_j x_i for i<j (a_ij a_ji = 1), plus
 *         x_i^2 for i in the square-zero set.  Normal words are weakly
 *         increasing with no repeated square-zero index.
 *   Free: only the square rules x_i^2 = 0 for i in the square-zero set.
 *         Normal words have no adjacent repeat of a square-zero index.
 *
 * Instances are immutable after construction; the per-degree basis cache is
 * mutex-guarded so shared instances can be used from several threads.
 */
class PresentedAlgebra {
public:
    enum class Commutation { Skew, Free };

    PresentedAlgebra(FieldSpec field, int n, Commutation kind,
                     std::vector<std::vector<FieldElem>> alpha,
                     std::set<int> square_zero)
        : field_(field), n_(n), kind_(kind), alpha_(std::move(alpha)),
          square_zero_(std::move(square_zero)) {
        if (n_ <= 0) throw InputError("algebra needs at least one generator");
        for (int i : square_zero_)
            if (i < 0 || i >= n_) throw InputError("square_zero index out of range");
        if (kind_ == Commutation::Skew) {
            if (alpha_.size() != static_cast<std::size_t>(n_))
                throw InputError("alpha must be n x n");
            for (const auto& row : alpha_)
                if (row.size() != static_cast<std::size_t>(n_))
                    throw InputError("alpha must be n x n");
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) {
                    if (i == j) continue;
                    if (alpha_[i][j].spec() != field_) throw MixedFields();
                    if (alpha_[i][j].is_zero() ||
                        alpha_[i][j] * alpha_[j][i] != FieldElem::one(field_))
                        throw BadAlpha();
                }
        } else if (!alpha_.empty()) {
            throw InputError("free algebras carry no alpha matrix");
        }
    }

    const FieldSpec& field() const { return field_; }
    int generator_count() const { return n_; }
    Commutation commutation() const { return kind_; }
    bool is_skew() const { return kind_ == Commutation::Skew; }
    const std::set<int>& square_zero() const { return square_zero_; }
    bool square_is_zero(int i) const { return square_zero_.count(i) != 0; }

    const FieldElem& alpha(int i, int j) const { return alpha_[i][j]; }

    bool operator==(const PresentedAlgebra& o) const {
        if (field_ != o.field_ || n_ != o.n_ || kind_ != o.kind_ ||
            square_zero_ != o.square_zero_)
            return false;
        if (kind_ == Commutation::Skew)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    if (i != j && alpha_[i][j] != o.alpha_[i][j]) return false;
        return true;
    }
    bool operator!=(const PresentedAlgebra& o) const { return !(*this == o); }

    bool word_is_normal(const Word& w) const {
        if (kind_ == Commutation::Skew) {
            for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                if (w[k] > w[k + 1]) return false;
                if (w[k] == w[k + 1] && square_is_zero(w[k])) return false;
            }
            return true;
        }
        for (std::size_t k = 0; k + 1 < w.size(); ++k)
            if (w[k] == w[k + 1] && square_is_zero(w[k])) return false;
        return true;
    }

    /// Reduces a single word to (coefficient, normal word); nullopt when the
    /// word reduces to zero.  For Skew the coefficient collects one factor
    /// -a_ij per inversion, which is order-independent, so this matches any
    /// rewriting sequence.
    std::optional<std::pair<FieldElem, Word>> reduce_word(const Word& w) const {
        for (int l : w)
            if (l < 0 || l >= n_) throw InputError("generator index out of range");
        if (kind_ == Commutation::Free) {
            for (std::size_t k = 0; k + 1 < w.size(); ++k)
                if (w[k] == w[k + 1] && square_is_zero(w[k])) return std::nullopt;
            return std::make_pair(FieldElem::one(field_), w);
        }
        Word sorted = w;
        FieldElem coeff = FieldElem::one(field_);
        for (std::size_t k = 1; k < sorted.size(); ++k) {
            int letter = sorted[k];
            std::size_t pos = k;
            while (pos > 0 && sorted[pos - 1] > letter) {
                // x_j x_i -> -a_ij x_i x_j for j > i
                coeff *= -alpha_[letter][sorted[pos - 1]];
                sorted[pos] = sorted[pos - 1];
                --pos;
            }
            sorted[pos] = letter;
        }
        for (std::size_t k = 0; k + 1 < sorted.size(); ++k)
            if (sorted[k] == sorted[k + 1] && square_is_zero(sorted[k])) return std::nullopt;
        return std::make_pair(coeff, sorted);
    }

    /// Complete, duplicate-free, length-lex ordered list of normal words of
    /// length e.  Cached.
    const std::vector<Word>& basis_of_degree(int e) const {
        if (e < 0) throw InputError("degree must be nonnegative");
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = basis_cache_.find(e);
        if (it != basis_cache_.end()) return it->second;
        std::vector<Word> out;
        Word cur;
        enumerate(cur, e, out);
        auto [pos, inserted] = basis_cache_.emplace(e, std::move(out));
        (void)inserted;
        return pos->second;
    }

    std::size_t dim_of_degree(int e) const { return basis_of_degree(e).size(); }

    std::size_t basis_index(int e, const Word& w) const {
        const auto& basis = basis_of_degree(e);
        auto it = std::lower_bound(basis.begin(), basis.end(), w);
        if (it == basis.end() || *it != w)
            throw InputError("word is not in the normal basis of its degree");
        return static_cast<std::size_t>(it - basis.begin());
    }

private:
    FieldSpec field_;
    int n_;
    Commutation kind_;
    std::vector<std::vector<FieldElem>> alpha_; // Skew only; diagonal unused
    std::set<int> square_zero_;

    mutable std::mutex cache_mutex_;
    mutable std::map<int, std::vector<Word>> basis_cache_;

    void enumerate(Word& cur, int remaining, std::vector<Word>& out) const {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        int first = 0;
        if (kind_ == Commutation::Skew && !cur.empty()) first = cur.back();
        for (int l = first; l < n_; ++l) {
            if (!cur.empty() && cur.back() == l && square_is_zero(l)) continue;
            cur.push_back(l);
            enumerate(cur, remaining - 1, out);
            cur.pop_back();
        }
    }
};

using AlgebraPtr = std::shared_ptr<const PresentedAlgebra>;

inline AlgebraPtr make_skew_algebra(FieldSpec field, int n,
                                    std::vector<std::vector<FieldElem>> alpha,
                                    std::set<int> square_zero = {}) {
    return std::make_shared<PresentedAlgebra>(field, n, PresentedAlgebra::Commutation::Skew,
                                              std::move(alpha), std::move(square_zero));
}

inline AlgebraPtr make_free_algebra(FieldSpec field, int n, std::set<int> square_zero) {
    return std::make_shared<PresentedAlgebra>(field, n, PresentedAlgebra::Commutation::Free,
                                              std::vector<std::vector<FieldElem>>{},
                                              std::move(square_zero));
}

/// Skew matrix with all entries lambda (useful: lambda = -1 gives the
/// commutative polynomial algebra, +1 the exterior-type sign convention).
inline std::vector<std::vector<FieldElem>> constant_alpha(const FieldSpec&, int n,
                                                          const FieldElem& value) {
    return std::vector<std::vector<FieldElem>>(n, std::vector<FieldElem>(n, value));
}

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Homogeneous element: a map from normal words to nonzero coefficients, all
/// words of length = degree.  The zero element keeps a nominal degree for
/// shift bookkeeping.
class AlgebraElement {
public:
    AlgebraElement() = default;

    AlgebraElement(AlgebraPtr algebra, int degree)
        : algebra_(std::move(algebra)), degree_(degree) {}

    static AlgebraElement zero(AlgebraPtr algebra, int degree) {
        return AlgebraElement(std::move(algebra), degree);
    }

    static AlgebraElement unit(AlgebraPtr algebra) {
        AlgebraElement e(algebra, 0);
        e.terms_.emplace(Word{}, FieldElem::one(algebra->field()));
        return e;
    }

    static AlgebraElement generator(AlgebraPtr algebra, int i) {
        if (i < 0 || i >= algebra->generator_count())
            throw InputError("generator index out of range");
        AlgebraElement e(algebra, 1);
        e.terms_.emplace(Word{i}, FieldElem::one(algebra->field()));
        return e;
    }

    static AlgebraElement scalar(AlgebraPtr algebra, const FieldElem& c) {
        AlgebraElement e(algebra, 0);
        if (!c.is_zero()) e.terms_.emplace(Word{}, c);
        return e;
    }

    const AlgebraPtr& algebra() const { return algebra_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Word, FieldElem>& terms() const { return terms_; }

    bool is_scalar() const {
        return terms_.empty() || (degree_ == 0);
    }

    FieldElem scalar_value() const {
        if (terms_.empty()) return FieldElem::zero(algebra_->field());
        return terms_.begin()->second;
    }

    void add_term(const FieldElem& coeff, const Word& w) {
        if (static_cast<int>(w.size()) != degree_) throw InhomogeneousInput();
        if (coeff.is_zero()) return;
        auto reduced = algebra_->reduce_word(w);
        if (!reduced) return;
        accumulate(coeff * reduced->first, reduced->second);
    }

    AlgebraElement operator+(const AlgebraElement& o) const {
        require_same(o);
        if (is_zero()) return o.is_zero() ? *this : o;
        if (o.is_zero()) return *this;
        if (degree_ != o.degree_) throw InhomogeneousInput();
        AlgebraElement out(*this);
        for (const auto& [w, c] : o.terms_) out.accumulate(c, w);
        return out;
    }

    AlgebraElement operator-(const AlgebraElement& o) const { return *this + (-o); }

    AlgebraElement operator-() const {
        AlgebraElement out(*this);
        for (auto& [w, c] : out.terms_) c = -c;
        return out;
    }

    AlgebraElement operator*(const FieldElem& c) const {
        AlgebraElement out(algebra_, degree_);
        if (c.is_zero()) return out;
        for (const auto& [w, coeff] : terms_) out.terms_.emplace(w, coeff * c);
        return out;
    }

    AlgebraElement operator*(const AlgebraElement& o) const {
        require_same(o);
        AlgebraElement out(algebra_, degree_ + o.degree_);
        for (const auto& [wa, ca] : terms_)
            for (const auto& [wb, cb] : o.terms_) {
                Word w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                auto reduced = algebra_->reduce_word(w);
                if (!reduced) continue;
                out.accumulate(ca * cb * reduced->first, reduced->second);
            }
        return out;
    }

    bool operator==(const AlgebraElement& o) const {
        if (!same_algebra(algebra_, o.algebra_)) return false;
        if (is_zero() && o.is_zero()) return true;
        return degree_ == o.degree_ && terms_ == o.terms_;
    }
    bool operator!=(const AlgebraElement& o) const { return !(*this == o); }

    FieldElem coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? FieldElem::zero(algebra_->field()) : it->second;
    }

    /// Coordinates in the canonical basis of this degree.
    std::vector<FieldElem> coords() const {
        const auto& basis = algebra_->basis_of_degree(degree_);
        std::vector<FieldElem> v(basis.size(), FieldElem::zero(algebra_->field()));
        for (const auto& [w, c] : terms_) v[algebra_->basis_index(degree_, w)] = c;
        return v;
    }

    static AlgebraElement from_coords(const AlgebraPtr& algebra, int degree,
                                      const std::vector<FieldElem>& v) {
        const auto& basis = algebra->basis_of_degree(degree);
        if (v.size() != basis.size()) throw InputError("coordinate size mismatch");
        AlgebraElement e(algebra, degree);
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (!v[i].is_zero()) e.terms_.emplace(basis[i], v[i]);
        return e;
    }

    /// `c1*w1 + c2*w2 + ...` with words as `x1*x2^2` factors; canonical and
    /// parseable by the polynomial grammar.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [w, c] : terms_) {
            FieldElem coeff = c;
            const FieldSpec& spec = coeff.spec();
            bool negative = false;
            if (spec.is_rationals() && coeff.canonical_less(FieldElem::zero(spec))) {
                negative = true;
                coeff = -coeff;
            }
            if (first) {
                if (negative) out += "-";
                first = false;
            } else {
                out += negative ? " - " : " + ";
            }
            std::string word_part = word_str(w);
            if (word_part.empty()) {
                out += coeff.str();
            } else if (coeff.is_one()) {
                out += word_part;
            } else {
                out += coeff.str() + "*" + word_part;
            }
        }
        return out;
    }

    static std::string word_str(const Word& w) {
        std::string out;
        std::size_t k = 0;
        while (k < w.size()) {
            std::size_t run = k;
            while (run < w.size() && w[run] == w[k]) ++run;
            if (!out.empty()) out += "*";
            out += "x" + std::to_string(w[k] + 1);
            if (run - k > 1) out += "^" + std::to_string(run - k);
            k = run;
        }
        return out;
    }

private:
    AlgebraPtr algebra_;
    int degree_ = 0;
    std::map<Word, FieldElem> terms_;

    void require_same(const AlgebraElement& o) const {
        if (!same_algebra(algebra_, o.algebra_)) throw MixedAlgebras();
    }

    void accumulate(const FieldElem& coeff, const Word& w) {
        if (coeff.is_zero()) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, coeff);
        } else {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
};

inline AlgebraElement operator*(const FieldElem& c, const AlgebraElement& e) { return e * c; }

/// Reduces a formal sum of (coefficient, word) pairs.  All words must have
/// equal length (homogeneous input).
inline AlgebraElement normal_form(const AlgebraPtr& algebra,
                                  const std::vector<std::pair<FieldElem, Word>>& sum) {
    if (sum.empty()) return AlgebraElement::zero(algebra, 0);
    int degree = static_cast<int>(sum.front().second.size());
    for (const auto& [c, w] : sum)
        if (static_cast<int>(w.size()) != degree) throw InhomogeneousInput();
    AlgebraElement out(algebra, degree);
    for (const auto& [c, w] : sum) out.add_term(c, w);
    return out;
}

/// Graded algebra automorphism, linear on generators:
/// sigma(x_j) = sum_k M(k,j) x_k.  Construction verifies invertibility and
/// that every defining relation is preserved.
class GradedAutomorphism {
public:
    GradedAutomorphism(AlgebraPtr algebra, FieldMatrix matrix)
        : algebra_(std::move(algebra)), matrix_(std::move(matrix)) {
        const int n = algebra_->generator_count();
        if (matrix_.rows() != static_cast<std::size_t>(n) ||
            matrix_.cols() != static_cast<std::size_t>(n))
            throw InputError("automorphism matrix must be n x n");
        auto inv = matrix_.inverse();
        if (!inv) throw RelationNotPreserved();
        inverse_matrix_ = *inv;
        check_relations();
    }

    static GradedAutomorphism identity(const AlgebraPtr& algebra) {
        return GradedAutomorphism(
            algebra, FieldMatrix::identity(algebra->field(), algebra->generator_count()));
    }

    static GradedAutomorphism diagonal(const AlgebraPtr& algebra,
                                       const std::vector<FieldElem>& entries) {
        const int n = algebra->generator_count();
        if (entries.size() != static_cast<std::size_t>(n))
            throw InputError("diagonal needs n entries");
        FieldMatrix m(algebra->field(), n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = entries[i];
        return GradedAutomorphism(algebra, m);
    }

    const AlgebraPtr& algebra() const { return algebra_; }
    const FieldMatrix& matrix() const { return matrix_; }

    bool is_identity() const {
        return matrix_ == FieldMatrix::identity(algebra_->field(), algebra_->generator_count());
    }

    AlgebraElement image_of_generator(int j) const {
        AlgebraElement e(algebra_, 1);
        for (int k = 0; k < algebra_->generator_count(); ++k)
            e.add_term(matrix_.at(k, j), Word{k});
        return e;
    }

    AlgebraElement apply(const AlgebraElement& a) const {
        if (!same_algebra(algebra_, a.algebra())) throw MixedAlgebras();
        AlgebraElement out(algebra_, a.degree());
        for (const auto& [w, c] : a.terms()) {
            AlgebraElement term = AlgebraElement::scalar(algebra_, c);
            for (int letter : w) term = term * image_of_generator(letter);
            out = out + term;
        }
        return out;
    }

    GradedAutomorphism compose(const GradedAutomorphism& o) const { // this after o
        if (!same_algebra(algebra_, o.algebra_)) throw MixedAlgebras();
        return GradedAutomorphism(algebra_, matrix_ * o.matrix_);
    }

    GradedAutomorphism inverse() const { return GradedAutomorphism(algebra_, inverse_matrix_); }

    /// sigma^j for any integer j.
    GradedAutomorphism power(int j) const {
        FieldMatrix acc = FieldMatrix::identity(algebra_->field(), matrix_.rows());
        const FieldMatrix& base = j >= 0 ? matrix_ : inverse_matrix_;
        for (int k = 0; k < std::abs(j); ++k) acc = acc * base;
        return GradedAutomorphism(algebra_, acc);
    }

    /// Least m in [1, max_bound] with sigma^m = id, if any.
    std::optional<int> order(int max_bound) const {
        FieldMatrix acc = matrix_;
        FieldMatrix id = FieldMatrix::identity(algebra_->field(), matrix_.rows());
        for (int m = 1; m <= max_bound; ++m) {
            if (acc == id) return m;
            acc = acc * matrix_;
        }
        return std::nullopt;
    }

    bool operator==(const GradedAutomorphism& o) const {
        return same_algebra(algebra_, o.algebra_) && matrix_ == o.matrix_;
    }

private:
    AlgebraPtr algebra_;
    FieldMatrix matrix_;
    FieldMatrix inverse_matrix_;

    void check_relations() const {
        const int n = algebra_->generator_count();
        auto img = [&](int j) { return image_of_generator(j); };
        if (algebra_->is_skew()) {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    AlgebraElement rel =
                        img(i) * img(j) * algebra_->alpha(i, j) + img(j) * img(i);
                    if (!rel.is_zero()) throw RelationNotPreserved();
                }
        }
        for (int i : algebra_->square_zero()) {
            AlgebraElement sq = img(i) * img(i);
            if (!sq.is_zero()) throw RelationNotPreserved();
        }
    }
};

inline AlgebraElement apply_automorphism(const GradedAutomorphism& sigma,
                                         const AlgebraElement& a) {
    return sigma.apply(a);
}

inline std::vector<FieldElem> unit_vector(const FieldSpec& field, std::size_t n,
                                          std::size_t j) {
    std::vector<FieldElem> v(n, FieldElem::zero(field));
    v[j] = FieldElem::one(field);
    return v;
}

/// True iff left- and right-multiplication by f are injective S_e -> S_{e+d}
/// for every e <= N.
inline bool is_regular_window(const AlgebraPtr& A, const AlgebraElement& f, int N) {
    if (f.is_zero()) return false;
    const FieldSpec& field = A->field();
    const int d = f.degree();
    for (int e = 0; e <= N; ++e) {
        const auto& src = A->basis_of_degree(e);
        const auto& dst = A->basis_of_degree(e + d);
        if (src.empty()) continue;
        FieldMatrix left(field, dst.size(), src.size());
        FieldMatrix right(field, dst.size(), src.size());
        for (std::size_t j = 0; j < src.size(); ++j) {
            AlgebraElement u = AlgebraElement::from_coords(
                A, e, unit_vector(field, src.size(), j));
            std::vector<FieldElem> lv = (f * u).coords();
            std::vector<FieldElem> rv = (u * f).coords();
            for (std::size_t i = 0; i < dst.size(); ++i) {
                left.at(i, j) = lv[i];
                right.at(i, j) = rv[i];
            }
        }
        if (left.rank() != src.size() || right.rank() != src.size()) return false;
    }
    return true;
}

/// A regular normal element together with its normalizing automorphism:
/// a*f = f*nu(a) for all a, certified regular on [0, window].
struct NormalElement {
    AlgebraElement f;
    int degree = 0;
    GradedAutomorphism nu;
    int certified_window = 0;
};

/// Solves x_j * f = f * (sum_k c_jk x_k) for every generator and assembles
/// nu = (c_jk); throws NotNormal when the system has no solution or the
/// resulting matrix is singular / breaks a relation, NotRegularInWindow when
/// the windowed regularity certificate fails.
inline NormalElement normalizing_automorphism(const AlgebraPtr& A, const AlgebraElement& f,
                                              int window) {
    if (f.is_zero() || f.degree() < 1)
        throw InputError("normal element must be nonzero of degree >= 1");
    const FieldSpec& field = A->field();
    const int n = A->generator_count();
    const int d = f.degree();
    const auto& target = A->basis_of_degree(d + 1);

    FieldMatrix W(field, target.size(), n);
    for (int k = 0; k < n; ++k) {
        std::vector<FieldElem> col = (f * AlgebraElement::generator(A, k)).coords();
        for (std::size_t i = 0; i < target.size(); ++i) W.at(i, k) = col[i];
    }
    FieldMatrix C(field, n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<FieldElem> rhs = (AlgebraElement::generator(A, j) * f).coords();
        auto sol = W.solve(rhs);
        if (!sol) throw NotNormal();
        for (int k = 0; k < n; ++k) C.at(k, j) = sol->first[k];
    }
    if (!C.inverse()) throw NotNormal();
    std::optional<GradedAutomorphism> nu;
    try {
        nu.emplace(A, C);
    } catch (const RelationNotPreserved&) {
        throw NotNormal();
    }
    for (int j = 0; j < n; ++j) {
        AlgebraElement lhs = AlgebraElement::generator(A, j) * f;
        AlgebraElement rhs = f * nu->apply(AlgebraElement::generator(A, j));
        if (lhs != rhs) throw NotNormal();
    }
    if (!is_regular_window(A, f, window)) throw NotRegularInWindow();
    return NormalElement{f, d, *nu, window};
}

/// Truncated Hilbert function dim_k S_e for e = 0..N.
struct HilbertWindow {
    std::vector<std::size_t> dims;

    bool operator==(const HilbertWindow& o) const { return dims == o.dims; }
};

inline HilbertWindow hilbert_window(const AlgebraPtr& A, int N) {
    HilbertWindow h;
    for (int e = 0; e <= N; ++e) h.dims.push_back(A->dim_of_degree(e));
    return h;
}

/// Per-degree spanning set of the two-sided ideal (f) inside S_e, as a
/// reduced subspace of the degree-e coordinate space.
inline Subspace ideal_span(const AlgebraPtr& A, const AlgebraElement& f, int e) {
    const FieldSpec& field = A->field();
    Subspace span(field, A->dim_of_degree(e));
    if (f.is_zero()) return span;
    const int d = f.degree();
    if (e < d) return span;
    for (int i = 0; i + d <= e; ++i) {
        int j = e - d - i;
        for (const Word& u : A->basis_of_degree(i)) {
            AlgebraElement ue = normal_form(A, {{FieldElem::one(field), u}});
            AlgebraElement uf = ue * f;
            if (uf.is_zero()) continue;
            for (const Word& v : A->basis_of_degree(j)) {
                AlgebraElement ufv = uf * normal_form(A, {{FieldElem::one(field), v}});
                if (!ufv.is_zero()) span.add(ufv.coords());
            }
        }
    }
    return span;
}

inline HilbertWindow quotient_hilbert_window(const AlgebraPtr& A, const AlgebraElement& f,
                                             int N) {
    HilbertWindow h;
    for (int e = 0; e <= N; ++e)
        h.dims.push_back(A->dim_of_degree(e) - ideal_span(A, f, e).dim());
    return h;
}

/// Opposite algebra plus the word-reversal anti-isomorphism.
struct OppositeAlgebra {
    AlgebraPtr algebra;

    AlgebraElement reverse(const AlgebraElement& a) const {
        AlgebraElement out(algebra, a.degree());
        for (const auto& [w, c] : a.terms()) {
            Word r(w.rbegin(), w.rend());
            out.add_term(c, r);
        }
        return out;
    }
};

inline OppositeAlgebra opposite_algebra(const AlgebraPtr& A) {
    if (!A->is_skew()) return {make_free_algebra(A->field(), A->generator_count(),
                                                 A->square_zero())};
    const int n = A->generator_count();
    std::vector<std::vector<FieldElem>> alpha_op(n,
        std::vector<FieldElem>(n, FieldElem::zero(A->field())));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) alpha_op[i][j] = A->alpha(j, i);
    return {make_skew_algebra(A->field(), n, std::move(alpha_op), A->square_zero())};
}

/// Span of the quadratic relations inside V (x) V, coordinates indexed by
/// x_i x_j at position i*n+j, rows in reduced echelon form.
inline FieldMatrix quadratic_relation_rows(const AlgebraPtr& A) {
    const int n = A->generator_count();
    const FieldSpec& field = A->field();
    std::vector<std::vector<FieldElem>> rows;
    auto zero_row = [&] { return std::vector<FieldElem>(n * n, FieldElem::zero(field)); };
    if (A->is_skew()) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                auto r = zero_row();
                r[i * n + j] = A->alpha(i, j);
                r[j * n + i] = FieldElem::one(field);
                rows.push_back(std::move(r));
            }
    }
    for (int i : A->square_zero()) {
        auto r = zero_row();
        r[i * n + i] = FieldElem::one(field);
        rows.push_back(std::move(r));
    }
    FieldMatrix m(field, rows.size(), n * n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < n * n; ++j) m.at(i, j) = rows[i][j];
    m.rref();
    return m;
}

/// Orthogonal complement of a row space under the dual-basis pairing,
/// returned as canonical (rref) rows.
inline FieldMatrix orthogonal_complement(const FieldMatrix& rows) {
    auto null_basis = rows.nullspace();
    FieldMatrix out(rows.spec(), null_basis.size(), rows.cols());
    for (std::size_t i = 0; i < null_basis.size(); ++i)
        for (std::size_t j = 0; j < rows.cols(); ++j) out.at(i, j) = null_basis[i][j];
    out.rref();
    return out;
}

/// Result of the quadratic dual: the raw orthogonal relations always, and a
/// PresentedAlgebra whenever they match the representable Skew/Free shape.
struct QuadraticDual {
    std::optional<AlgebraPtr> algebra;
    FieldMatrix relations; // R-perp, canonical rows
};

inline QuadraticDual quadratic_dual(const AlgebraPtr& A) {
    const int n = A->generator_count();
    const FieldSpec& field = A->field();
    QuadraticDual out{std::nullopt, orthogonal_complement(quadratic_relation_rows(A))};
    if (A->is_skew()) {
        // blockwise: dual relation in block (i,j) is x_i x_j - a_ij x_j x_i,
        // i.e. Skew with a'_ij = -a_ji; squares swap to the complement.
        std::vector<std::vector<FieldElem>> alpha_dual(
            n, std::vector<FieldElem>(n, FieldElem::zero(field)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) alpha_dual[i][j] = -A->alpha(j, i);
        std::set<int> squares;
        for (int i = 0; i < n; ++i)
            if (!A->square_is_zero(i)) squares.insert(i);
        out.algebra = make_skew_algebra(field, n, std::move(alpha_dual), std::move(squares));
    } else if (A->square_zero().size() == static_cast<std::size_t>(0) && n == 1) {
        out.algebra = make_free_algebra(field, 1, {0});
    } else if (n == 1) {
        // k<x>/(x^2) dualizes to k[x]-in-one-variable only as Free with no square
        if (A->square_is_zero(0)) out.algebra = make_free_algebra(field, 1, {});
    }
    return out;
}

} // namespace ncmf
