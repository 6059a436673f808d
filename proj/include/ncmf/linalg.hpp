#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "scalar.hpp"

namespace ncmf {

/// Dense matrix over a FieldSpec.  Sizes here are small (per-degree pieces of
/// graded maps), so plain Gauss-Jordan is all we need.
class FieldMatrix {
public:
    FieldMatrix() = default;

    FieldMatrix(const FieldSpec& spec, std::size_t rows, std::size_t cols)
        : spec_(spec), rows_(rows), cols_(cols),
          data_(rows * cols, FieldElem::zero(spec)) {}

    static FieldMatrix identity(const FieldSpec& spec, std::size_t n) {
        FieldMatrix m(spec, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElem::one(spec);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldSpec& spec() const { return spec_; }

    FieldElem& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const FieldElem& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const FieldMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    FieldMatrix operator*(const FieldMatrix& o) const {
        assert(cols_ == o.rows_);
        FieldMatrix out(spec_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const FieldElem& a = at(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    out.at(i, j) += a * o.at(k, j);
            }
        return out;
    }

    std::vector<FieldElem> apply(const std::vector<FieldElem>& v) const {
        assert(v.size() == cols_);
        std::vector<FieldElem> out(rows_, FieldElem::zero(spec_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero()) out[i] += at(i, j) * v[j];
        return out;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && at(sel, col).is_zero()) ++sel;
            if (sel == rows_) continue;
            if (sel != row)
                for (std::size_t j = 0; j < cols_; ++j) std::swap(at(sel, j), at(row, j));
            FieldElem inv = at(row, col).inverse();
            for (std::size_t j = col; j < cols_; ++j) at(row, j) *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == row || at(i, col).is_zero()) continue;
                FieldElem factor = at(i, col);
                for (std::size_t j = col; j < cols_; ++j)
                    at(i, j) -= factor * at(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        FieldMatrix copy = *this;
        return copy.rref().size();
    }

    /// Basis of the right nullspace, one vector per non-pivot column, in
    /// canonical (rref) form.
    std::vector<std::vector<FieldElem>> nullspace() const {
        FieldMatrix copy = *this;
        std::vector<std::size_t> pivots = copy.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t c : pivots) is_pivot[c] = true;
        std::vector<std::vector<FieldElem>> basis;
        for (std::size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<FieldElem> v(cols_, FieldElem::zero(spec_));
            v[free] = FieldElem::one(spec_);
            for (std::size_t pi = 0; pi < pivots.size(); ++pi)
                v[pivots[pi]] = -copy.at(pi, free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    /// One solution of Ax = b, plus a uniqueness flag; nullopt when
    /// inconsistent.
    std::optional<std::pair<std::vector<FieldElem>, bool>>
    solve(const std::vector<FieldElem>& b) const {
        assert(b.size() == rows_);
        FieldMatrix aug(spec_, rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[i];
        }
        std::vector<std::size_t> pivots = aug.rref();
        if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
        std::vector<FieldElem> x(cols_, FieldElem::zero(spec_));
        for (std::size_t pi = 0; pi < pivots.size(); ++pi)
            x[pivots[pi]] = aug.at(pi, cols_);
        bool unique = pivots.size() == cols_;
        return std::make_pair(std::move(x), unique);
    }

    std::optional<FieldMatrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        FieldMatrix aug(spec_, rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = FieldElem::one(spec_);
        }
        if (aug.rref().size() != rows_) return std::nullopt;
        FieldMatrix inv(spec_, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
        return inv;
    }

private:
    FieldSpec spec_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElem> data_;
};

/// Row-reduced spanning structure for a subspace of k^dim; supports membership
/// tests, canonical reduction modulo the subspace, and incremental extension.
class Subspace {
public:
    Subspace(const FieldSpec& spec, std::size_t dim) : spec_(spec), dim_(dim) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t ambient_dim() const { return dim_; }
    const std::vector<std::size_t>& pivots() const { return pivot_cols_; }

    /// Reduces v modulo the subspace; result has zeros in all pivot columns.
    std::vector<FieldElem> reduce(std::vector<FieldElem> v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const FieldElem& c = v[pivot_cols_[i]];
            if (c.is_zero()) continue;
            FieldElem factor = c;
            for (std::size_t j = 0; j < dim_; ++j)
                if (!rows_[i][j].is_zero()) v[j] -= factor * rows_[i][j];
        }
        return v;
    }

    bool contains(const std::vector<FieldElem>& v) const {
        std::vector<FieldElem> r = reduce(v);
        for (const auto& c : r)
            if (!c.is_zero()) return false;
        return true;
    }

    /// Adds v to the span; returns false if v was already in the span.
    bool add(std::vector<FieldElem> v) {
        v = reduce(std::move(v));
        std::size_t pivot = dim_;
        for (std::size_t j = 0; j < dim_; ++j)
            if (!v[j].is_zero()) { pivot = j; break; }
        if (pivot == dim_) return false;
        FieldElem inv = v[pivot].inverse();
        for (auto& c : v) c *= inv;
        // keep existing rows reduced against the new one
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            FieldElem factor = rows_[i][pivot];
            if (factor.is_zero()) continue;
            for (std::size_t j = 0; j < dim_; ++j)
                rows_[i][j] -= factor * v[j];
        }
        std::size_t pos = 0;
        while (pos < pivot_cols_.size() && pivot_cols_[pos] < pivot) ++pos;
        pivot_cols_.insert(pivot_cols_.begin() + pos, pivot);
        rows_.insert(rows_.begin() + pos, std::move(v));
        return true;
    }

private:
    FieldSpec spec_;
    std::size_t dim_;
    std::vector<std::vector<FieldElem>> rows_; // rref rows, sorted by pivot
    std::vector<std::size_t> pivot_cols_;
};

} // namespace ncmf
