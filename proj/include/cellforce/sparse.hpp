#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace cellforce {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Square compressed-sparse-row matrix. Column indices are sorted within each row.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// Duplicate entries are summed in input order, so the result is bit-reproducible
    /// for a fixed triplet sequence.
    static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets);

    std::size_t size() const { return n_; }
    std::size_t nnz() const { return values_.size(); }
    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& cols() const { return cols_; }
    const std::vector<double>& values() const { return values_; }

    /// Entry (i, j); zero outside the sparsity pattern.
    double at(std::size_t i, std::size_t j) const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    double quadratic_form(std::span<const double> x) const;

    std::vector<double> diagonal() const;
    double max_abs() const;
    /// max |A_ij - A_ji| over the pattern.
    double asymmetry() const;

    /// Copy with rows and columns of `fixed` dofs zeroed and a unit diagonal.
    SparseMatrix eliminate(const std::vector<char>& fixed) const;

    /// "row col value" lines, zero-based, 17 significant digits.
    void write_coordinate(std::ostream& os) const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

}  // namespace cellforce
