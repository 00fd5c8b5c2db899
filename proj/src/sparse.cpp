#include "cellforce/sparse.hpp"

#include "cellforce/error.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace cellforce {

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> triplets) {
    for (const auto& t : triplets)
        if (t.row >= n || t.col >= n) fail(ErrorKind::Assembly, "triplet index out of range");
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(n + 1, 0);
    for (std::size_t k = 0; k < triplets.size();) {
        const std::size_t r = triplets[k].row;
        const std::size_t c = triplets[k].col;
        double sum = 0.0;
        for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k) sum += triplets[k].value;
        m.cols_.push_back(c);
        m.values_.push_back(sum);
        ++m.row_ptr_[r + 1];
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
    return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
    const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[cols_[k]];
        y[i] = s;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

double SparseMatrix::quadratic_form(std::span<const double> x) const {
    const auto y = multiply(x);
    return dot(x, y);
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
    return d;
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (const double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double SparseMatrix::asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            worst = std::max(worst, std::abs(values_[k] - at(cols_[k], i)));
    return worst;
}

SparseMatrix SparseMatrix::eliminate(const std::vector<char>& fixed) const {
    SparseMatrix m = *this;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const std::size_t j = cols_[k];
            if (fixed[i] || fixed[j]) m.values_[k] = (i == j) ? 1.0 : 0.0;
        }
    }
    return m;
}

void SparseMatrix::write_coordinate(std::ostream& os) const {
    os << "# " << n_ << ' ' << n_ << ' ' << values_.size() << '\n';
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            os << i << ' ' << cols_[k] << ' ' << fmt17(values_[k]) << '\n';
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (const double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace cellforce
