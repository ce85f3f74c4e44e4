#pragma once
// Exact integer / rational linear algebra on top of GMP.
#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bk {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Thrown for every domain error in the library; `kind` is a stable tag
// (NotSaturated, NotSharp, ...) that the CLI maps to diagnostics.
struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg)
        : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

template <class T>
struct Mat {
    std::size_t r = 0, c = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : r(rows), c(cols), a(rows * cols) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static Mat from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
        Mat m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw Error("DimensionMismatch", "ragged row");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    T& operator()(std::size_t i, std::size_t j) { return a[i * c + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * c + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a.begin() + i * c, a.begin() + (i + 1) * c);
    }
    std::vector<std::vector<T>> rows() const {
        std::vector<std::vector<T>> out;
        for (std::size_t i = 0; i < r; ++i) out.push_back(row(i));
        return out;
    }
    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < c; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < r; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }
    Mat transpose() const {
        Mat t(c, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    bool operator==(const Mat& o) const { return r == o.r && c == o.c && a == o.a; }
    bool operator!=(const Mat& o) const { return !(*this == o); }
    bool operator<(const Mat& o) const {
        if (r != o.r) return r < o.r;
        if (c != o.c) return c < o.c;
        return a < o.a;
    }
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
    if (x.c != y.r) throw Error("DimensionMismatch", "matrix product");
    Mat<T> z(x.r, y.c);
    for (std::size_t i = 0; i < x.r; ++i)
        for (std::size_t k = 0; k < x.c; ++k) {
            if (x(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.c; ++j) z(i, j) += x(i, k) * y(k, j);
        }
    return z;
}

// Row vector times matrix: the library-wide convention is v ↦ v·A, so row
// index = input coordinate and column index = output coordinate.
template <class T>
std::vector<T> operator*(const std::vector<T>& v, const Mat<T>& m) {
    if (v.size() != m.r) throw Error("DimensionMismatch", "vector-matrix product");
    std::vector<T> out(m.c);
    for (std::size_t i = 0; i < m.r; ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.c; ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

template <class T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
    if (x.size() != y.size()) throw Error("DimensionMismatch", "dot product");
    T s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

IntVec add(const IntVec& x, const IntVec& y);
IntVec sub(const IntVec& x, const IntVec& y);
IntVec scale(const IntVec& x, const Int& k);
bool is_zero(const IntVec& v);
RatVec to_rat(const IntVec& v);
RatMat to_rat(const IntMat& m);
IntMat stack(const std::vector<IntVec>& rows, std::size_t cols);
// Clears denominators and divides by the content; sign preserved.
IntVec integral_multiple(const RatVec& v);
std::string to_string(const IntVec& v);

// v / gcd(v). Throws ZeroVector on v = 0.
IntVec primitive(const IntVec& v);

struct HNF {
    IntMat H, U;  // U·m = H, det U = ±1
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};
// Row-style Hermite form: echelon, positive pivots, entries above a pivot
// reduced into [0, pivot).
HNF hermite_normal_form(const IntMat& m);

struct SNF {
    IntMat U, D, V;  // U·m·V = D, d1 | d2 | ...
};
SNF smith_normal_form(const IntMat& m);

// Lattice basis of {v integral : v·m = 0}, in Hermite form.
std::vector<IntVec> saturated_kernel(const IntMat& m);

std::size_t rank(const IntMat& m);
std::size_t rank(const std::vector<IntVec>& rows, std::size_t cols);
Int determinant(const IntMat& m);
std::optional<RatMat> inverse(const RatMat& m);
// Some x with x·m = b, if one exists.
std::optional<RatVec> solve_left(const RatMat& m, const RatVec& b);

struct LPResult {
    bool feasible = false;
    RatVec witness;
};
// Finds x with strict_i·x > 0, zero_i·x = 0, nonneg_i·x ≥ 0.
// Fourier–Motzkin up to dimension 8, exact simplex above.
LPResult lp_feasible(const std::vector<RatVec>& strict, const std::vector<RatVec>& zero,
                     const std::vector<RatVec>& nonneg, std::size_t dim);

// Direct access to the two engines, for cross-checking.
LPResult lp_feasible_fm(const std::vector<RatVec>& strict, const std::vector<RatVec>& zero,
                        const std::vector<RatVec>& nonneg, std::size_t dim);
LPResult lp_feasible_simplex(const std::vector<RatVec>& strict, const std::vector<RatVec>& zero,
                             const std::vector<RatVec>& nonneg, std::size_t dim);

}  // namespace bk
