#pragma once

#include "valgebra/scalar.hpp"

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace valgebra {

template <class S>
using Vec = std::vector<S>;

template <class S>
using Mat = std::vector<std::vector<S>>; // row-major

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
    assert(a.size() == b.size());
    S acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

template <class S>
Vec<S> vadd(const Vec<S>& a, const Vec<S>& b) {
    Vec<S> r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

template <class S>
Vec<S> vsub(const Vec<S>& a, const Vec<S>& b) {
    Vec<S> r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

template <class S>
Vec<S> vscale(const S& c, const Vec<S>& a) {
    Vec<S> r(a);
    for (auto& x : r) x *= c;
    return r;
}

template <class S>
Vec<S> vneg(const Vec<S>& a) {
    Vec<S> r(a);
    for (auto& x : r) x = -x;
    return r;
}

template <class S>
int lex_compare(const Vec<S>& a, const Vec<S>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

template <class S>
Vec<S> mat_apply(const Mat<S>& m, const Vec<S>& v) {
    Vec<S> r(m.size(), S(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
    return r;
}

template <class S>
Mat<S> mat_mul(const Mat<S>& a, const Mat<S>& b) {
    std::size_t n = a.size(), m = b[0].size(), k = b.size();
    Mat<S> r(n, Vec<S>(m, S(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    return r;
}

template <class S>
Mat<S> mat_identity(std::size_t n) {
    Mat<S> r(n, Vec<S>(n, S(0)));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = S(1);
    return r;
}

// Determinant by Gaussian elimination with division (exact for Rational since
// the field is closed under division; partial pivoting in float mode).
template <class S>
S determinant(Mat<S> m) {
    std::size_t n = m.size();
    S det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        if constexpr (scalar_traits<S>::exact) {
            while (piv < n && m[piv][col] == S(0)) ++piv;
            if (piv == n) return S(0);
        } else {
            for (std::size_t r = col + 1; r < n; ++r)
                if (scalar_abs(m[r][col]) > scalar_abs(m[piv][col])) piv = r;
            if (m[piv][col] == S(0)) return S(0);
        }
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == S(0)) continue;
            S f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

// Solves m x = rhs; throws on a singular system.
template <class S>
Vec<S> solve_linear(Mat<S> m, Vec<S> rhs) {
    std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (scalar_abs(m[r][col]) > scalar_abs(m[piv][col])) piv = r;
        if (m[piv][col] == S(0)) throw std::domain_error("solve_linear: singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == S(0)) continue;
            S f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    Vec<S> x(n, S(0));
    for (std::size_t i = n; i-- > 0;) {
        S acc = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return x;
}

template <class S>
Mat<S> mat_inverse(const Mat<S>& m) {
    std::size_t n = m.size();
    Mat<S> inv(n, Vec<S>(n));
    for (std::size_t j = 0; j < n; ++j) {
        Vec<S> e(n, S(0));
        e[j] = S(1);
        Vec<S> col = solve_linear(m, e);
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

// Rank via row reduction; float mode uses a relative threshold.
template <class S>
std::size_t mat_rank(Mat<S> m, double tol = 1e-10) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), rank = 0;
    S scale(0);
    for (auto& row : m)
        for (auto& x : row)
            if (scalar_abs(x) > scale) scale = scalar_abs(x);
    if (scale == S(0)) return 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        for (std::size_t r = rank + 1; r < rows; ++r)
            if (scalar_abs(m[r][col]) > scalar_abs(m[piv][col])) piv = r;
        bool zero;
        if constexpr (scalar_traits<S>::exact)
            zero = (m[piv][col] == S(0));
        else
            zero = (to_double(scalar_abs(m[piv][col])) <= tol * to_double(scale));
        if (zero) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][col] == S(0)) continue;
            S f = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

} // namespace valgebra
