#pragma once

#include "valgebra/linear_map.hpp"
#include "valgebra/polytope.hpp"

#include <cstdint>

namespace valgebra {

/// Small deterministic generator (splitmix64 core). Sequences depend only on
/// the seed, never on the platform, which the reproducibility contract of the
/// verify suite relies on.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Rng fork() { return Rng(next_u64()); }

  private:
    std::uint64_t state_;
};

template <class S>
S random_coord(Rng& rng, double lo, double hi, long denom = 64) {
    if constexpr (scalar_traits<S>::exact) {
        long lo_i = static_cast<long>(lo * denom), hi_i = static_cast<long>(hi * denom);
        return Rational(lo_i + static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(hi_i - lo_i + 1)), denom);
    } else {
        return rng.uniform(lo, hi);
    }
}

/// Random polytope: hull of `nverts` points in [-scale, scale]^dim. Exact mode
/// snaps coordinates to a small-denominator grid to keep hull arithmetic fast.
template <class S>
Polytope<S> random_polytope(Rng& rng, int dim, int nverts, double scale = 1.0) {
    std::vector<Vec<S>> pts;
    pts.reserve(nverts);
    for (int i = 0; i < nverts; ++i) {
        Vec<S> p(dim);
        for (int j = 0; j < dim; ++j) p[j] = random_coord<S>(rng, -scale, scale);
        pts.push_back(std::move(p));
    }
    return Polytope<S>(dim, std::move(pts));
}

/// Random full-dimensional polytope (resamples until the hull has full rank).
template <class S>
Polytope<S> random_body(Rng& rng, int dim, int nverts, double scale = 1.0) {
    for (;;) {
        Polytope<S> p = random_polytope<S>(rng, dim, nverts, scale);
        if (p.full_dimensional()) return p;
    }
}

template <class S>
Polytope<S> random_segment(Rng& rng, int dim, double scale = 1.0) {
    for (;;) {
        Vec<S> a(dim), b(dim);
        for (int j = 0; j < dim; ++j) {
            a[j] = random_coord<S>(rng, -scale, scale);
            b[j] = random_coord<S>(rng, -scale, scale);
        }
        if (lex_compare(a, b) != 0) return Polytope<S>::segment(a, b);
    }
}

template <class S>
Polytope<S> random_box(Rng& rng, int dim, double scale = 1.0) {
    Vec<S> lo(dim), hi(dim);
    for (int j = 0; j < dim; ++j) {
        S a = random_coord<S>(rng, -scale, scale);
        S b = random_coord<S>(rng, -scale, scale);
        if (a == b) b = a + S(1);
        lo[j] = a < b ? a : b;
        hi[j] = a < b ? b : a;
    }
    return Polytope<S>::box(lo, hi);
}

template <class S>
LinearMap<S> random_invertible_map(Rng& rng, int dim, double scale = 1.0) {
    for (;;) {
        Mat<S> m(dim, Vec<S>(dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m[i][j] = random_coord<S>(rng, -scale, scale, 32);
        try {
            LinearMap<S> g(std::move(m));
            if (to_double(g.abs_det()) > 0.05) return g;
        } catch (const std::invalid_argument&) {
        }
    }
}

/// Random diagonalizable map with moderate spectral spread: conjugate of a
/// diagonal matrix by a rotation-like basis. Keeps |rho_max|/|rho_min| small
/// enough that high powers stay well conditioned in float arithmetic, and
/// consecutive moduli separated so degree sequences converge at desk-scale
/// exponents.
inline LinearMap<double> random_diagonalizable_map(Rng& rng, int dim, double lo = 0.8, double hi = 1.5) {
    for (;;) {
        Vec<double> mags(dim);
        for (;;) {
            for (int i = 0; i < dim; ++i) mags[i] = rng.uniform(lo, hi);
            Vec<double> sorted = mags;
            std::sort(sorted.begin(), sorted.end());
            bool separated = true;
            for (int i = 1; i < dim; ++i)
                if (sorted[i] < 1.13 * sorted[i - 1]) separated = false;
            if (separated) break;
        }
        Mat<double> d(dim, Vec<double>(dim, 0.0));
        for (int i = 0; i < dim; ++i) d[i][i] = rng.uniform() < 0.5 ? -mags[i] : mags[i];
        // random basis with bounded condition number
        Mat<double> t(dim, Vec<double>(dim));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) t[i][j] = rng.uniform(-1.0, 1.0) + (i == j ? 2.0 : 0.0);
        try {
            LinearMap<double> tm(t);
            Mat<double> m = mat_mul(mat_mul(t, d), tm.inverse_entries());
            return LinearMap<double>(std::move(m));
        } catch (const std::invalid_argument&) {
        }
    }
}

} // namespace valgebra
