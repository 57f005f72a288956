#pragma once

#include "valgebra/geometry.hpp"
#include "valgebra/lp.hpp"
#include "valgebra/parallel.hpp"
#include "valgebra/polytope.hpp"

#include <map>
#include <mutex>

namespace valgebra {

template <class S>
S factorial(int n) {
    S f(1);
    for (int i = 2; i <= n; ++i) f *= S(i);
    return f;
}

template <class S>
S binomial(int n, int k) {
    if (k < 0 || k > n) return S(0);
    S b(1);
    for (int i = 0; i < k; ++i) b = b * S(n - i) / S(i + 1);
    return b;
}

namespace detail {

// Volumes of Minkowski combinations recur heavily inside valuation
// evaluations; the cache is keyed by the multiset of canonical body hashes
// with integer multiplicities. Concurrent inserts of identical values are
// benign by construction.
template <class S>
class VolumeCache {
  public:
    using Key = std::vector<std::pair<std::uint64_t, long>>;

    static VolumeCache& instance() {
        static VolumeCache cache;
        return cache;
    }

    bool lookup(const Key& k, S& out) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(k);
        if (it == map_.end()) return false;
        out = it->second;
        return true;
    }

    void store(const Key& k, const S& v) {
        std::lock_guard<std::mutex> lock(mu_);
        map_.emplace(k, v);
    }

  private:
    std::mutex mu_;
    std::map<Key, S> map_;
};

template <class S>
typename VolumeCache<S>::Key multiset_key(const std::vector<const Polytope<S>*>& bodies,
                                          const std::vector<long>& counts) {
    typename VolumeCache<S>::Key key;
    for (std::size_t i = 0; i < bodies.size(); ++i)
        if (counts[i] > 0) key.push_back({bodies[i]->content_hash(), counts[i]});
    std::sort(key.begin(), key.end());
    return key;
}

template <class S>
S cached_combination_volume(const std::vector<const Polytope<S>*>& bodies, const std::vector<long>& counts) {
    auto key = multiset_key(bodies, counts);
    S out(0);
    auto& cache = VolumeCache<S>::instance();
    if (cache.lookup(key, out)) return out;
    std::vector<Polytope<S>> active;
    std::vector<S> coeffs;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        if (counts[i] == 0) continue;
        active.push_back(*bodies[i]);
        coeffs.push_back(S(counts[i]));
    }
    out = minkowski_combination(active, coeffs).volume();
    cache.store(key, out);
    return out;
}

// Permanent by Ryser's formula; exact over rationals.
template <class S>
S permanent(const Mat<S>& m) {
    int n = static_cast<int>(m.size());
    S total(0);
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        S prod(1);
        int bits = 0;
        for (int i = 0; i < n; ++i) {
            S row(0);
            for (int j = 0; j < n; ++j)
                if ((mask >> j) & 1) row += m[i][j];
            prod *= row;
        }
        for (int j = 0; j < n; ++j) bits += (mask >> j) & 1;
        if ((n - bits) % 2 == 0)
            total += prod;
        else
            total -= prod;
    }
    return total;
}

template <class S>
bool is_axis_box(const Polytope<S>& p, Vec<S>& lo, Vec<S>& hi) {
    int d = p.dim();
    if (p.vertices().size() != (std::size_t(1) << d)) return false;
    lo = p.vertices().front();
    hi = p.vertices().front();
    for (const auto& v : p.vertices())
        for (int j = 0; j < d; ++j) {
            if (v[j] < lo[j]) lo[j] = v[j];
            if (v[j] > hi[j]) hi[j] = v[j];
        }
    return p == Polytope<S>::box(lo, hi);
}

} // namespace detail

/// Mixed volume V(K_1, ..., K_n), normalized so V(K, ..., K) = vol(K).
/// Computed by inclusion-exclusion polarization over Minkowski-sum volumes,
/// with closed forms for all-box (permanent) and all-segment (determinant)
/// tuples.
template <class S>
S mixed_volume(const std::vector<Polytope<S>>& bodies) {
    if (bodies.empty()) throw std::invalid_argument("mixed_volume: empty tuple");
    int n = bodies[0].dim();
    if (static_cast<int>(bodies.size()) != n)
        throw std::invalid_argument("mixed_volume: arity must equal the dimension");
    for (const auto& b : bodies)
        if (b.dim() != n) throw std::invalid_argument("mixed_volume: dimension mismatch");

    for (const auto& b : bodies)
        if (b.affine_dim() == 0) return S(0);

    // diagonal shortcut
    {
        bool all_equal = true;
        for (std::size_t i = 1; i < bodies.size(); ++i)
            if (!(bodies[i] == bodies[0])) all_equal = false;
        if (all_equal) return bodies[0].volume();
    }

    // all segments: |det of direction vectors| / n!
    {
        bool all_seg = true;
        for (const auto& b : bodies)
            if (b.vertices().size() != 2) all_seg = false;
        if (all_seg) {
            Mat<S> dirs(n, Vec<S>(n));
            for (int i = 0; i < n; ++i) dirs[i] = vsub(bodies[i].vertices()[1], bodies[i].vertices()[0]);
            return scalar_abs(determinant(dirs)) / factorial<S>(n);
        }
    }

    // all axis-aligned boxes: permanent of the edge-length matrix / n!
    {
        Mat<S> edges(n, Vec<S>(n));
        bool all_box = true;
        for (int i = 0; i < n && all_box; ++i) {
            Vec<S> lo, hi;
            if (!detail::is_axis_box(bodies[i], lo, hi)) {
                all_box = false;
                break;
            }
            edges[i] = vsub(hi, lo);
        }
        if (all_box) return detail::permanent(edges) / factorial<S>(n);
    }

    // group repeated bodies: the 2^n - 1 slot subsets collapse to count
    // vectors weighted by binomial factors
    std::vector<const Polytope<S>*> distinct;
    std::vector<long> mult;
    for (const auto& b : bodies) {
        bool found = false;
        for (std::size_t j = 0; j < distinct.size(); ++j)
            if (*distinct[j] == b) {
                ++mult[j];
                found = true;
                break;
            }
        if (!found) {
            distinct.push_back(&b);
            mult.push_back(1);
        }
    }
    std::size_t d = distinct.size();

    {
        auto key = detail::multiset_key(distinct, mult);
        key.push_back({0xabcdef, -1}); // tag distinguishing mixed volumes from sum volumes
        S hit(0);
        if (detail::VolumeCache<S>::instance().lookup(key, hit)) return hit;
    }

    std::vector<std::vector<long>> count_vectors;
    std::vector<long> c(d, 0);
    for (;;) {
        std::size_t pos = 0;
        while (pos < d && c[pos] == mult[pos]) {
            c[pos] = 0;
            ++pos;
        }
        if (pos == d) break;
        ++c[pos];
        count_vectors.push_back(c);
    }

    std::vector<S> vols(count_vectors.size(), S(0));
    parallel_for(count_vectors.size(), [&](std::size_t idx) {
        vols[idx] = detail::cached_combination_volume(distinct, count_vectors[idx]);
    });

    S acc(0);
    for (std::size_t idx = 0; idx < count_vectors.size(); ++idx) {
        const auto& cv = count_vectors[idx];
        long total = 0;
        S weight(1);
        for (std::size_t j = 0; j < d; ++j) {
            total += cv[j];
            weight *= binomial<S>(static_cast<int>(mult[j]), static_cast<int>(cv[j]));
        }
        S term = weight * vols[idx];
        if ((n - total) % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    S result = acc / factorial<S>(n);

    {
        auto key = detail::multiset_key(distinct, mult);
        key.push_back({0xabcdef, -1});
        detail::VolumeCache<S>::instance().store(key, result);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Volume polynomial (the independent oracle for mixed volumes)
// ---------------------------------------------------------------------------

/// Coefficient table of the homogeneous degree-n polynomial
/// vol(t_1 K_1 + ... + t_m K_m), recovered by interpolation on the integer
/// simplex lattice {alpha : |alpha| = n} (or a caller-provided grid).
template <class S>
struct VolumePolynomial {
    int dim = 0;
    std::vector<std::vector<int>> exponents;
    std::vector<S> coefficients; // coefficient of t^alpha

    const S& coefficient_of(const std::vector<int>& alpha) const {
        for (std::size_t i = 0; i < exponents.size(); ++i)
            if (exponents[i] == alpha) return coefficients[i];
        throw std::invalid_argument("volume_polynomial: unknown exponent");
    }

    /// Mixed volume V(K_1[alpha_1], ..., K_m[alpha_m]) read off the table:
    /// coefficient times alpha! / n!.
    S mixed_volume_of(const std::vector<int>& alpha) const {
        S f(1);
        for (int a : alpha) f *= factorial<S>(a);
        return coefficient_of(alpha) * f / factorial<S>(dim);
    }
};

template <class S>
VolumePolynomial<S> volume_polynomial(const std::vector<Polytope<S>>& bodies,
                                      const std::vector<Vec<S>>& grid = {}) {
    if (bodies.empty()) throw std::invalid_argument("volume_polynomial: no bodies");
    int n = bodies[0].dim();
    int m = static_cast<int>(bodies.size());
    for (const auto& b : bodies)
        if (b.dim() != n) throw std::invalid_argument("volume_polynomial: dimension mismatch");

    std::vector<std::vector<int>> expo;
    std::vector<int> cur(m, 0);
    std::function<void(int, int)> gen = [&](int pos, int left) {
        if (pos == m - 1) {
            cur[pos] = left;
            expo.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[pos] = v;
            gen(pos + 1, left - v);
        }
    };
    gen(0, n);

    std::vector<Vec<S>> points;
    if (!grid.empty()) {
        points = grid;
    } else {
        for (const auto& alpha : expo) {
            Vec<S> t(m);
            for (int j = 0; j < m; ++j) t[j] = S(alpha[j]);
            points.push_back(std::move(t));
        }
    }
    if (points.size() != expo.size())
        throw std::invalid_argument("volume_polynomial: grid size must match coefficient count");

    std::vector<const Polytope<S>*> ptrs;
    for (const auto& b : bodies) ptrs.push_back(&b);

    std::vector<S> vols(points.size(), S(0));
    parallel_for(points.size(), [&](std::size_t i) {
        std::vector<Polytope<S>> active;
        std::vector<S> coeffs;
        for (int j = 0; j < m; ++j) {
            if (points[i][j] == S(0)) continue;
            if (points[i][j] < S(0)) throw std::invalid_argument("volume_polynomial: negative grid point");
            active.push_back(bodies[j]);
            coeffs.push_back(points[i][j]);
        }
        if (active.empty())
            vols[i] = S(0);
        else
            vols[i] = minkowski_combination(active, coeffs).volume();
    });

    Mat<S> vand(points.size(), Vec<S>(expo.size(), S(1)));
    for (std::size_t r = 0; r < points.size(); ++r)
        for (std::size_t c2 = 0; c2 < expo.size(); ++c2)
            for (int j = 0; j < m; ++j)
                for (int p = 0; p < expo[c2][j]; ++p) vand[r][c2] *= points[r][j];

    VolumePolynomial<S> out;
    out.dim = n;
    out.exponents = std::move(expo);
    try {
        out.coefficients = solve_linear(vand, vols);
    } catch (const std::domain_error&) {
        throw std::invalid_argument("volume_polynomial: singular interpolation grid");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Inequality / identity probes
// ---------------------------------------------------------------------------

/// Alexandrov-Fenchel margin V(K,L,rest)^2 - V(K,K,rest) V(L,L,rest); theory
/// guarantees a nonnegative value.
template <class S>
S af_margin(const Polytope<S>& k, const Polytope<S>& l, const std::vector<Polytope<S>>& rest) {
    std::vector<Polytope<S>> kl = {k, l};
    std::vector<Polytope<S>> kk = {k, k};
    std::vector<Polytope<S>> ll = {l, l};
    for (const auto& r : rest) {
        kl.push_back(r);
        kk.push_back(r);
        ll.push_back(r);
    }
    S vkl = mixed_volume(kl);
    return vkl * vkl - mixed_volume(kk) * mixed_volume(ll);
}

/// Residual of the subspace reduction formula
///   C(n,k) V(L_1,...,L_k, K_1,...,K_{n-k})
///     = V_H(L_1,...,L_k) V_{H^perp}(p(K_1),...,p(K_{n-k})),
/// for bodies L_i contained in the k-dimensional subspace H. Theory: 0.
template <class S>
S reduction_formula_residual(const std::vector<Polytope<S>>& l_tuple,
                             const std::vector<Polytope<S>>& k_tuple,
                             const std::vector<Vec<S>>& h_basis) {
    int n = l_tuple.empty() ? 0 : l_tuple[0].dim();
    int k = static_cast<int>(h_basis.size());
    if (static_cast<int>(l_tuple.size()) != k)
        throw std::invalid_argument("reduction_formula_residual: need dim H bodies inside H");
    if (static_cast<int>(l_tuple.size() + k_tuple.size()) != n)
        throw std::invalid_argument("reduction_formula_residual: total arity must be n");
    std::vector<Vec<S>> hb = orthonormalize(h_basis);
    std::vector<Vec<S>> wb = orthonormal_complement(hb, n);

    // containment check: vertices of each L_i must project onto themselves
    for (const auto& l : l_tuple)
        for (const auto& v : l.vertices()) {
            S res(0);
            for (const auto& w : wb) {
                S c = dot(v, w);
                res += c * c;
            }
            if constexpr (scalar_traits<S>::exact) {
                if (res != S(0)) throw std::invalid_argument("reduction_formula_residual: body not inside H");
            } else {
                if (to_double(res) > 1e-16)
                    throw std::invalid_argument("reduction_formula_residual: body not inside H");
            }
        }

    std::vector<Polytope<S>> all = l_tuple;
    for (const auto& b : k_tuple) all.push_back(b);
    S lhs = binomial<S>(n, k) * mixed_volume(all);

    std::vector<Polytope<S>> lh;
    for (const auto& l : l_tuple) lh.push_back(to_subspace_coords(l, hb));
    std::vector<Polytope<S>> kw;
    for (const auto& b : k_tuple) kw.push_back(to_subspace_coords(b, wb));
    S rhs = mixed_volume(lh) * mixed_volume(kw);
    return lhs - rhs;
}

template <class S>
struct ContainmentScale {
    S r_exact; // min { r : M subset of rK + t for some t }
    S r_bound; // Diskant-type bound n V(K[n-1], M) / vol(K)
};

/// Smallest homothety factor placing M inside a translate of rK, from a
/// linear program over the facet normals of K, together with the
/// mixed-volume upper bound. Contract: r_exact <= r_bound.
template <class S>
ContainmentScale<S> containment_scale(const Polytope<S>& k, const Polytope<S>& m) {
    if (!k.full_dimensional()) throw std::domain_error("containment_scale: K must be full-dimensional");
    int n = k.dim();
    Vec<S> center = k.vertex_centroid();
    Polytope<S> k0 = k.translate(vneg(center)); // h_{K0} > 0 on all facet normals

    Mat<S> g;
    Vec<S> h;
    for (const auto& f : k0.facets()) {
        Vec<S> row(1 + n);
        row[0] = f.offset; // = h_{K0}(normal)
        for (int j = 0; j < n; ++j) row[j + 1] = f.normal[j];
        g.push_back(std::move(row));
        h.push_back(m.support(f.normal));
    }
    Vec<S> c(1 + n, S(0));
    c[0] = S(1);
    LpResult<S> lp = lp_minimize_free(g, h, c);
    if (lp.status != LpStatus::Optimal) throw std::runtime_error("containment_scale: LP failed");

    std::vector<Polytope<S>> args(n - 1, k);
    args.push_back(m);
    S bound = S(n) * mixed_volume(args) / k.volume();
    return {lp.value, bound};
}

} // namespace valgebra
