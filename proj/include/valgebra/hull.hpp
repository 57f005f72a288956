#pragma once

#include "valgebra/vec.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace valgebra {

template <class S>
struct HullFacet {
    std::vector<int> verts; // n point indices, a simplex facet
    Vec<S> normal;          // outward; <normal, x> <= offset on the hull
    S offset;
    // double shadows of the plane data; exact mode screens side tests through
    // these and only falls back to exact arithmetic near ties
    Vec<double> dnormal;
    double doffset = 0;
};

template <class S>
struct HullResult {
    int ambient_dim = 0;
    int affine_dim = 0;
    std::vector<int> extreme;        // indices into the input point list, ascending
    std::vector<HullFacet<S>> facets; // populated only for full-dimensional hulls
    S volume = S(0);                  // n-dimensional volume; 0 when affine_dim < ambient_dim
};

namespace detail {

// Normal of the hyperplane through n points: generalized cross product of the
// edge vectors, computed by cofactor expansion. Exact over rationals.
template <class S>
Vec<S> hyperplane_normal(const std::vector<Vec<S>>& pts, const std::vector<int>& ids) {
    std::size_t n = ids.size();
    Mat<S> edges(n - 1, Vec<S>(n));
    for (std::size_t r = 0; r + 1 < n; ++r) edges[r] = vsub(pts[ids[r + 1]], pts[ids[0]]);
    Vec<S> normal(n);
    for (std::size_t i = 0; i < n; ++i) {
        Mat<S> minor(n - 1, Vec<S>(n - 1));
        for (std::size_t r = 0; r + 1 < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == i) continue;
                minor[r][cc++] = edges[r][c];
            }
        }
        S d = determinant(minor);
        normal[i] = (i % 2 == 0) ? d : S(-d);
    }
    return normal;
}

template <class S>
double coord_scale(const std::vector<Vec<S>>& pts) {
    double s = 1.0;
    for (const auto& p : pts)
        for (const auto& x : p) {
            double a = std::fabs(to_double(x));
            if (a > s) s = a;
        }
    return s;
}

// Greedy affine basis: returns indices of up to dim+1 affinely independent
// points. Float mode picks the farthest point from the current span for
// conditioning; exact mode takes the first independent one.
template <class S>
std::vector<int> affine_basis(const std::vector<Vec<S>>& pts, int dim, double tol) {
    std::vector<int> basis;
    basis.push_back(0);
    if constexpr (scalar_traits<S>::exact) {
        Mat<S> rows;
        for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
            Mat<S> cand = rows;
            cand.push_back(vsub(pts[i], pts[basis[0]]));
            if (mat_rank(cand) == cand.size()) {
                rows = cand;
                basis.push_back(i);
                if (static_cast<int>(basis.size()) == dim + 1) break;
            }
        }
    } else {
        // Maintain an orthonormal basis of the span of (p - p0).
        std::vector<Vec<S>> ortho;
        double scale = coord_scale(pts);
        while (static_cast<int>(basis.size()) < dim + 1) {
            int best = -1;
            double best_d = tol * scale;
            for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
                Vec<S> v = vsub(pts[i], pts[basis[0]]);
                for (const auto& q : ortho) {
                    S c = dot(v, q);
                    v = vsub(v, vscale(c, q));
                }
                double d = std::sqrt(to_double(dot(v, v)));
                if (d > best_d) {
                    best_d = d;
                    best = i;
                }
            }
            if (best < 0) break;
            Vec<S> v = vsub(pts[best], pts[basis[0]]);
            for (const auto& q : ortho) {
                S c = dot(v, q);
                v = vsub(v, vscale(c, q));
            }
            v = vscale(S(1.0 / std::sqrt(to_double(dot(v, v)))), v);
            ortho.push_back(v);
            basis.push_back(best);
        }
    }
    return basis;
}

template <class S>
HullResult<S> hull_full_dim(const std::vector<Vec<S>>& pts, const std::vector<int>& simplex, int n);

// Lower-dimensional input: re-express the points in coordinates of the affine
// span and recurse. Only the extreme set matters here (the ambient volume is 0),
// so the subspace basis need not be orthonormal: extreme points are invariant
// under any affine isomorphism.
template <class S>
HullResult<S> hull_degenerate(const std::vector<Vec<S>>& pts, const std::vector<int>& basis, int n) {
    HullResult<S> out;
    out.ambient_dim = n;
    out.affine_dim = static_cast<int>(basis.size()) - 1;
    out.volume = S(0);
    if (out.affine_dim == 0) {
        out.extreme = {basis[0]};
        return out;
    }
    int k = out.affine_dim;
    const Vec<S>& origin = pts[basis[0]];
    Mat<S> B(k, Vec<S>(n)); // rows are span directions
    for (int j = 0; j < k; ++j) B[j] = vsub(pts[basis[j + 1]], origin);
    // Gram matrix solve gives coordinates of each point in the span.
    Mat<S> gram(k, Vec<S>(k));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) gram[a][b] = dot(B[a], B[b]);
    std::vector<Vec<S>> coords(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Vec<S> d = vsub(pts[i], origin);
        Vec<S> rhs(k);
        for (int a = 0; a < k; ++a) rhs[a] = dot(B[a], d);
        coords[i] = solve_linear(gram, rhs);
    }
    std::vector<int> sub_basis(k + 1);
    for (int j = 0; j <= k; ++j) sub_basis[j] = basis[j];
    HullResult<S> sub = hull_full_dim(coords, sub_basis, k);
    out.extreme = sub.extreme;
    return out;
}

// Sign of <normal, p> - offset through the double shadows; returns +1/-1 when
// the floating-point filter certifies the sign, 0 when inconclusive.
inline int filtered_side(const Vec<double>& dnormal, double doffset, const Vec<double>& dp) {
    double acc = -doffset;
    double mag = std::fabs(doffset);
    for (std::size_t j = 0; j < dp.size(); ++j) {
        double t = dnormal[j] * dp[j];
        acc += t;
        mag += std::fabs(t);
    }
    double err = 64 * std::numeric_limits<double>::epsilon() * mag;
    if (acc > err) return 1;
    if (acc < -err) return -1;
    return 0;
}

template <class S>
HullResult<S> hull_full_dim(const std::vector<Vec<S>>& pts, const std::vector<int>& simplex, int n) {
    HullResult<S> out;
    out.ambient_dim = n;
    out.affine_dim = n;
    const double scale = coord_scale(pts);
    const S eps = mode_eps<S>::visibility(S(scale));

    // double shadows of the points, for the exact mode's sign filter
    std::vector<Vec<double>> shadow;
    if constexpr (scalar_traits<S>::exact) {
        shadow.resize(pts.size(), Vec<double>(n));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (int j = 0; j < n; ++j) shadow[i][j] = to_double(pts[i][j]);
    }
    auto is_beyond = [&](const HullFacet<S>& f, int pid) -> bool {
        if constexpr (scalar_traits<S>::exact) {
            int side = filtered_side(f.dnormal, f.doffset, shadow[pid]);
            if (side != 0) return side > 0;
            return dot(f.normal, pts[pid]) > f.offset;
        } else {
            return dot(f.normal, pts[pid]) > f.offset + eps;
        }
    };

    if (n == 1) {
        int lo = 0, hi = 0;
        for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
            if (pts[i][0] < pts[lo][0]) lo = i;
            if (pts[i][0] > pts[hi][0]) hi = i;
        }
        if (lo == hi) {
            out.affine_dim = 0;
            out.extreme = {lo};
            return out;
        }
        out.extreme = {std::min(lo, hi), std::max(lo, hi)};
        out.facets.push_back({{hi}, {S(1)}, pts[hi][0], {1.0}, to_double(pts[hi][0])});
        out.facets.push_back({{lo}, {S(-1)}, -pts[lo][0], {-1.0}, -to_double(pts[lo][0])});
        out.volume = pts[hi][0] - pts[lo][0];
        return out;
    }

    Vec<S> interior(n, S(0));
    for (int id : simplex) interior = vadd(interior, pts[id]);
    interior = vscale(S(1) / S(static_cast<long>(n + 1)), interior);

    auto make_facet = [&](std::vector<int> verts) -> HullFacet<S> {
        std::sort(verts.begin(), verts.end());
        HullFacet<S> f;
        f.verts = verts;
        f.normal = hyperplane_normal(pts, verts);
        if constexpr (!scalar_traits<S>::exact) {
            double nn = std::sqrt(to_double(dot(f.normal, f.normal)));
            if (nn <= 0) throw std::domain_error("hull: degenerate facet");
            f.normal = vscale(S(1.0 / nn), f.normal);
        }
        f.offset = dot(f.normal, pts[verts[0]]);
        S side = dot(f.normal, interior);
        if (side > f.offset) {
            f.normal = vneg(f.normal);
            f.offset = -f.offset;
        } else if (side == f.offset) {
            throw std::domain_error("hull: interior point on facet plane");
        }
        if constexpr (scalar_traits<S>::exact) {
            f.dnormal.resize(n);
            for (int j = 0; j < n; ++j) f.dnormal[j] = to_double(f.normal[j]);
            f.doffset = to_double(f.offset);
        }
        return f;
    };

    for (int omit = 0; omit <= n; ++omit) {
        std::vector<int> verts;
        for (int j = 0; j <= n; ++j)
            if (j != omit) verts.push_back(simplex[j]);
        out.facets.push_back(make_facet(verts));
    }

    // Insertion order: far points first (quickhull heuristic, keeps float
    // mode well conditioned).
    std::vector<int> order;
    {
        std::vector<bool> used(pts.size(), false);
        for (int id : simplex) used[id] = true;
        std::vector<std::pair<double, int>> rank;
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            if (used[i]) continue;
            Vec<S> d = vsub(pts[i], interior);
            rank.push_back({-to_double(dot(d, d)), i});
        }
        std::sort(rank.begin(), rank.end());
        for (auto& pr : rank) order.push_back(pr.second);
    }

    for (int pid : order) {
        std::vector<int> visible;
        for (int fi = 0; fi < static_cast<int>(out.facets.size()); ++fi) {
            if (is_beyond(out.facets[fi], pid)) visible.push_back(fi);
        }
        if (visible.empty()) continue;

        // Horizon = ridges of visible facets that are not shared between two
        // visible facets.
        std::map<std::vector<int>, int> ridge_count;
        for (int fi : visible) {
            const auto& verts = out.facets[fi].verts;
            for (int skip = 0; skip < n; ++skip) {
                std::vector<int> ridge;
                for (int j = 0; j < n; ++j)
                    if (j != skip) ridge.push_back(verts[j]);
                ridge_count[ridge] += 1;
            }
        }
        std::vector<HullFacet<S>> fresh;
        for (auto& [ridge, count] : ridge_count) {
            if (count != 1) continue;
            std::vector<int> verts = ridge;
            verts.push_back(pid);
            fresh.push_back(make_facet(verts));
        }
        std::vector<bool> kill(out.facets.size(), false);
        for (int fi : visible) kill[fi] = true;
        std::vector<HullFacet<S>> next;
        next.reserve(out.facets.size() - visible.size() + fresh.size());
        for (int fi = 0; fi < static_cast<int>(out.facets.size()); ++fi)
            if (!kill[fi]) next.push_back(std::move(out.facets[fi]));
        for (auto& f : fresh) next.push_back(std::move(f));
        out.facets = std::move(next);
    }

    // Candidate vertices are the facet vertices, but the initial simplex may
    // have contributed boundary points that are not extreme. A candidate is a
    // true vertex exactly when the normals of the facet planes through it
    // have full rank (full-dimensional normal cone).
    std::vector<int> cand;
    for (const auto& f : out.facets)
        for (int v : f.verts) cand.push_back(v);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<int> ext;
    for (int v : cand) {
        Mat<S> normals;
        for (const auto& f : out.facets) {
            if constexpr (scalar_traits<S>::exact) {
                if (filtered_side(f.dnormal, f.doffset, shadow[v]) != 0) continue; // certainly off-plane
                if (dot(f.normal, pts[v]) != f.offset) continue;
            } else {
                S gap = f.offset - dot(f.normal, pts[v]);
                if (scalar_abs(gap) > eps) continue;
            }
            normals.push_back(f.normal);
        }
        if (mat_rank(normals) == static_cast<std::size_t>(n)) ext.push_back(v);
    }
    out.extreme = std::move(ext);

    S vol(0);
    S fact(1);
    for (int i = 2; i <= n; ++i) fact *= S(i);
    for (const auto& f : out.facets) {
        Mat<S> m(n, Vec<S>(n));
        for (int r = 0; r < n; ++r) m[r] = vsub(pts[f.verts[r]], interior);
        vol += scalar_abs(determinant(m));
    }
    out.volume = vol / fact;
    return out;
}

} // namespace detail

template <class S>
HullResult<S> convex_hull(std::vector<Vec<S>> pts);

namespace detail {

// Float-precision prescreen for exact hulls of large point sets: points that
// are strictly interior to the double hull by a generous margin cannot be
// extreme, so the exact pass only sees the survivors. Returns an empty list
// when the screen cannot be trusted (degenerate double hull).
inline std::vector<int> prefilter_interior(const std::vector<Vec<Rational>>& pts, int n) {
    std::vector<Vec<double>> dpts;
    dpts.reserve(pts.size());
    for (const auto& p : pts) {
        Vec<double> d(n);
        for (int j = 0; j < n; ++j) d[j] = to_double(p[j]);
        dpts.push_back(std::move(d));
    }
    HullResult<double> dh;
    try {
        dh = convex_hull(dpts);
    } catch (const std::exception&) {
        return {};
    }
    if (dh.affine_dim != n) return {};
    double scale = coord_scale(dpts);
    const double margin = 1e-7 * scale;
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(dpts.size()); ++i) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& f : dh.facets) worst = std::max(worst, dot(f.normal, dpts[i]) - to_double(f.offset));
        if (worst >= -margin) keep.push_back(i);
    }
    if (keep.size() < std::size_t(n) + 1) return {};
    return keep;
}

} // namespace detail

/// Convex hull of a finite point set. Returns the extreme points, the facet
/// description (full-dimensional case), and the enclosed volume.
template <class S>
HullResult<S> convex_hull(std::vector<Vec<S>> pts) {
    if (pts.empty()) throw std::invalid_argument("convex_hull: empty point set");
    int n = static_cast<int>(pts[0].size());

    if constexpr (scalar_traits<S>::exact) {
        if (pts.size() > 64) {
            std::vector<int> keep = detail::prefilter_interior(pts, n);
            if (!keep.empty() && keep.size() < pts.size()) {
                std::vector<Vec<S>> survivors;
                survivors.reserve(keep.size());
                for (int i : keep) survivors.push_back(std::move(pts[i]));
                HullResult<S> sub = convex_hull(std::move(survivors));
                for (auto& e : sub.extreme) e = keep[e];
                for (auto& f : sub.facets)
                    for (auto& v : f.verts) v = keep[v];
                return sub;
            }
        }
        // Clear denominators: integer coordinates skip the per-operation gcd
        // normalization of rational arithmetic. Volume and plane offsets are
        // rescaled exactly afterwards.
        using boost::multiprecision::mpz_int;
        mpz_int lcm_den(1);
        bool all_integer = true;
        for (const auto& p : pts)
            for (const auto& x : p) {
                mpz_int den = boost::multiprecision::denominator(x);
                if (den != 1) {
                    all_integer = false;
                    lcm_den = boost::multiprecision::lcm(lcm_den, den);
                }
            }
        if (!all_integer && lcm_den < mpz_int(1) << 128) {
            Rational d(lcm_den);
            std::vector<Vec<S>> scaled = pts;
            for (auto& p : scaled)
                for (auto& x : p) x *= d;
            HullResult<S> res = convex_hull(std::move(scaled));
            Rational dn(1);
            for (int j = 0; j < n; ++j) dn *= d;
            res.volume /= dn;
            for (auto& f : res.facets) {
                f.offset /= d;
                f.doffset = to_double(f.offset);
            }
            return res;
        }
    }

    // Deduplicate exactly (bitwise in float mode) while remembering one
    // representative index per distinct point.
    std::vector<int> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lex_compare(pts[a], pts[b]) < 0; });
    std::vector<Vec<S>> uniq;
    std::vector<int> rep;
    for (int i : idx) {
        if (!uniq.empty() && lex_compare(uniq.back(), pts[i]) == 0) continue;
        uniq.push_back(pts[i]);
        rep.push_back(i);
    }

    std::vector<int> basis = detail::affine_basis(uniq, n, 1e-10);
    HullResult<S> res;
    if (static_cast<int>(basis.size()) < n + 1)
        res = detail::hull_degenerate(uniq, basis, n);
    else
        res = detail::hull_full_dim(uniq, basis, n);

    for (auto& e : res.extreme) e = rep[e];
    for (auto& f : res.facets)
        for (auto& v : f.verts) v = rep[v];
    std::sort(res.extreme.begin(), res.extreme.end());
    return res;
}

} // namespace valgebra
