#pragma once

#include "valgebra/hull.hpp"

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <utility>

namespace valgebra {

/// A convex body in R^n held by its extreme points. Construction
/// canonicalizes: redundant points are dropped and the vertex list is sorted
/// lexicographically, so structurally equal bodies compare equal. Facet data
/// (outer normals and offsets) is kept for full-dimensional bodies.
/// Instances are immutable.
template <class S>
class Polytope {
  public:
    Polytope(int dim, std::vector<Vec<S>> points) {
        if (points.empty()) throw std::invalid_argument("Polytope: empty vertex list");
        for (const auto& p : points)
            if (static_cast<int>(p.size()) != dim)
                throw std::invalid_argument("Polytope: vertex dimension mismatch");
        dim_ = dim;
        HullResult<S> h = convex_hull(points);
        affine_dim_ = h.affine_dim;
        volume_ = h.volume;
        adopt(std::move(points), std::move(h.extreme), std::move(h.facets));
    }

    static Polytope point(Vec<S> p) {
        int d = static_cast<int>(p.size());
        return Polytope(d, {std::move(p)});
    }

    static Polytope segment(Vec<S> a, Vec<S> b) {
        int d = static_cast<int>(a.size());
        return Polytope(d, {std::move(a), std::move(b)});
    }

    /// Axis-aligned box [lo_1,hi_1] x ... x [lo_n,hi_n].
    static Polytope box(const Vec<S>& lo, const Vec<S>& hi) {
        int d = static_cast<int>(lo.size());
        std::vector<Vec<S>> pts;
        pts.reserve(std::size_t(1) << d);
        for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
            Vec<S> p(d);
            for (int j = 0; j < d; ++j) p[j] = (mask >> j) & 1 ? hi[j] : lo[j];
            pts.push_back(std::move(p));
        }
        return Polytope(d, std::move(pts));
    }

    static Polytope unit_cube(int d) {
        return box(Vec<S>(d, S(0)), Vec<S>(d, S(1)));
    }

    static Polytope cross_polytope(int d) {
        std::vector<Vec<S>> pts;
        for (int j = 0; j < d; ++j) {
            Vec<S> e(d, S(0));
            e[j] = S(1);
            pts.push_back(e);
            e[j] = S(-1);
            pts.push_back(e);
        }
        return Polytope(d, std::move(pts));
    }

    int dim() const { return dim_; }
    int affine_dim() const { return affine_dim_; }
    bool full_dimensional() const { return affine_dim_ == dim_; }
    const std::vector<Vec<S>>& vertices() const { return verts_; }
    const std::vector<HullFacet<S>>& facets() const { return facets_; }
    const S& volume() const { return volume_; }

    S support(const Vec<S>& dir) const {
        S best = dot(verts_[0], dir);
        for (std::size_t i = 1; i < verts_.size(); ++i) {
            S v = dot(verts_[i], dir);
            if (v > best) best = v;
        }
        return best;
    }

    Vec<S> vertex_centroid() const {
        Vec<S> c(dim_, S(0));
        for (const auto& v : verts_) c = vadd(c, v);
        return vscale(S(1) / S(static_cast<long>(verts_.size())), c);
    }

    /// Membership test against the facet planes; full-dimensional bodies only.
    bool contains(const Vec<S>& x, double tol = 1e-9) const {
        if (!full_dimensional()) throw std::domain_error("contains: body is lower-dimensional");
        for (const auto& f : facets_) {
            S lhs = dot(f.normal, x);
            if constexpr (scalar_traits<S>::exact) {
                if (lhs > f.offset) return false;
            } else {
                double scale = std::max(1.0, std::fabs(to_double(f.offset)));
                if (to_double(lhs) > to_double(f.offset) + tol * scale) return false;
            }
        }
        return true;
    }

    Polytope translate(const Vec<S>& t) const {
        Polytope r(*this);
        for (auto& v : r.verts_) v = vadd(v, t);
        for (auto& f : r.facets_) f.offset += dot(f.normal, t);
        r.hash_ = 0;
        return r; // lexicographic order is translation invariant
    }

    /// Scale by c >= 0; c = 0 collapses to the origin point.
    Polytope scale(const S& c) const {
        if (c < S(0)) throw std::invalid_argument("scale: negative factor; use negate()");
        if (c == S(0)) return point(Vec<S>(dim_, S(0)));
        Polytope r(*this);
        for (auto& v : r.verts_) v = vscale(c, v);
        S cn(1);
        for (int i = 0; i < dim_; ++i) cn *= c;
        r.volume_ = volume_ * cn;
        for (auto& f : r.facets_) f.offset *= c;
        r.hash_ = 0;
        return r;
    }

    /// Image under x -> -x.
    Polytope negate() const {
        std::vector<Vec<S>> pts;
        pts.reserve(verts_.size());
        for (const auto& v : verts_) pts.push_back(vneg(v));
        std::vector<HullFacet<S>> fac = facets_;
        for (auto& f : fac) f.normal = vneg(f.normal);
        Polytope r;
        r.dim_ = dim_;
        r.affine_dim_ = affine_dim_;
        r.volume_ = volume_;
        std::vector<int> all(pts.size());
        std::iota(all.begin(), all.end(), 0);
        r.adopt(std::move(pts), std::move(all), std::move(fac));
        return r;
    }

    bool operator==(const Polytope& o) const {
        if (dim_ != o.dim_ || verts_.size() != o.verts_.size()) return false;
        for (std::size_t i = 0; i < verts_.size(); ++i)
            if (lex_compare(verts_[i], o.verts_[i]) != 0) return false;
        return true;
    }
    bool operator!=(const Polytope& o) const { return !(*this == o); }

    /// Deterministic total order (vertex count first, then lexicographic
    /// vertex lists); used for canonical term ordering in valuations.
    bool operator<(const Polytope& o) const {
        if (verts_.size() != o.verts_.size()) return verts_.size() < o.verts_.size();
        for (std::size_t i = 0; i < verts_.size(); ++i) {
            int c = lex_compare(verts_[i], o.verts_[i]);
            if (c != 0) return c < 0;
        }
        return false;
    }

    /// Content hash over the canonical vertex list; stable within a process.
    std::uint64_t content_hash() const {
        if (hash_ != 0) return hash_;
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](const void* data, std::size_t len) {
            const unsigned char* b = static_cast<const unsigned char*>(data);
            for (std::size_t i = 0; i < len; ++i) {
                h ^= b[i];
                h *= 1099511628211ull;
            }
        };
        std::uint32_t d = static_cast<std::uint32_t>(dim_);
        mix(&d, sizeof d);
        for (const auto& v : verts_) {
            for (const auto& x : v) {
                if constexpr (scalar_traits<S>::exact) {
                    std::string s = x.str();
                    mix(s.data(), s.size());
                } else {
                    double xd = x;
                    mix(&xd, sizeof xd);
                }
            }
        }
        if (h == 0) h = 1;
        hash_ = h;
        return h;
    }

  private:
    Polytope() = default;

    // Takes the raw point pool, the indices of its extreme points and facet
    // data indexed into the pool; stores the sorted canonical form.
    void adopt(std::vector<Vec<S>> pool, std::vector<int> extreme, std::vector<HullFacet<S>> facets) {
        std::sort(extreme.begin(), extreme.end(),
                  [&](int a, int b) { return lex_compare(pool[a], pool[b]) < 0; });
        std::vector<int> remap(pool.size(), -1);
        verts_.clear();
        verts_.reserve(extreme.size());
        for (std::size_t i = 0; i < extreme.size(); ++i) {
            remap[extreme[i]] = static_cast<int>(i);
            verts_.push_back(std::move(pool[extreme[i]]));
        }
        for (auto& f : facets) {
            for (auto& v : f.verts) v = remap[v];
            std::sort(f.verts.begin(), f.verts.end());
        }
        facets_ = std::move(facets);
        hash_ = 0;
    }

    template <class T>
    friend Polytope<T> minkowski_combination(const std::vector<Polytope<T>>& bodies, const std::vector<T>& coeffs);
    template <class T>
    friend class LinearMap;

    int dim_ = 0;
    int affine_dim_ = 0;
    std::vector<Vec<S>> verts_;
    std::vector<HullFacet<S>> facets_;
    S volume_ = S(0);
    mutable std::uint64_t hash_ = 0;
};

/// Hull of { sum_j c_j v_j : v_j vertex of K_j } for nonnegative weights;
/// zero-weight bodies drop out. One hull pass regardless of the number of
/// summands, which is what the mixed-volume polarization loop needs.
template <class S>
Polytope<S> minkowski_combination(const std::vector<Polytope<S>>& bodies, const std::vector<S>& coeffs) {
    if (bodies.empty() || bodies.size() != coeffs.size())
        throw std::invalid_argument("minkowski_combination: arity mismatch");
    int d = bodies[0].dim();
    for (const auto& b : bodies)
        if (b.dim() != d) throw std::invalid_argument("minkowski_combination: dimension mismatch");
    std::vector<Vec<S>> pts = {Vec<S>(d, S(0))};
    for (std::size_t j = 0; j < bodies.size(); ++j) {
        if (coeffs[j] == S(0)) continue;
        if (coeffs[j] < S(0)) throw std::invalid_argument("minkowski_combination: negative coefficient");
        const auto& vs = bodies[j].vertices();
        std::vector<Vec<S>> next;
        next.reserve(pts.size() * vs.size());
        for (const auto& p : pts)
            for (const auto& v : vs) next.push_back(vadd(p, vscale(coeffs[j], v)));
        pts = std::move(next);
    }
    return Polytope<S>(d, std::move(pts));
}

template <class S>
Polytope<S> minkowski_sum(const Polytope<S>& p, const Polytope<S>& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
    return minkowski_combination<S>({p, q}, {S(1), S(1)});
}

} // namespace valgebra
