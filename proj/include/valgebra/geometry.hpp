#pragma once

#include "valgebra/polytope.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <functional>
#include <optional>
#include <string>

namespace valgebra {

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

/// Wolfe's min-norm-point algorithm: the point of smallest Euclidean norm in
/// the convex hull of `pts`. Finite, exact up to floating-point arithmetic.
inline Vec<double> min_norm_point(const std::vector<Vec<double>>& pts) {
    const std::size_t n = pts[0].size();
    double scale2 = 0;
    for (const auto& p : pts) scale2 = std::max(scale2, dot(p, p));
    if (scale2 == 0) return Vec<double>(n, 0.0);
    const double eps = 1e-13 * scale2;

    std::vector<int> active;
    std::vector<double> w;
    {
        int best = 0;
        for (int i = 1; i < static_cast<int>(pts.size()); ++i)
            if (dot(pts[i], pts[i]) < dot(pts[best], pts[best])) best = i;
        active = {best};
        w = {1.0};
    }
    auto combo = [&](const std::vector<double>& wt) {
        Vec<double> x(n, 0.0);
        for (std::size_t i = 0; i < active.size(); ++i) x = vadd(x, vscale(wt[i], pts[active[i]]));
        return x;
    };

    for (int iter = 0; iter < 1000; ++iter) {
        Vec<double> x = combo(w);
        int best = -1;
        double best_v = dot(x, x) - eps;
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            double v = dot(x, pts[i]);
            if (v < best_v) {
                best_v = v;
                best = i;
            }
        }
        if (best < 0) return x;
        bool already = false;
        for (int a : active)
            if (a == best) already = true;
        if (already) return x;
        active.push_back(best);
        w.push_back(0.0);

        // Minor cycle: minimize over the affine hull of the active set and
        // pull back into the simplex, dropping zero-weight points.
        for (int minor = 0; minor < 200; ++minor) {
            std::size_t k = active.size();
            Mat<double> m(k + 1, Vec<double>(k + 1, 0.0));
            Vec<double> rhs(k + 1, 0.0);
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) m[i][j] = dot(pts[active[i]], pts[active[j]]);
                m[i][k] = 1.0;
                m[k][i] = 1.0;
            }
            rhs[k] = 1.0;
            Vec<double> v;
            try {
                Vec<double> sol = solve_linear(m, rhs);
                v.assign(sol.begin(), sol.begin() + k);
            } catch (const std::domain_error&) {
                // Affinely dependent active set: drop the newest point.
                active.pop_back();
                w.pop_back();
                return combo(w);
            }
            bool inside = true;
            for (double vi : v)
                if (vi < 1e-12) inside = false;
            if (inside) {
                w = v;
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < k; ++i)
                if (v[i] < 1e-12 && w[i] > v[i]) theta = std::min(theta, w[i] / (w[i] - v[i]));
            std::vector<int> na;
            std::vector<double> nw;
            for (std::size_t i = 0; i < k; ++i) {
                double wi = (1 - theta) * w[i] + theta * v[i];
                if (wi > 1e-12) {
                    na.push_back(active[i]);
                    nw.push_back(wi);
                }
            }
            active = std::move(na);
            w = std::move(nw);
        }
    }
    return combo(w);
}

/// Euclidean distance from a point to a convex body (projection distance).
template <class S>
double point_body_distance(const Vec<S>& q, const Polytope<S>& body) {
    std::vector<Vec<double>> shifted;
    shifted.reserve(body.vertices().size());
    Vec<double> qd(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) qd[i] = to_double(q[i]);
    for (const auto& v : body.vertices()) {
        Vec<double> d(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) d[i] = to_double(v[i]) - qd[i];
        shifted.push_back(std::move(d));
    }
    Vec<double> m = min_norm_point(shifted);
    return std::sqrt(dot(m, m));
}

/// Hausdorff distance in the Euclidean norm: max vertex-to-body distance,
/// symmetrized. Always evaluated in floating point, the quantity is metric.
template <class S>
double hausdorff_distance(const Polytope<S>& p, const Polytope<S>& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("hausdorff_distance: dimension mismatch");
    double d = 0;
    for (const auto& v : p.vertices()) d = std::max(d, point_body_distance(v, q));
    for (const auto& v : q.vertices()) d = std::max(d, point_body_distance(v, p));
    return d;
}

// ---------------------------------------------------------------------------
// Reference body (polytopal stand-in for the unit ball)
// ---------------------------------------------------------------------------

/// Polytopal surrogate of the Euclidean unit ball: all norm and degree
/// quantities are taken relative to one of these, and reports carry its id.
template <class S>
struct ReferenceBody {
    Polytope<S> body;
    int resolution;
    std::string id;
};

namespace detail {

// Exact rational point on the unit circle near angle theta (tan half-angle
// parametrization); |theta| <= pi/2 keeps the parameter small.
inline Vec<Rational> circle_point(double theta) {
    Rational t = rationalize(std::tan(theta / 2), 1 << 20);
    Rational t2 = t * t;
    Rational den = 1 + t2;
    return {(1 - t2) / den, 2 * t / den};
}

// Exact rational point on the unit sphere near the given direction
// (stereographic parametrization from the south pole; requires z > -1).
inline Vec<Rational> sphere_point(double x, double y, double z) {
    Rational a = rationalize(x / (1 + z), 1 << 20);
    Rational b = rationalize(y / (1 + z), 1 << 20);
    Rational r2 = a * a + b * b;
    Rational den = 1 + r2;
    return {2 * a / den, 2 * b / den, (1 - r2) / den};
}

} // namespace detail

/// Origin-symmetric polytope inscribed in the unit ball. In dimension 2 a
/// regular 2m-gon, in dimension 3 the hull of a symmetrized m-point sphere
/// sampling, in dimension >= 4 the cube of unit circumradius. Exact mode
/// places the planar and spherical vertices exactly on the unit sphere.
template <class S>
ReferenceBody<S> ball_polytope(int dim, int m) {
    if (m < 2 * dim) throw std::invalid_argument("ball_polytope: resolution below 2*dim");
    std::vector<Vec<S>> half;
    if (dim == 2) {
        for (int k = 0; k < m; ++k) {
            double theta = M_PI * k / m;
            if (theta > M_PI / 2) theta -= M_PI; // keep the parametrization small
            if constexpr (scalar_traits<S>::exact) {
                half.push_back(detail::circle_point(theta));
            } else {
                half.push_back({std::cos(theta), std::sin(theta)});
            }
        }
    } else if (dim == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < m; ++k) {
            double z = (k + 0.5) / m; // upper hemisphere
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double x = r * std::cos(golden * k), y = r * std::sin(golden * k);
            if constexpr (scalar_traits<S>::exact) {
                half.push_back(detail::sphere_point(x, y, z));
            } else {
                half.push_back({x, y, z});
            }
        }
    } else {
        // Cube scaled to unit circumradius; exact mode rounds the scale down
        // so the body stays inside the ball.
        S c;
        if constexpr (scalar_traits<S>::exact) {
            Rational r = rationalize(1.0 / std::sqrt(double(dim)), 1 << 20);
            while (r * r * dim > 1) r -= Rational(1, 1 << 20);
            c = r;
        } else {
            c = 1.0 / std::sqrt(double(dim));
        }
        std::vector<Vec<S>> pts;
        for (std::size_t mask = 0; mask < (std::size_t(1) << dim); ++mask) {
            Vec<S> p(dim);
            for (int j = 0; j < dim; ++j) p[j] = (mask >> j) & 1 ? c : S(-c);
            pts.push_back(std::move(p));
        }
        ReferenceBody<S> rb{Polytope<S>(dim, std::move(pts)), m,
                            "cube" + std::to_string(dim) + "d-r" + std::to_string(m)};
        return rb;
    }
    std::vector<Vec<S>> pts;
    pts.reserve(2 * half.size());
    for (const auto& v : half) {
        pts.push_back(v);
        pts.push_back(vneg(v));
    }
    return ReferenceBody<S>{Polytope<S>(dim, std::move(pts)), m,
                            "ball" + std::to_string(dim) + "d-m" + std::to_string(m)};
}

// ---------------------------------------------------------------------------
// Subspace sections and projections
// ---------------------------------------------------------------------------

namespace detail {

inline bool exact_sqrt(const Rational& v, Rational& out) {
    using boost::multiprecision::mpz_int;
    if (v < 0) return false;
    mpz_int num = boost::multiprecision::numerator(v);
    mpz_int den = boost::multiprecision::denominator(v);
    mpz_int sn = boost::multiprecision::sqrt(num);
    mpz_int sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return false;
    out = Rational(sn) / Rational(sd);
    return true;
}

} // namespace detail

/// Gram-Schmidt. In exact mode the normalization must come out rational
/// (coordinate subspaces and the like); otherwise this throws.
template <class S>
std::vector<Vec<S>> orthonormalize(std::vector<Vec<S>> vs) {
    std::vector<Vec<S>> out;
    for (auto v : vs) {
        for (const auto& q : out) v = vsub(v, vscale(dot(v, q), q));
        S nn = dot(v, v);
        if constexpr (scalar_traits<S>::exact) {
            if (nn == S(0)) continue;
            Rational root;
            if (!detail::exact_sqrt(nn, root))
                throw std::domain_error("orthonormalize: norm has no exact square root in rational mode");
            out.push_back(vscale(S(1) / root, v));
        } else {
            double d = std::sqrt(to_double(nn));
            if (d < 1e-12) continue;
            out.push_back(vscale(S(1.0 / d), v));
        }
    }
    return out;
}

/// Orthonormal basis of the orthogonal complement of span(basis).
template <class S>
std::vector<Vec<S>> orthonormal_complement(const std::vector<Vec<S>>& basis, int dim) {
    std::vector<Vec<S>> work = basis;
    std::vector<Vec<S>> out;
    std::vector<Vec<S>> ortho = orthonormalize(work);
    for (int j = 0; j < dim; ++j) {
        Vec<S> e(dim, S(0));
        e[j] = S(1);
        for (const auto& q : ortho) e = vsub(e, vscale(dot(e, q), q));
        for (const auto& q : out) e = vsub(e, vscale(dot(e, q), q));
        S nn = dot(e, e);
        bool zero;
        if constexpr (scalar_traits<S>::exact)
            zero = (nn == S(0));
        else
            zero = (to_double(nn) < 1e-20);
        if (zero) continue;
        if constexpr (scalar_traits<S>::exact) {
            Rational root;
            if (!detail::exact_sqrt(nn, root))
                throw std::domain_error("orthonormal_complement: no exact basis in rational mode");
            out.push_back(vscale(S(1) / root, e));
        } else {
            out.push_back(vscale(S(1.0 / std::sqrt(to_double(nn))), e));
        }
        if (static_cast<int>(out.size()) == dim - static_cast<int>(ortho.size())) break;
    }
    return out;
}

/// Coordinates of a body with respect to an orthonormal basis W: the image of
/// the orthogonal projection onto span(W), expressed in W-coordinates.
template <class S>
Polytope<S> to_subspace_coords(const Polytope<S>& p, const std::vector<Vec<S>>& w) {
    std::vector<Vec<S>> pts;
    pts.reserve(p.vertices().size());
    for (const auto& v : p.vertices()) {
        Vec<S> y(w.size());
        for (std::size_t j = 0; j < w.size(); ++j) y[j] = dot(v, w[j]);
        pts.push_back(std::move(y));
    }
    return Polytope<S>(static_cast<int>(w.size()), std::move(pts));
}

namespace detail {

// Vertex enumeration of { y : A y <= b } by k-subset intersection; desk-scale
// dimensions only.
template <class S>
std::vector<Vec<S>> enumerate_vertices(const Mat<S>& a, const Vec<S>& b, int k) {
    std::vector<Vec<S>> out;
    int m = static_cast<int>(a.size());
    std::vector<int> pick(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            Mat<S> sys(k, Vec<S>(k));
            Vec<S> rhs(k);
            for (int i = 0; i < k; ++i) {
                sys[i] = a[pick[i]];
                rhs[i] = b[pick[i]];
            }
            Vec<S> y;
            try {
                y = solve_linear(sys, rhs);
            } catch (const std::domain_error&) {
                return;
            }
            double scale = 1.0;
            for (int i = 0; i < m; ++i) {
                S lhs = dot(a[i], y);
                if constexpr (scalar_traits<S>::exact) {
                    if (lhs > b[i]) return;
                } else {
                    scale = std::max(1.0, std::fabs(to_double(b[i])));
                    if (to_double(lhs) > to_double(b[i]) + 1e-9 * scale) return;
                }
            }
            out.push_back(std::move(y));
            return;
        }
        for (int i = start; i < m; ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return out;
}

} // namespace detail

template <class S>
struct SectionProjection {
    std::optional<Polytope<S>> section; // in span(S)-coordinates; empty marker when missed
    Polytope<S> projection;             // onto the complement, in its coordinates
};

/// Section P \cap span(S) (in S-coordinates) together with the orthogonal
/// projection of P onto span(S)^perp (in complement coordinates). `s_basis`
/// must consist of linearly independent vectors; they are orthonormalized.
template <class S>
SectionProjection<S> restrict_and_project(const Polytope<S>& p, const std::vector<Vec<S>>& s_basis) {
    int n = p.dim();
    std::vector<Vec<S>> sb = orthonormalize(s_basis);
    if (sb.size() != s_basis.size())
        throw std::invalid_argument("restrict_and_project: basis not linearly independent");
    int k = static_cast<int>(sb.size());
    if (!p.full_dimensional())
        throw std::domain_error("restrict_and_project: body must be full-dimensional");

    // Section: facet constraints of P pulled back to span coordinates.
    Mat<S> a;
    Vec<S> b;
    for (const auto& f : p.facets()) {
        Vec<S> row(k);
        for (int j = 0; j < k; ++j) row[j] = dot(f.normal, sb[j]);
        a.push_back(std::move(row));
        b.push_back(f.offset);
    }
    std::vector<Vec<S>> verts = detail::enumerate_vertices(a, b, k);
    std::optional<Polytope<S>> section;
    if (!verts.empty()) section = Polytope<S>(k, std::move(verts));

    std::vector<Vec<S>> comp = orthonormal_complement(sb, n);
    SectionProjection<S> out{std::move(section), to_subspace_coords(p, comp)};
    return out;
}

} // namespace valgebra
