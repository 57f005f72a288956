#pragma once

#include "valgebra/dynamics.hpp"
#include "valgebra/valuation.hpp"

namespace valgebra {

// ---------------------------------------------------------------------------
// Classical 2-D Minkowski reconstruction
// ---------------------------------------------------------------------------

/// Polygon with prescribed edge normals and lengths: edges are chained in
/// angular order (each edge is length_j times the +90-degree rotation of its
/// normal) and the result is translated to put the vertex centroid at the
/// origin. Requires balanced edge data and normals spanning more than a
/// half-plane.
template <class S>
Polytope<S> classical_minkowski_2d(const std::vector<Vec<S>>& normals, const std::vector<S>& lengths) {
    if (normals.size() != lengths.size() || normals.size() < 3)
        throw std::invalid_argument("classical_minkowski_2d: need at least 3 normal/length pairs");
    std::size_t m = normals.size();
    Vec<S> balance(2, S(0));
    for (std::size_t j = 0; j < m; ++j) {
        if (!(lengths[j] > S(0))) throw std::invalid_argument("classical_minkowski_2d: lengths must be positive");
        balance = vadd(balance, vscale(lengths[j], normals[j]));
    }
    double bnorm = std::sqrt(to_double(dot(balance, balance)));
    double scale = 0;
    for (std::size_t j = 0; j < m; ++j) scale += to_double(lengths[j]);
    if (bnorm > 1e-9 * scale)
        throw std::invalid_argument("classical_minkowski_2d: edge data is not balanced");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::atan2(to_double(normals[a][1]), to_double(normals[a][0])) <
               std::atan2(to_double(normals[b][1]), to_double(normals[b][0]));
    });
    // degenerate when all normals sit inside a closed half-plane
    {
        std::vector<double> ang;
        for (std::size_t j : order) ang.push_back(std::atan2(to_double(normals[j][1]), to_double(normals[j][0])));
        double max_gap = 2 * M_PI + ang.front() - ang.back();
        for (std::size_t j = 1; j < ang.size(); ++j) max_gap = std::max(max_gap, ang[j] - ang[j - 1]);
        if (max_gap >= M_PI - 1e-12)
            throw std::invalid_argument("classical_minkowski_2d: normals lie in a closed half-plane");
    }

    std::vector<Vec<S>> verts;
    Vec<S> cur(2, S(0));
    for (std::size_t j : order) {
        verts.push_back(cur);
        Vec<S> edge{S(-lengths[j] * normals[j][1]), S(lengths[j] * normals[j][0])};
        cur = vadd(cur, edge);
    }
    Polytope<S> poly(2, std::move(verts));
    return poly.translate(vneg(poly.vertex_centroid()));
}

/// Edge data (unit outer normals, edge lengths) of a full-dimensional polygon.
/// Exact mode requires edges of exactly rational length.
template <class S>
std::pair<std::vector<Vec<S>>, std::vector<S>> polygon_edge_data(const Polytope<S>& p) {
    if (p.dim() != 2 || !p.full_dimensional())
        throw std::invalid_argument("polygon_edge_data: need a full-dimensional polygon");
    // order vertices counterclockwise around the centroid
    Vec<S> c = p.vertex_centroid();
    std::vector<Vec<S>> vs = p.vertices();
    std::sort(vs.begin(), vs.end(), [&](const Vec<S>& a, const Vec<S>& b) {
        Vec<S> da = vsub(a, c), db = vsub(b, c);
        return std::atan2(to_double(da[1]), to_double(da[0])) < std::atan2(to_double(db[1]), to_double(db[0]));
    });
    std::vector<Vec<S>> normals;
    std::vector<S> lengths;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        Vec<S> e = vsub(vs[(j + 1) % vs.size()], vs[j]);
        S len2 = dot(e, e);
        S len;
        if constexpr (scalar_traits<S>::exact) {
            Rational root;
            if (!detail::exact_sqrt(len2, root))
                throw std::domain_error("polygon_edge_data: edge length is irrational in exact mode");
            len = root;
        } else {
            len = std::sqrt(to_double(len2));
        }
        normals.push_back({e[1] / len, S(-e[0] / len)});
        lengths.push_back(len);
    }
    return {normals, lengths};
}

// ---------------------------------------------------------------------------
// Support-vector parametrization
// ---------------------------------------------------------------------------

/// A body parametrized by support values on a fixed fan of unit outer
/// normals; the solver's unknown.
struct SupportVector {
    int dim;
    std::vector<Vec<double>> normals;
    Vec<double> h;
};

/// Regular direction fan: 2-D uses equally spaced angles; 3-D a symmetrized
/// sphere sampling.
inline std::vector<Vec<double>> support_fan(int dim, int resolution) {
    std::vector<Vec<double>> normals;
    if (dim == 2) {
        for (int j = 0; j < resolution; ++j) {
            double th = 2 * M_PI * j / resolution;
            normals.push_back({std::cos(th), std::sin(th)});
        }
    } else if (dim == 3) {
        auto ball = ball_polytope<double>(3, (resolution + 1) / 2);
        for (const auto& v : ball.body.vertices()) {
            double nn = std::sqrt(dot(v, v));
            normals.push_back(vscale(1.0 / nn, v));
        }
    } else {
        throw std::invalid_argument("support_fan: only dimensions 2 and 3 are supported");
    }
    return normals;
}

namespace detail {

// Sutherland-Hodgman clip of a convex CCW polygon by <u, x> <= h.
inline std::vector<Vec<double>> clip_polygon(const std::vector<Vec<double>>& poly, const Vec<double>& u, double h) {
    std::vector<Vec<double>> out;
    std::size_t m = poly.size();
    for (std::size_t j = 0; j < m; ++j) {
        const Vec<double>& a = poly[j];
        const Vec<double>& b = poly[(j + 1) % m];
        double da = dot(a, u) - h, db = dot(b, u) - h;
        if (da <= 0) out.push_back(a);
        if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
            double t = da / (da - db);
            out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
        }
    }
    return out;
}

} // namespace detail

/// Body of a support vector: the intersection of the fan's half-planes.
/// Returns nullopt when the intersection is empty (or degenerate).
inline std::optional<Polytope<double>> support_body(const SupportVector& sv) {
    if (sv.dim == 2) {
        double r = 1.0;
        for (double v : sv.h) r = std::max(r, std::fabs(v));
        r = 3 * r + 1;
        std::vector<Vec<double>> poly{{-r, -r}, {r, -r}, {r, r}, {-r, r}};
        for (std::size_t j = 0; j < sv.normals.size(); ++j) {
            poly = detail::clip_polygon(poly, sv.normals[j], sv.h[j]);
            if (poly.size() < 3) return std::nullopt;
        }
        Polytope<double> p(2, poly);
        if (!p.full_dimensional()) return std::nullopt;
        return p;
    }
    Mat<double> a;
    Vec<double> b;
    for (std::size_t j = 0; j < sv.normals.size(); ++j) {
        a.push_back(sv.normals[j]);
        b.push_back(sv.h[j]);
    }
    std::vector<Vec<double>> verts = detail::enumerate_vertices(a, b, sv.dim);
    if (verts.size() < std::size_t(sv.dim) + 1) return std::nullopt;
    Polytope<double> p(sv.dim, verts);
    if (!p.full_dimensional()) return std::nullopt;
    return p;
}

// ---------------------------------------------------------------------------
// Variational solver
// ---------------------------------------------------------------------------

struct SolverConfig {
    int fan_resolution = 64;       // 2-D default; 3-D fans use ~80 directions
    int max_iters = 400;
    int polish_iters = 60;         // coordinate-descent rounds after gradient descent
    double grad_step = 0.25;       // initial step relative to the h scale
    double fd_step = 1e-5;         // central difference step scale
    int max_backtracks = 40;
    double vol_tol = 1e-9;
    double stat_tol = 1e-8;
    int multistart = 4;
    std::uint64_t seed = 1;
};

struct SolverTraceRow {
    int iter;
    double objective;
    double volume;
    double step;
};

struct MinkowskiSolution {
    Polytope<double> body;       // normalized to volume 1
    double c;                    // psi(body)
    bool converged;
    std::vector<SolverTraceRow> trace;
};

namespace detail {

// scale-invariant objective psi(P(h)) / vol(P(h))^{i/n}
struct VariationalObjective {
    const Valuation<double>* psi;
    const SupportVector* fan_shape;
    int n, i;

    double eval(const Vec<double>& h, double* vol_out = nullptr) const {
        SupportVector sv{fan_shape->dim, fan_shape->normals, h};
        auto body = support_body(sv);
        if (!body) return std::numeric_limits<double>::infinity();
        double vol = body->volume();
        if (vol < 1e-14) return std::numeric_limits<double>::infinity();
        if (vol_out) *vol_out = vol;
        return psi->evaluate(*body) / std::pow(vol, double(i) / n);
    }
};

} // namespace detail

/// Variational scheme for the generalized Minkowski problem: minimize
/// psi(P(h)) over the fixed fan under vol = 1, by projected gradient descent
/// on the scale-invariant quotient with central-difference gradients and a
/// coordinate-descent polish. The certificate's epsilon feeds a Diskant-type
/// containment bound that clips runaway iterates. Returns the best body
/// rescaled to volume 1, the constant c = psi(B) and an iteration trace.
inline MinkowskiSolution variational_minimize(const StrictPositivityCertificate<double>& cert,
                                              const ReferenceBody<double>& ref, const SolverConfig& cfg,
                                              const SupportVector* start = nullptr) {
    const Valuation<double>& psi = cert.valuation;
    if (!(cert.epsilon > 0))
        throw std::invalid_argument("variational_minimize: strict positivity certificate required");
    int n = psi.dim();
    int i = psi.degree();
    if (i < 1) throw std::invalid_argument("variational_minimize: degree must be >= 1");

    SupportVector sv;
    if (start) {
        sv = *start;
    } else {
        sv.dim = n;
        sv.normals = support_fan(n, cfg.fan_resolution);
        sv.h.assign(sv.normals.size(), 1.0);
    }
    std::size_t nfan = sv.normals.size();
    detail::VariationalObjective obj{&psi, &sv, n, i};

    // a-priori containment body from strict positivity: psi >= V(K_cl[n-i], -)
    Polytope<double> k_cl = ref.body.scale(std::pow(to_double(cert.epsilon), 1.0 / (n - i > 0 ? n - i : 1)));

    auto renormalize = [&](Vec<double>& h) {
        SupportVector tmp{sv.dim, sv.normals, h};
        auto body = support_body(tmp);
        if (!body) return false;
        double vol = body->volume();
        double s = std::pow(vol, -1.0 / n);
        for (auto& v : h) v *= s;
        if (i < n) {
            // Diskant clip: recentre, then cap support values by the bound
            // r <= n V(K_cl[n-1], P) / vol(K_cl)
            SupportVector tmp2{sv.dim, sv.normals, h};
            auto body2 = support_body(tmp2);
            if (!body2) return false;
            Vec<double> centroid = body2->vertex_centroid();
            std::vector<Polytope<double>> args(static_cast<std::size_t>(n - 1), k_cl);
            args.push_back(*body2);
            double r_bound = n * mixed_volume(args) / k_cl.volume();
            bool clipped = false;
            for (std::size_t j = 0; j < nfan; ++j) {
                double cap = r_bound * k_cl.support(sv.normals[j]) + dot(sv.normals[j], centroid);
                if (h[j] > cap) {
                    h[j] = cap;
                    clipped = true;
                }
            }
            if (clipped) {
                SupportVector tmp3{sv.dim, sv.normals, h};
                auto body3 = support_body(tmp3);
                if (!body3) return false;
                double s3 = std::pow(body3->volume(), -1.0 / n);
                for (auto& v : h) v *= s3;
            }
        }
        return true;
    };

    Vec<double> h = sv.h;
    renormalize(h);
    MinkowskiSolution sol{Polytope<double>::unit_cube(n), 0.0, false, {}};

    double fbest = obj.eval(h);
    double step = cfg.grad_step;
    bool stalled = false;
    for (int iter = 0; iter < cfg.max_iters && !stalled; ++iter) {
        // central-difference gradient of the scale-invariant objective
        Vec<double> grad(nfan, 0.0);
        double gnorm = 0;
        for (std::size_t j = 0; j < nfan; ++j) {
            double delta = cfg.fd_step * std::max(1.0, std::fabs(h[j]));
            Vec<double> hp = h, hm = h;
            hp[j] += delta;
            hm[j] -= delta;
            double fp = obj.eval(hp), fm = obj.eval(hm);
            if (!std::isfinite(fp) || !std::isfinite(fm)) {
                grad[j] = 0;
                continue;
            }
            grad[j] = (fp - fm) / (2 * delta);
            gnorm += grad[j] * grad[j];
        }
        gnorm = std::sqrt(gnorm);
        if (gnorm < cfg.stat_tol * 1e-4 * std::max(1.0, std::fabs(fbest))) break;

        double tried = step;
        bool accepted = false;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            Vec<double> hn = h;
            for (std::size_t j = 0; j < nfan; ++j) hn[j] -= tried * grad[j] / gnorm;
            if (renormalize(hn)) {
                double fn = obj.eval(hn);
                if (fn < fbest - 1e-15) {
                    h = hn;
                    fbest = fn;
                    accepted = true;
                    sol.trace.push_back({iter, fbest, 1.0, tried});
                    break;
                }
            }
            tried /= 2;
        }
        if (accepted) {
            step = std::min(tried * 2, cfg.grad_step);
        } else {
            stalled = true;
        }
    }

    // coordinate polish: golden-section line search per support value
    const double gr = (std::sqrt(5.0) - 1) / 2;
    for (int round = 0; round < cfg.polish_iters; ++round) {
        bool improved = false;
        double width = 1e-3 * std::pow(0.5, round / 8);
        for (std::size_t j = 0; j < nfan; ++j) {
            double lo = h[j] - width * std::max(1.0, std::fabs(h[j]));
            double hi = h[j] + width * std::max(1.0, std::fabs(h[j]));
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            auto eval_at = [&](double v) {
                Vec<double> hh = h;
                hh[j] = v;
                return obj.eval(hh);
            };
            double f1 = eval_at(x1), f2 = eval_at(x2);
            for (int it = 0; it < 24; ++it) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = eval_at(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = eval_at(x2);
                }
            }
            double cand = (f1 < f2) ? x1 : x2;
            double fc = std::min(f1, f2);
            if (fc < fbest - 1e-16 * std::max(1.0, std::fabs(fbest))) {
                h[j] = cand;
                fbest = fc;
                improved = true;
            }
        }
        renormalize(h);
        fbest = obj.eval(h);
        if (!improved && round > 4) break;
    }

    renormalize(h);
    SupportVector fin{sv.dim, sv.normals, h};
    auto body = support_body(fin);
    if (!body) throw std::runtime_error("variational_minimize: final body degenerate");
    // exact rescale to vol 1
    Polytope<double> b = body->scale(std::pow(body->volume(), -1.0 / n));
    sol.body = b;
    sol.c = psi.evaluate(b);
    sol.converged = std::fabs(b.volume() - 1.0) <= cfg.vol_tol;
    return sol;
}

/// First-variation residuals at a candidate minimizer B with vol(B) = 1:
///   gap(N) = psi(N, B[i-1]) - psi(B) V(B[n-1], N),
/// the coefficient-free form of the stationarity identity. min_gap over test
/// bodies should be >= 0 at a true minimizer, and gap(B) = 0.
template <class S>
std::pair<S, S> stationarity_residual(const Valuation<S>& psi, const Polytope<S>& b,
                                      const std::vector<Polytope<S>>& test_bodies) {
    int n = psi.dim(), i = psi.degree();
    S psi_b = psi.evaluate(b);
    auto gap = [&](const Polytope<S>& nb) {
        std::vector<Polytope<S>> tup{nb};
        for (int t = 0; t < i - 1; ++t) tup.push_back(b);
        std::vector<Polytope<S>> vb(static_cast<std::size_t>(n - 1), b);
        vb.push_back(nb);
        return psi.polarized_evaluate(tup) - psi_b * mixed_volume(vb);
    };
    S eq_gap = scalar_abs(gap(b));
    bool first = true;
    S min_gap(0);
    for (const auto& nb : test_bodies) {
        S g = gap(nb);
        if (first || g < min_gap) {
            min_gap = g;
            first = false;
        }
    }
    return {min_gap, eq_gap};
}

struct MultistartResult {
    std::vector<Polytope<double>> solutions; // centered at the vertex centroid
    Mat<double> pairwise_hausdorff;
    double diameter = 0;
};

/// Independent solver runs from random fan starts; reports the centered
/// solutions and their pairwise Hausdorff distances (an empirical probe of
/// the compactness of the solution set, not a proof).
inline MultistartResult multistart_solution_set(const StrictPositivityCertificate<double>& cert,
                                                const ReferenceBody<double>& ref, const SolverConfig& cfg) {
    int n = cert.valuation.dim();
    std::vector<Polytope<double>> sols(cfg.multistart, Polytope<double>::unit_cube(n));
    std::vector<Vec<double>> normals = support_fan(n, cfg.fan_resolution);
    parallel_for(static_cast<std::size_t>(cfg.multistart), [&](std::size_t run) {
        Rng rng(cfg.seed + run);
        SupportVector sv;
        sv.dim = n;
        sv.normals = normals;
        Polytope<double> seed_body = random_body<double>(rng, n, n + 4);
        sv.h.resize(normals.size());
        for (std::size_t j = 0; j < normals.size(); ++j) sv.h[j] = seed_body.support(normals[j]) + 0.2;
        MinkowskiSolution s = variational_minimize(cert, ref, cfg, &sv);
        sols[run] = s.body.translate(vneg(s.body.vertex_centroid()));
    });
    MultistartResult out;
    out.solutions = sols;
    out.pairwise_hausdorff.assign(sols.size(), Vec<double>(sols.size(), 0.0));
    for (std::size_t a = 0; a < sols.size(); ++a)
        for (std::size_t b = a + 1; b < sols.size(); ++b) {
            double d = hausdorff_distance(sols[a], sols[b]);
            out.pairwise_hausdorff[a][b] = out.pairwise_hausdorff[b][a] = d;
            out.diameter = std::max(out.diameter, d);
        }
    return out;
}

} // namespace valgebra
