#pragma once

#include "valgebra/valuation.hpp"

#include <Eigen/Dense>

namespace valgebra {

// ---------------------------------------------------------------------------
// Degrees
// ---------------------------------------------------------------------------

/// deg_{n-i}(g) = (g . psi) * phi for strictly positive psi (degree i) and
/// phi (degree n-i). Complementary degrees, so both convolution coefficient
/// conventions agree.
template <class S>
S degree_of_map(const LinearMap<S>& g, const Valuation<S>& psi, const Valuation<S>& phi) {
    if (psi.dim() != g.dim() || phi.dim() != g.dim())
        throw std::invalid_argument("degree_of_map: dimension mismatch");
    if (psi.degree() + phi.degree() != g.dim())
        throw std::invalid_argument("degree_of_map: degrees must be complementary");
    return convolve(group_action(g, psi), phi, ConvMode::PaperLiteral).scalar_value();
}

/// Spectral dynamical degree d_codeg(g) = |det g|^{-1} prod of the codeg
/// largest eigenvalue moduli.
template <class S>
double dynamical_degree_spectral(const LinearMap<S>& g, int codeg) {
    if (codeg < 0 || codeg > g.dim()) throw std::invalid_argument("dynamical_degree_spectral: bad codegree");
    double p = 1.0;
    for (int j = 0; j < codeg; ++j) p *= g.eigen_moduli()[j];
    return p / to_double(g.abs_det());
}

/// Convergence report for the empirical degree sequence. `raw` holds the
/// coefficient-free normalized degrees V(g^k(B)[codeg], B[n-codeg])/|det g|^k;
/// `roots` their plain k-th roots and `refined` the half-window estimator
/// (raw_k / raw_{ceil(k/2)})^{1/(k - ceil(k/2))}, which cancels the leading
/// constant and converges geometrically.
template <class S>
struct DegreeReport {
    int codegree = 0;
    std::vector<int> ks;
    std::vector<S> raw;            // exact in rational mode
    std::vector<double> log_raw;   // log of the same, safe for large k
    std::vector<double> roots;     // plain k-th roots
    std::vector<double> refined;   // half-window growth estimates
    double fekete_estimate = 0;    // exp(min_k log(C raw_k)/k), an upper bound
    double spectral_value = 0;     // |det g|^{-1} prod top-codeg moduli
    std::string reference;         // reference body id

    void finish(double log_c, double log_volb) {
        refined.clear();
        for (std::size_t idx = 0; idx < ks.size(); ++idx) {
            int k = ks[idx];
            int half = (k + 1) / 2;
            if (half == k) {
                refined.push_back(std::exp(log_raw[idx] / k));
            } else {
                refined.push_back(std::exp((log_raw[idx] - log_raw[half - 1]) / (k - half)));
            }
        }
        double fk = std::numeric_limits<double>::infinity();
        for (std::size_t idx = 0; idx < ks.size(); ++idx)
            fk = std::min(fk, (log_raw[idx] - log_c - log_volb) / ks[idx]);
        fekete_estimate = std::exp(fk);
    }

    double rel_error() const {
        if (refined.empty() || spectral_value == 0) return 0;
        return std::fabs(refined.back() - spectral_value) / spectral_value;
    }
};

namespace detail {

// V(Kbig[c], B[n-c]) with a scale guard in float mode: the big body is
// shrunk to unit size and the volume rescaled in log domain.
template <class S>
double log_mixed_volume_scaled(const Polytope<S>& big, int c, const Polytope<S>& b, int n) {
    if constexpr (scalar_traits<S>::exact) {
        std::vector<Polytope<S>> args(static_cast<std::size_t>(c), big);
        for (int j = 0; j < n - c; ++j) args.push_back(b);
        return std::log(to_double(mixed_volume(args)));
    } else {
        double mx = 1.0;
        for (const auto& v : big.vertices())
            for (double x : v) mx = std::max(mx, std::fabs(x));
        Polytope<S> scaled = big.scale(S(1.0 / mx));
        std::vector<Polytope<S>> args(static_cast<std::size_t>(c), scaled);
        for (int j = 0; j < n - c; ++j) args.push_back(b);
        return std::log(mixed_volume(args)) + c * std::log(mx);
    }
}

// Closed-form sequence when g is diagonal and B an axis box: permanents of
// the edge-length matrix with codeg rows scaled by |lambda|^k.
template <class S>
S box_degree_mixed_volume(const LinearMap<S>& g, int k, int codeg, const Vec<S>& edges) {
    int n = g.dim();
    Mat<S> m(n, Vec<S>(n));
    for (int r = 0; r < n; ++r)
        for (int a = 0; a < n; ++a) {
            if (r < codeg) {
                S lam = scalar_abs(g.entries()[a][a]);
                S pw(1);
                for (int t = 0; t < k; ++t) pw *= lam;
                m[r][a] = pw * edges[a];
            } else {
                m[r][a] = edges[a];
            }
        }
    return detail::permanent(m) / factorial<S>(n);
}

} // namespace detail

/// Empirical dynamical degree: the sequence V(g^k(B)[codeg], B[n-codeg])
/// normalized by |det g|^k, its k-th roots, the half-window growth estimates,
/// the Fekete infimum estimate (with the reverse-KT constant
/// C = n!/(codeg!(n-codeg)! vol B)) and the spectral value. Exact permanents
/// are used when g is diagonal and B a box.
template <class S>
DegreeReport<S> dynamical_degree_empirical(const LinearMap<S>& g, int codeg, const Polytope<S>& b, int k_max,
                                           const std::string& reference_id = "custom") {
    int n = g.dim();
    if (!b.full_dimensional()) throw std::invalid_argument("dynamical_degree_empirical: B must be full-dimensional");
    if (codeg < 1 || codeg > n) throw std::invalid_argument("dynamical_degree_empirical: bad codegree");
    if (k_max < 4) throw std::invalid_argument("dynamical_degree_empirical: k_max must be at least 4");

    // reverse-KT constant c = codeg!(n-codeg)!/n!
    S c0 = factorial<S>(n - codeg) * factorial<S>(codeg) / factorial<S>(n);
    double log_c0 = std::log(to_double(c0));
    double log_det = std::log(to_double(g.abs_det()));
    double log_volb = std::log(to_double(b.volume()));

    Vec<S> box_edges;
    bool box_path = false;
    {
        Vec<S> lo, hi;
        if (g.is_diagonal() && detail::is_axis_box(b, lo, hi)) {
            box_path = true;
            box_edges = vsub(hi, lo);
        }
    }

    DegreeReport<S> rep;
    rep.codegree = codeg;
    rep.reference = reference_id;
    rep.spectral_value = dynamical_degree_spectral(g, codeg);

    std::vector<double> log_v(k_max + 1, 0.0);
    std::vector<S> exact_v(k_max + 1, S(0));
    parallel_for(static_cast<std::size_t>(k_max), [&](std::size_t idx) {
        int k = static_cast<int>(idx) + 1;
        if (box_path) {
            exact_v[k] = detail::box_degree_mixed_volume(g, k, codeg, box_edges);
            log_v[k] = std::log(to_double(exact_v[k]));
        } else {
            Polytope<S> img = g.power(k).apply(b);
            log_v[k] = detail::log_mixed_volume_scaled(img, codeg, b, n);
            if constexpr (scalar_traits<S>::exact) {
                std::vector<Polytope<S>> args(static_cast<std::size_t>(codeg), img);
                for (int j = 0; j < n - codeg; ++j) args.push_back(b);
                exact_v[k] = mixed_volume(args);
            }
        }
    });

    for (int k = 1; k <= k_max; ++k) {
        double lr = log_v[k] - k * log_det; // log raw_k
        rep.ks.push_back(k);
        rep.log_raw.push_back(lr);
        rep.roots.push_back(std::exp(lr / k));
        if (box_path || scalar_traits<S>::exact) {
            S det_pow(1);
            for (int t = 0; t < k; ++t) det_pow *= g.abs_det();
            rep.raw.push_back(exact_v[k] / det_pow);
        } else {
            rep.raw.push_back(S(std::exp(lr)));
        }
    }
    rep.finish(log_c0, log_volb);
    return rep;
}

/// Margins d_i^2 - d_{i-1} d_{i+1} of the spectral degree sequence,
/// i = 1..n-1; log-concavity makes every entry nonnegative.
template <class S>
std::vector<double> log_concavity_report(const LinearMap<S>& g) {
    int n = g.dim();
    std::vector<double> d(n + 1);
    for (int j = 0; j <= n; ++j) d[j] = dynamical_degree_spectral(g, j);
    std::vector<double> margins;
    for (int j = 1; j + 1 <= n; ++j) margins.push_back(d[j] * d[j] - d[j - 1] * d[j + 1]);
    return margins;
}

// ---------------------------------------------------------------------------
// Relative degrees
// ---------------------------------------------------------------------------

/// Relative degree sequence reldeg(g^k) = (g^k psi) * phi * tau_B with
/// tau_B = V(-; B_S[m]) for a body B_S inside the g-invariant subspace S.
/// Evaluated through the subspace reduction formula: the B_S factor splits
/// off as vol_S(B_S) and the rest lives on the orthogonal complement.
template <class S>
DegreeReport<S> relative_dynamical_degree(const LinearMap<S>& g, const std::vector<Vec<S>>& s_basis, int codeg,
                                          const Polytope<S>& b_s, const Valuation<S>& psi, const Valuation<S>& phi,
                                          int k_max) {
    int n = g.dim();
    int m = static_cast<int>(s_basis.size());
    std::vector<Vec<S>> sb = orthonormalize(s_basis);
    if (static_cast<int>(sb.size()) != m)
        throw std::invalid_argument("relative_dynamical_degree: basis not independent");

    // invariance check g(S) = S
    std::vector<Vec<S>> comp = orthonormal_complement(sb, n);
    for (const auto& s : sb) {
        Vec<S> gs = g.apply(s);
        S res(0);
        for (const auto& w : comp) {
            S c = dot(gs, w);
            res += c * c;
        }
        double rel = to_double(res) / std::max(1.0, to_double(dot(gs, gs)));
        if (rel > 1e-18) throw std::invalid_argument("relative_dynamical_degree: subspace not g-invariant");
    }

    if (psi.degree() + phi.degree() + (n - m) != 2 * n)
        throw std::invalid_argument("relative_dynamical_degree: degrees must make the triple convolution scalar");

    // vol of B_S inside S and the projected data
    S vol_bs = to_subspace_coords(b_s, sb).volume();
    if (!(vol_bs > S(0))) throw std::invalid_argument("relative_dynamical_degree: B_S must be full-dimensional in S");

    // quotient action on the complement: column r holds the W-coordinates of
    // the projection of g w_r. With S the whole space the quotient is trivial
    // and the sequence reduces to the plain codegree-0 degree.
    std::vector<double> quotient_moduli;
    if (m < n) {
        Mat<S> gbar(n - m, Vec<S>(n - m));
        for (int r = 0; r < n - m; ++r) {
            Vec<S> gw = g.apply(comp[r]);
            for (int c = 0; c < n - m; ++c) gbar[c][r] = dot(gw, comp[c]);
        }
        quotient_moduli = LinearMap<S>(gbar).eigen_moduli();
    }

    int i_deg = psi.degree();
    S c1 = convolution_coefficient<S>(n, i_deg, phi.degree(), ConvMode::UnitNormalized);
    S c2 = convolution_coefficient<S>(n, i_deg + phi.degree() - n, n - m, ConvMode::UnitNormalized);
    S reduction = vol_bs / binomial<S>(n, m);

    DegreeReport<S> rep;
    rep.codegree = codeg;
    rep.reference = "relative";
    {
        double p = 1.0;
        for (int j = 0; j < codeg; ++j) p *= quotient_moduli.at(j);
        rep.spectral_value = p / to_double(g.abs_det());
    }

    S det_pow(1);
    for (int k = 1; k <= k_max; ++k) {
        det_pow *= g.abs_det();
        LinearMap<S> gk = g.power(k);
        S acc(0);
        for (const auto& tp : psi.terms())
            for (const auto& tf : phi.terms()) {
                if (m == n) {
                    acc += tp.weight * tf.weight; // empty projected tuple
                    continue;
                }
                std::vector<Polytope<S>> proj;
                for (const auto& a : tp.bodies) proj.push_back(to_subspace_coords(gk.apply(a), comp));
                for (const auto& a : tf.bodies) proj.push_back(to_subspace_coords(a, comp));
                acc += tp.weight * tf.weight * mixed_volume(proj);
            }
        S raw = c1 * c2 * reduction * acc / det_pow;
        rep.ks.push_back(k);
        rep.raw.push_back(raw);
        double lr = std::log(std::fabs(to_double(raw)));
        rep.log_raw.push_back(lr);
        rep.roots.push_back(std::exp(lr / k));
    }
    rep.finish(0.0, 0.0);
    return rep;
}

// ---------------------------------------------------------------------------
// Continuity probe
// ---------------------------------------------------------------------------

struct ContinuityProbe {
    double delta;
    std::vector<double> max_deviation; // per codegree 1..n-1
    double spot_empirical_rel_error;   // convergence check on one perturbed map
};

/// Spectral degrees of random perturbations g + delta E; deviations shrink
/// with delta (continuity of d_k on GL). One perturbed sample also gets an
/// empirical-route consistency check.
inline ContinuityProbe continuity_probe(const LinearMap<double>& g, double delta, int trials, Rng& rng) {
    int n = g.dim();
    ContinuityProbe out;
    out.delta = delta;
    out.max_deviation.assign(n - 1, 0.0);
    std::vector<double> base(n - 1);
    for (int c = 1; c < n; ++c) base[c - 1] = dynamical_degree_spectral(g, c);
    LinearMap<double> last = g;
    for (int t = 0; t < trials; ++t) {
        for (;;) {
            Mat<double> e(n, Vec<double>(n));
            double norm = 0;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    e[r][c] = rng.uniform(-1.0, 1.0);
                    norm += e[r][c] * e[r][c];
                }
            norm = std::sqrt(norm);
            Mat<double> m = g.entries();
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) m[r][c] += delta * e[r][c] / norm;
            try {
                last = LinearMap<double>(std::move(m));
                break;
            } catch (const std::invalid_argument&) { // singular perturbation: resample
            }
        }
        for (int c = 1; c < n; ++c)
            out.max_deviation[c - 1] =
                std::max(out.max_deviation[c - 1], std::fabs(dynamical_degree_spectral(last, c) - base[c - 1]));
    }
    auto ball = ball_polytope<double>(n, std::max(2 * n, 12));
    auto rep = dynamical_degree_empirical(last, 1, ball.body, 12, ball.id);
    out.spot_empirical_rel_error = rep.rel_error();
    return out;
}

// ---------------------------------------------------------------------------
// Invariant valuations
// ---------------------------------------------------------------------------

template <class S>
struct InvariantValuation {
    Valuation<S> phi;
    double d;                      // predicted eigenvalue d_{n-codeg}(g)
    double residual;               // max relative |g.phi - d phi| over samples
    bool has_rotation_take = false; // an odd slice of a rotation block is involved
    int disk_resolution = 0;
};

namespace detail {

inline Eigen::MatrixXd to_eigen(const Mat<double>& m) {
    Eigen::MatrixXd e(m.size(), m.size());
    for (std::size_t r = 0; r < m.size(); ++r)
        for (std::size_t c = 0; c < m.size(); ++c) e(r, c) = m[r][c];
    return e;
}

inline std::vector<Vec<double>> null_space_basis(const Eigen::MatrixXd& m, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    std::vector<Vec<double>> out;
    int n = static_cast<int>(m.cols());
    double scale = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    for (int c = 0; c < n; ++c) {
        double sv = c < svd.singularValues().size() ? svd.singularValues()[c] : 0.0;
        if (sv <= tol * std::max(1.0, scale)) {
            Vec<double> v(n);
            for (int r = 0; r < n; ++r) v[r] = svd.matrixV()(r, c);
            out.push_back(std::move(v));
        }
    }
    return out;
}

struct SpectralBlock {
    bool complex_pair = false;
    double modulus = 0;
    std::complex<double> value;
    int dim = 0;                         // real: multiplicity, complex: 2*pairs
    std::vector<Vec<double>> planes;     // complex: flattened (x,y) per plane
    Eigen::MatrixXd factor;              // (A - lambda I) or quadratic factor
};

template <class S>
Vec<S> to_scalar_vec(const Vec<double>& v) {
    Vec<S> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        if constexpr (scalar_traits<S>::exact)
            out[j] = rationalize(v[j]);
        else
            out[j] = v[j];
    }
    return out;
}

// Centered box spanned by the given directions (full-dimensional inside
// their span).
template <class S>
Polytope<S> box_in_span(const std::vector<Vec<double>>& dirs, int n) {
    std::vector<Vec<S>> pts;
    for (std::size_t mask = 0; mask < (std::size_t(1) << dirs.size()); ++mask) {
        Vec<double> p(n, 0.0);
        for (std::size_t l = 0; l < dirs.size(); ++l) {
            double sgn = (mask >> l) & 1 ? 0.5 : -0.5;
            for (int j = 0; j < n; ++j) p[j] += sgn * dirs[l][j];
        }
        pts.push_back(to_scalar_vec<S>(p));
    }
    return Polytope<S>(n, std::move(pts));
}

// Regular m-gon "disk" in the plane spanned by (x, y) = (Re v, Im v); in
// these coordinates the block acts as a scaled rotation, so the coordinate
// disk is invariant.
template <class S>
Polytope<S> disk_in_plane(const Vec<double>& x, const Vec<double>& y, int m, int n) {
    std::vector<Vec<S>> pts;
    for (int t = 0; t < m; ++t) {
        double th = 2.0 * M_PI * t / m;
        Vec<double> p(n);
        for (int j = 0; j < n; ++j) p[j] = std::cos(th) * x[j] + std::sin(th) * y[j];
        pts.push_back(to_scalar_vec<S>(p));
    }
    return Polytope<S>(n, std::move(pts));
}

} // namespace detail

/// Builds a d_{n-codeg}(g)-invariant valuation of degree codeg: bodies live in
/// invariant subspaces attached to the largest eigenvalue moduli (boxes over
/// real Jordan structure, regular-polygon disks over rotation blocks), each
/// repeated by its subspace dimension; an odd slice of a rotation block uses a
/// single polygon and is only approximately invariant, with the residual
/// shrinking as the polygon resolution grows.
template <class S>
InvariantValuation<S> invariant_valuation(const LinearMap<S>& g, int codeg, int disk_resolution, Rng& rng,
                                          int residual_samples = 20, bool allow_rotation_approx = true) {
    int n = g.dim();
    if (codeg < 0 || codeg > n) throw std::invalid_argument("invariant_valuation: bad codegree");
    int need = n - codeg; // number of tuple bodies
    double abs_det = to_double(g.abs_det());

    if (need == 0) {
        InvariantValuation<S> out{Valuation<S>::volume(n), 1.0 / abs_det, 0.0, false, disk_resolution};
        // residual of vol: exact by |det| scaling
        return out;
    }

    Mat<double> gd(n, Vec<double>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) gd[r][c] = to_double(g.entries()[r][c]);
    Eigen::MatrixXd a = detail::to_eigen(gd);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    double scale = 0;
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(es.eigenvalues()[j]));
    const double tol = 1e-7;

    // cluster eigenvalues into spectral blocks
    std::vector<detail::SpectralBlock> blocks;
    std::vector<bool> used(n, false);
    for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        std::complex<double> lam = es.eigenvalues()[j];
        if (std::fabs(lam.imag()) <= tol * scale) {
            detail::SpectralBlock blk;
            blk.value = {lam.real(), 0.0};
            blk.modulus = std::fabs(lam.real());
            for (int k2 = j; k2 < n; ++k2) {
                if (used[k2]) continue;
                std::complex<double> mu = es.eigenvalues()[k2];
                if (std::fabs(mu.imag()) <= tol * scale && std::fabs(mu.real() - lam.real()) <= tol * scale) {
                    used[k2] = true;
                    blk.dim += 1;
                }
            }
            blk.factor = a - lam.real() * Eigen::MatrixXd::Identity(n, n);
            blocks.push_back(std::move(blk));
        } else {
            double re = lam.real(), im = std::fabs(lam.imag());
            detail::SpectralBlock blk;
            blk.complex_pair = true;
            blk.value = {re, im};
            blk.modulus = std::abs(lam);
            for (int k2 = j; k2 < n; ++k2) {
                if (used[k2]) continue;
                std::complex<double> mu = es.eigenvalues()[k2];
                if (std::fabs(std::fabs(mu.imag()) - im) <= tol * scale && std::fabs(mu.real() - re) <= tol * scale) {
                    used[k2] = true;
                    blk.dim += 1;
                    if (mu.imag() > 0) {
                        Vec<double> x(n), y(n);
                        for (int r = 0; r < n; ++r) {
                            x[r] = es.eigenvectors()(r, k2).real();
                            y[r] = es.eigenvectors()(r, k2).imag();
                        }
                        double mx = 0;
                        for (int r = 0; r < n; ++r) mx = std::max({mx, std::fabs(x[r]), std::fabs(y[r])});
                        blk.planes.push_back(vscale(1.0 / mx, x));
                        blk.planes.push_back(vscale(1.0 / mx, y));
                    }
                }
            }
            blk.factor = a * a - 2 * re * a + (re * re + im * im) * Eigen::MatrixXd::Identity(n, n);
            blocks.push_back(std::move(blk));
        }
    }
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const detail::SpectralBlock& x, const detail::SpectralBlock& y) { return x.modulus > y.modulus; });

    // move real blocks ahead of rotation blocks among equal moduli so odd
    // boundaries land on real structure when possible
    std::stable_sort(blocks.begin(), blocks.end(), [&](const detail::SpectralBlock& x, const detail::SpectralBlock& y) {
        if (std::fabs(x.modulus - y.modulus) > tol * std::max(1.0, scale)) return x.modulus > y.modulus;
        return !x.complex_pair && y.complex_pair;
    });

    std::vector<Polytope<S>> tuple;
    double mod_product = 1.0;
    bool rotation_take = false;
    int remaining = need;
    for (const auto& blk : blocks) {
        if (remaining == 0) break;
        int take = std::min(remaining, blk.dim);
        remaining -= take;
        for (int t = 0; t < take; ++t) mod_product *= blk.modulus;

        if (!blk.complex_pair) {
            // invariant subspace between successive kernels of (A - lambda)^p;
            // defective eigenvalues carry sqrt(eps)-scale error, hence the
            // relaxed null-space threshold
            std::vector<Vec<double>> basis;
            Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
            for (int p = 1; static_cast<int>(basis.size()) < take && p <= n; ++p) {
                power = power * blk.factor;
                std::vector<Vec<double>> ker = detail::null_space_basis(power, 1e-6);
                // extend the previous level to `take` vectors inside this level
                for (const auto& v : ker) {
                    if (static_cast<int>(basis.size()) == take) break;
                    Vec<double> w = v;
                    for (const auto& q : basis) w = vsub(w, vscale(dot(w, q), q));
                    double nn = std::sqrt(dot(w, w));
                    if (nn > 1e-6) basis.push_back(vscale(1.0 / nn, w));
                }
            }
            if (static_cast<int>(basis.size()) != take)
                throw std::domain_error("invariant_valuation: could not realize the invariant subspace");
            Polytope<S> body = detail::box_in_span<S>(basis, n);
            for (int t = 0; t < take; ++t) tuple.push_back(body);
        } else {
            int pairs_needed = take / 2;
            bool odd = (take % 2) != 0;
            if (static_cast<int>(blk.planes.size()) / 2 < pairs_needed + (odd ? 1 : 0))
                throw std::domain_error(
                    "invariant_valuation: defective rotation block prevents the invariant choice");
            if (odd && !allow_rotation_approx)
                throw std::domain_error(
                    "invariant_valuation: eigenvalue-moduli tie across a rotation block boundary prevents an exact "
                    "invariant choice");
            for (int c = 0; c < pairs_needed; ++c) {
                Polytope<S> disk =
                    detail::disk_in_plane<S>(blk.planes[2 * c], blk.planes[2 * c + 1], disk_resolution, n);
                tuple.push_back(disk);
                tuple.push_back(disk);
            }
            if (odd) {
                rotation_take = true;
                Polytope<S> disk = detail::disk_in_plane<S>(blk.planes[2 * pairs_needed],
                                                            blk.planes[2 * pairs_needed + 1], disk_resolution, n);
                tuple.push_back(disk);
            }
        }
    }
    if (remaining != 0) throw std::domain_error("invariant_valuation: not enough spectral structure");

    Valuation<S> phi = Valuation<S>::mixed(n, tuple);
    double d = mod_product / abs_det;

    Valuation<S> acted = group_action(g, phi);
    double residual = 0;
    for (int s = 0; s < residual_samples; ++s) {
        Polytope<S> l = random_body<S>(rng, n, n + 3);
        double num = std::fabs(to_double(acted.evaluate(l)) - d * to_double(phi.evaluate(l)));
        double den = d * to_double(phi.evaluate(l));
        if (den > 1e-30) residual = std::max(residual, num / den);
    }
    return {phi, d, residual, rotation_take, disk_resolution};
}

/// Vanishing test of Theorem-type pos invariant (2): under strict
/// log-concavity d_i^2 > d_{i-s} d_{i+s}, two d_i(g)-invariant valuations of
/// degree n-i convolve with V(-; B[n-2i]) to the zero scalar. Refuses (throws)
/// when the strictness hypothesis fails.
template <class S>
struct VanishingCheck {
    S scalar;
    double margin;
    double residual_1, residual_2;
};

template <class S>
VanishingCheck<S> vanishing_check(const LinearMap<S>& g, int i, int s, const ReferenceBody<S>& ref,
                                  int disk_resolution, Rng& rng) {
    int n = g.dim();
    if (2 * i > n) throw std::invalid_argument("vanishing_check: need 2i <= n");
    if (i - s < 0 || i + s > n || s < 1) throw std::invalid_argument("vanishing_check: bad shift s");
    double di = dynamical_degree_spectral(g, i);
    double margin = di * di - dynamical_degree_spectral(g, i - s) * dynamical_degree_spectral(g, i + s);
    if (margin <= 1e-12)
        throw std::domain_error("vanishing_check: strict log-concavity margin is not positive");

    auto inv1 = invariant_valuation<S>(g, n - i, disk_resolution, rng);
    auto inv2_raw = invariant_valuation<S>(g, n - i, disk_resolution, rng);
    // a rescaled copy is a second (representation-distinct) invariant valuation
    Valuation<S> psi2 = inv2_raw.phi * S(3);

    Valuation<S> pair = convolve(inv1.phi, psi2, ConvMode::UnitNormalized);
    Valuation<S> phi_b =
        Valuation<S>::mixed(n, std::vector<Polytope<S>>(static_cast<std::size_t>(n - 2 * i), ref.body));
    S scalar = convolve(pair, phi_b, ConvMode::UnitNormalized).scalar_value();
    return {scalar, margin, inv1.residual, inv2_raw.residual};
}

} // namespace valgebra
