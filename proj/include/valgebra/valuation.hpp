#pragma once

#include "valgebra/linear_map.hpp"
#include "valgebra/mixed_volume.hpp"
#include "valgebra/rng.hpp"

namespace valgebra {

template <class S>
struct ValTerm {
    S weight;
    std::vector<Polytope<S>> bodies; // exactly n - degree bodies, sorted
};

/// Degree-i translation-invariant valuation represented as a finite signed
/// measure on (n-i)-tuples of bodies:
///   phi(L) = sum_t w_t V(L[i], K_{t,1}, ..., K_{t,n-i}).
/// Terms are kept canonical: tuples sorted body-wise, equal tuples merged,
/// zero weights dropped. Degree n means empty tuples (multiples of vol);
/// degree 0 evaluates to a constant.
template <class S>
class Valuation {
  public:
    Valuation(int dim, int degree, std::vector<ValTerm<S>> terms) : dim_(dim), degree_(degree) {
        if (degree < 0 || degree > dim) throw std::invalid_argument("Valuation: degree out of range");
        std::size_t arity = static_cast<std::size_t>(dim - degree);
        for (auto& t : terms) {
            if (t.bodies.size() != arity)
                throw std::invalid_argument("Valuation: term tuple length must be dim - degree");
            for (const auto& b : t.bodies)
                if (b.dim() != dim) throw std::invalid_argument("Valuation: body dimension mismatch");
            std::sort(t.bodies.begin(), t.bodies.end());
        }
        std::sort(terms.begin(), terms.end(), [](const ValTerm<S>& a, const ValTerm<S>& b) {
            return std::lexicographical_compare(a.bodies.begin(), a.bodies.end(), b.bodies.begin(),
                                                b.bodies.end());
        });
        for (auto& t : terms) {
            if (!terms_.empty() && std::equal(t.bodies.begin(), t.bodies.end(), terms_.back().bodies.begin(),
                                              terms_.back().bodies.end(),
                                              [](const Polytope<S>& a, const Polytope<S>& b) { return a == b; })) {
                terms_.back().weight += t.weight;
            } else {
                terms_.push_back(std::move(t));
            }
        }
        std::erase_if(terms_, [](const ValTerm<S>& t) { return t.weight == S(0); });
    }

    /// The Lebesgue volume: the unit of the convolution algebra.
    static Valuation volume(int dim) { return Valuation(dim, dim, {ValTerm<S>{S(1), {}}}); }

    /// The Euler characteristic chi(K) = 1 (degree 0), realized on unit cubes.
    static Valuation euler(int dim) {
        return Valuation(dim, 0, {ValTerm<S>{S(1), std::vector<Polytope<S>>(dim, Polytope<S>::unit_cube(dim))}});
    }

    /// phi(L) = V(L[i], A_1, ..., A_{n-i}) for the fixed tuple A.
    static Valuation mixed(int dim, std::vector<Polytope<S>> fixed, S weight = S(1)) {
        int degree = dim - static_cast<int>(fixed.size());
        return Valuation(dim, degree, {ValTerm<S>{weight, std::move(fixed)}});
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const std::vector<ValTerm<S>>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }

    bool nonnegative_weights() const {
        for (const auto& t : terms_)
            if (t.weight < S(0)) return false;
        return true;
    }

    S evaluate(const Polytope<S>& l) const {
        if (l.dim() != dim_) throw std::invalid_argument("evaluate: dimension mismatch");
        if (degree_ == dim_) { // multiples of vol
            S acc(0);
            for (const auto& t : terms_) acc += t.weight * l.volume();
            return acc;
        }
        std::vector<S> parts(terms_.size(), S(0));
        parallel_for(terms_.size(), [&](std::size_t i) {
            std::vector<Polytope<S>> args(static_cast<std::size_t>(degree_), l);
            for (const auto& b : terms_[i].bodies) args.push_back(b);
            parts[i] = terms_[i].weight * mixed_volume(args);
        });
        S acc(0);
        for (const auto& p : parts) acc += p;
        return acc;
    }

    /// The symmetric multilinear extension: sum_t w_t V(L_1,...,L_i, K_t).
    S polarized_evaluate(const std::vector<Polytope<S>>& ls) const {
        if (static_cast<int>(ls.size()) != degree_)
            throw std::invalid_argument("polarized_evaluate: tuple length must equal the degree");
        for (const auto& l : ls)
            if (l.dim() != dim_) throw std::invalid_argument("polarized_evaluate: dimension mismatch");
        std::vector<S> parts(terms_.size(), S(0));
        parallel_for(terms_.size(), [&](std::size_t i) {
            std::vector<Polytope<S>> args = ls;
            for (const auto& b : terms_[i].bodies) args.push_back(b);
            parts[i] = terms_[i].weight * mixed_volume(args);
        });
        S acc(0);
        for (const auto& p : parts) acc += p;
        return acc;
    }

    /// Value of a degree-0 valuation (the coefficient of the Euler
    /// characteristic): sum_t w_t V(K_{t,1},...,K_{t,n}).
    S scalar_value() const {
        if (degree_ != 0) throw std::domain_error("scalar_value: valuation has positive degree");
        std::vector<S> parts(terms_.size(), S(0));
        parallel_for(terms_.size(), [&](std::size_t i) { parts[i] = terms_[i].weight * mixed_volume(terms_[i].bodies); });
        S acc(0);
        for (const auto& p : parts) acc += p;
        return acc;
    }

    Valuation operator*(const S& c) const {
        std::vector<ValTerm<S>> ts = terms_;
        for (auto& t : ts) t.weight *= c;
        return Valuation(dim_, degree_, std::move(ts));
    }

    Valuation operator+(const Valuation& o) const {
        if (dim_ != o.dim_ || degree_ != o.degree_)
            throw std::invalid_argument("valuation sum: mismatched dim or degree");
        std::vector<ValTerm<S>> ts = terms_;
        ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
        return Valuation(dim_, degree_, std::move(ts));
    }

    Valuation operator-(const Valuation& o) const { return *this + o * S(-1); }

  private:
    int dim_;
    int degree_;
    std::vector<ValTerm<S>> terms_;
};

enum class ConvMode {
    UnitNormalized, // i! j! / (n! (i+j-n)!)  -- vol is the unit, associative
    PaperLiteral    // i! j! / n!
};

inline const char* conv_mode_name(ConvMode m) {
    return m == ConvMode::UnitNormalized ? "unit" : "paper";
}

template <class S>
S convolution_coefficient(int n, int i, int j, ConvMode mode) {
    S c = factorial<S>(i) * factorial<S>(j) / factorial<S>(n);
    if (mode == ConvMode::UnitNormalized) c /= factorial<S>(i + j - n);
    return c;
}

/// Convolution of degree-i and degree-j valuations (graded range i+j >= n):
/// term-by-term tuple concatenation with the combinatorial coefficient.
/// Result degree i+j-n.
template <class S>
Valuation<S> convolve(const Valuation<S>& phi, const Valuation<S>& psi, ConvMode mode = ConvMode::UnitNormalized) {
    if (phi.dim() != psi.dim()) throw std::invalid_argument("convolve: dimension mismatch");
    int n = phi.dim(), i = phi.degree(), j = psi.degree();
    if (i + j < n) throw std::invalid_argument("convolve: degrees below the graded range (i + j < n)");
    S coeff = convolution_coefficient<S>(n, i, j, mode);
    std::vector<ValTerm<S>> terms;
    terms.reserve(phi.terms().size() * psi.terms().size());
    for (const auto& a : phi.terms())
        for (const auto& b : psi.terms()) {
            ValTerm<S> t;
            t.weight = a.weight * b.weight * coeff;
            t.bodies = a.bodies;
            t.bodies.insert(t.bodies.end(), b.bodies.begin(), b.bodies.end());
            terms.push_back(std::move(t));
        }
    return Valuation<S>(n, i + j - n, std::move(terms));
}

/// g . phi, with (g . phi)(K) = phi(g^{-1} K): bodies map forward through g
/// and weights pick up |det g|^{-1}.
template <class S>
Valuation<S> group_action(const LinearMap<S>& g, const Valuation<S>& phi) {
    if (g.dim() != phi.dim()) throw std::invalid_argument("group_action: dimension mismatch");
    S inv_det = S(1) / g.abs_det();
    std::vector<ValTerm<S>> terms;
    terms.reserve(phi.terms().size());
    for (const auto& t : phi.terms()) {
        ValTerm<S> nt;
        nt.weight = t.weight * inv_det;
        nt.bodies.reserve(t.bodies.size());
        for (const auto& b : t.bodies) nt.bodies.push_back(g.apply(b));
        terms.push_back(std::move(nt));
    }
    return Valuation<S>(phi.dim(), phi.degree(), std::move(terms));
}

/// Even/odd decomposition phi = phi_even + phi_odd realized through the
/// reflection x -> -x on the tuple bodies.
template <class S>
std::pair<Valuation<S>, Valuation<S>> even_odd_split(const Valuation<S>& phi) {
    std::vector<ValTerm<S>> reflected;
    reflected.reserve(phi.terms().size());
    for (const auto& t : phi.terms()) {
        ValTerm<S> nt;
        nt.weight = t.weight;
        for (const auto& b : t.bodies) nt.bodies.push_back(b.negate());
        reflected.push_back(std::move(nt));
    }
    Valuation<S> refl(phi.dim(), phi.degree(), std::move(reflected));
    S half = S(1) / S(2);
    return {(phi + refl) * half, (phi - refl) * half};
}

/// Cone norm of the stored representation: phi_{|mu|}(B) = sum |w| V(B[i], K_t).
/// This is an upper bound for the infimum over all positive decompositions.
template <class S>
S cone_norm(const Valuation<S>& phi, const ReferenceBody<S>& ref) {
    std::vector<S> parts(phi.terms().size(), S(0));
    parallel_for(phi.terms().size(), [&](std::size_t i) {
        const auto& t = phi.terms()[i];
        std::vector<Polytope<S>> args(static_cast<std::size_t>(phi.degree()), ref.body);
        for (const auto& b : t.bodies) args.push_back(b);
        parts[i] = scalar_abs(t.weight) * mixed_volume(args);
    });
    S acc(0);
    for (const auto& p : parts) acc += p;
    return acc;
}

template <class S>
struct PNormEstimate {
    S lower_bound;
    std::vector<Polytope<S>> argmax;
    int samples_used = 0;
};

namespace detail {

template <class S>
Polytope<S> sample_body_inside(Rng& rng, const ReferenceBody<S>& ref, int kind) {
    int n = ref.body.dim();
    if (kind == 0) return ref.body;
    if (kind == 1) { // scaled segment through the origin
        Vec<S> d(n);
        for (int j = 0; j < n; ++j) d[j] = random_coord<S>(rng, -1.0, 1.0);
        bool zero = true;
        for (const auto& x : d)
            if (x != S(0)) zero = false;
        if (zero) d[0] = S(1);
        // shrink toward the reference body's inradius scale
        S half = S(1) / S(4);
        return Polytope<S>::segment(vscale(half, d), vneg(vscale(half, d)));
    }
    // hull of random convex combinations of the reference body's vertices
    const auto& vs = ref.body.vertices();
    int m = rng.uniform_int(n + 1, n + 3);
    std::vector<Vec<S>> pts;
    for (int t = 0; t < m; ++t) {
        int a = rng.uniform_int(0, static_cast<int>(vs.size()) - 1);
        int b = rng.uniform_int(0, static_cast<int>(vs.size()) - 1);
        S lam = random_coord<S>(rng, 0.0, 1.0);
        pts.push_back(vadd(vscale(lam, vs[a]), vscale(S(1) - lam, vs[b])));
    }
    return Polytope<S>(n, std::move(pts));
}

} // namespace detail

/// Certified lower bound of ||phi||_P: the best ratio
/// |phi(L_1,...,L_i)| / V(B[n-i], L_1,...,L_i) over sampled tuples (segments,
/// bodies inside B, B itself), refined by a coordinate-wise local search.
/// Any tuple yields a valid lower bound, so the search is unconstrained.
template <class S>
PNormEstimate<S> p_norm_estimate(const Valuation<S>& phi, const ReferenceBody<S>& ref, int budget, Rng& rng) {
    if (phi.degree() < 1) throw std::invalid_argument("p_norm_estimate: degree must be >= 1");
    int i = phi.degree();
    int n = phi.dim();

    auto denom_val = [&](const std::vector<Polytope<S>>& ls) {
        std::vector<Polytope<S>> args(static_cast<std::size_t>(n - i), ref.body);
        for (const auto& l : ls) args.push_back(l);
        return mixed_volume(args);
    };
    auto ratio = [&](const std::vector<Polytope<S>>& ls, S& out) -> bool {
        S den = denom_val(ls);
        bool degenerate;
        if constexpr (scalar_traits<S>::exact)
            degenerate = (den == S(0));
        else
            degenerate = (to_double(den) < 1e-14);
        if (degenerate) return false;
        out = scalar_abs(phi.polarized_evaluate(ls)) / den;
        return true;
    };

    S best(0);
    std::vector<Polytope<S>> best_tuple(static_cast<std::size_t>(i), ref.body);
    {
        S r(0);
        if (ratio(best_tuple, r)) best = r;
    }
    int used = 1;
    for (int s = 0; s < budget; ++s) {
        std::vector<Polytope<S>> tup;
        for (int t = 0; t < i; ++t) tup.push_back(detail::sample_body_inside(rng, ref, rng.uniform_int(0, 2)));
        S r(0);
        if (!ratio(tup, r)) continue;
        ++used;
        if (r > best) {
            best = r;
            best_tuple = std::move(tup);
        }
    }

    // local search: jitter vertices of the best tuple, keep improvements
    double step = 0.25;
    for (int round = 0; round < 6; ++round) {
        bool improved = false;
        for (int slot = 0; slot < i; ++slot) {
            const std::vector<Vec<S>> vs = best_tuple[slot].vertices(); // copy: best_tuple mutates below
            for (std::size_t vi = 0; vi < vs.size(); ++vi) {
                for (int rep = 0; rep < 2; ++rep) {
                    std::vector<Vec<S>> pts = vs;
                    for (int j = 0; j < n; ++j) pts[vi][j] += random_coord<S>(rng, -step, step);
                    std::vector<Polytope<S>> tup = best_tuple;
                    tup[slot] = Polytope<S>(n, pts);
                    S r(0);
                    if (ratio(tup, r) && r > best) {
                        best = r;
                        best_tuple = std::move(tup);
                        improved = true;
                    }
                }
            }
        }
        if (!improved) step /= 2;
    }
    return {best, best_tuple, used};
}

/// Strict P-positivity certificate per the probed-tuple definition: epsilon is
/// the minimum of phi(L_1,...,L_i) / V(B[n-i], L_1,...,L_i) over the witness
/// tuples.
template <class S>
struct StrictPositivityCertificate {
    Valuation<S> valuation;
    S epsilon;
    std::vector<std::vector<Polytope<S>>> witness_samples;
};

template <class S>
StrictPositivityCertificate<S> certify_strict_positivity(const Valuation<S>& phi, const ReferenceBody<S>& ref,
                                                         int samples, Rng& rng) {
    if (!phi.nonnegative_weights())
        throw std::invalid_argument("certify_strict_positivity: valuation must lie in the positive cone");
    if (phi.degree() < 1) throw std::invalid_argument("certify_strict_positivity: degree must be >= 1");
    int i = phi.degree(), n = phi.dim();
    S eps(0);
    bool first = true;
    std::vector<std::vector<Polytope<S>>> witnesses;
    auto consider = [&](std::vector<Polytope<S>> tup) {
        std::vector<Polytope<S>> args(static_cast<std::size_t>(n - i), ref.body);
        for (const auto& l : tup) args.push_back(l);
        S den = mixed_volume(args);
        if (!(den > S(0))) return;
        S r = phi.polarized_evaluate(tup) / den;
        if (first || r < eps) {
            eps = r;
            first = false;
        }
        witnesses.push_back(std::move(tup));
    };
    consider(std::vector<Polytope<S>>(static_cast<std::size_t>(i), ref.body));
    for (int s = 0; s < samples; ++s) {
        std::vector<Polytope<S>> tup;
        for (int t = 0; t < i; ++t) tup.push_back(detail::sample_body_inside(rng, ref, rng.uniform_int(0, 2)));
        consider(std::move(tup));
    }
    return {phi, eps, std::move(witnesses)};
}

} // namespace valgebra
