#pragma once

#include "valgebra/polytope.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace valgebra {

/// An invertible linear self-map of R^n acting on bodies and valuations.
/// Caches the determinant, the inverse, and the complex eigenvalue moduli
/// sorted in descending order.
template <class S>
class LinearMap {
  public:
    explicit LinearMap(Mat<S> entries) : entries_(std::move(entries)) {
        n_ = static_cast<int>(entries_.size());
        for (const auto& row : entries_)
            if (static_cast<int>(row.size()) != n_)
                throw std::invalid_argument("LinearMap: matrix not square");
        det_ = determinant(entries_);
        if (det_ == S(0)) throw std::invalid_argument("LinearMap: singular matrix");
        inverse_ = mat_inverse(entries_);
        compute_moduli();
    }

    static LinearMap identity(int n) { return LinearMap(mat_identity<S>(n)); }

    static LinearMap diagonal(const Vec<S>& d) {
        Mat<S> m(d.size(), Vec<S>(d.size(), S(0)));
        for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
        return LinearMap(std::move(m));
    }

    int dim() const { return n_; }
    const Mat<S>& entries() const { return entries_; }
    const Mat<S>& inverse_entries() const { return inverse_; }
    const S& det() const { return det_; }
    S abs_det() const { return scalar_abs(det_); }

    /// |rho_1| >= ... >= |rho_n|, the complex eigenvalue moduli.
    const std::vector<double>& eigen_moduli() const { return moduli_; }

    /// Eigenvalues as complex numbers, sorted by descending modulus.
    const std::vector<std::complex<double>>& eigenvalues() const { return eigenvalues_; }

    bool is_diagonal() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j && entries_[i][j] != S(0)) return false;
        return true;
    }

    Vec<S> apply(const Vec<S>& x) const { return mat_apply(entries_, x); }
    Vec<S> apply_inverse(const Vec<S>& x) const { return mat_apply(inverse_, x); }

    LinearMap compose(const LinearMap& other) const { // this after other
        return LinearMap(mat_mul(entries_, other.entries_));
    }

    LinearMap inverse() const { return LinearMap(inverse_); }

    LinearMap power(int k) const {
        if (k < 0) return inverse().power(-k);
        Mat<S> acc = mat_identity<S>(n_);
        Mat<S> base = entries_;
        while (k > 0) {
            if (k & 1) acc = mat_mul(acc, base);
            base = mat_mul(base, base);
            k >>= 1;
        }
        return LinearMap(std::move(acc));
    }

    /// Image of a body: hull of the mapped vertices. Extreme points are
    /// preserved by invertible maps, so only the facet planes are remapped
    /// (normal -> g^{-T} normal) and the volume scales by |det g|.
    Polytope<S> apply(const Polytope<S>& p) const {
        if (p.dim() != n_) throw std::invalid_argument("LinearMap: body dimension mismatch");
        std::vector<Vec<S>> pts;
        pts.reserve(p.vertices().size());
        for (const auto& v : p.vertices()) pts.push_back(apply(v));
        std::vector<HullFacet<S>> fac = p.facets();
        for (auto& f : fac) {
            Vec<S> nrm(n_, S(0));
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) nrm[i] += inverse_[j][i] * f.normal[j];
            if constexpr (!scalar_traits<S>::exact) {
                double nn = std::sqrt(to_double(dot(nrm, nrm)));
                f.offset = S(to_double(f.offset) / nn);
                nrm = vscale(S(1.0 / nn), nrm);
            }
            f.normal = std::move(nrm);
        }
        Polytope<S> r;
        r.dim_ = n_;
        r.affine_dim_ = p.affine_dim();
        r.volume_ = p.volume() * scalar_abs(det_);
        std::vector<int> all(pts.size());
        std::iota(all.begin(), all.end(), 0);
        r.adopt(std::move(pts), std::move(all), std::move(fac));
        return r;
    }

  private:
    void compute_moduli() {
        Eigen::MatrixXd m(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m(i, j) = to_double(entries_[i][j]);
        Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
        eigenvalues_.resize(n_);
        for (int i = 0; i < n_; ++i) eigenvalues_[i] = es.eigenvalues()[i];
        std::sort(eigenvalues_.begin(), eigenvalues_.end(),
                  [](const std::complex<double>& a, const std::complex<double>& b) {
                      if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
                      if (a.real() != b.real()) return a.real() > b.real();
                      return a.imag() > b.imag();
                  });
        moduli_.resize(n_);
        for (int i = 0; i < n_; ++i) moduli_[i] = std::abs(eigenvalues_[i]);
    }

    int n_;
    Mat<S> entries_;
    Mat<S> inverse_;
    S det_;
    std::vector<double> moduli_;
    std::vector<std::complex<double>> eigenvalues_;
};

} // namespace valgebra
