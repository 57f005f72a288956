#pragma once

#include "valgebra/io.hpp"
#include "valgebra/minkowski_solver.hpp"

namespace valgebra {

struct VerifyResult {
    std::string report;
    bool all_passed = true;
};

namespace detail {

class VerifyReport {
  public:
    void line(const std::string& name, bool pass, double margin) {
        out_ << (pass ? "PASS" : "FAIL") << ' ' << name << " margin=" << format_double(margin) << "\n";
        if (!pass) ok_ = false;
    }
    std::string str() const { return out_.str(); }
    bool ok() const { return ok_; }

  private:
    std::ostringstream out_;
    bool ok_ = true;
};

} // namespace detail

/// Seeded invariant battery over the requested dimensions; emits one
/// PASS/FAIL line per property with the measured margin. Deterministic given
/// the seed: identical runs produce byte-identical reports.
inline VerifyResult run_verify_suite(std::uint64_t seed, const std::vector<int>& dims,
                                     ConvMode conv_mode = ConvMode::UnitNormalized) {
    detail::VerifyReport rep;
    using PD = Polytope<double>;
    using VD = Valuation<double>;

    for (int dim : dims) {
        std::string tag = "dim" + std::to_string(dim) + ".";
        Rng rng(seed * 1000003 + dim);
        auto ball = ball_polytope<double>(dim, std::max(2 * dim, 8));

        { // volume scaling under linear images
            double worst = 0;
            for (int t = 0; t < 5; ++t) {
                PD p = random_body<double>(rng, dim, dim + 4);
                LinearMap<double> g = random_invertible_map<double>(rng, dim);
                double got = g.apply(p).volume();
                double want = to_double(g.abs_det()) * p.volume();
                worst = std::max(worst, std::fabs(got - want) / std::max(1e-30, want));
            }
            rep.line(tag + "volume_scaling", worst <= 1e-10, worst);
        }
        { // minkowski sum commutativity on canonical forms
            bool ok = true;
            for (int t = 0; t < 5; ++t) {
                PD p = random_body<double>(rng, dim, dim + 3);
                PD q = random_body<double>(rng, dim, dim + 3);
                if (!(minkowski_sum(p, q) == minkowski_sum(q, p))) ok = false;
            }
            rep.line(tag + "minkowski_commutative", ok, ok ? 0.0 : 1.0);
        }
        { // support function additivity
            double worst = 0;
            PD p = random_body<double>(rng, dim, dim + 3);
            PD q = random_body<double>(rng, dim, dim + 3);
            PD s = minkowski_sum(p, q);
            for (int t = 0; t < 100; ++t) {
                Vec<double> u(dim);
                for (int j = 0; j < dim; ++j) u[j] = rng.uniform(-1.0, 1.0);
                worst = std::max(worst, std::fabs(s.support(u) - p.support(u) - q.support(u)));
            }
            rep.line(tag + "support_additivity", worst <= 1e-10, worst);
        }
        { // hausdorff metric: symmetry handled by construction; triangle inequality
            double worst = 0;
            for (int t = 0; t < 5; ++t) {
                PD a = random_body<double>(rng, dim, dim + 3);
                PD b = random_body<double>(rng, dim, dim + 3);
                PD c = random_body<double>(rng, dim, dim + 3);
                double viol = hausdorff_distance(a, c) - hausdorff_distance(a, b) - hausdorff_distance(b, c);
                worst = std::max(worst, viol);
            }
            rep.line(tag + "hausdorff_triangle", worst <= 1e-9, worst);
        }
        { // mixed volume: symmetry, translation invariance, oracle equivalence
            double worst_sym = 0, worst_tr = 0, worst_oracle = 0;
            for (int t = 0; t < 3; ++t) {
                std::vector<PD> tup;
                for (int j = 0; j < dim; ++j) tup.push_back(random_body<double>(rng, dim, dim + 2));
                double v = mixed_volume(tup);
                std::vector<PD> perm = tup;
                std::swap(perm.front(), perm.back());
                worst_sym = std::max(worst_sym, std::fabs(mixed_volume(perm) - v) / std::max(1e-30, v));
                Vec<double> tr(dim);
                for (int j = 0; j < dim; ++j) tr[j] = rng.uniform(-2.0, 2.0);
                std::vector<PD> moved = tup;
                moved[0] = moved[0].translate(tr);
                worst_tr = std::max(worst_tr, std::fabs(mixed_volume(moved) - v) / std::max(1e-30, v));
                auto vp = volume_polynomial(tup);
                std::vector<int> ones(dim, 1);
                worst_oracle =
                    std::max(worst_oracle, std::fabs(vp.mixed_volume_of(ones) - v) / std::max(1e-30, v));
            }
            rep.line(tag + "mixed_volume_symmetry", worst_sym <= 1e-9, worst_sym);
            rep.line(tag + "mixed_volume_translation", worst_tr <= 1e-9, worst_tr);
            rep.line(tag + "mixed_volume_oracle", worst_oracle <= 1e-9, worst_oracle);
        }
        { // Alexandrov-Fenchel margin
            double worst = 0;
            for (int t = 0; t < 10; ++t) {
                PD k = random_body<double>(rng, dim, dim + 2);
                PD l = random_body<double>(rng, dim, dim + 2);
                std::vector<PD> rest(dim - 2, ball.body);
                worst = std::min(worst, to_double(af_margin(k, l, rest)));
            }
            rep.line(tag + "alexandrov_fenchel", worst >= -1e-12, worst);
        }
        { // reverse Khovanskii-Teissier
            double worst = 0;
            for (int t = 0; t < 10; ++t) {
                int k = 1 + (dim > 2 ? static_cast<int>(rng.next_u64() % (dim - 1)) : 0);
                std::vector<PD> f1, f2;
                for (int j = 0; j < dim - k; ++j) f1.push_back(random_body<double>(rng, dim, dim + 2));
                for (int j = 0; j < k; ++j) f2.push_back(random_body<double>(rng, dim, dim + 2));
                VD phi = VD::mixed(dim, f1);
                VD psi = VD::mixed(dim, f2);
                PD body = random_body<double>(rng, dim, dim + 2);
                double lhs = phi.evaluate(body) * psi.evaluate(body);
                double rhs = body.volume() * convolve(phi, psi, ConvMode::PaperLiteral).scalar_value();
                worst = std::min(worst, lhs - rhs);
            }
            rep.line(tag + "reverse_kt", worst >= -1e-12, worst);
        }
        { // convolution unit axiom and representation independence
            VD phi = VD::mixed(dim, {random_body<double>(rng, dim, dim + 2)}, rng.uniform(0.5, 1.5));
            VD unit_conv = convolve(VD::volume(dim), phi, ConvMode::UnitNormalized);
            bool unit_ok = unit_conv.terms().size() == phi.terms().size();
            double worst = 0;
            for (int t = 0; t < 5 && unit_ok; ++t) {
                PD probe = random_body<double>(rng, dim, dim + 2);
                worst = std::max(worst, std::fabs(unit_conv.evaluate(probe) - phi.evaluate(probe)));
            }
            rep.line(tag + "convolution_unit", unit_ok && worst == 0.0, worst);

            PD a = random_body<double>(rng, dim, dim + 2);
            Vec<double> tr(dim, 0.5);
            VD rep1 = VD::mixed(dim, {a});
            VD rep2 = VD::mixed(dim, {a.translate(tr)});
            VD psi = VD::mixed(dim, std::vector<PD>(dim - 1, ball.body));
            double delta = std::fabs(convolve(rep1, psi, conv_mode).scalar_value() -
                                     convolve(rep2, psi, conv_mode).scalar_value());
            rep.line(tag + "convolution_representation", delta <= 1e-10, delta);
        }
        { // log-concavity of spectral degrees
            double worst = 0;
            for (int t = 0; t < 10; ++t) {
                LinearMap<double> g = random_invertible_map<double>(rng, dim);
                for (double m : log_concavity_report(g)) worst = std::min(worst, m);
            }
            rep.line(tag + "log_concavity", worst >= -1e-12, worst);
        }
        { // degree submultiplicativity (coefficient-free, C = 1/(c0 vol B))
            double c0 = to_double(factorial<double>(1) * factorial<double>(dim - 1) / factorial<double>(dim));
            double cc = 1.0 / (c0 * to_double(ball.body.volume()));
            auto raw_deg = [&](const LinearMap<double>& f) {
                std::vector<PD> args{f.apply(ball.body)};
                for (int j = 0; j < dim - 1; ++j) args.push_back(ball.body);
                return mixed_volume(args) / to_double(f.abs_det());
            };
            double worst = 0;
            for (int t = 0; t < 5; ++t) {
                LinearMap<double> f = random_invertible_map<double>(rng, dim);
                LinearMap<double> g = random_invertible_map<double>(rng, dim);
                double slack = cc * raw_deg(f) * raw_deg(g) - raw_deg(f.compose(g));
                worst = std::min(worst, slack);
            }
            rep.line(tag + "degree_submultiplicative", worst >= -1e-10, worst);
        }
        { // invariant valuation residual for a diagonal map
            Vec<double> diag(dim);
            for (int j = 0; j < dim; ++j) diag[j] = 1.0 + 0.7 * (dim - j);
            LinearMap<double> g = LinearMap<double>::diagonal(diag);
            auto inv = invariant_valuation<double>(g, dim - 1, 16, rng, 10);
            rep.line(tag + "invariant_residual", inv.residual <= 1e-8, inv.residual);
        }
        { // reference body inside the unit ball
            double worst = 0;
            for (const auto& v : ball.body.vertices()) worst = std::max(worst, std::sqrt(dot(v, v)) - 1.0);
            rep.line(tag + "reference_in_ball", worst <= 1e-12, worst);
        }
    }

    { // classical reconstruction round trip (2-D only)
        Rng rng(seed * 7 + 99);
        double worst = 0;
        for (int t = 0; t < 5; ++t) {
            Polytope<double> p = random_body<double>(rng, 2, 7);
            p = p.translate(vneg(p.vertex_centroid()));
            auto [normals, lengths] = polygon_edge_data(p);
            Polytope<double> q = classical_minkowski_2d(normals, lengths);
            q = q.translate(vsub(p.vertex_centroid(), q.vertex_centroid()));
            worst = std::max(worst, hausdorff_distance(p, q));
        }
        rep.line("minkowski2d_round_trip", worst <= 1e-9, worst);
    }

    VerifyResult out;
    out.report = rep.str() + (rep.ok() ? "ALL PASS\n" : "FAILURES PRESENT\n");
    out.all_passed = rep.ok();
    return out;
}

} // namespace valgebra
