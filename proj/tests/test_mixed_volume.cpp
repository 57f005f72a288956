#include "valgebra/mixed_volume.hpp"
#include "valgebra/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace valgebra;

using PQ = Polytope<Rational>;
using PD = Polytope<double>;

TEST_CASE("volume polynomial of a single square is t^2") {
    auto vp = volume_polynomial<Rational>({PQ::unit_cube(2)});
    REQUIRE(vp.exponents.size() == 1);
    CHECK(vp.coefficients[0] == Rational(1));
}

TEST_CASE("volume polynomial of two unit squares matches (t+s)^2") {
    auto vp = volume_polynomial<Rational>({PQ::unit_cube(2), PQ::unit_cube(2)});
    CHECK(vp.coefficient_of({2, 0}) == Rational(1));
    CHECK(vp.coefficient_of({1, 1}) == Rational(2));
    CHECK(vp.coefficient_of({0, 2}) == Rational(1));
}

TEST_CASE("volume polynomial square and segment: vol = t^2 + ts") {
    PQ seg = PQ::segment({Rational(0), Rational(0)}, {Rational(1), Rational(0)});
    auto vp = volume_polynomial<Rational>({PQ::unit_cube(2), seg});
    CHECK(vp.coefficient_of({1, 1}) == Rational(1));
    CHECK(vp.mixed_volume_of({1, 1}) == Rational(1, 2));
    CHECK(vp.coefficient_of({0, 2}) == Rational(0));
}

TEST_CASE("mixed volume diagonal and fast-path examples") {
    CHECK(mixed_volume<Rational>({PQ::unit_cube(3), PQ::unit_cube(3), PQ::unit_cube(3)}) == Rational(1));

    PQ e1 = PQ::segment({Rational(0), Rational(0)}, {Rational(1), Rational(0)});
    PQ e2 = PQ::segment({Rational(0), Rational(0)}, {Rational(0), Rational(1)});
    CHECK(mixed_volume<Rational>({e1, e2}) == Rational(1, 2));

    // boxes with edge vectors (1,2) and (3,4): permanent (1*4 + 2*3)/2! = 5
    PQ b1 = PQ::box({Rational(0), Rational(0)}, {Rational(1), Rational(2)});
    PQ b2 = PQ::box({Rational(0), Rational(0)}, {Rational(3), Rational(4)});
    CHECK(mixed_volume<Rational>({b1, b2}) == Rational(5));

    // cross-check the fast paths against polarization on translated copies
    // (translation breaks the box detection's lo/hi but not the value)
    auto vp = volume_polynomial<Rational>({b1, b2});
    CHECK(vp.mixed_volume_of({1, 1}) == Rational(5));
}

TEST_CASE("mixed volume argument checks") {
    CHECK_THROWS_AS(mixed_volume<Rational>({PQ::unit_cube(2)}), std::invalid_argument);
    CHECK_THROWS_AS(mixed_volume<Rational>({PQ::unit_cube(2), PQ::unit_cube(3)}), std::invalid_argument);
}

TEST_CASE("oracle equivalence on random tuples, exact") {
    Rng rng(41);
    for (int dim = 2; dim <= 3; ++dim) {
        for (int rep = 0; rep < 8; ++rep) {
            std::vector<PQ> tuple;
            for (int j = 0; j < dim; ++j) tuple.push_back(random_polytope<Rational>(rng, dim, dim + 3));
            auto vp = volume_polynomial<Rational>(tuple);
            std::vector<int> ones(dim, 1);
            CHECK(mixed_volume(tuple) == vp.mixed_volume_of(ones));
        }
    }
}

TEST_CASE("permutation symmetry and translation invariance, exact") {
    Rng rng(7);
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<PQ> tuple;
        for (int j = 0; j < 3; ++j) tuple.push_back(random_polytope<Rational>(rng, 3, 5));
        Rational v = mixed_volume(tuple);
        std::swap(tuple[0], tuple[2]);
        CHECK(mixed_volume(tuple) == v);
        Vec<Rational> t{Rational(1, 3), Rational(-2, 5), Rational(4)};
        tuple[1] = tuple[1].translate(t);
        CHECK(mixed_volume(tuple) == v);
    }
}

TEST_CASE("multilinearity in the first slot, exact") {
    Rng rng(11);
    PQ k = random_polytope<Rational>(rng, 2, 5);
    PQ kp = random_polytope<Rational>(rng, 2, 4);
    PQ rest = random_polytope<Rational>(rng, 2, 4);
    Rational a(3, 2), b(2, 5);
    PQ combo = minkowski_combination<Rational>({k, kp}, {a, b});
    CHECK(mixed_volume<Rational>({combo, rest}) ==
          a * mixed_volume<Rational>({k, rest}) + b * mixed_volume<Rational>({kp, rest}));
}

TEST_CASE("monotonicity on nested bodies") {
    Rng rng(13);
    for (int rep = 0; rep < 6; ++rep) {
        PD l = random_body<double>(rng, 3, 8);
        // subset of vertices gives a contained body
        std::vector<Vec<double>> sub(l.vertices().begin(), l.vertices().begin() + 4);
        PD k(3, sub);
        PD rest1 = random_body<double>(rng, 3, 5);
        PD rest2 = random_body<double>(rng, 3, 5);
        double vk = mixed_volume<double>({k, rest1, rest2});
        double vl = mixed_volume<double>({l, rest1, rest2});
        CHECK(vk <= vl + 1e-10);
    }
}

TEST_CASE("alexandrov-fenchel margin") {
    SECTION("equality at K = L") {
        PQ k = PQ::unit_cube(2);
        CHECK(af_margin<Rational>(k, k, {}) == Rational(0));
    }
    SECTION("square against segment") {
        PQ k = PQ::unit_cube(2);
        PQ l = PQ::segment({Rational(0), Rational(0)}, {Rational(1), Rational(0)});
        // V(K,L) = 1/2, V(K,K) = 1, V(L,L) = 0
        CHECK(af_margin<Rational>(k, l, {}) == Rational(1, 4));
    }
    SECTION("random sweep in dim 3 with a reference body in the rest slot") {
        Rng rng(17);
        auto ball = ball_polytope<double>(3, 12);
        for (int rep = 0; rep < 12; ++rep) {
            PD k = random_body<double>(rng, 3, 6);
            PD l = random_body<double>(rng, 3, 6);
            CHECK(af_margin<double>(k, l, {ball.body}) >= -1e-12);
        }
    }
}

TEST_CASE("reduction formula residual vanishes") {
    SECTION("n=2 segment in H = span(e1)") {
        PQ seg = PQ::segment({Rational(0), Rational(0)}, {Rational(1), Rational(0)});
        Rational r = reduction_formula_residual<Rational>({seg}, {PQ::unit_cube(2)},
                                                          {{Rational(1), Rational(0)}});
        CHECK(r == Rational(0));
    }
    SECTION("n=3 unit square in H = span(e1,e2)") {
        PQ sq(3, {{Rational(0), Rational(0), Rational(0)},
                  {Rational(1), Rational(0), Rational(0)},
                  {Rational(0), Rational(1), Rational(0)},
                  {Rational(1), Rational(1), Rational(0)}});
        std::vector<Vec<Rational>> h = {{Rational(1), Rational(0), Rational(0)},
                                        {Rational(0), Rational(1), Rational(0)}};
        Rational r = reduction_formula_residual<Rational>({sq, sq}, {PQ::unit_cube(3)}, h);
        CHECK(r == Rational(0));
        // cross-check the inner value: 3 * V(sq,sq,cube) = 1 * 1
        CHECK(mixed_volume<Rational>({sq, sq, PQ::unit_cube(3)}) == Rational(1, 3));
    }
    SECTION("degenerate: K inside H as well gives 0 = 0") {
        PQ seg = PQ::segment({Rational(0), Rational(0)}, {Rational(1), Rational(0)});
        PQ seg2 = PQ::segment({Rational(0), Rational(0)}, {Rational(2), Rational(0)});
        Rational r = reduction_formula_residual<Rational>({seg}, {seg2}, {{Rational(1), Rational(0)}});
        CHECK(r == Rational(0));
    }
    SECTION("containment violation rejected") {
        PQ diag = PQ::segment({Rational(0), Rational(0)}, {Rational(1), Rational(1)});
        CHECK_THROWS_AS(reduction_formula_residual<Rational>({diag}, {PQ::unit_cube(2)},
                                                             {{Rational(1), Rational(0)}}),
                        std::invalid_argument);
    }
}

TEST_CASE("containment scale") {
    SECTION("M = K gives r = 1") {
        PQ k = PQ::unit_cube(2);
        auto cs = containment_scale(k, k);
        CHECK(cs.r_exact == Rational(1));
        CHECK(cs.r_exact <= cs.r_bound);
    }
    SECTION("M = 2K gives r = 2, bound 4") {
        PQ k = PQ::unit_cube(2);
        PQ m = k.scale(Rational(2));
        auto cs = containment_scale(k, m);
        CHECK(cs.r_exact == Rational(2));
        CHECK(cs.r_bound == Rational(4));
    }
    SECTION("random sweep keeps r_exact <= r_bound") {
        Rng rng(23);
        for (int dim = 2; dim <= 3; ++dim) {
            for (int rep = 0; rep < 8; ++rep) {
                PD k = random_body<double>(rng, dim, dim + 4);
                PD m = random_body<double>(rng, dim, dim + 3);
                auto cs = containment_scale(k, m);
                CHECK(cs.r_exact <= cs.r_bound + 1e-9);
            }
        }
    }
    SECTION("lower-dimensional K rejected") {
        PQ seg = PQ::segment({Rational(0), Rational(0)}, {Rational(1), Rational(0)});
        CHECK_THROWS_AS(containment_scale(seg, PQ::unit_cube(2)), std::domain_error);
    }
}

TEST_CASE("fast paths agree with polarization") {
    Rng rng(29);
    for (int rep = 0; rep < 6; ++rep) {
        // segments: compare determinant path against the interpolation oracle
        std::vector<PQ> segs;
        for (int j = 0; j < 3; ++j) segs.push_back(random_segment<Rational>(rng, 3));
        auto vp = volume_polynomial<Rational>(segs);
        CHECK(mixed_volume(segs) == vp.mixed_volume_of({1, 1, 1}));

        std::vector<PQ> boxes;
        for (int j = 0; j < 3; ++j) boxes.push_back(random_box<Rational>(rng, 3));
        auto vpb = volume_polynomial<Rational>(boxes);
        CHECK(mixed_volume(boxes) == vpb.mixed_volume_of({1, 1, 1}));
    }
}
