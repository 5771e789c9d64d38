#include <cmath>
#include <vector>

#include "doctest.h"

#include "mixlab/operators.hpp"
#include "mixlab/rng.hpp"

using namespace mixlab;

static Vec random_vec(int n, std::uint64_t seed) {
    Vec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng::gaussian(seed, 0, static_cast<std::uint64_t>(i), 0);
    return v;
}

TEST_CASE("weighted shift acts as e_k -> w_k e_{k-1}") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 4);
    TruncatedOperator b = weighted_shift(spec);
    Vec e1 = Vec::Zero(4);
    e1[1] = 1.0;
    Vec out = b.apply(e1);
    CHECK(out[0] == complex{2.0, 0.0});
    CHECK(out.tail(3).norm() == 0.0);

    Vec e0 = Vec::Zero(4);
    e0[0] = 1.0;
    CHECK(b.apply(e0).norm() == 0.0);
    // Hilbert adjoint is the forward shift with conjugate weights
    Vec up = b.adjoint(e0);
    CHECK(up[1] == complex{2.0, 0.0});
}

TEST_CASE("dual_apply realizes the transpose under the bilinear pairing") {
    ShiftSpec spec = ShiftSpec::constant(complex{1.0, 1.0}, 6);
    TruncatedOperator b = weighted_shift(spec);
    Vec xstar = random_vec(6, 21), v = random_vec(6, 22);
    complex lhs = dual_pair(b.dual_apply(xstar), v);
    complex rhs = dual_pair(xstar, b.apply(v));
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("shift spec validation") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 4);
    spec.weights[1] = 0.0;
    CHECK_THROWS_AS(weighted_shift(spec), std::invalid_argument);
    ShiftSpec bad;
    bad.dim = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK(ShiftSpec::constant(2.0, 8).weight_product(3) == complex{8.0, 0.0});
}

TEST_CASE("eigenvalue existence flag follows the weight profile") {
    CHECK(ShiftSpec::constant(2.0, 64).eigenvalue_existence_flag());
    // 1/(w_0...w_n) = 2^n overflows the l2 profile sum at this depth
    CHECK(!ShiftSpec::constant(0.5, 2000).eigenvalue_existence_flag());
}

TEST_CASE("shift eigenvector has coordinates lambda^n / (w_0...w_n)") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 4);
    ShiftEigenvector r = shift_eigenvector(spec, 1.0);
    CHECK(r.v[0] == complex{1.0, 0.0});
    CHECK(r.v[1] == complex{0.5, 0.0});
    CHECK(r.v[2] == complex{0.25, 0.0});
    CHECK(r.v[3] == complex{0.125, 0.0});
    // the only defect is the truncated coordinate N-1
    CHECK(r.residual == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(r.tail_bound == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(r.tail_reliable);

    ShiftEigenvector ri = shift_eigenvector(ShiftSpec::constant(2.0, 3),
                                            complex{0.0, 1.0});
    CHECK(std::abs(ri.v[1] - complex{0.0, 0.5}) < 1e-15);
    CHECK(std::abs(ri.v[2] - complex{-0.25, 0.0}) < 1e-15);

    CHECK_THROWS_AS(shift_eigenvector(spec, complex{0.5, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("shift eigenvector residual shrinks with the truncation dimension") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 32);
    ShiftEigenvector r = shift_eigenvector(spec, std::polar(1.0, 1.0));
    CHECK(r.residual == doctest::Approx(std::pow(2.0, -31)).epsilon(1e-12));
    CHECK(r.tail_reliable);

    // non-decaying profile: the tail extrapolation must flag itself
    ShiftEigenvector flat = shift_eigenvector(ShiftSpec::constant(1.0, 16), 1.0);
    CHECK(!flat.tail_reliable);
}

TEST_CASE("Kalisch operator maps the constant function near itself plus O(h)") {
    KalischSpec spec;
    spec.grid = 1024;
    TruncatedOperator t = kalisch(spec);
    Vec one = Vec::Constant(spec.grid, complex{1.0, 0.0});
    Vec out = t.apply(one);
    // T 1 = e^{it} - (e^{it} - 1) = 1 in the continuum
    double worst = 0.0;
    for (int j = 0; j < spec.grid; ++j)
        worst = std::max(worst, std::abs(out[j] - complex{1.0, 0.0}));
    CHECK(worst <= 2.0 * spec.h());
    CHECK(worst > 0.0);
}

TEST_CASE("Kalisch adjoint is consistent with the apply") {
    KalischSpec spec;
    spec.grid = 128;
    TruncatedOperator t = kalisch(spec);
    Vec f = random_vec(128, 31), g = random_vec(128, 32);
    complex lhs = g.dot(t.apply(f));    // g^H (T f)
    complex rhs = t.adjoint(g).dot(f);  // (T* g)^H f
    CHECK(std::abs(lhs - rhs) < 1e-11);
}

TEST_CASE("Kalisch eigenvector: indicator of (t, 2pi) with eigenvalue e^{it}") {
    KalischSpec spec;
    spec.grid = 16;
    KalischEigenvector r = kalisch_eigenvector(spec, pi);
    for (int j = 0; j < 8; ++j) CHECK(r.v[j] == complex{0.0, 0.0});
    for (int j = 8; j < 16; ++j) CHECK(r.v[j] == complex{1.0, 0.0});
    CHECK(std::abs(r.lambda - std::polar(1.0, pi)) < 1e-15);
    CHECK(!r.degenerate);

    KalischSpec fine;
    fine.grid = 16;
    CHECK(kalisch_eigenvector(fine, two_pi - 1e-12).degenerate);
    CHECK_THROWS_AS(kalisch_eigenvector(fine, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kalisch_eigenvector(fine, two_pi), std::invalid_argument);
}

TEST_CASE("Kalisch eigen-residual is O(h) and halves under refinement") {
    auto rel_residual = [](int grid, double t) {
        KalischSpec spec;
        spec.grid = grid;
        TruncatedOperator op = kalisch(spec);
        KalischEigenvector e = kalisch_eigenvector(spec, t);
        return (op.apply(e.v) - e.lambda * e.v).norm() / e.v.norm();
    };
    for (double t : {1.0, pi, 5.0}) {
        double coarse = rel_residual(1024, t);
        double fine = rel_residual(2048, t);
        CHECK(coarse <= 10.0 * (two_pi / 1024));
        double ratio = fine / coarse;
        CHECK(ratio > 0.3);
        CHECK(ratio < 0.7);
    }
}

TEST_CASE("spanning defect of explicit families") {
    std::vector<Vec> basis;
    for (int j = 0; j < 3; ++j) {
        Vec e = Vec::Zero(3);
        e[j] = 1.0;
        basis.push_back(e);
    }
    CHECK(spanning_defect(basis, 3) == doctest::Approx(0.0).epsilon(1e-14));

    std::vector<Vec> partial{basis[0]};
    CHECK(spanning_defect(partial, 3) == doctest::Approx(1.0).epsilon(1e-14));

    // adding vectors can only shrink the defect
    std::vector<Vec> growing;
    double prev = 1.0;
    for (int j = 0; j < 5; ++j) {
        growing.push_back(random_vec(5, 100 + static_cast<std::uint64_t>(j)));
        double d = spanning_defect(growing, 5);
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
    CHECK(prev < 1e-10);

    CHECK_THROWS_AS(spanning_defect({}, 3), std::invalid_argument);
}

TEST_CASE("shift eigenvectors off a half-circle arc still span the section") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 16);
    std::vector<double> angles = sample_angles_excluding({{0.0, pi}}, 200, 5);
    std::vector<Vec> vecs;
    for (double a : angles)
        vecs.push_back(shift_eigenvector(spec, std::polar(1.0, a)).v);
    CHECK(spanning_defect(vecs, 16) < 1e-6);
}

TEST_CASE("sample_angles_excluding avoids the arcs and is reproducible") {
    std::vector<std::pair<double, double>> arcs{{0.5, 1.5}, {4.0, 5.0}};
    std::vector<double> a = sample_angles_excluding(arcs, 500, 9);
    std::vector<double> b = sample_angles_excluding(arcs, 500, 9);
    CHECK(a == b);
    for (double theta : a) {
        CHECK(theta >= 0.0);
        CHECK(theta < two_pi);
        CHECK(!(theta > 0.5 && theta < 1.5));
        CHECK(!(theta > 4.0 && theta < 5.0));
    }
    std::vector<double> c = sample_angles_excluding(arcs, 500, 10);
    CHECK(a != c);
}

TEST_CASE("dense materialization and size guard") {
    ShiftSpec spec = ShiftSpec::constant(3.0, 5);
    TruncatedOperator b = weighted_shift(spec);
    const Mat& m = b.dense();
    CHECK(m(0, 1) == complex{3.0, 0.0});
    CHECK(m(1, 0) == complex{0.0, 0.0});

    KalischSpec big;
    big.grid = 16384;
    CHECK_THROWS_AS(kalisch(big).dense(), GuardError);

    Vec wrong(3);
    CHECK_THROWS_AS(b.apply(wrong), std::invalid_argument);
}
