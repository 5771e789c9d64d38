#include <cmath>

#include "doctest.h"

#include "mixlab/eigenfield.hpp"
#include "mixlab/gaussian.hpp"
#include "mixlab/rng.hpp"

using namespace mixlab;

namespace {

Vec random_vec(int n, std::uint64_t seed) {
    Vec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng::gaussian(seed, 0, static_cast<std::uint64_t>(i), 0);
    return v;
}

}  // namespace

TEST_CASE("make_shift_field covers the arc with uniform mass") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 8);
    EigenField f = make_shift_field(spec, 64);
    CHECK(f.size() == 64);
    CHECK(f.state_dim() == 8);
    CHECK(f.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& n : f.nodes) {
        CHECK(n.m == doctest::Approx(1.0 / 64).epsilon(1e-15));
        CHECK(n.E[0] == complex{1.0, 0.0});
    }
}

TEST_CASE("k_apply of e^{-in theta} picks out e_n / (w_0...w_n)") {
    // discrete orthogonality of 256 uniform nodes against the coordinate
    // expansion lambda^c / (w_0...w_c), c < 16
    ShiftSpec spec = ShiftSpec::constant(2.0, 16);
    EigenField field = make_shift_field(spec, 256);
    for (int n : {0, 1, 5, 15}) {
        Vec f(256);
        for (int j = 0; j < 256; ++j)
            f[j] = std::polar(1.0, -n * field.nodes[static_cast<std::size_t>(j)].phi);
        Vec out = k_apply(field, f);
        Vec expect = Vec::Zero(16);
        expect[n] = std::pow(2.0, -n);
        CHECK((out - expect).norm() < 1e-12);
    }
}

TEST_CASE("k_adjoint of e_0* is the constant node function 1") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 8);
    EigenField field = make_shift_field(spec, 32);
    Vec e0 = Vec::Zero(8);
    e0[0] = 1.0;
    Vec g = k_adjoint(field, e0);
    for (int j = 0; j < 32; ++j) CHECK(std::abs(g[j] - complex{1.0, 0.0}) < 1e-14);
}

TEST_CASE("k_apply / k_adjoint duality under the bilinear pairing") {
    ShiftSpec spec = ShiftSpec::constant(complex{1.5, 0.5}, 8);
    EigenField field = make_shift_field(spec, 48);
    Vec f = random_vec(48, 61);
    Vec xstar = random_vec(8, 62);
    complex lhs = dual_pair(xstar, k_apply(field, f));
    CompensatedSum rhs;  // <f, K* x*>_{L2(m)} = sum_j m_j f_j conj((K* x*)_j)
    Vec kx = k_adjoint(field, xstar);
    for (int j = 0; j < 48; ++j)
        rhs.add(field.nodes[static_cast<std::size_t>(j)].m * f[j] * std::conj(kx[j]));
    CHECK(std::abs(lhs - rhs.value()) < 1e-12);
}

TEST_CASE("eigen-residual and validation at the truncation") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 32);
    TruncatedOperator b = weighted_shift(spec);
    EigenField field = make_shift_field(spec, 64);
    CHECK(field.eigen_residual(b) < 1e-8);
    CHECK_NOTHROW(field.validate(b));

    // corrupting one eigenvalue angle must trip the validation guard
    EigenField bad = field;
    bad.nodes[10].phi += 0.1;
    CHECK(bad.eigen_residual(b) > 1e-2);
    CHECK_THROWS_AS(bad.validate(b), GuardError);

    EigenField neg = field;
    neg.nodes[0].m = 0.0;
    CHECK_THROWS_AS(neg.validate(b), std::invalid_argument);
}

TEST_CASE("intertwining residual: exact field passes, corrupted field fails") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 32);
    TruncatedOperator b = weighted_shift(spec);
    EigenField field = make_shift_field(spec, 64);
    // truncation tail allowance: coordinate N-1 contributes ~2^-(N-1)
    CHECK(intertwining_residual(b, field) < 1e-8 + std::pow(2.0, -30));

    EigenField bad = field;
    bad.nodes[3].phi += 0.1;
    CHECK(intertwining_residual(b, bad) > 1e-3);
}

TEST_CASE("m-spanning defect of a full arc field is tiny") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 12);
    EigenField field = make_shift_field(spec, 48);
    SpanningResult r = m_spanning_defect(field);
    CHECK(!r.degenerate);
    CHECK(r.defect < 1e-6);
}

TEST_CASE("m-spanning defect detects a rank-deficient field") {
    EigenField f;
    f.operator_ref = "explicit";
    EigenField::Node n;
    n.m = 1.0;
    n.phi = 0.0;
    n.E = Vec::Zero(2);
    n.E[0] = 1.0;
    f.nodes.push_back(n);
    SpanningResult r = m_spanning_defect(f);
    CHECK(r.defect == doctest::Approx(1.0).epsilon(1e-14));

    EigenField empty;
    CHECK_THROWS_AS(m_spanning_defect(empty), std::invalid_argument);
}

TEST_CASE("merge_fields is the weighted disjoint union") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 6);
    EigenField a = make_shift_field(spec, 8, 0.0, pi);
    EigenField b = make_shift_field(spec, 8, pi, two_pi);
    EigenField m = merge_fields(a, 0.5, b, 2.0);
    CHECK(m.size() == 16);
    Vec f = random_vec(16, 77);
    Vec direct = k_apply(m, f);
    Vec expect = 0.5 * k_apply(a, Vec(f.head(8))) + 2.0 * k_apply(b, Vec(f.tail(8)));
    CHECK((direct - expect).norm() < 1e-13);
}

TEST_CASE("gaussian covariance agrees with the weighted node Gram") {
    // <K* x*, K* y*> computed through GammaOperator equals the
    // L2(m) inner product of the k_adjoint coefficient functions
    ShiftSpec spec = ShiftSpec::constant(2.0, 10);
    EigenField field = make_shift_field(spec, 40);
    GammaOperator k = GammaOperator::from_eigenfield(field);
    Vec xstar = random_vec(10, 81), ystar = random_vec(10, 82);
    complex lhs = k.kstar(ystar).dot(k.kstar(xstar));
    CompensatedSum rhs;
    Vec kx = k_adjoint(field, xstar), ky = k_adjoint(field, ystar);
    for (int j = 0; j < 40; ++j)
        rhs.add(field.nodes[static_cast<std::size_t>(j)].m * kx[j] * std::conj(ky[j]));
    CHECK(std::abs(lhs - rhs.value()) < 1e-12);
}

TEST_CASE("EigenField JSON round trip preserves k_apply") {
    ShiftSpec spec = ShiftSpec::constant(2.0, 5);
    EigenField field = make_shift_field(spec, 12);
    nlohmann::json j = field;
    EigenField back = j.get<EigenField>();
    REQUIRE(back.size() == field.size());
    CHECK(back.operator_ref == field.operator_ref);
    Vec f = random_vec(12, 90);
    CHECK((k_apply(back, f) - k_apply(field, f)).norm() == 0.0);
}
