#include <cmath>

#include "doctest.h"

#include "mixlab/circle.hpp"
#include "mixlab/rng.hpp"

using namespace mixlab;

TEST_CASE("fourier coefficients of atoms and Lebesgue") {
    CircleMeasure d0 = CircleMeasure::dirac(0.0);
    CHECK(fourier_coeff(d0, 5) == complex{1.0, 0.0});

    CircleMeasure dpi = CircleMeasure::dirac(pi);
    CHECK(fourier_coeff(dpi, 3).real() == doctest::Approx(-1.0).epsilon(1e-14));

    CircleMeasure leb = CircleMeasure::lebesgue(4096);
    CHECK(std::abs(fourier_coeff(leb, 0) - complex{1.0, 0.0}) < 1e-14);
    for (int n : {1, 3, 100}) CHECK(std::abs(fourier_coeff(leb, n)) < 1e-12);
}

TEST_CASE("density 1 + cos(theta) has coefficient 1/2 at n = 1") {
    CircleMeasure m = CircleMeasure::lebesgue(4096);
    for (int j = 0; j < 4096; ++j)
        m.density[static_cast<std::size_t>(j)] = 1.0 + std::cos(m.grid_theta(j));
    CHECK(std::abs(fourier_coeff(m, 0) - complex{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(fourier_coeff(m, 1) - complex{0.5, 0.0}) < 1e-12);
    CHECK(std::abs(fourier_coeff(m, 2)) < 1e-12);
}

TEST_CASE("coefficients beyond the Nyquist limit are rejected") {
    CircleMeasure leb = CircleMeasure::lebesgue(256);
    CHECK_NOTHROW(fourier_coeff(leb, 128));
    CHECK_THROWS_AS(fourier_coeff(leb, 129), GuardError);
    CHECK_THROWS_AS(fourier_sequence(leb, 200), GuardError);
    // pure atomic measures have no grid, hence no limit
    CHECK_NOTHROW(fourier_coeff(CircleMeasure::dirac(1.0), 100000));
}

TEST_CASE("fourier_coeff is linear in the measure") {
    CircleMeasure a = CircleMeasure::dirac(0.7, complex{0.3, 0.1});
    CircleMeasure b = CircleMeasure::lebesgue(512);
    for (int j = 0; j < 512; ++j)
        b.density[static_cast<std::size_t>(j)] =
            rng::gaussian(5, 0, static_cast<std::uint64_t>(j), 0);
    complex s{0.5, -0.25};
    for (int n : {0, 1, 7}) {
        complex lhs = fourier_coeff(a + (s * b), n);
        complex rhs = fourier_coeff(a, n) + s * fourier_coeff(b, n);
        CHECK(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("coefficients are bounded by the total variation") {
    CircleMeasure m = CircleMeasure::dirac(0.3, complex{0.2, 0.4}) +
                      CircleMeasure::dirac(2.0, complex{-0.7, 0.0});
    double tv = m.total_variation();
    for (int n = 0; n < 50; ++n)
        CHECK(std::abs(fourier_coeff(m, n)) <= tv + 1e-14);
}

TEST_CASE("is_probability accepts convex atom/density mixes") {
    CircleMeasure m = (complex{0.5, 0.0} * CircleMeasure::dirac(1.0)) +
                      (complex{0.5, 0.0} * CircleMeasure::lebesgue(1024));
    CHECK(m.is_probability());
    CHECK(!CircleMeasure::dirac(0.0, complex{0.0, 1.0}).is_probability());
    CHECK(!CircleMeasure::dirac(0.0, complex{2.0, 0.0}).is_probability());
}

TEST_CASE("cesaro_abs closed forms") {
    FourierSequence ones{std::vector<complex>(100, complex{1.0, 0.0})};
    CHECK(cesaro_abs(ones, 100) == doctest::Approx(1.0).epsilon(1e-15));

    FourierSequence spike{std::vector<complex>(100, complex{0.0, 0.0})};
    spike.values[0] = 1.0;
    CHECK(cesaro_abs(spike, 100) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_THROWS_AS(cesaro_abs(spike, 0), std::invalid_argument);
    CHECK_THROWS_AS(cesaro_abs(spike, 101), std::invalid_argument);
}

TEST_CASE("mixing family traces on a sign-alternating sequence") {
    // a_n = (-1)^n: strong trace 1, weak trace 1, ergodic trace -> 0
    FourierSequence a;
    for (int n = 0; n < 64; ++n)
        a.values.push_back(complex{n % 2 == 0 ? 1.0 : -1.0, 0.0});
    MixingFamily st = MixingFamily::strong();
    MixingFamily wk = MixingFamily::weak();
    MixingFamily er = MixingFamily::ergodic();
    CHECK(st.phi(a, 5) == doctest::Approx(1.0));
    CHECK(wk.phi(a, 10) == doctest::Approx(1.0));
    CHECK(er.phi(a, 10) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(er.phi(a, 11) == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
    CHECK(st.first_index() == 0);
    CHECK(wk.first_index() == 1);
}

TEST_CASE("classify: Lebesgue is S-continuous, a Dirac is not") {
    CircleMeasure leb = CircleMeasure::lebesgue(2048);
    ClassifyResult r = classify(leb, MixingFamily::strong(), 512, 1e-6);
    CHECK(r.verdict == Verdict::s_continuous_at_horizon);

    ClassifyResult w =
        classify(CircleMeasure::dirac(1.3), MixingFamily::weak(), 512, 1e-2);
    CHECK(w.verdict == Verdict::not_s_continuous);
}

TEST_CASE("classify: (1/2) delta_{-1} + (1/2) delta_1 splits the families") {
    // sigma_hat(n) = (1 + (-1)^n)/2: fails weak mixing, passes the ergodic
    // test after recentring around the atom at 1
    CircleMeasure m = (complex{0.5, 0.0} * CircleMeasure::dirac(0.0)) +
                      (complex{0.5, 0.0} * CircleMeasure::dirac(pi));
    ClassifyResult w = classify(m, MixingFamily::weak(), 512, 1e-2);
    CHECK(w.verdict == Verdict::not_s_continuous);

    ClassifyResult e = classify(m, MixingFamily::ergodic(), 512, 1e-2);
    CHECK(e.verdict == Verdict::s_continuous_at_horizon);
    REQUIRE(e.atom_at_one.has_value());
    CHECK(e.atom_at_one->real() == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("classify: zero sequence is degenerate and S-continuous") {
    FourierSequence z{std::vector<complex>(32, complex{0.0, 0.0})};
    ClassifyResult r = classify_sequence(z, MixingFamily::strong(), 1e-8);
    CHECK(r.degenerate);
    CHECK(r.verdict == Verdict::s_continuous_at_horizon);
}

TEST_CASE("classify: slow decay lands in the inconclusive band") {
    // a_n = 1/sqrt(n+1) with tol chosen inside [tail_max/10, tail_max]
    FourierSequence a;
    for (int n = 0; n < 256; ++n)
        a.values.push_back(complex{1.0 / std::sqrt(n + 1.0), 0.0});
    ClassifyResult r = classify_sequence(a, MixingFamily::strong(), 0.05);
    CHECK(r.verdict == Verdict::inconclusive);
}

TEST_CASE("custom family plugs into classify") {
    MixingFamily f = MixingFamily::custom(
        "sup-tail",
        [](const FourierSequence& a, int n) {
            double m = 0.0;
            for (int k = n; k < a.horizon(); ++k)
                m = std::max(m, std::abs(a.values[static_cast<std::size_t>(k)]));
            return m;
        },
        1.0);
    ClassifyResult r = classify(CircleMeasure::lebesgue(1024), f, 256, 1e-6);
    CHECK(r.verdict == Verdict::s_continuous_at_horizon);
}

TEST_CASE("pushforward merges equal angles and matches direct sums") {
    std::vector<complex> w(4, complex{0.25, 0.0});
    std::vector<double> angles{0.0, pi / 2, pi, 3 * pi / 2};
    CircleMeasure m = pushforward(w, angles);
    CHECK(m.atoms.size() == 4);
    for (int n = 0; n < 12; ++n) {
        double expect = n % 4 == 0 ? 1.0 : 0.0;
        CHECK(std::abs(fourier_coeff(m, n)) == doctest::Approx(expect).epsilon(1e-13));
    }

    CircleMeasure merged =
        pushforward({complex{0.5, 0.0}, complex{0.5, 0.0}}, {1.0, 1.0 + two_pi});
    CHECK(merged.atoms.size() == 1);
    CHECK(merged.atoms[0].weight.real() == doctest::Approx(1.0));

    CHECK_THROWS_AS(pushforward({complex{std::nan(""), 0.0}}, {0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(pushforward({complex{1.0, 0.0}}, {0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("pushforward of many uniform nodes approximates Lebesgue") {
    int count = 2048;
    std::vector<complex> w(static_cast<std::size_t>(count),
                           complex{1.0 / count, 0.0});
    std::vector<double> angles;
    for (int j = 0; j < count; ++j) angles.push_back((j + 0.5) * two_pi / count);
    CircleMeasure m = pushforward(w, angles);
    CHECK(std::abs(fourier_coeff(m, 0) - complex{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(fourier_coeff(m, 1)) < 1e-12);
    CHECK(std::abs(fourier_coeff(m, 17)) < 1e-12);
}

TEST_CASE("CircleMeasure JSON round trip") {
    CircleMeasure m = CircleMeasure::dirac(1.25, complex{0.5, -0.5}) +
                      CircleMeasure::lebesgue(64);
    nlohmann::json j = m;
    CircleMeasure back = j.get<CircleMeasure>();
    CHECK(back.grid_size == m.grid_size);
    REQUIRE(back.atoms.size() == m.atoms.size());
    CHECK(back.atoms[0].theta == m.atoms[0].theta);
    CHECK(back.atoms[0].weight == m.atoms[0].weight);
    REQUIRE(back.density.size() == m.density.size());
    for (int n = 0; n < 16; ++n)
        CHECK(std::abs(fourier_coeff(back, n) - fourier_coeff(m, n)) < 1e-15);
}
