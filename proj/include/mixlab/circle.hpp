#ifndef MIXLAB_CIRCLE_HPP
#define MIXLAB_CIRCLE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixlab/common.hpp"

namespace mixlab {

// Complex measure on the unit circle: a finite set of atoms plus a density
// sampled on a uniform midpoint grid, read against normalized arclength.
// Fourier convention throughout: sigma_hat(n) = integral of e^{-in theta}.
struct CircleMeasure {
    struct Atom {
        double theta = 0.0;  // in [0, 2pi)
        complex weight{0.0, 0.0};
    };

    std::vector<Atom> atoms;
    std::vector<complex> density;  // G midpoint samples, may be empty
    int grid_size = 4096;

    static CircleMeasure dirac(double theta, complex weight = {1.0, 0.0});
    static CircleMeasure lebesgue(int grid = 4096);

    double total_variation() const;
    bool is_probability(double tol = 1e-12) const;

    // theta of the j-th density cell midpoint
    double grid_theta(int j) const { return (j + 0.5) * two_pi / grid_size; }
};

CircleMeasure operator+(const CircleMeasure& a, const CircleMeasure& b);
CircleMeasure operator*(complex s, const CircleMeasure& m);

struct FourierSequence {
    std::vector<complex> values;  // a_0 .. a_{H-1}

    int horizon() const { return static_cast<int>(values.size()); }
    double sup_norm() const;
};

// sigma_hat(n); |n| beyond the grid Nyquist limit G/2 is rejected.
complex fourier_coeff(const CircleMeasure& sigma, int n);

FourierSequence fourier_sequence(const CircleMeasure& sigma, int horizon);

// c0-like mixing family given by a uniformly bounded seminorm sequence.
struct MixingFamily {
    enum class Kind { strong, weak, ergodic, custom };

    Kind kind = Kind::strong;
    // Only set for custom families; Phi(a, n) with its uniform bound C.
    std::function<double(const FourierSequence&, int)> custom_phi;
    double bound = 1.0;
    std::string name = "strong";

    static MixingFamily strong();
    static MixingFamily weak();
    static MixingFamily ergodic();
    static MixingFamily custom(std::string name,
                               std::function<double(const FourierSequence&, int)> phi,
                               double bound);

    // Phi_n(a); n >= 1 for the Cesaro-type built-ins, n >= 0 for strong.
    double phi(const FourierSequence& a, int n) const;
    int first_index() const { return kind == Kind::strong ? 0 : 1; }
};

// (1/N) sum_{n<N} |a_n|
double cesaro_abs(const FourierSequence& a, int N);

enum class Verdict { s_continuous_at_horizon, not_s_continuous, inconclusive };

std::string to_string(Verdict v);

struct ClassifyResult {
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> trace;  // Phi_n for n = family.first_index() .. H-1
    int first_index = 0;
    bool degenerate = false;
    // Cesaro mean of sigma_hat itself: estimates the atom at 1 for the
    // ergodic family.
    std::optional<complex> atom_at_one;
};

// Finite-horizon verdict on the seminorm trace. "S-continuous-at-horizon"
// iff the max over the last ceil(H/4) trace entries is below tol;
// "not-S-continuous" iff that max exceeds 10*tol and the trace is flat or
// growing over the last half (min >= 0.9 * max there). Anything else is
// inconclusive. Never a proof, always a horizon-limited judgment.
ClassifyResult classify_sequence(const FourierSequence& a, const MixingFamily& s,
                                 double tol);

ClassifyResult classify(const CircleMeasure& sigma, const MixingFamily& s,
                        int horizon, double tol);

// Image measure of weighted nodes under a node -> angle map; atoms at equal
// angles are merged.
CircleMeasure pushforward(const std::vector<complex>& weights,
                          const std::vector<double>& angles, int grid = 4096);

void to_json(nlohmann::json& j, const CircleMeasure& m);
void from_json(const nlohmann::json& j, CircleMeasure& m);

}  // namespace mixlab

#endif
