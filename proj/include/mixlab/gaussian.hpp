#ifndef MIXLAB_GAUSSIAN_HPP
#define MIXLAB_GAUSSIAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixlab/common.hpp"
#include "mixlab/eigenfield.hpp"
#include "mixlab/operators.hpp"

namespace mixlab {

// Finite-rank map K from coefficient space C^M to state space C^N;
// columns are K(e_m). Induces the Gaussian measure mu_K with Fourier
// transform exp(-1/4 ||K* x*||^2).
struct GammaOperator {
    Mat K;  // N x M
    std::string source = "explicit";
    // Set when K comes from an eigenfield: the eigenvalue angle of each
    // column. Enables the exact multiplier route for dynamics.
    std::optional<std::vector<double>> multiplier_angles;

    static GammaOperator from_eigenfield(const EigenField& field);
    static GammaOperator from_matrix(Mat k, std::string source = "explicit");

    int state_dim() const { return static_cast<int>(K.rows()); }
    int rank_dim() const { return static_cast<int>(K.cols()); }

    // sum_m ||K(e_m)||: the finite-rank summability diagnostic
    double column_norm_sum() const;

    // K* x* in coefficient space: (K* x*)_m = conj(<x*, K(e_m)>)
    Vec kstar(const Vec& xstar) const;
};

// mu_K-hat(x*) = exp(-1/4 ||K* x*||^2), real in (0, 1]
double measure_fourier(const GammaOperator& k, const Vec& xstar);

// Reproducible sampler for xi = sum_m g_m K(e_m), g standard complex
// Gaussian, addressed by (seed, stream, draw index).
class GaussianSampler {
public:
    GaussianSampler(GammaOperator k, std::uint64_t seed, std::uint64_t stream = 0);

    const GammaOperator& gamma() const { return k_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // coefficient vector g for a given draw index
    Vec coefficients(std::uint64_t draw) const;
    Vec sample(std::uint64_t draw) const;
    std::vector<Vec> sample_batch(std::uint64_t first_draw, int count) const;

    GaussianSampler substream(std::uint64_t stream) const;

private:
    GammaOperator k_;
    std::uint64_t seed_;
    std::uint64_t stream_;
};

// max over probe functionals of | ||K* x*|| - ||K* T'x*|| | where T' is
// the transpose action on functionals; 0 means mu_K looks T-invariant.
double invariance_defect(const TruncatedOperator& T, const GammaOperator& k,
                         const std::vector<Vec>& probes);

struct ChaosCheck {
    double lhs = 0.0;      // MC mean of Hk(u(xi)) Hk(v(xi))
    double rhs = 0.0;      // (MC estimate of <u,v>)^k
    double abs_err = 0.0;  // |lhs - rhs|
    double inner = 0.0;    // the MC <u,v> estimate itself
    double norm_u = 1.0;   // normalization factors applied internally
    double norm_v = 1.0;
};

// Wiener-chaos identity <Hk(u), Hk(v)> = <u,v>^k for the normalized
// Hermite polynomials Hk/sqrt(k!) and unit-variance real functionals
// u(x) = Re<u*, x>. k > 6 is rejected (variance blow-up).
ChaosCheck hermite_chaos_check(const GaussianSampler& s, int k, const Vec& ustar,
                               const Vec& vstar, std::int64_t mc_samples);

// probabilists' Hermite polynomial H_k(x), H_{k+1} = x H_k - k H_{k-1}
double hermite(int k, double x);

}  // namespace mixlab

#endif
