#ifndef MIXLAB_DIAGNOSTICS_HPP
#define MIXLAB_DIAGNOSTICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mixlab/circle.hpp"
#include "mixlab/common.hpp"
#include "mixlab/gaussian.hpp"
#include "mixlab/operators.hpp"

namespace mixlab {

enum class TraceMethod { iterate, quadrature, monte_carlo };

// Positive-part Fourier coefficients of the spectral measure
// sigma_{x*, y*} of (T, mu_K): sigma_hat(n) = <K* T*^n x*, K* y*>.
struct SpectralTrace {
    std::vector<complex> coeffs;
    TraceMethod method = TraceMethod::iterate;
    std::string provenance;
    double cauchy_schwarz_bound = 0.0;  // ||K* x*|| ||K* y*||
    bool truncated = false;             // stopped early on norm blow-up
    int probe_i = -1, probe_j = -1;

    FourierSequence sequence() const { return FourierSequence{coeffs}; }
};

// iterate: walks T*^n within the section (safe depth guard at norm 1e12).
// quadrature: exact multiplier route, needs K built from an eigenfield.
// monte_carlo: empirical <f o T^n, g>, also via the multiplier.
SpectralTrace spectral_coeffs(const TruncatedOperator& T, const GammaOperator& k,
                              const Vec& xstar, const Vec& ystar, int horizon,
                              TraceMethod method = TraceMethod::iterate,
                              std::int64_t mc_samples = 0,
                              std::uint64_t seed = 0);

struct PairReport {
    ClassifyResult classification;
    SpectralTrace trace;
};

struct MixingReport {
    std::vector<PairReport> pairs;
    std::size_t worst_pair = 0;
    Verdict verdict = Verdict::inconclusive;
};

ClassifyResult classify_trace(const SpectralTrace& trace, const MixingFamily& s,
                              double tol);

// Canonical functionals e_0* .. e_{min(8, N-2)}* plus `extra` seeded
// random unit functionals.
std::vector<Vec> default_probes(int dim, int extra = 8, std::uint64_t seed = 1);

// Classifies every (probe_i, probe_j) trace and reports the worst pair.
// For the ergodic family a pair also fails when its atom-at-1 estimate
// exceeds tol.
MixingReport mixing_report(const TruncatedOperator& T, const GammaOperator& k,
                           const std::vector<Vec>& probes, const MixingFamily& s,
                           int horizon, double tol,
                           TraceMethod method = TraceMethod::iterate);

MixingReport mixing_report(const std::vector<SpectralTrace>& traces,
                           const MixingFamily& s, double tol);

struct BallSpec {
    Vec center;
    double radius = 1.0;
    enum class Norm { l1, l2, sup } norm = Norm::l2;

    bool contains(const Vec& x) const;
};

struct CorrelationEstimate {
    double estimate = 0.0;  // mu(A cap T^-n B) - mu(A) mu(B)
    double std_error = 0.0;
    double mu_a = 0.0;
    double mu_b = 0.0;
    double joint = 0.0;
    std::int64_t mc_samples = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo correlation estimate; the joint term uses one sample stream,
// the product term two independent ones. Dynamics are applied in the
// eigen-coefficient picture when K carries multiplier angles, otherwise by
// iterating the section matrix.
CorrelationEstimate set_correlation(const TruncatedOperator& T,
                                    const GaussianSampler& sampler,
                                    const BallSpec& a, const BallSpec& b, int n,
                                    std::int64_t mc_samples);

struct BirkhoffResult {
    double density = 0.0;      // (1/H) #{n < H : T^n x0 in ball}
    double lower_proxy = 0.0;  // min of partial densities at dyadic checkpoints
    int reached = 0;           // horizon actually reached (overflow guard)
    bool truncated = false;
};

BirkhoffResult birkhoff_density(const TruncatedOperator& T, const Vec& x0,
                                const BallSpec& ball, int horizon);

struct HaarNullResult {
    std::vector<double> partial_sums;  // S_k = sum_{n<k} 1/||T^n u||
    enum class Verdict { summable_at_horizon, not_summable, inapplicable } verdict =
        Verdict::inapplicable;
    int zero_index = -1;  // first n with ||T^n u|| ~ 0, if any
    double tail = 0.0;    // S_N - S_{N/2}
};

HaarNullResult haar_null_check(const TruncatedOperator& T, const Vec& u,
                               int n_terms, double tail_tol = 1e-3);

std::string to_string(HaarNullResult::Verdict v);

}  // namespace mixlab

#endif
