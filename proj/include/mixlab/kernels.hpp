#ifndef MIXLAB_KERNELS_HPP
#define MIXLAB_KERNELS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "mixlab/common.hpp"

namespace mixlab {

// Data-parallel kernels. Each one exists in a serial reference version and
// an OpenMP version; both chunk the index range identically and reduce the
// per-chunk partials in a fixed order, so results are byte-identical for
// any thread count. Tests compare the two paths, the benchmark times them.
namespace kernels {

inline constexpr std::int64_t default_chunk = 4096;

bool openmp_enabled();
int max_threads();

// Sum of term(i) for i in [0, n), chunked. The reduction order inside a
// chunk and across chunks does not depend on the thread count.
template <typename Term>
complex chunked_sum_serial(std::int64_t n, Term term,
                           std::int64_t chunk = default_chunk) {
    std::int64_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<complex> partial(static_cast<std::size_t>(n_chunks),
                                 complex{0.0, 0.0});
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        std::int64_t lo = c * chunk;
        std::int64_t hi = std::min(n, lo + chunk);
        CompensatedSum s;
        for (std::int64_t i = lo; i < hi; ++i) s.add(term(i));
        partial[static_cast<std::size_t>(c)] = s.value();
    }
    CompensatedSum total;
    for (complex p : partial) total.add(p);
    return total.value();
}

template <typename Term>
complex chunked_sum_omp(std::int64_t n, Term term,
                        std::int64_t chunk = default_chunk) {
    std::int64_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<complex> partial(static_cast<std::size_t>(n_chunks),
                                 complex{0.0, 0.0});
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        std::int64_t lo = c * chunk;
        std::int64_t hi = std::min(n, lo + chunk);
        CompensatedSum s;
        for (std::int64_t i = lo; i < hi; ++i) s.add(term(i));
        partial[static_cast<std::size_t>(c)] = s.value();
    }
    CompensatedSum total;
    for (complex p : partial) total.add(p);
    return total.value();
}

template <typename Term>
complex chunked_sum(std::int64_t n, Term term,
                    std::int64_t chunk = default_chunk) {
    if (openmp_enabled() && n >= 2 * chunk)
        return chunked_sum_omp(n, term, chunk);
    return chunked_sum_serial(n, term, chunk);
}

// In-place Walsh-Hadamard butterfly over 2^depth vector-valued samples,
// followed by 2^-depth normalization: values[I] becomes the coefficient
// of the character indexed by bitmask I.
void walsh_transform_serial(std::vector<Vec>& values, int depth);
void walsh_transform_omp(std::vector<Vec>& values, int depth);
void walsh_transform(std::vector<Vec>& values, int depth);

// max over pairs of ||E(w) - E(w')|| / d(w,w')^alpha on {0,1}^depth with
// the dyadic ultrametric d(w,w') = 2^{-first differing index}.
double holder_constant_serial(const std::vector<Vec>& values, int depth,
                              double alpha);
double holder_constant_omp(const std::vector<Vec>& values, int depth,
                           double alpha);
double holder_constant(const std::vector<Vec>& values, int depth,
                       double alpha);

}  // namespace kernels
}  // namespace mixlab

#endif
