#include "mixlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mixlab {
namespace kernels {

bool openmp_enabled() {
#ifdef _OPENMP
    static const bool disabled = [] {
        const char* env = std::getenv("MIXLAB_SERIAL");
        return env != nullptr && env[0] == '1';
    }();
    return !disabled;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return openmp_enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

namespace {

// One butterfly stage: combine samples whose indices differ in `bit`.
inline void walsh_stage(std::vector<Vec>& values, std::size_t lo,
                        std::size_t hi, std::size_t bit) {
    for (std::size_t i = lo; i < hi; ++i) {
        if (i & bit) continue;
        Vec a = values[i] + values[i | bit];
        Vec b = values[i] - values[i | bit];
        values[i] = std::move(a);
        values[i | bit] = std::move(b);
    }
}

}  // namespace

void walsh_transform_serial(std::vector<Vec>& values, int depth) {
    std::size_t n = std::size_t{1} << depth;
    for (int level = 0; level < depth; ++level)
        walsh_stage(values, 0, n, std::size_t{1} << level);
    double scale = 1.0 / static_cast<double>(n);
    for (auto& v : values) v *= scale;
}

void walsh_transform_omp(std::vector<Vec>& values, int depth) {
    std::int64_t n = std::int64_t{1} << depth;
    for (int level = 0; level < depth; ++level) {
        std::size_t bit = std::size_t{1} << level;
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            if (static_cast<std::size_t>(i) & bit) continue;
            std::size_t a = static_cast<std::size_t>(i);
            Vec s = values[a] + values[a | bit];
            Vec d = values[a] - values[a | bit];
            values[a] = std::move(s);
            values[a | bit] = std::move(d);
        }
    }
    double scale = 1.0 / static_cast<double>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] *= scale;
}

void walsh_transform(std::vector<Vec>& values, int depth) {
    if (openmp_enabled() && depth >= 10)
        walsh_transform_omp(values, depth);
    else
        walsh_transform_serial(values, depth);
}

namespace {

// For a pair first differing at coordinate n the dyadic distance is 2^-n,
// so the candidate constant is ||dE|| * 2^{alpha n}. Enumerate pairs by
// their first differing bit to reuse the 2^{alpha n} factor.
double holder_pair_block(const std::vector<Vec>& values, int depth,
                         double alpha, std::size_t w) {
    double best = 0.0;
    std::size_t n_total = std::size_t{1} << depth;
    for (std::size_t wp = w + 1; wp < n_total; ++wp) {
        std::size_t diff = w ^ wp;
        int n = 0;
        while (((diff >> n) & 1u) == 0u) ++n;
        double dist = std::ldexp(1.0, -n);
        double r = (values[w] - values[wp]).norm() / std::pow(dist, alpha);
        best = std::max(best, r);
    }
    return best;
}

}  // namespace

double holder_constant_serial(const std::vector<Vec>& values, int depth,
                              double alpha) {
    std::size_t n_total = std::size_t{1} << depth;
    double best = 0.0;
    for (std::size_t w = 0; w + 1 < n_total; ++w)
        best = std::max(best, holder_pair_block(values, depth, alpha, w));
    return best;
}

double holder_constant_omp(const std::vector<Vec>& values, int depth,
                           double alpha) {
    std::int64_t n_total = std::int64_t{1} << depth;
    double best = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
    for (std::int64_t w = 0; w < n_total - 1; ++w)
        best = std::max(best, holder_pair_block(values, depth, alpha,
                                                static_cast<std::size_t>(w)));
    return best;
}

double holder_constant(const std::vector<Vec>& values, int depth,
                       double alpha) {
    if (openmp_enabled() && depth >= 8)
        return holder_constant_omp(values, depth, alpha);
    return holder_constant_serial(values, depth, alpha);
}

}  // namespace kernels
}  // namespace mixlab
