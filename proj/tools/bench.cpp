#include <chrono>
#include <cstdio>

#include "mixlab/kernels.hpp"
#include "mixlab/rng.hpp"

using namespace mixlab;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
    // one warm-up, then best of reps
    f();
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial_ms, double omp_ms) {
    std::printf("%-24s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms);
}

}  // namespace

int main() {
    std::printf("threads: %d (OpenMP %s)\n\n", kernels::max_threads(),
                kernels::openmp_enabled() ? "on" : "off");
    std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const std::int64_t n = 1 << 24;
        auto term = [](std::int64_t i) -> complex {
            return rng::gaussian(42, 0, static_cast<std::uint64_t>(i), 0);
        };
        volatile double sink = 0.0;
        double s = time_ms([&] { sink = kernels::chunked_sum_serial(n, term).real(); }, 3);
        double p = time_ms([&] { sink = kernels::chunked_sum_omp(n, term).real(); }, 3);
        (void)sink;
        row("chunked_sum (2^24)", s, p);
    }

    {
        const int depth = 14, dim = 64;
        std::vector<Vec> base(std::size_t{1} << depth);
        for (std::size_t w = 0; w < base.size(); ++w) {
            base[w] = Vec(dim);
            for (int i = 0; i < dim; ++i)
                base[w][i] = rng::gaussian(7, w, static_cast<std::uint64_t>(i), 0);
        }
        double s = time_ms(
            [&] {
                auto v = base;
                kernels::walsh_transform_serial(v, depth);
            },
            3);
        double p = time_ms(
            [&] {
                auto v = base;
                kernels::walsh_transform_omp(v, depth);
            },
            3);
        row("walsh_transform (2^14)", s, p);
    }

    {
        const int depth = 10, dim = 32;
        std::vector<Vec> field(std::size_t{1} << depth);
        for (std::size_t w = 0; w < field.size(); ++w) {
            field[w] = Vec(dim);
            for (int i = 0; i < dim; ++i)
                field[w][i] = rng::gaussian(11, w, static_cast<std::uint64_t>(i), 0);
        }
        volatile double sink = 0.0;
        double s = time_ms(
            [&] { sink = kernels::holder_constant_serial(field, depth, 1.5); }, 3);
        double p = time_ms(
            [&] { sink = kernels::holder_constant_omp(field, depth, 1.5); }, 3);
        (void)sink;
        row("holder_constant (2^10)", s, p);
    }

    return 0;
}
