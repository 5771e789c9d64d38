#ifndef MIXLAB_COMMON_HPP
#define MIXLAB_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixlab {

using complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Thrown when a numerical guard trips (iteration blow-up, size limits,
// infeasible construction depth). The CLI maps this to exit code 3;
// plain invalid_argument maps to exit code 2.
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

inline double wrap_angle(double theta) {
    double t = std::fmod(theta, two_pi);
    if (t < 0) t += two_pi;
    // fmod can return two_pi - eps rounded up to two_pi
    if (t >= two_pi) t = 0.0;
    return t;
}

// Bilinear dual pairing <x*, v> = sum_i x_i v_i. Functionals are kept as
// plain coefficient vectors; no conjugation happens in the pairing itself.
inline complex dual_pair(const Vec& xstar, const Vec& v) {
    return xstar.transpose() * v;
}

// Kahan-compensated sum of a complex range.
class CompensatedSum {
public:
    void add(complex x) {
        complex y = x - comp_;
        complex t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    complex value() const { return sum_; }

private:
    complex sum_{0.0, 0.0};
    complex comp_{0.0, 0.0};
};

}  // namespace mixlab

#endif
