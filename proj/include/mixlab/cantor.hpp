#ifndef MIXLAB_CANTOR_HPP
#define MIXLAB_CANTOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixlab/common.hpp"

namespace mixlab {

// Vector field on {0,1}^depth. Index bitmask omega: bit n (0-based) is the
// coordinate eps_n, and the ultrametric is d(w,w') = 2^{-first differing bit}.
struct DyadicField {
    int depth = 0;
    std::vector<Vec> values;  // 2^depth entries, indexed by bitmask
    double holder_alpha = 1.5;
    double holder_C = 0.0;

    std::size_t size() const { return values.size(); }
    void validate() const;

    // max ||E(w) - E(w')|| / d(w,w')^alpha over all pairs
    double measured_holder(double alpha) const;
};

// E-hat(gamma_I) = 2^-d sum_w gamma_I(w) E(w), gamma_I(w) = (-1)^|I & w|,
// indexed by the bitmask I. Naive double loop at depth <= 8, fast butterfly
// above; depth > 16 rejected.
std::vector<Vec> walsh_coeffs(const DyadicField& field);
std::vector<Vec> walsh_coeffs_naive(const DyadicField& field);

struct DecayCertificate {
    bool pass = false;
    double worst_ratio = 0.0;  // max ||E-hat(gamma_I)|| / ((C/2) 2^{-alpha n})
    std::uint32_t witness_mask = 0;
    int witness_bit = -1;
};

// Checks the bound ||E-hat(gamma_I)|| <= (C/2) 2^{-alpha n} for every
// nonempty I and every n in I.
DecayCertificate certify_decay(const std::vector<Vec>& coeffs, double holder_C,
                               double alpha);

// s_n = sum over I with max bit n of ||E-hat(gamma_I)||; bounded by
// (C/2) 2^{-(alpha-1) n} for alpha-Holder fields.
std::vector<double> level_sums(const std::vector<Vec>& coeffs);

// Continuous eigenfield on a closed arc of angles [lo, hi].
struct ArcField {
    std::function<Vec(double)> E;
    double lo = 0.0;
    double hi = two_pi;
    double lipschitz = 1.0;  // ||E(a) - E(b)|| <= lipschitz |a - b|
};

struct CantorField {
    DyadicField field;
    std::vector<double> angles;  // phi(omega) per leaf bitmask
    double min_separation = 0.0;  // smallest gap between distinct leaf angles
};

// Nested binary subdivision of the arc: children of a width-len node are
// centered at its 1/3 and 2/3 points with width
// min(len/4, 2^{-alpha(k+1)} / L), which keeps closures disjoint and forces
// ||E(w) - E(w')|| <= 2^{-alpha n} at first differing bit n >= 1.
// Width underflow below min_width raises a GuardError naming the maximal
// feasible depth.
CantorField cantor_eigenfield(const ArcField& arc, int depth, double alpha,
                              double min_width = 1e-12);

// Truncated product space Omega(q) = prod_n Omega(qbar_n), each level a
// disjoint union of root-of-unity blocks with weight (1/l) (1/q_s) per
// element. Characters are the sequences of Gamma(q) with nonzero last entry
// plus the empty sequence.
struct ProductSpace {
    std::vector<std::vector<int>> qbar;  // per level: block sizes q >= 2

    struct Node {
        std::vector<std::pair<int, int>> coord;  // per level (block s, element r)
        double weight = 0.0;
    };
    // character: entries for levels 0..N-1, (block s, index k in Z_q);
    // empty = the constant character
    struct Character {
        std::vector<std::pair<int, int>> idx;
    };

    std::vector<Node> nodes;
    std::vector<Character> characters;

    int depth() const { return static_cast<int>(qbar.size()); }
    int block_count(int level) const {
        return static_cast<int>(qbar[static_cast<std::size_t>(level)].size());
    }
    // sum of block sizes w(qbar_n)
    int level_weight(int level) const;

    complex char_value(const Character& g, const Node& node) const;
};

// Materializes nodes, weights and characters; product of level weights
// beyond 1e5 is rejected.
ProductSpace product_space(const std::vector<std::vector<int>>& qbar);

// max |Gram - identity| entry of {e_gamma} under m_q; character count
// beyond 4096 rejected (quadratic Gram cost).
double basis_check(const ProductSpace& ps);

// d_q(omega, omega') when the first differing coordinates lie in the same
// block, nullopt otherwise.
std::optional<double> dq_metric(const ProductSpace& ps, const ProductSpace::Node& a,
                                const ProductSpace::Node& b);

}  // namespace mixlab

#endif
