#pragma once
// Downstream constants, exact in gamma (the edge/input ratio the
// concentrator family achieves):
//   K(gamma)      = (7 + 4 gamma - 4/3) / (2/3)
//   K_tilde(gamma) = (5 + 4 gamma - 4/3) / (2/3)
//   w2            = 2 K_tilde + 1
// gamma = 5.05 gives K = 38.8, K_tilde = 35.8, w2 = 72.6; gamma = 6 (the
// classical regular construction) gives K = 44.5.  w2 is computed from the
// formula chain, not hard-coded, so a better gamma propagates; the rounded
// variant 2*ceil(K_tilde)+1 is also reported.

#include <string>

#include "conc/rational.hpp"

namespace conc {

struct ConstantsReport {
    Rational gamma;
    Rational K;
    Rational K_tilde;
    Rational w2;
    Rational w2_rounded;  // 2*ceil(K_tilde) + 1
    std::string to_json(int indent = 2) const;
};

ConstantsReport constants(const Rational& gamma);  // requires gamma >= 5

}  // namespace conc
