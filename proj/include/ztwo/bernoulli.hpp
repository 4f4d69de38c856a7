#pragma once

#include "ztwo/rational.hpp"

namespace ztwo {

/// B_k with B_1 = -1/2, from sum_{j=0}^{k} C(k+1, j) B_j = 0. Memoized and
/// safe to call from several threads.
Rational bernoulli_number(unsigned k);

/// B_k(x) = sum_i C(k, i) B_i x^{k-i}.
Rational bernoulli_poly(unsigned k, const Rational& x);

}  // namespace ztwo
