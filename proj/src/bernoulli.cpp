#include "ztwo/bernoulli.hpp"

#include <mutex>
#include <vector>

namespace ztwo {

Rational bernoulli_number(unsigned k) {
    static std::mutex mu;
    static std::vector<Rational> table{Rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (table.size() <= k) {
        const unsigned n = static_cast<unsigned>(table.size());
        Rational s = 0;
        for (unsigned j = 0; j < n; ++j) {
            if (j >= 3 && j % 2 == 1) continue;  // odd B_j vanish past B_1
            s += Rational(binomial(n + 1, j)) * table[j];
        }
        Rational b = -s / Rational(static_cast<long>(n + 1));
        b.canonicalize();
        table.push_back(b);
    }
    return table[k];
}

Rational bernoulli_poly(unsigned k, const Rational& x) {
    // Horner in x over the coefficients C(k, i) B_i of x^{k-i}.
    Rational acc = 0;
    for (unsigned i = 0; i <= k; ++i) acc = acc * x + Rational(binomial(k, i)) * bernoulli_number(i);
    acc.canonicalize();
    return acc;
}

}  // namespace ztwo
