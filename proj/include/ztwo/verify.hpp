#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ztwo/json_io.hpp"
#include "ztwo/lvalues.hpp"

namespace ztwo {

/// Outcome of one named check. The witness holds both sides of the
/// congruence, their difference, its ord2 and the threshold, enough to redo
/// the verdict by hand.
struct CheckReport {
    std::string check_name;
    Json parameters = Json::object();
    bool passed = false;
    Json witness = Json::object();
};

Json to_json(const CheckReport& r);

/// Every check accepts `perturb`, which adds 1 to the left-hand side before
/// comparing. A sound check must then fail.

/// L(chi_n,-1) == prod_{k=2}^{n} (1 - zeta_{2^k}) mod 2, and ord2 = 1 - 2^{1-n}.
/// n = 1 checks L(chi_1,-1) = -1.
CheckReport check_prop_d1(const LValueEngine& engine, unsigned n, bool perturb = false);

/// L(chi_n,1-m) is 2-integral and congruent to L(chi_n,-1) mod 2. Odd m is rejected.
CheckReport check_lvalue_mod2(const LValueEngine& engine, unsigned n, unsigned m, bool perturb = false);

/// L^{(D)}(chi_n,1-m) + L(chi_n psi_d,1-m) has ord2 >= 3/2.
CheckReport check_key_congruence(const LValueEngine& engine, std::int64_t d, unsigned n, unsigned m, bool perturb = false);

/// The character-sum identities and congruences behind the valuation formula,
/// one report each: sum_lemmas/no_D, sec3_4_1, sec3_4_2, cor1, and for n >= 2
/// mod_4, sec3_3_2, sec3_3_3.
std::vector<CheckReport> check_sum_lemmas(const LValueEngine& engine, std::int64_t d, unsigned n, unsigned m,
                                          bool perturb = false);

/// Exhaustive over one period: chi_n(2^{n+1} - b) = -chi_n(b),
/// chi_n(2^n - b) = chi_n(2^n - 1) (-1/b) chi_n(b), and
/// chi_n(2^{n+2-k} - b) == zeta_{2^k} chi_n(b) mod (1 - zeta_{2^{k-1}}) for 2 <= k <= n.
CheckReport check_char_lemmas(unsigned n, bool perturb = false);

/// sum_{b | d} L^{(D)}(chi_n psi_b,-1) equals the direct half-period sum and has
/// ord2 >= tau(d). Needs tau(d) >= 2 and n >= 2.
CheckReport check_section5_recursion(const LValueEngine& engine, std::int64_t d, unsigned n, bool perturb = false);

struct VerifyGrid {
    std::vector<unsigned> ns;
    std::vector<std::int64_t> ds;
    std::vector<unsigned> ms;

    /// n in 1..6, d in {1,3,5,7,15,17,21,33,105}, m in {2,4,6}.
    static VerifyGrid default_grid();
};

struct VerifyOptions {
    unsigned jobs = 1;
    /// Append one deliberately perturbed check.
    bool inject_fault = false;
    /// Only checks whose name equals this or starts with it followed by '/'.
    std::optional<std::string> only;
};

/// All checks over the grid, evaluated in parallel, returned in a fixed order.
std::vector<CheckReport> run_all(const LValueEngine& engine, const VerifyGrid& grid, const VerifyOptions& opts = {});

}  // namespace ztwo
