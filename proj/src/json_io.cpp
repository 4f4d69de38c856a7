#include "ztwo/json_io.hpp"

#include <stdexcept>

namespace ztwo {

namespace {

Integer integer_from_json(const Json& j) {
    if (j.is_string()) {
        Integer z;
        if (z.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("bad integer: " + j.get<std::string>());
        return z;
    }
    if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
    throw std::invalid_argument("expected integer, got " + j.dump());
}

}  // namespace

Json to_json(const CyclotomicNumber& a) {
    Json coeffs = Json::array();
    for (const auto& c : a.coeffs()) coeffs.push_back(Json::array({c.get_num().get_str(), c.get_den().get_str()}));
    return Json{{"level", a.level()}, {"coeffs", std::move(coeffs)}};
}

CyclotomicNumber cyclotomic_from_json(const Json& j) {
    const unsigned level = j.at("level").get<unsigned>();
    std::vector<Rational> coeffs;
    for (const auto& pair : j.at("coeffs")) {
        if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("coefficient must be [num, den]");
        coeffs.push_back(make_rational(integer_from_json(pair[0]), integer_from_json(pair[1])));
    }
    return CyclotomicNumber(level, std::move(coeffs));
}

Json to_json(const CharSpec& spec) {
    Json j{{"n", spec.layer}, {"d", spec.twist}, {"power", spec.twist_power}};
    return j;
}

CharSpec charspec_from_json(const Json& j) {
    CharSpec s;
    s.layer = j.at("n").get<unsigned>();
    s.twist = j.at("d").get<std::int64_t>();
    s.twist_power = j.at("power").get<unsigned>();
    s.allow_even_twist = (s.twist % 2 == 0);
    s.validate();
    return s;
}

Json to_json(const LValueResult& r) {
    Json removed = Json::array();
    for (auto p : r.euler_factors_removed) removed.push_back(p);
    return Json{{"spec", to_json(r.spec)},
                {"m", r.m},
                {"value", to_json(r.value)},
                {"ord2", r.ord2.to_string()},
                {"euler_factors_removed", std::move(removed)}};
}

LValueResult lvalue_from_json(const Json& j) {
    LValueResult r;
    r.spec = charspec_from_json(j.at("spec"));
    r.m = j.at("m").get<unsigned>();
    r.value = cyclotomic_from_json(j.at("value"));
    r.ord2 = DyadicValuation::parse(j.at("ord2").get<std::string>());
    if (j.contains("euler_factors_removed"))
        for (const auto& p : j.at("euler_factors_removed")) r.euler_factors_removed.push_back(p.get<std::int64_t>());
    return r;
}

}  // namespace ztwo
