#include "ztwo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <thread>

#include "ztwo/cache.hpp"
#include "ztwo/iwasawa.hpp"
#include "ztwo/json_io.hpp"
#include "ztwo/verify.hpp"

namespace ztwo {

namespace {

struct Common {
    std::optional<std::string> cache;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool force_large = false;
    bool json = false;
    bool csv = false;
    bool audit_cache = false;
};

struct Inputs {
    unsigned n = 0;
    std::int64_t d = 1;
    unsigned m = 2;
    unsigned power = 1;
    std::vector<unsigned> ns;
    std::vector<std::int64_t> ds;
    std::vector<unsigned> ms;
    unsigned n_min = 1;
    bool default_grid = false;
    std::optional<std::string> check;
    bool inject_fault = false;
};

class Printer {
public:
    explicit Printer(std::ostream& os) : os_(os) {}
    Printer& row(const std::string& key, const std::string& value) {
        os_ << std::left << std::setw(14) << key << value << '\n';
        return *this;
    }

private:
    std::ostream& os_;
};

Json with_schema(Json j) {
    Json out{{"schema_version", kSchemaVersion}};
    for (auto& [k, v] : j.items()) out[k] = v;
    return out;
}

FieldLayerSpec field_for(std::int64_t d, unsigned n) {
    FieldLayerSpec f = d == 1 ? FieldLayerSpec::rational(n) : FieldLayerSpec::quadratic(d, n);
    f.validate();
    return f;
}

Json field_json(const FieldLayerSpec& f) {
    Json j{{"label", f.label()}, {"radicand", f.radicand}, {"n", f.layer}, {"degree", f.degree()}, {"r1", f.r1()}};
    if (auto g = f.g2()) j["g2"] = *g;
    else j["g2"] = nullptr;
    return j;
}

std::string value_text(const CyclotomicNumber& v) {
    std::string s = to_string(v);
    if (v.level() >= 2) s += "   (z = zeta_" + std::to_string(std::uint64_t{1} << v.level()) + ")";
    return s;
}

int cmd_lvalue(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    if (in.m < 1) throw std::invalid_argument("m must be >= 1");
    CharSpec spec;
    if (in.d == 1) spec = CharSpec::chi(in.n);
    else if (in.n == 0 && in.power == 1) spec = CharSpec::psi(in.d);
    else spec = CharSpec::chi_psi(in.n, in.d, in.power);
    spec.validate();
    const LValueResult r = spec.is_primitive() ? engine.l_value(spec, in.m) : engine.l_value_of_evaluation(spec, in.m);
    if (c.json) {
        out << with_schema(to_json(r)).dump() << '\n';
        return kExitOk;
    }
    Printer p(out);
    p.row("character", spec.label()).row("m", std::to_string(in.m)).row("value", value_text(r.value));
    p.row("ord2", r.ord2.to_string());
    if (!r.euler_factors_removed.empty()) {
        std::string primes;
        for (auto q : r.euler_factors_removed) primes += (primes.empty() ? "" : ",") + std::to_string(q);
        p.row("removed", primes);
    }
    return kExitOk;
}

int cmd_zeta(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    const FieldLayerSpec f = field_for(in.d, in.n);
    const Rational z = field_zeta(engine, f, in.m);
    const DyadicValuation v = z == 0 ? DyadicValuation::infinity() : DyadicValuation(Rational(ord2_rational(z)));
    if (c.json) {
        out << with_schema(Json{{"field", field_json(f)}, {"m", in.m}, {"value", to_string(z)}, {"ord2", v.to_string()}})
                   .dump()
            << '\n';
        return kExitOk;
    }
    Printer(out).row("field", f.label()).row("m", std::to_string(in.m)).row("zeta", to_string(z)).row("ord2", v.to_string());
    return kExitOk;
}

int cmd_invariants(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    const InvariantTriple t = invariant_triple(engine, in.d, in.m);
    if (c.json) {
        out << with_schema(Json{{"d", in.d},
                                {"m", in.m},
                                {"mu", t.mu},
                                {"lambda", t.lambda},
                                {"nu", t.nu},
                                {"nu_prime", to_string(t.nu_prime)},
                                {"n_threshold", t.n_threshold},
                                {"derived_from_proof_form", t.from_proof_form}})
                   .dump()
            << '\n';
        return kExitOk;
    }
    Printer p(out);
    p.row("d", std::to_string(in.d)).row("m", std::to_string(in.m));
    p.row("mu", std::to_string(t.mu)).row("lambda", std::to_string(t.lambda)).row("nu", std::to_string(t.nu));
    p.row("nu_prime", to_string(t.nu_prime)).row("n_threshold", std::to_string(t.n_threshold));
    if (t.from_proof_form) p.row("note", "derived from proof form");
    return kExitOk;
}

int cmd_kgroup(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    const FieldLayerSpec f = field_for(in.d, in.n);
    const KGroupOrder k = k_group_ord2(engine, f, in.m);
    const long w = w_m_ord2(f, in.m);
    const long zeta_ord = ord2_rational(field_zeta(engine, f, in.m));
    const std::string group = "K_" + std::to_string(2 * in.m - 2);
    if (c.json) {
        out << with_schema(Json{{"field", field_json(f)},
                                {"m", in.m},
                                {"group", group},
                                {"w_m_ord2", w},
                                {"zeta_ord2", zeta_ord},
                                {"e", k.e}})
                   .dump()
            << '\n';
        return kExitOk;
    }
    Printer p(out);
    p.row("field", f.label()).row("group", group).row("w_m ord2", std::to_string(w)).row("zeta ord2", std::to_string(zeta_ord));
    p.row("e", std::to_string(k.e));
    return kExitOk;
}

int cmd_structure(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    const FieldLayerSpec f = field_for(in.d, in.n);
    const TameKernelStructure s = tame_kernel_structure(engine, f);
    if (c.json) {
        out << with_schema(Json{{"field", field_json(f)},
                                {"lower", s.lower},
                                {"upper", s.upper},
                                {"determined", s.determined},
                                {"structure", s.describe()}})
                   .dump()
            << '\n';
        return kExitOk;
    }
    Printer p(out);
    p.row("field", f.label()).row("r1", std::to_string(s.r1)).row("g2", std::to_string(s.g2));
    p.row("bounds", std::to_string(s.lower) + " <= r_2 <= " + std::to_string(s.upper)).row("K_2(2)", s.describe());
    return kExitOk;
}

int cmd_verify(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    VerifyGrid grid = in.default_grid ? VerifyGrid::default_grid() : VerifyGrid{};
    if (!in.ns.empty()) grid.ns = in.ns;
    if (!in.ds.empty()) grid.ds = in.ds;
    if (!in.ms.empty()) grid.ms = in.ms;
    if (grid.ms.empty() && !grid.ns.empty()) grid.ms = {2};
    if (grid.ds.empty() && !grid.ns.empty()) grid.ds = {1};
    const auto reports = run_all(engine, grid, VerifyOptions{c.jobs, in.inject_fault, in.check});
    std::size_t failed = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
    for (const auto& r : reports) {
        auto& t = tally[r.check_name];
        ++(r.passed ? t.first : t.second);
        if (!r.passed) ++failed;
        if (c.json) out << to_json(r).dump() << '\n';
    }
    if (!c.json) {
        out << std::left << std::setw(26) << "check" << std::setw(8) << "pass" << "fail\n";
        for (const auto& [name, t] : tally) out << std::setw(26) << name << std::setw(8) << t.first << t.second << '\n';
        for (const auto& r : reports)
            if (!r.passed) out << "FAILED " << r.check_name << ' ' << r.parameters.dump() << '\n';
        out << reports.size() << " checks, " << failed << " failed\n";
    }
    return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    if (in.ds.empty()) throw std::invalid_argument("sweep needs --d");
    if (in.n < in.n_min) throw std::invalid_argument("sweep needs --n >= --n-min");
    SweepGrid grid{in.ds, in.n_min, in.n, in.ms.empty() ? std::vector<unsigned>{2} : in.ms};
    const auto rows = sweep(engine, grid, c.jobs);
    if (c.json) {
        for (const auto& r : rows) {
            Json j{{"d", r.d},
                   {"n", r.n},
                   {"m", r.m},
                   {"ord2_computed", r.computed.to_string()},
                   {"ord2_predicted", to_string(r.predicted)},
                   {"match", r.match},
                   {"n_d_ceiling", r.nd_ceiling}};
            j["n_d_refined"] = r.nd_refined ? Json(*r.nd_refined) : Json(nullptr);
            out << j.dump() << '\n';
        }
    } else {
        write_sweep_csv(out, rows);
    }
    return kExitOk;
}

int cmd_threshold(const LValueEngine& engine, const Inputs& in, const Common& c, std::ostream& out) {
    if (in.n < 1) throw std::invalid_argument("threshold needs --n >= 1 (largest layer scanned)");
    const auto found = empirical_threshold(engine, in.d, in.m, in.n);
    std::optional<NdBound> bound;
    if (in.d != 1) bound = n_d_bound(in.d, in.m);
    const std::string found_text = found ? std::to_string(*found) : "not found";
    if (c.json) {
        Json j{{"d", in.d}, {"m", in.m}, {"n_max", in.n}};
        j["empirical"] = found ? Json(*found) : Json("not found");
        j["n_d_ceiling"] = bound ? Json(bound->ceiling) : Json(1);
        j["n_d_refined"] = bound ? (bound->refined ? Json(*bound->refined) : Json(nullptr)) : Json(1);
        out << with_schema(j).dump() << '\n';
        return kExitOk;
    }
    Printer p(out);
    p.row("d", std::to_string(in.d)).row("m", std::to_string(in.m)).row("scanned", "n = 1.." + std::to_string(in.n));
    p.row("empirical", found_text);
    if (bound) {
        p.row("ceiling", std::to_string(bound->ceiling));
        p.row("refined", bound->refined ? std::to_string(*bound->refined) : "NA");
    }
    return kExitOk;
}

int audit(const std::optional<std::filesystem::path>& path, const Common& c, std::ostream& out) {
    if (!path) throw std::invalid_argument("--audit-cache needs --cache PATH or ZTWO_CACHE");
    const LValueCache cache = LValueCache::load(*path);
    const auto bad = cache.audit(EngineOptions{c.jobs, true, true});
    for (const auto& [n, d, power, m] : bad)
        out << "mismatch n=" << n << " d=" << d << " power=" << power << " m=" << m << '\n';
    out << cache.size() << " entries audited, " << bad.size() << " mismatched\n";
    return bad.empty() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact 2-adic L-values, Iwasawa invariants and K-group orders", "ztwo"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    Common c;
    Inputs in;
    app.add_option("--cache", c.cache, "L-value cache file (default: $ZTWO_CACHE)");
    app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--force-large", c.force_large, "allow 2^n d above 2^24");
    app.add_flag("--json", c.json, "JSON output");
    app.add_flag("--csv", c.csv, "CSV output (sweep)");
    app.add_flag("--audit-cache", c.audit_cache, "recompute every cache entry and report mismatches");

    auto single = [&](CLI::App* sub, bool with_n, bool with_d, bool with_m) {
        if (with_n) sub->add_option("--n", in.n, "layer n");
        if (with_d) sub->add_option("--d", in.d, "square-free twist d");
        if (with_m) sub->add_option("--m", in.m, "weight m (L-value at 1-m)");
    };
    auto* lvalue = app.add_subcommand("lvalue", "L(chi_n psi_d^power, 1-m)");
    single(lvalue, true, true, true);
    lvalue->add_option("--power", in.power, "exponent of psi_d (0, 1 or 2)");
    auto* zeta = app.add_subcommand("zeta", "Dedekind zeta value of F_n at 1-m");
    single(zeta, true, true, true);
    auto* invariants = app.add_subcommand("invariants", "(mu, lambda, nu) for Q(sqrt d)");
    single(invariants, false, true, true);
    auto* kgroup = app.add_subcommand("kgroup", "ord2 of the 2-part of K_{2m-2} O_{F_n}");
    single(kgroup, true, true, true);
    auto* structure = app.add_subcommand("structure", "tame kernel K_2 O_{F_n}(2) via the rank squeeze");
    single(structure, true, true, false);
    auto* verify = app.add_subcommand("verify", "run the congruence checks");
    verify->add_flag("--default-grid", in.default_grid, "n 1..6, d {1,3,5,7,15,17,21,33,105}, m {2,4,6}");
    verify->add_option("--n", in.ns, "layers")->delimiter(',');
    verify->add_option("--d", in.ds, "twists")->delimiter(',');
    verify->add_option("--m", in.ms, "weights")->delimiter(',');
    verify->add_option("--check", in.check, "only this check (or family)");
    verify->add_flag("--inject-fault", in.inject_fault, "add one perturbed check that must fail");
    auto* sweep_cmd = app.add_subcommand("sweep", "computed vs predicted valuations as CSV");
    sweep_cmd->add_option("--d", in.ds, "twists")->delimiter(',')->required();
    sweep_cmd->add_option("--n", in.n, "largest layer")->required();
    sweep_cmd->add_option("--n-min", in.n_min, "smallest layer");
    sweep_cmd->add_option("--m", in.ms, "weights")->delimiter(',');
    auto* threshold = app.add_subcommand("threshold", "least n from which the valuation formula holds");
    single(threshold, true, true, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    try {
        const auto cache_path = resolve_cache_path(c.cache);
        if (c.audit_cache) {
            const int rc = audit(cache_path, c, out);
            if (app.get_subcommands().empty() || rc != kExitOk) return rc;
        }
        if (app.get_subcommands().empty()) {
            err << app.help();
            return kExitInvalidInput;
        }
        LValueCache cache;
        if (cache_path) cache = LValueCache::load_or_empty(*cache_path);
        CLI::App* sub = app.get_subcommands().front();
        const bool outer_parallel = sub == verify || sub == sweep_cmd;
        const LValueEngine engine(EngineOptions{outer_parallel ? 1u : c.jobs, c.force_large, true},
                                  cache_path ? &cache : nullptr);

        int rc = kExitOk;
        if (sub == lvalue) rc = cmd_lvalue(engine, in, c, out);
        else if (sub == zeta) rc = cmd_zeta(engine, in, c, out);
        else if (sub == invariants) rc = cmd_invariants(engine, in, c, out);
        else if (sub == kgroup) rc = cmd_kgroup(engine, in, c, out);
        else if (sub == structure) rc = cmd_structure(engine, in, c, out);
        else if (sub == verify) rc = cmd_verify(engine, in, c, out);
        else if (sub == sweep_cmd) rc = cmd_sweep(engine, in, c, out);
        else if (sub == threshold) rc = cmd_threshold(engine, in, c, out);
        if (cache_path) cache.save(*cache_path);
        return rc;
    } catch (const SizeGuardError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const CachePoisonedError& e) {
        err << "error: cache poisoned: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::logic_error& e) {
        err << "internal check failed: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}

}  // namespace ztwo
