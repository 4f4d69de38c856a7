#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ztwo/cache.hpp"
#include "ztwo/json_io.hpp"

using namespace ztwo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ztwo_test_cache";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    fs::remove(p);
    return p;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
    std::ofstream out(p, std::ios::trunc);
    for (const auto& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("engine results are cached and survive a save/load round trip") {
    LValueCache cache;
    const LValueEngine engine(EngineOptions{}, &cache);
    const auto a = engine.l_value(CharSpec::chi_psi(3, 5), 2);
    const auto b = engine.l_value(CharSpec::chi(2), 4);
    CHECK(cache.size() == 2);
    CHECK(engine.l_value(CharSpec::chi_psi(3, 5), 2) == a);

    const auto path = scratch("roundtrip.jsonl");
    cache.save(path);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(Json::parse(lines[0])["version"] == kSchemaVersion);

    auto loaded = LValueCache::load(path);
    CHECK(loaded.size() == 2);
    CHECK(loaded.lookup(CharSpec::chi_psi(3, 5), 2)->value == a.value);
    CHECK(loaded.lookup(CharSpec::chi(2), 4)->ord2 == b.ord2);
    CHECK_FALSE(loaded.lookup(CharSpec::chi(2), 2).has_value());

    const auto again = scratch("roundtrip2.jsonl");
    loaded.save(again);
    CHECK(read_lines(again) == lines);
}

TEST_CASE("key normalization treats power 0 like no twist") {
    CHECK(LValueCache::key_for(CharSpec::chi_psi(3, 7, 0), 2) == LValueCache::key_for(CharSpec::chi(3), 2));
    CHECK(LValueCache::key_for(CharSpec::chi_psi(3, 7, 1), 2) != LValueCache::key_for(CharSpec::chi_psi(3, 7, 2), 2));
}

TEST_CASE("conflicting inserts are rejected, equal ones are idempotent") {
    LValueCache cache;
    const LValueEngine engine;
    auto r = engine.l_value(CharSpec::chi(3), 2);
    cache.insert(r);
    CHECK_NOTHROW(cache.insert(r));
    r.value *= make_rational(3);
    r.ord2 = ord2(r.value);
    CHECK_THROWS_AS(cache.insert(r), CachePoisonedError);
}

TEST_CASE("concurrent misses converge") {
    LValueCache cache;
    const LValueEngine engine(EngineOptions{}, &cache);
    std::vector<LValueResult> results(8);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < results.size(); ++i)
            pool.emplace_back([&, i] { results[i] = engine.l_value(CharSpec::chi_psi(4, 3), 4); });
    }
    for (const auto& r : results) CHECK(r == results.front());
    CHECK(cache.size() == 1);
}

TEST_CASE("a stored ord2 that disagrees with the stored value is poison") {
    LValueCache cache;
    const LValueEngine engine(EngineOptions{}, &cache);
    engine.l_value(CharSpec::chi(3), 2);
    const auto path = scratch("poison.jsonl");
    cache.save(path);
    auto lines = read_lines(path);
    Json entry = Json::parse(lines[1]);
    entry["ord2"] = "5";
    lines[1] = entry.dump();
    write_lines(path, lines);
    CHECK_THROWS_AS(LValueCache::load(path), CachePoisonedError);
}

TEST_CASE("audit finds values the engine does not reproduce") {
    LValueCache cache;
    const LValueEngine engine(EngineOptions{}, &cache);
    engine.l_value(CharSpec::chi(2), 2);
    engine.l_value(CharSpec::chi_psi(2, 5), 2);
    CHECK(cache.audit(EngineOptions{}).empty());

    const auto path = scratch("audit.jsonl");
    cache.save(path);
    auto lines = read_lines(path);
    LValueResult tampered = lvalue_from_json(Json::parse(lines[1]));
    tampered.value *= make_rational(-1);
    lines[1] = to_json(tampered).dump();
    write_lines(path, lines);

    const auto loaded = LValueCache::load(path);
    const auto bad = loaded.audit(EngineOptions{});
    REQUIRE(bad.size() == 1);
    CHECK(bad.front() == LValueCache::key_for(tampered.spec, tampered.m));
}

TEST_CASE("bad files") {
    const auto path = scratch("bad.jsonl");
    write_lines(path, {R"({"schema":"something-else","version":1})"});
    CHECK_THROWS(LValueCache::load(path));
    CHECK_THROWS(LValueCache::load(scratch("missing.jsonl")));
    CHECK(LValueCache::load_or_empty(scratch("missing.jsonl")).size() == 0);
}

TEST_CASE("cache path resolution") {
    unsetenv("ZTWO_CACHE");
    CHECK_FALSE(resolve_cache_path(std::nullopt).has_value());
    setenv("ZTWO_CACHE", "/tmp/from_env.jsonl", 1);
    CHECK(resolve_cache_path(std::nullopt) == fs::path("/tmp/from_env.jsonl"));
    CHECK(resolve_cache_path(std::string("/tmp/flag.jsonl")) == fs::path("/tmp/flag.jsonl"));
    unsetenv("ZTWO_CACHE");
}

TEST_CASE("JSON forms") {
    const CyclotomicNumber x(2, {make_rational(3, 4), make_rational(-5)});
    const Json j = to_json(x);
    CHECK(j["level"] == 2);
    CHECK(j["coeffs"][0][0] == "3");
    CHECK(j["coeffs"][0][1] == "4");
    CHECK(cyclotomic_from_json(j) == x);

    const auto spec = CharSpec::chi_psi(3, 21, 2);
    CHECK(to_json(spec).dump() == R"({"n":3,"d":21,"power":2})");
    CHECK(charspec_from_json(to_json(spec)) == spec);

    const LValueEngine engine;
    const auto r = engine.l_value_imprimitive(CharSpec::chi(3), 96, 2);
    CHECK(lvalue_from_json(to_json(r)) == r);
}
