#include "ztwo/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>

#include "ztwo/json_io.hpp"

namespace ztwo {

namespace {

constexpr const char* kSchemaName = "ztwo-lvalue-cache";

std::string describe(const LValueCache::Key& k) {
    return "(n=" + std::to_string(std::get<0>(k)) + ", d=" + std::to_string(std::get<1>(k)) +
           ", power=" + std::to_string(std::get<2>(k)) + ", m=" + std::to_string(std::get<3>(k)) + ")";
}

}  // namespace

LValueCache::LValueCache(LValueCache&& other) noexcept {
    std::unique_lock lock(other.mu_);
    entries_ = std::move(other.entries_);
}

LValueCache& LValueCache::operator=(LValueCache&& other) noexcept {
    if (this != &other) {
        std::scoped_lock lock(mu_, other.mu_);
        entries_ = std::move(other.entries_);
    }
    return *this;
}

LValueCache::Key LValueCache::key_for(const CharSpec& spec, unsigned m) {
    if (!spec.has_twist()) return {spec.layer, 1, 0, m};
    return {spec.layer, spec.twist, spec.twist_power, m};
}

std::optional<LValueResult> LValueCache::lookup(const CharSpec& spec, unsigned m) const {
    std::shared_lock lock(mu_);
    auto it = entries_.find(key_for(spec, m));
    if (it == entries_.end()) return std::nullopt;
    LValueResult r = it->second;
    r.spec = spec;
    return r;
}

void LValueCache::insert(const LValueResult& r) {
    const Key k = key_for(r.spec, r.m);
    std::unique_lock lock(mu_);
    auto [it, inserted] = entries_.emplace(k, r);
    if (!inserted && (it->second.value != r.value || it->second.ord2 != r.ord2))
        throw CachePoisonedError("conflicting values for " + describe(k));
}

std::size_t LValueCache::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

std::vector<LValueResult> LValueCache::entries() const {
    std::shared_lock lock(mu_);
    std::vector<LValueResult> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(v);
    return out;
}

LValueCache LValueCache::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cache " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty cache file " + path.string());
    const Json header = Json::parse(line);
    if (header.value("schema", "") != kSchemaName || header.value("version", -1) != kSchemaVersion)
        throw std::runtime_error("unsupported cache header in " + path.string() + ": " + line);
    LValueCache cache;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        LValueResult r = lvalue_from_json(Json::parse(line));
        if (ord2(r.value) != r.ord2)
            throw CachePoisonedError(path.string() + ":" + std::to_string(lineno) + ": stored ord2 " + r.ord2.to_string() +
                                     " does not match the stored value");
        cache.insert(r);
    }
    return cache;
}

LValueCache LValueCache::load_or_empty(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return {};
    return load(path);
}

void LValueCache::save(const std::filesystem::path& path) const {
    std::shared_lock lock(mu_);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache " + tmp);
        out << Json{{"schema", kSchemaName}, {"version", kSchemaVersion}}.dump() << '\n';
        for (const auto& [k, v] : entries_) out << to_json(v).dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::vector<LValueCache::Key> LValueCache::audit(const EngineOptions& opts) const {
    const LValueEngine fresh(opts, nullptr);
    std::vector<Key> bad;
    for (const auto& r : entries()) {
        const LValueResult again = fresh.l_value_of_evaluation(r.spec, r.m);
        if (again.value != r.value || again.ord2 != r.ord2) bad.push_back(key_for(r.spec, r.m));
    }
    return bad;
}

std::optional<std::filesystem::path> resolve_cache_path(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return std::filesystem::path(*flag);
    if (const char* env = std::getenv("ZTWO_CACHE"); env && *env) return std::filesystem::path(env);
    return std::nullopt;
}

}  // namespace ztwo
