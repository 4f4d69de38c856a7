#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ztwo/lvalues.hpp"

namespace ztwo {

/// A cached entry disagrees with what was (re)computed.
class CachePoisonedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// L-values keyed by (n, d, power, m), persisted as JSON lines behind a
/// schema header. Concurrent lookups; inserts take an exclusive lock and are
/// idempotent (re-inserting an equal value is a no-op, a different value
/// throws CachePoisonedError).
class LValueCache {
public:
    using Key = std::tuple<unsigned, std::int64_t, unsigned, unsigned>;

    static Key key_for(const CharSpec& spec, unsigned m);

    std::optional<LValueResult> lookup(const CharSpec& spec, unsigned m) const;
    void insert(const LValueResult& r);
    std::size_t size() const;
    std::vector<LValueResult> entries() const;

    /// Reads a cache file. Every line must parse, match the schema header,
    /// and carry an ord2 that equals ord2 recomputed from its value.
    static LValueCache load(const std::filesystem::path& path);
    /// Missing file yields an empty cache.
    static LValueCache load_or_empty(const std::filesystem::path& path);
    /// Deterministic: header line then entries sorted by key.
    void save(const std::filesystem::path& path) const;

    /// Recomputes every entry with the engine's arithmetic (bypassing the
    /// cache) and returns the keys whose stored value differs.
    std::vector<Key> audit(const EngineOptions& opts) const;

    LValueCache() = default;
    LValueCache(LValueCache&& other) noexcept;
    LValueCache& operator=(LValueCache&& other) noexcept;

private:
    mutable std::shared_mutex mu_;
    std::map<Key, LValueResult> entries_;
};

/// --cache PATH, else $ZTWO_CACHE, else empty (no persistence).
std::optional<std::filesystem::path> resolve_cache_path(const std::optional<std::string>& flag);

}  // namespace ztwo
