#ifndef WEILKIT_COUNT_CACHE_HPP
#define WEILKIT_COUNT_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "weilkit/common.hpp"

namespace weilkit {

struct CacheEntry {
  std::string model_hash;
  std::uint64_t p = 0;
  unsigned k = 1;
  unsigned r = 1;
  std::uint64_t count = 0;
  std::string version;
};

/// Persistent point counts: one JSON file per model hash,
/// `<dir>/<hash>.json` = {"model_hash", "entries": [{p, k, r, count, model_hash, version}]}.
/// Entries written by a different tool version are ignored on lookup.
/// Writes go through a temporary file and a rename.
class CountCache {
 public:
  explicit CountCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<std::uint64_t> get(const std::string& hash, std::uint64_t p, unsigned k, unsigned r) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto doc = load(hash);
    for (const auto& e : doc["entries"]) {
      if (e.value("version", "") != kVersion) continue;
      if (e.value("p", std::uint64_t{0}) == p && e.value("k", 0u) == k && e.value("r", 0u) == r)
        return e.value("count", std::uint64_t{0});
    }
    return std::nullopt;
  }

  void put(const CacheEntry& entry) {
    std::lock_guard<std::mutex> lock(mu_);
    auto doc = load(entry.model_hash);
    auto& entries = doc["entries"];
    nlohmann::json fresh = nlohmann::json::array();
    for (const auto& e : entries) {
      const bool same = e.value("p", std::uint64_t{0}) == entry.p && e.value("k", 0u) == entry.k &&
                        e.value("r", 0u) == entry.r;
      if (!same) fresh.push_back(e);
    }
    fresh.push_back({{"p", entry.p},
                     {"k", entry.k},
                     {"r", entry.r},
                     {"count", entry.count},
                     {"model_hash", entry.model_hash},
                     {"version", entry.version}});
    doc["entries"] = std::move(fresh);
    doc["model_hash"] = entry.model_hash;
    store(entry.model_hash, doc);
  }

  std::filesystem::path file_for(const std::string& hash) const { return dir_ / (hash + ".json"); }

 private:
  nlohmann::json load(const std::string& hash) const {
    nlohmann::json doc = {{"model_hash", hash}, {"entries", nlohmann::json::array()}};
    std::ifstream in(file_for(hash));
    if (!in) return doc;
    try {
      auto parsed = nlohmann::json::parse(in);
      if (parsed.is_object() && parsed.contains("entries") && parsed["entries"].is_array()) return parsed;
    } catch (const nlohmann::json::exception&) {
      // unreadable cache files are treated as empty and rewritten on the next put
    }
    return doc;
  }

  void store(const std::string& hash, const nlohmann::json& doc) const {
    std::filesystem::create_directories(dir_);
    std::random_device rd;
    const auto tmp = dir_ / (hash + ".json.tmp" + std::to_string(rd()));
    {
      std::ofstream out(tmp);
      if (!out) throw Error("cannot write cache file " + tmp.string());
      out << doc.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, file_for(hash));
  }

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

}  // namespace weilkit

#endif  // WEILKIT_COUNT_CACHE_HPP
