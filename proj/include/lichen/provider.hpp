#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "lichen/build_files.hpp"

namespace lichen {

// What a package-metadata service knows about one artifact.
struct ProviderRecord {
  Coordinates coordinates;
  std::optional<std::string> license_name;
  std::optional<std::string> homepage;
};

// Parses the provider JSON body {"license_name": string|null,
// "homepage": string|null}. Throws ProviderError on malformed bodies.
ProviderRecord parse_provider_record(std::string_view json, const Coordinates& coordinates);
std::string serialize_provider_record(const ProviderRecord& record);

// Remote package metadata lookup. Implementations must be safe to call from
// several threads.
class MetadataProvider {
 public:
  virtual ~MetadataProvider() = default;

  // nullopt when the provider has no record for the artifact. Throws
  // ProviderError on transport failures.
  virtual std::optional<ProviderRecord> fetch(const Coordinates& coordinates) = 0;
};

class DisabledProvider final : public MetadataProvider {
 public:
  std::optional<ProviderRecord> fetch(const Coordinates&) override { return std::nullopt; }
};

// Reads `{group}__{artifact}__{version}.json` files from a directory.
class FixtureProvider final : public MetadataProvider {
 public:
  explicit FixtureProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::string file_name(const Coordinates& coordinates);

  std::optional<ProviderRecord> fetch(const Coordinates& coordinates) override;

 private:
  std::filesystem::path dir_;
};

// GET <base>/package/{group}:{artifact}:{version}; a non-200 status means the
// artifact is unknown to the service.
class HttpProvider final : public MetadataProvider {
 public:
  // `base_url` is "http[s]://host[:port][/prefix]". Throws Error for
  // unparsable URLs.
  HttpProvider(std::string base_url, std::chrono::milliseconds timeout = std::chrono::seconds(10));

  std::optional<ProviderRecord> fetch(const Coordinates& coordinates) override;

 private:
  std::string origin_;
  std::string prefix_;
  std::chrono::milliseconds timeout_;
};

// Caches another provider's answers on disk, one file per coordinate, for
// `ttl`. Absent answers are cached too. Writers of the same key are
// serialized; readers never see partially written files.
class CachingProvider final : public MetadataProvider {
 public:
  CachingProvider(std::unique_ptr<MetadataProvider> inner, std::filesystem::path cache_dir,
                  std::chrono::seconds ttl = std::chrono::hours(24 * 7));

  std::optional<ProviderRecord> fetch(const Coordinates& coordinates) override;

 private:
  std::unique_ptr<MetadataProvider> inner_;
  std::filesystem::path cache_dir_;
  std::chrono::seconds ttl_;
  std::mutex write_mutex_;
};

}  // namespace lichen
