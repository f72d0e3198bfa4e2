#include "lichen/provider.hpp"

#include <unistd.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "lichen/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace lichen {
namespace {

std::optional<std::string> optional_string(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ProviderError(std::string("provider field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProviderError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

}  // namespace

ProviderRecord parse_provider_record(std::string_view text, const Coordinates& coordinates) {
  json body = json::parse(text, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw ProviderError("malformed provider response for " + coordinates.str());
  }
  ProviderRecord record;
  record.coordinates = coordinates;
  record.license_name = optional_string(body, "license_name");
  record.homepage = optional_string(body, "homepage");
  return record;
}

std::string serialize_provider_record(const ProviderRecord& record) {
  json body = json::object();
  body["license_name"] = record.license_name ? json(*record.license_name) : json(nullptr);
  body["homepage"] = record.homepage ? json(*record.homepage) : json(nullptr);
  return body.dump();
}

std::string FixtureProvider::file_name(const Coordinates& c) {
  return c.group + "__" + c.artifact + "__" + c.version + ".json";
}

std::optional<ProviderRecord> FixtureProvider::fetch(const Coordinates& coordinates) {
  const auto path = dir_ / file_name(coordinates);
  if (!fs::is_regular_file(path)) return std::nullopt;
  return parse_provider_record(read_file(path), coordinates);
}

HttpProvider::HttpProvider(std::string base_url, std::chrono::milliseconds timeout) : timeout_(timeout) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(base_url, m, kUrl)) throw Error("invalid provider URL: " + base_url);
  origin_ = m[1];
  prefix_ = m[2];
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

std::optional<ProviderRecord> HttpProvider::fetch(const Coordinates& coordinates) {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  const std::string path = prefix_ + "/package/" + httplib::detail::encode_url(coordinates.str());
  auto response = client.Get(path);
  if (!response) {
    throw ProviderError("provider request for " + coordinates.str() + " failed: " +
                        httplib::to_string(response.error()));
  }
  if (response->status != 200) return std::nullopt;
  return parse_provider_record(response->body, coordinates);
}

CachingProvider::CachingProvider(std::unique_ptr<MetadataProvider> inner, fs::path cache_dir,
                                 std::chrono::seconds ttl)
    : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)), ttl_(ttl) {}

std::optional<ProviderRecord> CachingProvider::fetch(const Coordinates& coordinates) {
  const auto path = cache_dir_ / FixtureProvider::file_name(coordinates);
  const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) {
    try {
      json entry = json::parse(read_file(path));
      if (now - entry.at("fetched_at").get<std::int64_t>() < ttl_.count()) {
        if (entry.at("found").get<bool>()) return parse_provider_record(entry.at("record").dump(), coordinates);
        return std::nullopt;
      }
    } catch (const std::exception&) {
      // Unreadable cache entries are refetched and overwritten.
    }
  }

  auto record = inner_->fetch(coordinates);

  json entry = json::object();
  entry["fetched_at"] = now;
  entry["found"] = record.has_value();
  entry["record"] = record ? json::parse(serialize_provider_record(*record)) : json(nullptr);
  std::lock_guard lock(write_mutex_);
  fs::create_directories(cache_dir_, ec);
  const auto tmp = path.string() + "." + std::to_string(::getpid()) + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << entry.dump();
  }
  fs::rename(tmp, path, ec);
  if (ec) fs::remove(tmp, ec);
  return record;
}

}  // namespace lichen
