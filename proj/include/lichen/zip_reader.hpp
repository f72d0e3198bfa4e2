#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lichen {

struct ZipEntry {
  std::string name;
  std::uint16_t method = 0;
  std::uint32_t crc32 = 0;
  std::uint64_t compressed_size = 0;
  std::uint64_t uncompressed_size = 0;
  std::uint64_t local_header_offset = 0;

  bool is_directory() const { return !name.empty() && name.back() == '/'; }
};

// Read-only view of a zip (jar) archive held in memory. Supports stored and
// deflated entries; zip64 archives are rejected.
class ZipArchive {
 public:
  // Throws ArchiveError when the bytes are not a readable archive.
  static ZipArchive from_bytes(std::string bytes);
  // Throws IoError when the file cannot be read, ArchiveError when corrupt.
  static ZipArchive open(const std::filesystem::path& path);

  const std::vector<ZipEntry>& entries() const { return entries_; }

  // Decompressed contents, CRC-checked. Throws ArchiveError.
  std::string read(const ZipEntry& entry) const;

 private:
  std::string bytes_;
  std::vector<ZipEntry> entries_;
};

}  // namespace lichen
