#include "lichen/zip_reader.hpp"

#include <zlib.h>

#include <fstream>
#include <sstream>

#include "lichen/error.hpp"

namespace lichen {
namespace {

constexpr std::uint32_t kEndOfCentralDir = 0x06054b50;
constexpr std::uint32_t kCentralDirEntry = 0x02014b50;
constexpr std::uint32_t kLocalHeader = 0x04034b50;
constexpr std::size_t kEndRecordSize = 22;

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

  std::uint16_t u16() {
    need(2);
    auto b = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += 2;
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32() {
    need(4);
    auto b = reinterpret_cast<const unsigned char*>(bytes_.data() + pos_);
    pos_ += 4;
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ > bytes_.size() || bytes_.size() - pos_ < n) throw ArchiveError("truncated zip archive");
  }

  const std::string& bytes_;
  std::size_t pos_;
};

std::string inflate_raw(std::string_view data, std::uint64_t expected_size) {
  z_stream stream{};
  if (inflateInit2(&stream, -MAX_WBITS) != Z_OK) throw ArchiveError("inflate init failed");
  // One spare byte so an oversized stream is detected rather than truncated.
  std::string out(expected_size + 1, '\0');
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  stream.avail_in = static_cast<uInt>(data.size());
  stream.next_out = reinterpret_cast<Bytef*>(out.data());
  stream.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&stream, Z_FINISH);
  const auto produced = stream.total_out;
  inflateEnd(&stream);
  if (rc != Z_STREAM_END || produced != expected_size) throw ArchiveError("corrupt deflate stream");
  out.resize(expected_size);
  return out;
}

}  // namespace

ZipArchive ZipArchive::from_bytes(std::string bytes) {
  ZipArchive archive;
  archive.bytes_ = std::move(bytes);
  const std::string& data = archive.bytes_;
  if (data.size() < kEndRecordSize) throw ArchiveError("not a zip archive");

  // The end record sits at the tail, followed by at most 64 KiB of comment.
  std::size_t end_pos = std::string::npos;
  const std::size_t lowest = data.size() > kEndRecordSize + 0xFFFF ? data.size() - kEndRecordSize - 0xFFFF : 0;
  for (std::size_t pos = data.size() - kEndRecordSize + 1; pos-- > lowest;) {
    if (Reader(data, pos).u32() == kEndOfCentralDir) {
      end_pos = pos;
      break;
    }
  }
  if (end_pos == std::string::npos) throw ArchiveError("not a zip archive (no end of central directory)");

  Reader end(data, end_pos + 4);
  end.skip(6);  // disk numbers, entries on this disk
  const std::uint16_t count = end.u16();
  const std::uint32_t dir_size = end.u32();
  const std::uint32_t dir_offset = end.u32();
  if (count == 0xFFFF || dir_offset == 0xFFFFFFFF) throw ArchiveError("zip64 archives are not supported");
  if (static_cast<std::uint64_t>(dir_offset) + dir_size > end_pos) throw ArchiveError("central directory out of range");

  Reader dir(data, dir_offset);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (dir.u32() != kCentralDirEntry) throw ArchiveError("bad central directory entry");
    ZipEntry entry;
    dir.skip(4);  // versions
    const std::uint16_t flags = dir.u16();
    entry.method = dir.u16();
    dir.skip(4);  // time, date
    entry.crc32 = dir.u32();
    entry.compressed_size = dir.u32();
    entry.uncompressed_size = dir.u32();
    const std::uint16_t name_len = dir.u16();
    const std::uint16_t extra_len = dir.u16();
    const std::uint16_t comment_len = dir.u16();
    dir.skip(8);  // disk, attributes
    entry.local_header_offset = dir.u32();
    entry.name = dir.str(name_len);
    dir.skip(extra_len + comment_len);
    if (flags & 0x1) throw ArchiveError("encrypted entry " + entry.name);
    archive.entries_.push_back(std::move(entry));
  }
  return archive;
}

ZipArchive ZipArchive::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in && !in.eof()) throw IoError("cannot read " + path.string());
  return from_bytes(std::move(ss).str());
}

std::string ZipArchive::read(const ZipEntry& entry) const {
  Reader local(bytes_, entry.local_header_offset);
  if (local.u32() != kLocalHeader) throw ArchiveError("bad local header for " + entry.name);
  local.skip(22);
  const std::uint16_t name_len = local.u16();
  const std::uint16_t extra_len = local.u16();
  local.skip(name_len + extra_len);
  const std::size_t start = local.pos();
  if (start > bytes_.size() || bytes_.size() - start < entry.compressed_size) {
    throw ArchiveError("entry data out of range: " + entry.name);
  }
  const std::string_view raw(bytes_.data() + start, entry.compressed_size);

  std::string out;
  switch (entry.method) {
    case 0:
      if (entry.compressed_size != entry.uncompressed_size) throw ArchiveError("bad stored entry " + entry.name);
      out = std::string(raw);
      break;
    case 8:
      out = inflate_raw(raw, entry.uncompressed_size);
      break;
    default:
      throw ArchiveError("unsupported compression method " + std::to_string(entry.method) + " for " + entry.name);
  }
  const auto crc = ::crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size()));
  if (crc != entry.crc32) throw ArchiveError("CRC mismatch for " + entry.name);
  return out;
}

}  // namespace lichen
