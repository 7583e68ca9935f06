#include "hlsforge/zip.hpp"

#include <zlib.h>

#include <limits>

#include "hlsforge/error.hpp"

namespace hlsforge {

namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint16_t kDosDate1980 = (0 << 9) | (1 << 5) | 1;  // 1980-01-01
constexpr std::uint16_t kVersion = 20;

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint16_t get16(const std::string& in, std::size_t at) {
  if (at + 2 > in.size()) throw Error(ErrorCode::MalformedReport, "truncated zip");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(in[at]) |
                                    (static_cast<unsigned char>(in[at + 1]) << 8));
}

std::uint32_t get32(const std::string& in, std::size_t at) {
  return static_cast<std::uint32_t>(get16(in, at)) | (static_cast<std::uint32_t>(get16(in, at + 2)) << 16);
}

}  // namespace

std::uint32_t crc32_of(const std::string& data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string build_zip(const std::vector<ZipEntry>& entries) {
  if (entries.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::IOError, "too many zip members (zip64 not supported)");
  }
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    if (e.data.size() > std::numeric_limits<std::uint32_t>::max() / 2 || out.size() > std::numeric_limits<std::uint32_t>::max() / 2) {
      throw Error(ErrorCode::IOError, "zip member too large (zip64 not supported): " + e.name);
    }
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto crc = crc32_of(e.data);
    const auto size = static_cast<std::uint32_t>(e.data.size());
    const auto name_len = static_cast<std::uint16_t>(e.name.size());

    put32(out, kLocalHeaderSig);
    put16(out, kVersion);
    put16(out, 0);  // flags
    put16(out, 0);  // stored
    put16(out, 0);  // time
    put16(out, kDosDate1980);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, name_len);
    put16(out, 0);  // extra
    out += e.name;
    out += e.data;

    put32(central, kCentralHeaderSig);
    put16(central, kVersion);  // made by
    put16(central, kVersion);  // needed
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosDate1980);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, name_len);
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attrs
    put32(central, 0);  // external attrs
    put32(central, offset);
    central += e.name;
  }
  const auto central_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndOfCentralDirSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

std::vector<ZipMember> list_zip(const std::string& bytes) {
  if (bytes.size() < 22) throw Error(ErrorCode::MalformedReport, "zip too short");
  const std::size_t eocd = bytes.size() - 22;
  if (get32(bytes, eocd) != kEndOfCentralDirSig) throw Error(ErrorCode::MalformedReport, "missing end of central directory");
  const auto count = get16(bytes, eocd + 10);
  std::size_t at = get32(bytes, eocd + 16);
  std::vector<ZipMember> out;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (get32(bytes, at) != kCentralHeaderSig) throw Error(ErrorCode::MalformedReport, "bad central header");
    ZipMember m;
    m.crc32 = get32(bytes, at + 16);
    m.size = get32(bytes, at + 24);
    const auto name_len = get16(bytes, at + 28);
    const auto extra_len = get16(bytes, at + 30);
    const auto comment_len = get16(bytes, at + 32);
    if (at + 46 + name_len > bytes.size()) throw Error(ErrorCode::MalformedReport, "truncated zip name");
    m.name = bytes.substr(at + 46, name_len);
    at += 46 + name_len + extra_len + comment_len;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace hlsforge
