#include "primexp/arith.hpp"

#include "primexp/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

namespace primexp {

namespace {

static_assert(std::endian::native == std::endian::little,
              "cache I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

std::filesystem::path cache_path(const std::filesystem::path& dir, FnKind kind,
                                 std::uint64_t lo, std::uint64_t hi) {
  return dir / (std::string(to_string(kind)) + "_" + std::to_string(lo) + "_" + std::to_string(hi) + ".bin");
}

void write_cache(const ArithTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::CacheFormat, "cannot open " + path.string() + " for writing");
  out.write(kCacheMagic, sizeof(kCacheMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.kind()));
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, table.lo());
  put<std::uint64_t>(out, table.hi());
  auto values = table.values();
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  require(out.good(), ErrorCode::CacheFormat, "short write to " + path.string());
}

ArithTable read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::CacheFormat, "cannot open " + path.string());
  char magic[sizeof(kCacheMagic)];
  in.read(magic, sizeof(magic));
  require(in.good() && std::memcmp(magic, kCacheMagic, sizeof(magic)) == 0, ErrorCode::CacheFormat,
          "bad magic in " + path.string());
  const auto kind_tag = get<std::uint32_t>(in);
  get<std::uint32_t>(in);
  const auto lo = get<std::uint64_t>(in);
  const auto hi = get<std::uint64_t>(in);
  require(in.good() && kind_tag <= static_cast<std::uint32_t>(FnKind::Custom) && lo >= 1 && lo <= hi,
          ErrorCode::CacheFormat, "bad header in " + path.string());
  const std::uint64_t count = hi - lo + 1;
  const auto expected = static_cast<std::uintmax_t>(32 + count * sizeof(double));
  require(std::filesystem::file_size(path) == expected, ErrorCode::CacheFormat,
          "size mismatch in " + path.string());
  std::vector<double> values(count);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
  require(in.good(), ErrorCode::CacheFormat, "short read from " + path.string());
  return ArithTable(static_cast<FnKind>(kind_tag), lo, std::move(values));
}

ArithTable sieve_table_cached(FnKind kind, std::uint64_t lo, std::uint64_t hi,
                              const std::filesystem::path& dir, const SieveOptions& options) {
  const auto path = cache_path(dir, kind, lo, hi);
  if (std::filesystem::exists(path)) {
    try {
      ArithTable cached = read_cache(path);
      if (cached.kind() == kind && cached.lo() == lo && cached.hi() == hi) return cached;
    } catch (const Error&) {
      // fall through and rebuild
    }
  }
  ArithTable table = sieve_table(kind, lo, hi, options);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  try {
    write_cache(table, path);
  } catch (const Error&) {
    // unwritable cache directory: the table is still valid
  }
  return table;
}

}  // namespace primexp
