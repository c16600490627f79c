#pragma once

// Internal binary/JSONL file helpers shared by the module implementations.

#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "hopchain/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

namespace hopchain::io {

inline std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) raise(errc::io, "cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) raise(errc::io, "cannot open for reading: " + path);
  return in;
}

template <typename T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) raise(errc::io, "truncated file: " + path);
  return value;
}

inline void write_string(std::ofstream& out, const std::string& s) {
  write_pod<uint32_t>(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::ifstream& in, const std::string& path) {
  const auto len = read_pod<uint32_t>(in, path);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) raise(errc::io, "truncated file: " + path);
  return s;
}

inline void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

inline void read_doubles(std::ifstream& in, std::vector<double>& v, size_t count,
                         const std::string& path) {
  v.resize(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) raise(errc::io, "truncated file: " + path);
}

inline void expect_eof(std::ifstream& in, const std::string& path) {
  if (in.peek() != std::ifstream::traits_type::eof())
    raise(errc::io, "trailing data after payload: " + path);
}

// Calls fn(line_number, line) for every line of a text file; line numbers
// are 1-based. Blank lines are skipped.
void for_each_line(const std::string& path,
                   const std::function<void(size_t, const std::string&)>& fn);

}  // namespace hopchain::io
