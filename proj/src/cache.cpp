/*
 * Copyright 2026 The qgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qgauss/cache.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <vector>

#include "qgauss/errors.hpp"

namespace qgauss {
namespace {

static_assert(std::endian::native == std::endian::little, "binary cache format assumes a little-endian host");

template <typename T>
void put(std::vector<char>& out, T value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T get(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

void write_binary(const std::filesystem::path& file, const BinaryHeader& header, const RowMatrixXd& data) {
  std::vector<char> head;
  head.insert(head.end(), BinaryHeader::kMagic.begin(), BinaryHeader::kMagic.end());
  put(head, header.dim);
  put(head, header.points_per_axis);
  put(head, header.family);
  put(head, static_cast<std::uint32_t>(header.kind));
  put(head, header.parameter_hash);
  put(head, static_cast<std::uint64_t>(data.rows()));
  put(head, static_cast<std::uint64_t>(data.cols()));

  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  // Write to a sibling temp file and rename so readers never see a partial file.
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    require(bool(os), ErrorCode::CacheFormat, "cannot open " + tmp.string() + " for writing");
    os.write(head.data(), static_cast<std::streamsize>(head.size()));
    os.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
    require(bool(os), ErrorCode::CacheFormat, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::pair<BinaryHeader, RowMatrixXd> read_binary(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  require(bool(is), ErrorCode::CacheFormat, "cannot open " + file.string());
  char head[48];
  is.read(head, sizeof head);
  require(is.gcount() == sizeof head, ErrorCode::CacheFormat, "truncated header in " + file.string());
  require(std::memcmp(head, BinaryHeader::kMagic.data(), 8) == 0, ErrorCode::CacheFormat,
          "bad magic in " + file.string());
  BinaryHeader h;
  h.dim = get<std::uint32_t>(head + 8);
  h.points_per_axis = get<std::uint32_t>(head + 12);
  h.family = get<std::uint32_t>(head + 16);
  h.kind = static_cast<PayloadKind>(get<std::uint32_t>(head + 20));
  h.parameter_hash = get<std::uint64_t>(head + 24);
  const auto rows = get<std::uint64_t>(head + 32);
  const auto cols = get<std::uint64_t>(head + 40);
  RowMatrixXd data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(rows * cols * sizeof(double)));
  require(static_cast<std::uint64_t>(is.gcount()) == rows * cols * sizeof(double), ErrorCode::CacheFormat,
          "truncated payload in " + file.string());
  return {h, std::move(data)};
}

std::filesystem::path ArtifactCache::default_dir(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("QGAUSS_CACHE"); env && *env) return env;
  return fallback;
}

std::filesystem::path ArtifactCache::file_for(const BinaryHeader& h) const {
  char name[64];
  std::snprintf(name, sizeof name, "k%u-%u-%016llx.bin", static_cast<unsigned>(h.kind),
                static_cast<unsigned>(h.family), static_cast<unsigned long long>(h.parameter_hash));
  return dir_ / name;
}

std::optional<RowMatrixXd> ArtifactCache::load(const BinaryHeader& header) const {
  const auto file = file_for(header);
  if (!std::filesystem::exists(file)) return std::nullopt;
  try {
    auto [h, data] = read_binary(file);
    if (!(h == header)) return std::nullopt;
    return std::move(data);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void ArtifactCache::store(const BinaryHeader& header, const RowMatrixXd& data) const {
  write_binary(file_for(header), header, data);
}

BinaryHeader make_header(const CovarianceKernel& kernel, const GridSpec& grid, PayloadKind kind,
                         const std::string& key) {
  BinaryHeader h;
  h.dim = static_cast<std::uint32_t>(grid.dim);
  h.points_per_axis = static_cast<std::uint32_t>(grid.points_per_axis);
  h.family = static_cast<std::uint32_t>(family_tag(kernel));
  h.kind = kind;
  h.parameter_hash = fnv1a64(key);
  return h;
}

}  // namespace qgauss
