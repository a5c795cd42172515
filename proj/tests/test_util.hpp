#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "dealer/rng.hpp"

namespace test_util {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    static std::uint64_t counter = 0;
    dealer::Xoshiro256 rng(reinterpret_cast<std::uintptr_t>(this) + ++counter);
    path_ = std::filesystem::temp_directory_path() /
            ("dealer_" + std::string(tag) + "_" + std::to_string(rng.next_u64()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name,
                              std::string_view contents) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace test_util
