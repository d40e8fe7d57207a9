#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "scbec/config.hpp"
#include "scbec/magnetostatics.hpp"

namespace fixture {

inline std::filesystem::path preset(const std::string& name) {
  return std::filesystem::path(SCBEC_PRESET_DIR) / name;
}

inline std::filesystem::path data(const std::string& name) {
  return std::filesystem::path(SCBEC_TEST_DATA_DIR) / name;
}

/// 5 mm bar, 2 mm leads, 5 A, with the given uniform bias.
inline scbec::ChipGeometry z_trap(scbec::Vec3 bias = {1e-4, 2e-3, 0.0}) {
  scbec::ChipGeometry g;
  g.segments = scbec::make_z_wire({5e-3, 2e-3, 5.0});
  g.bias = bias;
  return g;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("scbec-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixture
