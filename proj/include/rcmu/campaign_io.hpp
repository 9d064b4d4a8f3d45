#pragma once

#include "rcmu/types.hpp"

#include <filesystem>
#include <string>

namespace rcmu {

inline constexpr const char* kManifestName = "manifest.txt";
inline constexpr const char* kSampleHeader = "freq_index,tt_index,stir_index,s21_re,s21_im";

/// Reads a manifest and every sample CSV it references. Errors carry file and line.
Campaign load_campaign(const std::filesystem::path& manifest_path);

/// Writes manifest.txt plus one CSV per measurement into `dir` (created if needed).
/// Returns the manifest path.
std::filesystem::path save_campaign(const Campaign& campaign, const std::filesystem::path& dir);

/// Shortest form that keeps 17 significant digits; parses back to the same double.
std::string format_double(double value);

}  // namespace rcmu
