#pragma once

#include <cstdint>
#include <filesystem>

#include "pawf/mimo.hpp"

namespace pawf {

/// splitmix64 finalizer; used to derive decorrelated sub-stream seeds as
/// splitmix64((base ^ purpose) + index).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t purpose, std::uint64_t index);

// Fixed purpose constants for seed derivation.
namespace seed_purpose {
inline constexpr std::uint64_t kHeatmapCell = 0x48454154u;  // "HEAT"
inline constexpr std::uint64_t kTimeslot = 0x534c4f54u;     // "SLOT"
inline constexpr std::uint64_t kFixture = 0x46495854u;      // "FIXT"
inline constexpr std::uint64_t kPathCount = 0x4c434e54u;    // "LCNT"
} // namespace seed_purpose

enum class ChannelKind { Rayleigh, Multipath };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Rayleigh;
  int n_r = 1;
  int n_t = 1;
  int n_paths = 1;        // Multipath only; 0 means a deep fade (H = 0)
  std::uint64_t seed = 0;
};

/// Rayleigh: i.i.d. CN(0,1) entries. Multipath: sum of n_paths rank-one terms
/// g_l a_l b_l^H with unit-norm random directions and complex Gaussian gains
/// scaled so E{ ||H||_F^2 } = n_r * n_t; numerical rank equals n_paths.
/// Deterministic for a fixed spec.
ChannelMatrix generate(const ChannelSpec& spec);

/// Channel CSV: first line "# rows=<N_R> cols=<N_T>", then one line per matrix
/// row, entries "re:im" with 17 significant digits, comma separated. Writing
/// then reading reproduces the matrix bit for bit.
void write_channel(const ChannelMatrix& h, const std::filesystem::path& path);
ChannelMatrix read_channel(const std::filesystem::path& path);

} // namespace pawf
