#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "segloss/field.hpp"

namespace segloss {

// ---- PGM masks -----------------------------------------------------------
// Readers accept binary "P5" and ASCII "P2" with maxval <= 255; a sample is
// foreground iff it is >= 128. The writer emits P5 with maxval 255,
// foreground 255, background 0.

MaskField read_pgm(const std::filesystem::path& path);
void write_pgm(const MaskField& mask, const std::filesystem::path& path);

// ---- Float grids (.csv / .slf) --------------------------------------------
// CSV: one text row per image row, comma-separated decimal floats, written
// with 17 significant digits (round-trips doubles exactly). Raw `.slf`:
// 8-byte magic "SEGLOSSF", height and width as 32-bit unsigned little-endian,
// then height*width 32-bit little-endian floats row-major (bit-exact for
// float-representable values). The format is chosen by file extension.

struct FloatGrid {
  int height = 0;
  int width = 0;
  std::vector<double> values;
};

FloatGrid read_float_grid(const std::filesystem::path& path);
void write_float_grid(int height, int width, std::span<const double> values,
                      const std::filesystem::path& path);

// Float grid read plus [0, 1] validation.
ProbField read_prob_grid(const std::filesystem::path& path);

// Any supported prediction file: .pgm masks are promoted to crisp
// probabilities, .csv/.slf grids are validated into [0, 1].
ProbField read_prediction(const std::filesystem::path& path);
// Any supported truth file: .csv/.slf grids must hold exactly 0/1 values.
MaskField read_truth(const std::filesystem::path& path);

// ---- Pair manifests --------------------------------------------------------

struct PairManifest {
  struct Pair {
    std::string stem;
    std::filesystem::path pred;
    std::filesystem::path truth;
  };
  std::vector<Pair> pairs;        // sorted lexicographically by stem
  std::vector<std::string> warnings;  // unmatched or ambiguous files
  std::string rule = "stem";
};

// Pair files across two directories by identical filename stem
// (extension-insensitive). Unmatched files become warnings, not errors.
PairManifest build_manifest(const std::filesystem::path& pred_dir,
                            const std::filesystem::path& truth_dir);

}  // namespace segloss
