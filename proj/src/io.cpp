#include "segloss/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "format.hpp"

namespace segloss {

namespace {

constexpr std::size_t kMaxPixels = 100'000'000;
constexpr char kSlfMagic[8] = {'S', 'E', 'G', 'L', 'O', 'S', 'S', 'F'};

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw_error(ErrorCode::IoError, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw_error(ErrorCode::IoError, "read failed on " + path.string());
  }
  return std::move(buffer).str();
}

void write_file_bytes(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw_error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) {
    throw_error(ErrorCode::IoError, "write failed on " + path.string());
  }
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

using detail::format_double;

// ---- PGM ------------------------------------------------------------------

struct PgmTokenizer {
  const std::string& data;
  std::size_t pos = 0;

  // Whitespace-delimited token; '#' comments run to end of line.
  std::string next() {
    while (pos < data.size()) {
      const char c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= data.size()) {
      throw_error(ErrorCode::UnexpectedEof, "PGM ended inside header");
    }
    const std::size_t start = pos;
    while (pos < data.size() &&
           !std::isspace(static_cast<unsigned char>(data[pos])) &&
           data[pos] != '#') {
      ++pos;
    }
    return data.substr(start, pos - start);
  }

  long next_int(const char* what) {
    const std::string token = next();
    char* end = nullptr;
    const long v = std::strtol(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size()) {
      throw_error(ErrorCode::MalformedHeader,
                  std::string("PGM ") + what + " is not an integer: \"" + token +
                      "\"");
    }
    return v;
  }
};

}  // namespace

MaskField read_pgm(const std::filesystem::path& path) {
  const std::string data = read_file_bytes(path);
  PgmTokenizer tok{data};

  const std::string magic = tok.next();
  const bool binary = magic == "P5";
  if (!binary && magic != "P2") {
    throw_error(ErrorCode::MalformedHeader,
                "expected PGM magic P5 or P2, got \"" + magic + "\"");
  }
  const long width = tok.next_int("width");
  const long height = tok.next_int("height");
  if (width < 1 || height < 1 ||
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) >
          kMaxPixels) {
    throw_error(ErrorCode::MalformedHeader,
                "bad PGM dimensions " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  const long maxval = tok.next_int("maxval");
  if (maxval < 1) {
    throw_error(ErrorCode::MalformedHeader,
                "bad PGM maxval " + std::to_string(maxval));
  }
  if (maxval > 255) {
    throw_error(ErrorCode::UnsupportedMaxval,
                "PGM maxval " + std::to_string(maxval) + " exceeds 255");
  }

  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint8_t> values(n);
  if (binary) {
    // exactly one whitespace byte separates maxval from the raster
    if (tok.pos >= data.size() ||
        !std::isspace(static_cast<unsigned char>(data[tok.pos]))) {
      throw_error(ErrorCode::MalformedHeader, "missing raster separator");
    }
    std::size_t raster = tok.pos + 1;
    if (data.size() - raster < n) {
      throw_error(ErrorCode::UnexpectedEof,
                  "P5 raster has " + std::to_string(data.size() - raster) +
                      " bytes, expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto sample = static_cast<unsigned char>(data[raster + i]);
      if (sample > maxval) {
        throw_error(ErrorCode::ValueOutOfRange,
                    "P5 sample " + std::to_string(sample) + " exceeds maxval " +
                        std::to_string(maxval));
      }
      values[i] = sample >= 128 ? 1 : 0;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const long sample = tok.next_int("sample");
      if (sample < 0 || sample > maxval) {
        throw_error(ErrorCode::ValueOutOfRange,
                    "P2 sample " + std::to_string(sample) +
                        " outside [0, maxval]");
      }
      values[i] = sample >= 128 ? 1 : 0;
    }
  }
  return make_mask_field(static_cast<int>(height), static_cast<int>(width),
                         std::move(values));
}

void write_pgm(const MaskField& mask, const std::filesystem::path& path) {
  std::string out;
  out += "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) +
         "\n255\n";
  out.reserve(out.size() + mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    out.push_back(mask[i] != 0 ? static_cast<char>(255) : static_cast<char>(0));
  }
  write_file_bytes(path, out);
}

// ---- Float grids ------------------------------------------------------------

namespace {

FloatGrid read_csv_grid(const std::filesystem::path& path) {
  const std::string data = read_file_bytes(path);
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t eol = data.find('\n', pos);
    if (eol == std::string::npos) eol = data.size();
    std::string line = data.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && pos >= data.size()) break;  // trailing newline

    std::vector<double> row;
    std::size_t cell_start = 0;
    while (true) {
      std::size_t comma = line.find(',', cell_start);
      const std::string cell = line.substr(
          cell_start, comma == std::string::npos ? std::string::npos
                                                 : comma - cell_start);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw_error(ErrorCode::MalformedHeader,
                    "CSV cell \"" + cell + "\" is not a number");
      }
      if (!std::isfinite(v)) {
        throw_error(ErrorCode::ValueOutOfRange, "non-finite CSV value");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      cell_start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw_error(ErrorCode::MalformedHeader, "CSV grid has no rows");
  }
  const std::size_t width = rows.front().size();
  FloatGrid grid;
  grid.height = static_cast<int>(rows.size());
  grid.width = static_cast<int>(width);
  grid.values.reserve(rows.size() * width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw_error(ErrorCode::RaggedRows,
                  "CSV row " + std::to_string(r) + " has " +
                      std::to_string(rows[r].size()) + " cells, expected " +
                      std::to_string(width));
    }
    grid.values.insert(grid.values.end(), rows[r].begin(), rows[r].end());
  }
  return grid;
}

std::uint32_t read_u32le(const std::string& data, std::size_t pos) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + 3])) << 24;
}

FloatGrid read_slf_grid(const std::filesystem::path& path) {
  const std::string data = read_file_bytes(path);
  if (data.size() < 16) {
    throw_error(ErrorCode::UnexpectedEof, "slf file shorter than its header");
  }
  if (std::memcmp(data.data(), kSlfMagic, sizeof(kSlfMagic)) != 0) {
    throw_error(ErrorCode::MalformedHeader, "bad slf magic");
  }
  const std::uint32_t height = read_u32le(data, 8);
  const std::uint32_t width = read_u32le(data, 12);
  if (height < 1 || width < 1 ||
      static_cast<std::size_t>(height) * width > kMaxPixels) {
    throw_error(ErrorCode::MalformedHeader,
                "bad slf dimensions " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  const std::size_t n = static_cast<std::size_t>(height) * width;
  if (data.size() - 16 < n * 4) {
    throw_error(ErrorCode::UnexpectedEof,
                "slf payload has " + std::to_string(data.size() - 16) +
                    " bytes, expected " + std::to_string(n * 4));
  }
  FloatGrid grid;
  grid.height = static_cast<int>(height);
  grid.width = static_cast<int>(width);
  grid.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits = read_u32le(data, 16 + i * 4);
    const float v = std::bit_cast<float>(bits);
    if (!std::isfinite(v)) {
      throw_error(ErrorCode::ValueOutOfRange, "non-finite slf value");
    }
    grid.values[i] = static_cast<double>(v);
  }
  return grid;
}

}  // namespace

FloatGrid read_float_grid(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".csv") return read_csv_grid(path);
  if (ext == ".slf") return read_slf_grid(path);
  throw_error(ErrorCode::MalformedHeader,
              "float grids use .csv or .slf, got \"" + path.string() + "\"");
}

void write_float_grid(int height, int width, std::span<const double> values,
                      const std::filesystem::path& path) {
  if (height < 1 || width < 1 ||
      values.size() != static_cast<std::size_t>(height) * width) {
    throw_error(ErrorCode::DimensionMismatch,
                "grid dimensions do not match value count");
  }
  const std::string ext = lower_extension(path);
  std::string out;
  if (ext == ".csv") {
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        if (c > 0) out += ',';
        out += format_double(values[static_cast<std::size_t>(r) * width + c]);
      }
      out += '\n';
    }
  } else if (ext == ".slf") {
    out.assign(kSlfMagic, sizeof(kSlfMagic));
    auto put_u32 = [&out](std::uint32_t v) {
      out.push_back(static_cast<char>(v & 0xff));
      out.push_back(static_cast<char>((v >> 8) & 0xff));
      out.push_back(static_cast<char>((v >> 16) & 0xff));
      out.push_back(static_cast<char>((v >> 24) & 0xff));
    };
    put_u32(static_cast<std::uint32_t>(height));
    put_u32(static_cast<std::uint32_t>(width));
    for (const double v : values) {
      put_u32(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  } else {
    throw_error(ErrorCode::MalformedHeader,
                "float grids use .csv or .slf, got \"" + path.string() + "\"");
  }
  write_file_bytes(path, out);
}

ProbField read_prob_grid(const std::filesystem::path& path) {
  FloatGrid grid = read_float_grid(path);
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (grid.values[i] < 0.0 || grid.values[i] > 1.0) {
      throw_error(ErrorCode::ValueOutOfRange,
                  "probability " + format_double(grid.values[i]) +
                      " at index " + std::to_string(i) + " outside [0, 1] in " +
                      path.string());
    }
  }
  return make_prob_field(grid.height, grid.width, std::move(grid.values));
}

ProbField read_prediction(const std::filesystem::path& path) {
  if (lower_extension(path) == ".pgm") return prob_from_mask(read_pgm(path));
  return read_prob_grid(path);
}

MaskField read_truth(const std::filesystem::path& path) {
  if (lower_extension(path) == ".pgm") return read_pgm(path);
  FloatGrid grid = read_float_grid(path);
  std::vector<std::uint8_t> labels(grid.values.size());
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (grid.values[i] == 0.0) {
      labels[i] = 0;
    } else if (grid.values[i] == 1.0) {
      labels[i] = 1;
    } else {
      throw_error(ErrorCode::ValueOutOfRange,
                  "truth value " + format_double(grid.values[i]) +
                      " at index " + std::to_string(i) + " is not 0 or 1 in " +
                      path.string());
    }
  }
  return make_mask_field(grid.height, grid.width, std::move(labels));
}

// ---- Manifests ----------------------------------------------------------------

PairManifest build_manifest(const std::filesystem::path& pred_dir,
                            const std::filesystem::path& truth_dir) {
  namespace fs = std::filesystem;
  for (const fs::path& dir : {pred_dir, truth_dir}) {
    if (!fs::is_directory(dir)) {
      throw_error(ErrorCode::NotADirectory, dir.string() + " is not a directory");
    }
  }
  auto scan = [](const fs::path& dir, const char* side,
                 std::vector<std::string>& warnings) {
    std::map<std::string, fs::path> by_stem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      const std::string stem = file.stem().string();
      auto [it, inserted] = by_stem.emplace(stem, file);
      if (!inserted) {
        warnings.push_back(std::string("ambiguous ") + side + " stem \"" + stem +
                           "\": keeping " + it->second.filename().string() +
                           ", ignoring " + file.filename().string());
      }
    }
    return by_stem;
  };

  PairManifest manifest;
  auto preds = scan(pred_dir, "pred", manifest.warnings);
  auto truths = scan(truth_dir, "truth", manifest.warnings);
  for (const auto& [stem, truth_path] : truths) {
    auto it = preds.find(stem);
    if (it == preds.end()) {
      manifest.warnings.push_back("no prediction for truth \"" +
                                  truth_path.filename().string() + "\"");
      continue;
    }
    manifest.pairs.push_back({stem, it->second, truth_path});
    preds.erase(it);
  }
  for (const auto& [stem, pred_path] : preds) {
    manifest.warnings.push_back("no truth for prediction \"" +
                                pred_path.filename().string() + "\"");
  }
  std::sort(manifest.warnings.begin(), manifest.warnings.end());
  // truths map iterates in stem order, so pairs are already sorted
  return manifest;
}

}  // namespace segloss
