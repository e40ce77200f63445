#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "interpnet/absorption.hpp"
#include "interpnet/core_data.hpp"

namespace interpnet {

struct CsvOptions {
  bool has_header = true;
  /// Columns forming y, each a header name or a 0-based index (negative
  /// counts from the end). Empty means the last column.
  std::vector<std::string> target_columns;
};

/// Parses CSV text (RFC-4180 quoting, '.' decimals). Rows become samples in
/// file order with index = data row position. Throws NonNumericCell,
/// RaggedRows or ParseError with 1-based row and column.
Dataset parse_csv(std::string_view text, const CsvOptions& opts = {});

/// Throws IoError when the file cannot be read.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Writes x columns followed by y columns, with header x1..xd,y1..yk.
void save_csv(const Dataset& d, const std::filesystem::path& path);

/// FNV-1a 64 over the bit patterns of every x and y component, in order.
std::uint64_t dataset_fingerprint(const Dataset& d);

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  Model model;
  /// Input scaling applied before the model; empty when inputs are raw.
  ScalingParams scaling;
  std::uint64_t dataset_fingerprint = 0;
};

std::string model_to_json(const ModelFile& f);
/// Throws VersionMismatch for another format_version and SchemaError for
/// missing, extra or mistyped fields.
ModelFile model_from_json(std::string_view text);

void save_model(const ModelFile& f, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

/// Applies the stored scaling, then the model.
Vector predict(const ModelFile& f, std::span<const double> x);

}  // namespace interpnet
