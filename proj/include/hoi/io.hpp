#pragma once

#include "hoi/tensor.hpp"
#include "hoi/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace hoi::io {

enum class InputFormat { Csv, RawF64 };

/// Loads and validates a channel-by-time matrix.
///
/// Csv: optional header row of channel labels; each data row is one channel.
/// RawF64: little-endian doubles, channel-major, with a JSON sidecar manifest
/// at <path>.json holding {"channels": C, "timepoints": T, "labels": [...]}.
///
/// Malformed files, non-finite entries (reported as "(row,col)", 1-based data
/// coordinates), C < 2 or T < 2 all throw Error.
TimeSeriesMatrix load_timeseries(const std::filesystem::path& path, InputFormat format);

/// Binary interaction-tensor file. Little-endian layout:
///   magic "HOIT", u32 version = 1, u8 order, u32 num_channels,
///   u64 entry count, u16-length-prefixed UTF-8 estimator tag,
///   entries in lexicographic index order: (u32 x order, f64 value).
/// Writing the same tensor twice produces byte-identical files.
void write_tensor(const std::filesystem::path& path, const InteractionTensor& t);
InteractionTensor read_tensor(const std::filesystem::path& path);

/// Symmetric matrix as CSV: optional label header row, then C rows of C
/// values printed with %.17g (round-trip exact).
void write_matrix_csv(const std::filesystem::path& path, const PairwiseMatrix& m,
                      const std::vector<std::string>& labels = {});

/// FNV-1a 64-bit digest of a file's bytes; recorded in manifests so a run can
/// be matched to its exact input.
uint64_t file_digest(const std::filesystem::path& path);

std::string to_hex(uint64_t v);

}  // namespace hoi::io
