#pragma once

// Problem file container ("DALP"), little-endian:
//
//   offset  size     field
//   0       4        magic "DALP"
//   4       4        version (u32) = 1
//   8       8        m (u64)
//   16      8        n (u64)
//   24      8        lambda (f64)
//   32      8*m*n    design matrix, column-major f64
//   ...     8*m      observations b (f64)
//   ...     8*n      true coefficients w0 (f64)
//
// The file must end exactly after w0.

#include "dal/probgen.hpp"

#include <cstdint>
#include <filesystem>

namespace dal {

inline constexpr std::uint32_t kProblemFormatVersion = 1;
inline constexpr std::size_t kProblemHeaderBytes = 32;
/// CSV export refuses instances with more design entries than this.
inline constexpr std::int64_t kMaxCsvEntries = 1 << 20;

/// Throws FormatError on I/O failure.
void write_problem(const std::filesystem::path& path, const GeneratedProblem& problem);

/// Throws FormatError on a missing, truncated, oversized or corrupt file.
/// The seed is not stored; the returned seed is 0.
GeneratedProblem read_problem(const std::filesystem::path& path);

/// Long-format CSV with header "kind,row,col,value": one "lambda" row, then
/// "A" rows (column-major), "b" rows and "w0" rows. Unused indices are empty.
void write_problem_csv(const std::filesystem::path& path, const GeneratedProblem& problem);

}  // namespace dal
