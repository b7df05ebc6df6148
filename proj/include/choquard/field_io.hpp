#pragma once

#include "choquard/grid.hpp"
#include "choquard/model.hpp"

#include <filesystem>
#include <istream>
#include <ostream>

namespace choquard {

/// Binary field file:
///
///   CHOQF1\n
///   key=value header lines (version, N, M, L, alpha, p or terms, dft, layout, count)
///   \n
///   count little-endian IEEE-754 float64 samples, row-major, last axis fastest
///
/// Header reals carry 17 significant digits so the grid and problem
/// parameters reload bit-exactly.
inline constexpr const char* kFieldMagic = "CHOQF1\n";
inline constexpr int kFieldVersion = 1;

struct StoredField {
    Field field;
    ProblemSpec spec;
};

void write_field(std::ostream& os, const Field& u, const ProblemSpec& spec);
void write_field(const std::filesystem::path& path, const Field& u, const ProblemSpec& spec);

/// Throws ParameterError on a malformed or inconsistent file.
StoredField read_field(std::istream& is);
StoredField read_field(const std::filesystem::path& path);

} // namespace choquard
