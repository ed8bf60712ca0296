#pragma once

#include <filesystem>
#include <iosfwd>

#include "pem/field.hpp"

namespace pem {

// Little-endian binary snapshot of one RealField:
//
//   offset  size  content
//   0       4     magic "PEM1"
//   4       4     dim         (uint32)
//   8       4     n           (uint32)
//   12      4     components  (uint32)
//   16      8     time        (float64)
//   24      8·components·n^dim  samples (float64), component-major, each
//                               component row-major with axis 0 slowest
struct Checkpoint {
    double time = 0.0;
    RealField field;
};

void write_checkpoint(std::ostream& out, const RealField& field, double time);
void write_checkpoint(const std::filesystem::path& path, const RealField& field, double time);

// Throws DataError on a bad magic, a truncated body or an invalid header.
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

} // namespace pem
