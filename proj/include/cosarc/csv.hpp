#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cosarc/dataset.hpp"

namespace cosarc {

/// Reads `x1..xp,time,event` CSV (columns located by header name).
///
/// Cells must be numeric and present; `event` must be 0 or 1; times must be
/// nonnegative. Zero times are replaced by half the smallest nonzero time.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);

void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Latent view: `x1..xp,t,c,time,event`.
void write_latent_csv(std::ostream& out, std::span<const LatentRecord> latent);

// Shortest round-trip representation.
std::string format_double(double value);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace cosarc
