#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ergokit/synthgen.hpp"

namespace ergokit {

// Dataset files are JSON Lines, one sample per line, numbers fixed to six
// decimals so identical specs produce identical bytes.
std::string serialize_dataset(const std::vector<PoseSample>& samples);
std::vector<PoseSample> parse_dataset(const std::string& text);

void write_dataset(const std::filesystem::path& path,
                   const std::vector<PoseSample>& samples);
std::vector<PoseSample> read_dataset(const std::filesystem::path& path);

}  // namespace ergokit
