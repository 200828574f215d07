#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mcg/numerics/parameter.hpp"

namespace mcg {

// Binary layout, all integers and floats little-endian:
//   "MCGCKPT1" | u32 count | count × { u16 name_len | name | u32 rows | u32 cols | f64[rows*cols] }
inline constexpr char kCheckpointMagic[8] = {'M', 'C', 'G', 'C', 'K', 'P', 'T', '1'};

struct NamedMatrix {
  std::string name;
  Matrix value;
};

void save_checkpoint(const std::filesystem::path& path, const ParameterList& params);
std::vector<NamedMatrix> load_checkpoint(const std::filesystem::path& path);

// Copies loaded values into `params` by position; names and shapes must match.
void restore_parameters(const ParameterList& params, const std::vector<NamedMatrix>& loaded);

}  // namespace mcg
