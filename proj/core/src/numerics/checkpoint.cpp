#include "mcg/numerics/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "mcg/errors.hpp"

namespace mcg {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::string& what) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw CheckpointError("checkpoint truncated while reading " + what);
  }
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ParameterList& params) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError("cannot open " + tmp.string() + " for writing");
    os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(params.size()));
    for (const auto* p : params) {
      if (p->name.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw CheckpointError("parameter name too long: " + p->name);
      }
      put<std::uint16_t>(os, static_cast<std::uint16_t>(p->name.size()));
      os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
      put<std::uint32_t>(os, static_cast<std::uint32_t>(p->value.rows()));
      put<std::uint32_t>(os, static_cast<std::uint32_t>(p->value.cols()));
      const auto data = p->value.data();
      os.write(reinterpret_cast<const char*>(data.data()),
               static_cast<std::streamsize>(data.size() * sizeof(double)));
    }
    if (!os) throw CheckpointError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<NamedMatrix> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open checkpoint " + path.string());
  char magic[sizeof(kCheckpointMagic)];
  if (!is.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw CheckpointError("bad checkpoint magic in " + path.string());
  }
  const auto count = get<std::uint32_t>(is, "parameter count");
  std::vector<NamedMatrix> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto len = get<std::uint16_t>(is, "name length");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw CheckpointError("checkpoint truncated in name");
    const auto rows = get<std::uint32_t>(is, "rows");
    const auto cols = get<std::uint32_t>(is, "cols");
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    if (!is.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(data.size() * sizeof(double)))) {
      throw CheckpointError("checkpoint truncated in values of '" + name + "'");
    }
    out.push_back({std::move(name), Matrix(rows, cols, std::move(data))});
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw CheckpointError("trailing bytes after checkpoint payload");
  }
  return out;
}

void restore_parameters(const ParameterList& params, const std::vector<NamedMatrix>& loaded) {
  if (params.size() != loaded.size()) {
    throw CheckpointError("checkpoint has " + std::to_string(loaded.size()) +
                          " parameters, model expects " + std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k]->name != loaded[k].name || !params[k]->value.same_shape(loaded[k].value)) {
      throw CheckpointError("checkpoint parameter '" + loaded[k].name + "' " +
                            loaded[k].value.shape_string() + " does not match '" +
                            params[k]->name + "' " + params[k]->value.shape_string());
    }
    if (!all_finite(loaded[k].value)) {
      throw CheckpointError("non-finite values in checkpoint parameter '" + loaded[k].name + "'");
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k) params[k]->value = loaded[k].value;
}

}  // namespace mcg
