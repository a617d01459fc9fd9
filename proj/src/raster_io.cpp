#include "sse/raster_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <vector>

namespace sse {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'E', 'R'};

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void put_u32_le(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::ifstream& in, const std::string& path, std::size_t& offset) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) {
    throw ParseError(path + ": truncated at byte " + std::to_string(offset + static_cast<std::size_t>(in.gcount())));
  }
  offset += 4;
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void save_binary(const OrbitalImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put_u32_le(out, static_cast<std::uint32_t>(image.width));
  put_u32_le(out, static_cast<std::uint32_t>(image.height));
  put_u32_le(out, static_cast<std::uint32_t>(image.bands()));
  std::vector<float> buf(static_cast<std::size_t>(image.pixel_count()) * static_cast<std::size_t>(image.bands()));
  std::size_t k = 0;
  for (int j = 0; j < image.pixel_count(); ++j) {
    for (int b = 0; b < image.bands(); ++b) {
      buf[k++] = static_cast<float>(image.data(b, j));
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw IoError("write failed for " + path);
}

OrbitalImage load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::size_t offset = 0;
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4) throw ParseError(path + ": truncated at byte " + std::to_string(static_cast<std::size_t>(in.gcount())));
  offset += 4;
  if (std::memcmp(magic, kMagic, 4) != 0) throw ParseError(path + ": bad magic, not an SSER raster");

  OrbitalImage img;
  img.width = static_cast<int>(get_u32_le(in, path, offset));
  img.height = static_cast<int>(get_u32_le(in, path, offset));
  const int bands = static_cast<int>(get_u32_le(in, path, offset));
  if (img.width <= 0 || img.height <= 0 || bands <= 0) {
    throw ParseError(path + ": invalid dimensions " + std::to_string(img.width) + "x" +
                     std::to_string(img.height) + "x" + std::to_string(bands));
  }
  const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) *
                            static_cast<std::size_t>(bands);
  std::vector<float> buf(count);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(float)) {
    throw ParseError(path + ": truncated at byte " + std::to_string(offset + static_cast<std::size_t>(in.gcount())));
  }
  img.data.resize(bands, img.width * img.height);
  std::size_t k = 0;
  for (int j = 0; j < img.pixel_count(); ++j) {
    for (int b = 0; b < bands; ++b) {
      img.data(b, j) = static_cast<double>(buf[k++]);
    }
  }
  return img;
}

void save_csv(const OrbitalImage& image, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << image.width << ',' << image.height << ',' << image.bands() << '\n';
  char num[64];
  for (int j = 0; j < image.pixel_count(); ++j) {
    for (int b = 0; b < image.bands(); ++b) {
      const float v = static_cast<float>(image.data(b, j));
      auto [end, ec] = std::to_chars(num, num + sizeof(num), v);
      out.write(num, end - num);
      out.put(b + 1 < image.bands() ? ',' : '\n');
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

OrbitalImage load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");

  auto parse_fields = [&](const std::string& text, std::vector<float>& out_fields, int line_no) {
    out_fields.clear();
    const char* p = text.data();
    const char* end = text.data() + text.size();
    while (p < end) {
      float v = 0.0f;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        throw ParseError(path + ": line " + std::to_string(line_no) + ": malformed number");
      }
      out_fields.push_back(v);
      p = next;
      if (p < end) {
        if (*p != ',') throw ParseError(path + ": line " + std::to_string(line_no) + ": expected ','");
        ++p;
      }
    }
  };

  std::vector<float> fields;
  parse_fields(line, fields, 1);
  if (fields.size() != 3) throw ParseError(path + ": header must be width,height,bands");
  OrbitalImage img;
  img.width = static_cast<int>(fields[0]);
  img.height = static_cast<int>(fields[1]);
  const int bands = static_cast<int>(fields[2]);
  if (img.width <= 0 || img.height <= 0 || bands <= 0) throw ParseError(path + ": invalid header dimensions");
  img.data.resize(bands, img.width * img.height);

  for (int j = 0; j < img.pixel_count(); ++j) {
    if (!std::getline(in, line)) {
      throw ParseError(path + ": truncated, expected " + std::to_string(img.pixel_count()) +
                       " pixel lines, got " + std::to_string(j));
    }
    parse_fields(line, fields, j + 2);
    if (static_cast<int>(fields.size()) != bands) {
      throw ParseError(path + ": line " + std::to_string(j + 2) + ": expected " +
                       std::to_string(bands) + " values, got " + std::to_string(fields.size()));
    }
    for (int b = 0; b < bands; ++b) img.data(b, j) = static_cast<double>(fields[static_cast<std::size_t>(b)]);
  }
  return img;
}

}  // namespace

void save_raster(const OrbitalImage& image, const std::string& path) {
  if (has_suffix(path, ".csv")) {
    save_csv(image, path);
  } else {
    save_binary(image, path);
  }
}

OrbitalImage load_raster(const std::string& path) {
  return has_suffix(path, ".csv") ? load_csv(path) : load_binary(path);
}

SceneryPair load_scene(const std::string& orbital_path, const std::string& insitu_path,
                       const SceneLoadOptions& opts) {
  OrbitalImage orbital = load_raster(orbital_path);
  OrbitalImage highres = load_raster(insitu_path);
  if (opts.downsample > 0) {
    if (orbital.width * opts.downsample != highres.width ||
        orbital.height * opts.downsample != highres.height) {
      throw DimensionMismatch("load_scene: configured downsample " + std::to_string(opts.downsample) +
                              " does not relate " + std::to_string(highres.width) + "x" +
                              std::to_string(highres.height) + " to " + std::to_string(orbital.width) +
                              "x" + std::to_string(orbital.height));
    }
  }
  SceneMetadata meta;
  meta.name = opts.name;
  return make_scene_pair(std::move(orbital), std::move(highres), opts.noise_sigma,
                         opts.grid_stride, opts.step_cost, std::move(meta));
}

void save_scene(const SceneryPair& scene, const std::string& orbital_path,
                const std::string& insitu_path) {
  save_raster(scene.orbital, orbital_path);
  save_raster(scene.oracle.truth, insitu_path);
}

}  // namespace sse
