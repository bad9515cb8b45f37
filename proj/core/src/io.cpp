// Copyright 2026 dmf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dmf/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dmf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'D', 'M', 'F', '1'};
constexpr int kModelFormatVersion = 1;

void put_u64_le(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t get_u64_le(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file_bytes(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

Matrix load_matrix_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.eof()) break;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      double value = 0.0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc{}) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": cannot parse number at column " +
                         std::to_string(p - line.data() + 1));
      }
      row.push_back(value);
      p = next;
      if (p == end) break;
      if (*p != ',') {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": expected ',' at column " +
                         std::to_string(p - line.data() + 1));
      }
      ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": row has " + std::to_string(row.size()) +
                       " columns, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path.string() + ": empty matrix");

  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  if (!m.allFinite()) {
    throw InvalidInput(path.string() + ": matrix has non-finite values");
  }
  return m;
}

Matrix load_matrix_f64bin(const fs::path& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError(path.string() + ": not a DMF1 matrix file");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const uint64_t rows = get_u64_le(p + 4);
  const uint64_t cols = get_u64_le(p + 12);
  if (rows > (1ull << 31) || cols > (1ull << 31)) {
    throw ParseError(path.string() + ": implausible matrix dimensions " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  const uint64_t expected = 20 + rows * cols * 8;
  if (bytes.size() != expected) {
    throw ParseError(path.string() + ": expected " + std::to_string(expected) +
                     " bytes for a " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " matrix, got " +
                     std::to_string(bytes.size()));
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const unsigned char* data = p + 20;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = std::bit_cast<double>(get_u64_le(data));
      data += 8;
    }
  }
  if (!m.allFinite()) {
    throw InvalidInput(path.string() + ": matrix has non-finite values");
  }
  return m;
}

}  // namespace

Matrix load_matrix(const fs::path& path, MatrixFormat format) {
  return format == MatrixFormat::kCsv ? load_matrix_csv(path)
                                      : load_matrix_f64bin(path);
}

void save_matrix(const Matrix& m, const fs::path& path, MatrixFormat format) {
  require_finite(m, "save_matrix");
  if (format == MatrixFormat::kCsv) {
    std::string out;
    char buf[64];
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
        out += buf;
        out.push_back(j + 1 < m.cols() ? ',' : '\n');
      }
    }
    write_file_bytes(path, out);
    return;
  }
  std::string out;
  out.reserve(20 + static_cast<size_t>(m.size()) * 8);
  out.append(kMagic, 4);
  put_u64_le(out, static_cast<uint64_t>(m.rows()));
  put_u64_le(out, static_cast<uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      put_u64_le(out, std::bit_cast<uint64_t>(m(i, j)));
    }
  }
  write_file_bytes(path, out);
}

MatrixFormat format_from_extension(const fs::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::kCsv
                                    : MatrixFormat::kF64Bin;
}

namespace {

// Skips PGM whitespace and '#' comment lines, then parses one integer.
long pgm_int(const std::string& bytes, size_t* pos, const fs::path& path) {
  while (*pos < bytes.size()) {
    const char c = bytes[*pos];
    if (c == '#') {
      while (*pos < bytes.size() && bytes[*pos] != '\n') ++*pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++*pos;
    } else {
      break;
    }
  }
  long value = 0;
  const char* begin = bytes.data() + *pos;
  auto [next, ec] = std::from_chars(begin, bytes.data() + bytes.size(), value);
  if (ec != std::errc{}) {
    throw ParseError(path.string() + ": malformed PGM header");
  }
  *pos += static_cast<size_t>(next - begin);
  return value;
}

}  // namespace

Matrix load_pgm(const fs::path& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError(path.string() + ": not a binary PGM (P5) file");
  }
  size_t pos = 2;
  const long width = pgm_int(bytes, &pos, path);
  const long height = pgm_int(bytes, &pos, path);
  const long maxval = pgm_int(bytes, &pos, path);
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    throw ParseError(path.string() + ": invalid PGM dimensions or maxval");
  }
  ++pos;  // single whitespace byte after maxval
  const int bytes_per_pixel = maxval > 255 ? 2 : 1;
  const size_t expected =
      static_cast<size_t>(width) * height * bytes_per_pixel;
  if (bytes.size() - pos < expected) {
    throw ParseError(path.string() + ": truncated PGM raster, expected " +
                     std::to_string(expected) + " bytes, got " +
                     std::to_string(bytes.size() - pos));
  }
  Matrix img(height, width);
  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) {
      long v;
      if (bytes_per_pixel == 1) {
        v = raster[r * width + c];
      } else {
        v = (raster[2 * (r * width + c)] << 8) | raster[2 * (r * width + c) + 1];
      }
      img(r, c) = static_cast<double>(v) / static_cast<double>(maxval);
    }
  }
  return img;
}

void save_pgm(const Matrix& image, const fs::path& path) {
  require_finite(image, "save_pgm");
  std::string out = "P5\n" + std::to_string(image.cols()) + " " +
                    std::to_string(image.rows()) + "\n255\n";
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image(r, c), 0.0, 1.0);
      out.push_back(static_cast<char>(std::lround(v * 255.0)));
    }
  }
  write_file_bytes(path, out);
}

ImageStack load_pgm_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError(dir.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw IoError("no .pgm files in " + dir.string());
  }
  ImageStack stack;
  stack.images.reserve(files.size());
  for (const fs::path& f : files) {
    Matrix img = load_pgm(f);
    if (!stack.images.empty() && (img.rows() != stack.height() ||
                                  img.cols() != stack.width())) {
      throw InvalidInput(f.string() + ": image dimensions differ from " +
                         files.front().string());
    }
    stack.images.push_back(std::move(img));
  }
  return stack;
}

Matrix extract_igo(const ImageStack& stack) {
  if (stack.images.empty()) throw InvalidInput("extract_igo: no images");
  const Index h = stack.height();
  const Index w = stack.width();
  if (h < 2 || w < 2) {
    throw InvalidInput("extract_igo: images must be at least 2x2");
  }
  Matrix features(2 * h * w, static_cast<Index>(stack.images.size()));
  for (size_t img_idx = 0; img_idx < stack.images.size(); ++img_idx) {
    const Matrix& img = stack.images[img_idx];
    for (Index r = 0; r < h; ++r) {
      for (Index c = 0; c < w; ++c) {
        double gx, gy;
        if (c == 0) {
          gx = img(r, 1) - img(r, 0);
        } else if (c == w - 1) {
          gx = img(r, w - 1) - img(r, w - 2);
        } else {
          gx = 0.5 * (img(r, c + 1) - img(r, c - 1));
        }
        if (r == 0) {
          gy = img(1, c) - img(0, c);
        } else if (r == h - 1) {
          gy = img(h - 1, c) - img(h - 2, c);
        } else {
          gy = 0.5 * (img(r + 1, c) - img(r - 1, c));
        }
        const double phi = (gx == 0.0 && gy == 0.0) ? 0.0 : std::atan2(gy, gx);
        const Index pixel = r * w + c;
        features(pixel, static_cast<Index>(img_idx)) = std::cos(phi);
        features(h * w + pixel, static_cast<Index>(img_idx)) = std::sin(phi);
      }
    }
  }
  return features;
}

void save_model(const DeepModel& model, const fs::path& dir,
                const TrainReport* report, const TrainConfig* cfg) {
  model.validate();
  fs::create_directories(dir);

  json manifest;
  manifest["format_version"] = kModelFormatVersion;
  manifest["layers"] = model.layers();
  manifest["features"] = model.features();
  manifest["samples"] = model.samples();
  std::vector<Index> sizes = model.layer_sizes();
  manifest["layer_sizes"] = sizes;
  manifest["nonlinearity"] = {{"kind", model.g.name()},
                              {"alpha", model.g.alpha},
                              {"beta", model.g.beta}};
  std::vector<std::string> z_files, h_files;
  for (int i = 0; i < model.layers(); ++i) {
    z_files.push_back("Z" + std::to_string(i + 1) + ".bin");
    h_files.push_back("H" + std::to_string(i + 1) + ".bin");
  }
  manifest["factors"] = {{"z", z_files}, {"h", h_files}};
  if (cfg != nullptr) {
    const char* init_names[] = {"auto", "nndsvd", "svd", "random"};
    manifest["config"] = {{"max_iters", cfg->max_iters},
                          {"kappa", cfg->kappa},
                          {"eta", cfg->eta},
                          {"init", init_names[static_cast<int>(cfg->init)]},
                          {"seed", cfg->seed},
                          {"step", cfg->step}};
  }
  if (report != nullptr) {
    manifest["objective_trace"] = report->objective_trace;
    manifest["iterations"] = report->iterations;
    manifest["converged"] = report->converged;
  }

  for (int i = 0; i < model.layers(); ++i) {
    save_matrix(model.z[i], dir / z_files[i], MatrixFormat::kF64Bin);
    save_matrix(model.h[i], dir / h_files[i], MatrixFormat::kF64Bin);
  }
  atomic_write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

DeepModel load_model(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw IoError("missing " + manifest_path.string());
  }
  json manifest;
  try {
    manifest = json::parse(read_file_bytes(manifest_path));
  } catch (const json::parse_error& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  }

  const int version = manifest.value("format_version", -1);
  if (version != kModelFormatVersion) {
    throw IoError(manifest_path.string() + ": unsupported format version " +
                  std::to_string(version) + " (supported: " +
                  std::to_string(kModelFormatVersion) + ")");
  }

  DeepModel model;
  try {
    const auto& nl = manifest.at("nonlinearity");
    model.g = Nonlinearity::from_name(nl.at("kind").get<std::string>());
    model.g.alpha = nl.at("alpha").get<double>();
    model.g.beta = nl.at("beta").get<double>();

    const int layers = manifest.at("layers").get<int>();
    const auto z_files = manifest.at("factors").at("z").get<std::vector<std::string>>();
    const auto h_files = manifest.at("factors").at("h").get<std::vector<std::string>>();
    const auto sizes = manifest.at("layer_sizes").get<std::vector<Index>>();
    const Index features = manifest.at("features").get<Index>();
    const Index samples = manifest.at("samples").get<Index>();
    if (layers < 1 || static_cast<size_t>(layers) != z_files.size() ||
        z_files.size() != h_files.size() ||
        sizes.size() != z_files.size()) {
      throw IoError(manifest_path.string() +
                    ": corrupt archive: inconsistent layer counts");
    }

    for (int i = 0; i < layers; ++i) {
      const fs::path z_path = dir / z_files[i];
      const fs::path h_path = dir / h_files[i];
      if (!fs::exists(z_path)) throw IoError("missing factor file " + z_path.string());
      if (!fs::exists(h_path)) throw IoError("missing factor file " + h_path.string());
      Matrix z = load_matrix(z_path, MatrixFormat::kF64Bin);
      Matrix h = load_matrix(h_path, MatrixFormat::kF64Bin);
      const Index expected_rows = i == 0 ? features : sizes[i - 1];
      if (z.rows() != expected_rows || z.cols() != sizes[i] ||
          h.rows() != sizes[i] || h.cols() != samples) {
        throw IoError(dir.string() + ": corrupt archive: factor shapes of layer " +
                      std::to_string(i + 1) + " disagree with the manifest");
      }
      model.z.push_back(std::move(z));
      model.h.push_back(std::move(h));
    }
  } catch (const json::exception& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  }
  model.validate();
  return model;
}

const AttributeLabels& LabelTable::attribute(const std::string& name) const {
  for (const AttributeLabels& attr : attributes) {
    if (attr.attribute_name == name) return attr;
  }
  throw InvalidInput("no attribute named '" + name + "' in the label table");
}

LabelTable load_labels_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(path.string() + ":1: missing header");
  }

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(s);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };

  const std::vector<std::string> header = split(line);
  if (header.size() < 2) {
    throw ParseError(path.string() + ":1: header needs at least one attribute");
  }
  LabelTable table;
  table.attributes.resize(header.size() - 1);
  for (size_t a = 1; a < header.size(); ++a) {
    table.attributes[a - 1].attribute_name = header[a];
  }

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(header.size()) +
                       " cells, got " + std::to_string(cells.size()));
    }
    table.sample_names.push_back(cells[0]);
    for (size_t a = 1; a < cells.size(); ++a) {
      if (cells[a].empty()) {
        table.attributes[a - 1].labels.emplace_back(std::nullopt);
        continue;
      }
      int id = 0;
      auto [next, ec] =
          std::from_chars(cells[a].data(), cells[a].data() + cells[a].size(), id);
      if (ec != std::errc{} || next != cells[a].data() + cells[a].size() ||
          id < 0) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) +
                         ": label '" + cells[a] +
                         "' is not a nonnegative integer");
      }
      table.attributes[a - 1].labels.emplace_back(id);
    }
  }
  return table;
}

void save_labels_csv(const LabelTable& table, const fs::path& path) {
  std::string out = "sample";
  for (const AttributeLabels& attr : table.attributes) {
    out += "," + attr.attribute_name;
  }
  out += "\n";
  for (size_t i = 0; i < table.sample_names.size(); ++i) {
    out += table.sample_names[i];
    for (const AttributeLabels& attr : table.attributes) {
      out.push_back(',');
      if (attr.labels[i].has_value()) out += std::to_string(*attr.labels[i]);
    }
    out += "\n";
  }
  atomic_write_text(path, out);
}

void atomic_write_text(const fs::path& path, const std::string& contents) {
  write_file_bytes(path, contents);
}

}  // namespace dmf
