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

#ifndef DMF_IO_HPP_
#define DMF_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "dmf/deep.hpp"
#include "dmf/graph.hpp"
#include "dmf/matrix.hpp"
#include "dmf/train.hpp"

namespace dmf {

enum class MatrixFormat { kCsv, kF64Bin };

/// csv: header-less comma-separated rows.
/// f64bin: magic "DMF1", two little-endian uint64 counts (rows, cols), then
/// rows*cols little-endian doubles in row-major order.
Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const Matrix& m, const std::filesystem::path& path,
                 MatrixFormat format);

/// Picks the format from the file extension: ".csv" is text, anything else
/// is f64bin.
MatrixFormat format_from_extension(const std::filesystem::path& path);

/// A batch of grayscale images with identical dimensions, values in [0, 1].
struct ImageStack {
  std::vector<Matrix> images;  // height x width each

  Index height() const { return images.empty() ? 0 : images.front().rows(); }
  Index width() const { return images.empty() ? 0 : images.front().cols(); }
};

/// Loads every binary PGM (P5) file in a directory, sorted lexicographically
/// by filename.
ImageStack load_pgm_dir(const std::filesystem::path& dir);
Matrix load_pgm(const std::filesystem::path& path);
void save_pgm(const Matrix& image, const std::filesystem::path& path);

/// Image gradient orientation features: per image, central-difference
/// gradients (one-sided at the borders), phi = atan2(Gy, Gx) with
/// atan2(0, 0) = 0, and the feature column [cos phi; sin phi] over pixels in
/// row-major order (2 * height * width rows, mixed sign).
Matrix extract_igo(const ImageStack& stack);

/// Model archive: a manifest.json plus one f64bin file per factor. Loading
/// rejects unknown format versions and factor shapes that disagree with the
/// manifest.
void save_model(const DeepModel& model, const std::filesystem::path& dir,
                const TrainReport* report = nullptr,
                const TrainConfig* cfg = nullptr);
DeepModel load_model(const std::filesystem::path& dir);

/// Sidecar label table: "sample,attr1,attr2,..." header naming the
/// attributes, one row per sample, empty cells meaning unlabeled.
struct LabelTable {
  std::vector<std::string> sample_names;
  std::vector<AttributeLabels> attributes;

  const AttributeLabels& attribute(const std::string& name) const;
};

LabelTable load_labels_csv(const std::filesystem::path& path);
void save_labels_csv(const LabelTable& table,
                     const std::filesystem::path& path);

/// Writes via a temporary file in the same directory, then renames.
void atomic_write_text(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace dmf

#endif  // DMF_IO_HPP_
