// Copyright (c) 2026 The mmspk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmspk/encoders/checkpoint.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "mmspk/numerics/errors.h"

namespace mmspk {

namespace {

constexpr char kMagic[4] = {'M', 'M', 'S', 'K'};
constexpr size_t kFixedHeader = 8;
constexpr size_t kChecksumBytes = 8;

void PutU64(uint64_t v, std::string *out) {
  for (int i = 0; i < 8; ++i)
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t GetU64(std::string_view bytes, size_t offset) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<uint64_t>(static_cast<uint8_t>(bytes[offset + i]))
         << (8 * i);
  return v;
}

class CheckpointWriter {
 public:
  CheckpointWriter(CheckpointKind kind, Modality modality) {
    bytes_.append(kMagic, 4);
    bytes_.push_back(static_cast<char>(kCheckpointVersion));
    bytes_.push_back(static_cast<char>(modality));
    bytes_.push_back(static_cast<char>(kind));
    bytes_.push_back('\0');
  }

  void Shape(const std::vector<uint64_t> &dims) {
    for (size_t i = 0; i < dims.size(); ++i) {
      if (i > 0) bytes_.push_back(' ');
      bytes_ += std::to_string(dims[i]);
    }
    bytes_.push_back('\n');
  }

  void Values(const Matrix &m) {
    for (double x : m.data()) PutU64(std::bit_cast<uint64_t>(x), &bytes_);
  }

  std::string Finish() {
    PutU64(Fnv1a64(bytes_), &bytes_);
    return std::move(bytes_);
  }

 private:
  std::string bytes_;
};

class CheckpointReader {
 public:
  CheckpointReader(const std::string &bytes, CheckpointKind expected)
      : bytes_(bytes) {
    if (bytes_.size() < kFixedHeader + kChecksumBytes ||
        std::memcmp(bytes_.data(), kMagic, 4) != 0)
      throw FormatError("checkpoint: bad magic or truncated header");
    if (static_cast<uint8_t>(bytes_[4]) != kCheckpointVersion)
      throw FormatError("checkpoint: unsupported format version " +
                        std::to_string(static_cast<uint8_t>(bytes_[4])));
    modality_ = ModalityFromTag(static_cast<uint8_t>(bytes_[5]));
    if (static_cast<uint8_t>(bytes_[6]) != static_cast<uint8_t>(expected))
      throw FormatError("checkpoint: unexpected payload kind");
    if (bytes_[7] != '\0') throw FormatError("checkpoint: reserved byte set");
    const size_t body = bytes_.size() - kChecksumBytes;
    if (Fnv1a64(std::string_view(bytes_).substr(0, body)) !=
        GetU64(bytes_, body))
      throw FormatError("checkpoint: checksum mismatch");
    end_ = body;

    size_t eol = bytes_.find('\n', kFixedHeader);
    if (eol == std::string::npos || eol >= end_)
      throw FormatError("checkpoint: missing shape line");
    std::string_view line(bytes_.data() + kFixedHeader, eol - kFixedHeader);
    while (!line.empty()) {
      size_t sp = line.find(' ');
      std::string_view tok = line.substr(0, sp);
      uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
        throw FormatError("checkpoint: malformed shape line");
      dims_.push_back(v);
      if (sp == std::string_view::npos) break;
      line.remove_prefix(sp + 1);
    }
    pos_ = eol + 1;
  }

  Modality modality() const { return modality_; }

  uint64_t Dim() {
    if (next_dim_ >= dims_.size())
      throw FormatError("checkpoint: shape line too short");
    return dims_[next_dim_++];
  }

  Matrix Values(uint64_t rows, uint64_t cols) {
    if (rows > (1u << 24) || cols > (1u << 24))
      throw FormatError("checkpoint: implausible dimensions");
    const size_t count = static_cast<size_t>(rows * cols);
    if ((end_ - pos_) / 8 < count)
      throw FormatError("checkpoint: payload truncated");
    std::vector<double> data(count);
    for (size_t i = 0; i < count; ++i, pos_ += 8)
      data[i] = std::bit_cast<double>(GetU64(bytes_, pos_));
    return Matrix(rows, cols, std::move(data));
  }

  void Done() const {
    if (next_dim_ != dims_.size())
      throw FormatError("checkpoint: trailing shape entries");
    if (pos_ != end_) throw FormatError("checkpoint: trailing payload bytes");
  }

 private:
  const std::string &bytes_;
  Modality modality_ = Modality::kSpeech;
  std::vector<uint64_t> dims_;
  size_t next_dim_ = 0;
  size_t pos_ = 0;
  size_t end_ = 0;
};

void AppendLayerShapes(const MlpEncoder &e, std::vector<uint64_t> *dims) {
  dims->push_back(e.num_layers());
  for (const DenseLayer &layer : e.layers()) {
    dims->push_back(layer.input_dim());
    dims->push_back(layer.output_dim());
    dims->push_back(static_cast<uint64_t>(layer.activation));
  }
}

void AppendLayerValues(const MlpEncoder &e, CheckpointWriter *w) {
  for (const DenseLayer &layer : e.layers()) {
    w->Values(layer.weight);
    w->Values(layer.bias);
  }
}

struct LayerShape {
  uint64_t in, out, act;
};

std::vector<LayerShape> ReadLayerShapes(CheckpointReader *r) {
  const uint64_t num_layers = r->Dim();
  std::vector<LayerShape> shapes;
  for (uint64_t l = 0; l < num_layers; ++l) {
    LayerShape s{r->Dim(), r->Dim(), r->Dim()};
    if (s.act > 1) throw FormatError("checkpoint: unknown activation");
    shapes.push_back(s);
  }
  return shapes;
}

std::vector<DenseLayer> ReadLayerValues(CheckpointReader *r,
                                        const std::vector<LayerShape> &shapes) {
  std::vector<DenseLayer> layers;
  for (const LayerShape &s : shapes) {
    DenseLayer layer;
    layer.weight = r->Values(s.out, s.in);
    layer.bias = r->Values(s.out, 1);
    layer.activation = static_cast<Activation>(s.act);
    layers.push_back(std::move(layer));
  }
  return layers;
}

}  // namespace

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string SerializeMlp(const MlpEncoder &encoder) {
  CheckpointWriter w(CheckpointKind::kMlp, encoder.modality());
  std::vector<uint64_t> dims;
  AppendLayerShapes(encoder, &dims);
  w.Shape(dims);
  AppendLayerValues(encoder, &w);
  return w.Finish();
}

std::string SerializeText(const TextEncoder &encoder) {
  CheckpointWriter w(CheckpointKind::kText, Modality::kText);
  std::vector<uint64_t> dims{encoder.vocab_size(), encoder.width()};
  AppendLayerShapes(encoder.head(), &dims);
  w.Shape(dims);
  w.Values(encoder.table());
  w.Values(encoder.query());
  w.Values(encoder.key());
  w.Values(encoder.value());
  AppendLayerValues(encoder.head(), &w);
  return w.Finish();
}

std::string SerializeMatrix(const Matrix &m, Modality modality) {
  CheckpointWriter w(CheckpointKind::kMatrix, modality);
  w.Shape({m.rows(), m.cols()});
  w.Values(m);
  return w.Finish();
}

MlpEncoder ParseMlp(const std::string &bytes) {
  CheckpointReader r(bytes, CheckpointKind::kMlp);
  std::vector<DenseLayer> layers = ReadLayerValues(&r, ReadLayerShapes(&r));
  r.Done();
  try {
    return MlpEncoder(std::move(layers), r.modality());
  } catch (const ShapeError &e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

TextEncoder ParseText(const std::string &bytes) {
  CheckpointReader r(bytes, CheckpointKind::kText);
  const uint64_t vocab = r.Dim();
  const uint64_t width = r.Dim();
  std::vector<LayerShape> shapes = ReadLayerShapes(&r);
  Matrix table = r.Values(vocab, width);
  Matrix query = r.Values(width, 1);
  Matrix key = r.Values(width, width);
  Matrix value = r.Values(width, width);
  std::vector<DenseLayer> layers = ReadLayerValues(&r, shapes);
  r.Done();
  try {
    return TextEncoder(std::move(table), std::move(query), std::move(key),
                       std::move(value),
                       MlpEncoder(std::move(layers), Modality::kText));
  } catch (const ShapeError &e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

Matrix ParseMatrix(const std::string &bytes) {
  CheckpointReader r(bytes, CheckpointKind::kMatrix);
  const uint64_t rows = r.Dim();
  const uint64_t cols = r.Dim();
  Matrix m = r.Values(rows, cols);
  r.Done();
  return m;
}

void WriteFileBytes(const std::filesystem::path &path,
                    const std::string &bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed: " + path.string());
}

std::string ReadFileBytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace mmspk
