#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "htv/cpwl.hpp"

namespace htv {

struct MeshFile {
  SimplicialCpwl mesh;
  std::string name;
  std::string units;
  bool exact = true;  // false for sampled (approximate) imports
};

// JSON: {"dim", "vertices": [[...]], "simplices": [[...]], "values": [...],
// optional "name", "units", "exact"}. Syntax and schema problems raise parse
// errors with line/column or field path; mesh invariant violations keep
// their own error kind.
MeshFile parse_mesh(std::string_view text, const std::string& source = "<input>");
MeshFile read_mesh_file(const std::string& path);
SimplicialCpwl read_mesh(const std::string& path);

std::string mesh_to_json(const MeshFile& file);
void write_mesh(const MeshFile& file, const std::string& path);
void write_mesh(const SimplicialCpwl& m, const std::string& path);

struct DenseLayer {
  int rows = 0;  // outputs
  int cols = 0;  // inputs
  std::vector<double> weights;  // rows x cols, row-major
  std::vector<double> bias;
};

// ReLU network: ReLU after every layer but the last, scalar output.
struct MlpWeights {
  int input_dim = 0;
  std::vector<DenseLayer> layers;

  void validate() const;
  double evaluate(std::span<const double> x) const;
};

// JSON: {"input_dim": d, "layers": [{"weights": [[...]], "bias": [...]}, ...]}
MlpWeights parse_weights(std::string_view text, const std::string& source = "<input>");
MlpWeights read_weights(const std::string& path);
std::string weights_to_json(const MlpWeights& w);

std::string read_text_file(const std::string& path);

}  // namespace htv
