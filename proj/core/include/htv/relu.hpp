#pragma once

#include <string>

#include "htv/box.hpp"
#include "htv/cpwl.hpp"
#include "htv/io.hpp"

namespace htv {

// Exact linear spline of a 1D-input network (any depth). Adjacent pieces with
// equal slopes are merged.
LinearSpline relu_to_cpwl_1d(const MlpWeights& w);

struct ReluImportOptions {
  int nodes = 128;             // grid squares per axis for the sampled path
  bool allow_approximate = true;
};

struct ReluImport {
  SimplicialCpwl mesh;
  bool exact;
  std::string notice;  // set when the sampled path was used
};

// Input dimension 2. One hidden layer: the neuron lines cut the box into
// convex cells, which are fanned into triangles (exact). Deeper networks are
// sampled on a grid whose squares are split along the better-fitting diagonal
// (approximate, with a notice).
ReluImport relu_to_cpwl_2d(const MlpWeights& w, const BoxDomain& box, const ReluImportOptions& options = {});

}  // namespace htv
