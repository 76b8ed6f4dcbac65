#pragma once

#include <functional>
#include <span>
#include <vector>

#include "htv/box.hpp"
#include "htv/matnorm.hpp"

namespace htv {

enum class FieldKind { test, measure };

// One matrix per node of a regular grid over a box. Grid nodes include both
// box faces on every axis (spacing width / (resolution - 1)). Measure fields
// hold cell masses, i.e. density times cell volume.
class MatrixField {
 public:
  MatrixField(BoxDomain domain, std::vector<int> resolution, std::vector<Matrix> nodes, FieldKind kind);

  // Evaluates fn at every node. For measure fields fn is a density and the
  // stored value is density * cell volume.
  static MatrixField sample(const BoxDomain& domain, std::vector<int> resolution, FieldKind kind,
                            const std::function<Matrix(std::span<const double>)>& fn);

  const BoxDomain& domain() const noexcept { return domain_; }
  const std::vector<int>& resolution() const noexcept { return resolution_; }
  const std::vector<Matrix>& nodes() const noexcept { return nodes_; }
  FieldKind kind() const noexcept { return kind_; }
  // dimension of the node matrices
  int matrix_dim() const noexcept { return nodes_.empty() ? 0 : nodes_.front().dim(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::vector<double> node_position(std::size_t index) const;
  double cell_volume() const;

 private:
  BoxDomain domain_;
  std::vector<int> resolution_;
  std::vector<Matrix> nodes_;
  FieldKind kind_;
};

double norm_linf_sq(const MatrixField& f, SchattenOrder q);
double norm_sq_linf(const MatrixField& f, SchattenOrder q);
double norm_m_sp(const MatrixField& w, SchattenOrder p);
double norm_sp_m(const MatrixField& w, SchattenOrder p);
double pairing(const MatrixField& w, const MatrixField& f);

// Test field whose node matrices are the per-node duality witnesses of w
// (zero where w vanishes). pairing(w, witness_field(w, p)) = norm_sp_m(w, p).
MatrixField witness_field(const MatrixField& w, SchattenOrder p);

struct EquivalenceConstants {
  double lower;  // A
  double upper;  // B
};

// A * norm_sq_linf(f, q) <= norm_linf_sq(f, q) <= B * norm_sq_linf(f, q).
EquivalenceConstants equivalence_constants(int d, SchattenOrder q);

}  // namespace htv
