#pragma once

#include <cstdint>
#include <string>

#include "shapfoil/dataset.hpp"

namespace shapfoil {

struct SynthFiles {
  std::string csv;
  std::string schema;
};

/// Seeded synthetic dataset generators, byte-deterministic per (name, seed,
/// size):
///   clusters3 - two numeric features, three axis-aligned red clusters in a
///               field of blue points
///   nested    - an L-shaped red region whose corner support vector spans too
///               wide an interval, forcing one clause rejection before two
///               clean clauses
///   xor4      - four tight clusters in XOR layout (linear kernels fail,
///               rbf separates)
/// Throws DataError for an unknown name.
SynthFiles generate_synthetic(const std::string& name, std::uint64_t seed, std::size_t size);

/// Convenience: generate and parse in one step.
Dataset synthetic_dataset(const std::string& name, std::uint64_t seed, std::size_t size);

}  // namespace shapfoil
