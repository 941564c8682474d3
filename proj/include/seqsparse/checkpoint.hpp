#pragma once

#include <cstdint>
#include <string>

#include "seqsparse/model.hpp"

namespace seqsparse {

/// Checkpoints live in a directory: checkpoint.json carries dims, depth,
/// variant, the raw scalar parameters, epoch and rng seed plus the ordered
/// tensor table; checkpoint.bin holds the matrices and vectors concatenated
/// in that order as little-endian doubles, row-major. Round trips are
/// bit-exact.
void save_checkpoint(const ModelParams& p, const std::string& dir, std::size_t epoch,
                     std::uint64_t seed);

struct Checkpoint {
    ModelParams params;
    std::size_t epoch = 0;
    std::uint64_t seed = 0;
};

Checkpoint load_checkpoint(const std::string& dir);

}  // namespace seqsparse
