#ifndef QNTTNN_SYNTH_HPP
#define QNTTNN_SYNTH_HPP

#include <cstdint>

#include "qnttnn/tensor.hpp"

namespace qnttnn {

/// Random quaternion tensor whose frontal slices all have quaternion rank <= slice_rank.
///
/// Slice k is L * R_k with a shared n1 x s left factor L. Each R_k is a real
/// combination of s shared s x n2 right factors, so every mode-3 tube lies in
/// an s-dimensional subspace. Factor components and mixing weights are seeded
/// standard normals. The first column of L is the real all-ones vector, so the
/// final affine map of all values onto [0, 1] stays inside the column space of
/// L and does not raise the slice rank. Because all slices share L, mode-3
/// mixtures of slices also have rank <= s.
QTensor3 synth_lowrank(Index n1, Index n2, Index n3, Index slice_rank, std::uint64_t seed);

}  // namespace qnttnn

#endif  // QNTTNN_SYNTH_HPP
