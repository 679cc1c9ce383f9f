#pragma once

#include "qsle/state.hpp"

#include <cstddef>
#include <vector>

namespace qsle {

/// Every set partition of {0..K-1} into exactly m nonempty blocks, each in
/// canonical form, ordered lexicographically by restricted-growth-string
/// encoding. Exactly-m enumeration suffices for the separability hierarchy:
/// any product over more blocks lies in some exactly-m product set after
/// merging factors. "m-separable" is read as the union over all partitions
/// into m blocks, not a fixed one.
///
/// Refuses K > 12; warns once on stderr above K = 8 (Bell-number growth).
std::vector<Partition> enumerate_partitions(std::size_t num_subsystems, std::size_t num_blocks);

/// Position of p within enumerate_partitions(K, p.num_blocks()), computed by
/// ranking its restricted growth string directly.
std::size_t partition_rank(const Partition& p);

} // namespace qsle
