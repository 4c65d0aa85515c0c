#ifndef MOPO_TYPES_HPP
#define MOPO_TYPES_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace mopo {

using Vec = std::vector<double>;
using Rng = std::mt19937_64;

}  // namespace mopo

#endif  // MOPO_TYPES_HPP
