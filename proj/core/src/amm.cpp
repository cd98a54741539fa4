#include "pegsim/amm.hpp"

namespace pegsim::amm {

template class PoolT<double>;
template class PoolT<Rational>;

}  // namespace pegsim::amm
