#ifndef NEARPOLY_NEARPOLY_HPP
#define NEARPOLY_NEARPOLY_HPP

#include "nearpoly/accurate.hpp"
#include "nearpoly/arith.hpp"
#include "nearpoly/bench.hpp"
#include "nearpoly/error.hpp"
#include "nearpoly/fpbits.hpp"
#include "nearpoly/hexfloat.hpp"
#include "nearpoly/nearby.hpp"
#include "nearpoly/polynomial.hpp"
#include "nearpoly/reference.hpp"

#endif // NEARPOLY_NEARPOLY_HPP
