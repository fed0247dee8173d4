#ifndef MINTIME_MINTIME_HPP
#define MINTIME_MINTIME_HPP

#include "mintime/model.hpp"
#include "mintime/manifold.hpp"
#include "mintime/characteristics.hpp"
#include "mintime/synthesis.hpp"
#include "mintime/loci.hpp"
#include "mintime/isochrone.hpp"
#include "mintime/simulator.hpp"
#include "mintime/oracle.hpp"

#endif  // MINTIME_MINTIME_HPP
