// Umbrella header.
#ifndef NLATELE_NLATELE_HPP
#define NLATELE_NLATELE_HPP

#include "core.hpp"
#include "metrics.hpp"
#include "quadrature.hpp"
#include "resources.hpp"
#include "schmidt.hpp"
#include "teleport.hpp"

#endif  // NLATELE_NLATELE_HPP
