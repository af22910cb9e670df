#ifndef LORENTZ_LORENTZ_HPP
#define LORENTZ_LORENTZ_HPP

/// Umbrella header: the numerical library without the CLI and verification layers.

#include "covnum.hpp"
#include "embedding.hpp"
#include "entropy.hpp"
#include "exponent.hpp"
#include "interp.hpp"
#include "monotone_search.hpp"
#include "opnorm.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "seqcore.hpp"
#include "sparse.hpp"
#include "summation.hpp"
#include "volume.hpp"

#endif
