#ifndef DAGEX_DAGEX_HPP
#define DAGEX_DAGEX_HPP

#include "dagex/clic.hpp"
#include "dagex/dag.hpp"
#include "dagex/errors.hpp"
#include "dagex/index.hpp"
#include "dagex/json_io.hpp"
#include "dagex/permutation.hpp"
#include "dagex/render.hpp"
#include "dagex/sampler.hpp"
#include "dagex/stats.hpp"

#endif
