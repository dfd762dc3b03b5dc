#pragma once

#include "invcrit/channel_core.hpp"
#include "invcrit/efficiency_criteria.hpp"
#include "invcrit/errors.hpp"
#include "invcrit/extremum_search.hpp"
#include "invcrit/interference_lab.hpp"
#include "invcrit/mac_capacity.hpp"
#include "invcrit/msequence.hpp"
#include "invcrit/numeric.hpp"
#include "invcrit/tdma_simulator.hpp"
#include "invcrit/token_allocator.hpp"
