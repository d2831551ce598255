#pragma once

#include "omv/array_oracles.hpp"
#include "omv/counted.hpp"
#include "omv/densest.hpp"
#include "omv/dyngraph.hpp"
#include "omv/graph_oracles.hpp"
#include "omv/script.hpp"
