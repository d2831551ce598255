#pragma once

#include "omv/bitcore.hpp"
#include "omv/dynoracles.hpp"
#include "omv/engines.hpp"
#include "omv/gadgets.hpp"
#include "omv/harness.hpp"
#include "omv/multiphase.hpp"
#include "omv/oumv.hpp"
