#pragma once

#include "scalar.hpp"
#include "group.hpp"
#include "cocycle.hpp"
#include "trivialize.hpp"
#include "theta.hpp"
#include "weilrep.hpp"
#include "sampling.hpp"
