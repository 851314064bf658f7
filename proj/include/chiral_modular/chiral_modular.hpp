#pragma once

#include "chiral_modular/circle.hpp"
#include "chiral_modular/continuation.hpp"
#include "chiral_modular/correlators.hpp"
#include "chiral_modular/errors.hpp"
#include "chiral_modular/kms.hpp"
#include "chiral_modular/moebius.hpp"
#include "chiral_modular/states.hpp"
#include "chiral_modular/virasoro.hpp"
