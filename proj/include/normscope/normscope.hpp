#pragma once

#include "aronszajn.hpp"
#include "geometry2d.hpp"
#include "lift3d.hpp"
#include "nelder_mead.hpp"
#include "norm.hpp"
#include "polarize.hpp"
#include "rng.hpp"
#include "vector.hpp"
