#pragma once

#include "hforge/complex.hpp"
#include "hforge/error.hpp"
#include "hforge/fimodule.hpp"
#include "hforge/houghton.hpp"
#include "hforge/integer.hpp"
#include "hforge/matrix.hpp"
#include "hforge/rays.hpp"
#include "hforge/smith.hpp"
#include "hforge/stability.hpp"
