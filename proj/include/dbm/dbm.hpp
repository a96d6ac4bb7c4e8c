#pragma once

// Convenience umbrella for consumers that want the whole pipeline. The
// individual headers stay independently includable.

#include "dbm/aero.hpp"
#include "dbm/analysis.hpp"
#include "dbm/commands.hpp"
#include "dbm/config.hpp"
#include "dbm/error.hpp"
#include "dbm/evo.hpp"
#include "dbm/geometry.hpp"
#include "dbm/morph.hpp"
#include "dbm/param.hpp"
#include "dbm/util.hpp"
#include "dbm/xfoil.hpp"
