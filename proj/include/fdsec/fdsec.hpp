#pragma once

#include "fdsec/model.hpp"
#include "fdsec/rates.hpp"
#include "fdsec/lp.hpp"
#include "fdsec/programs.hpp"
#include "fdsec/region.hpp"
#include "fdsec/oracle.hpp"
