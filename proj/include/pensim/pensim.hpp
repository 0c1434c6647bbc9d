#pragma once

#include "pensim/cashflow.hpp"
#include "pensim/error.hpp"
#include "pensim/philox.hpp"
#include "pensim/rates.hpp"
#include "pensim/regression.hpp"
#include "pensim/reliance.hpp"
#include "pensim/returns.hpp"
#include "pensim/runoff.hpp"
#include "pensim/sfs.hpp"
