#pragma once

#include "sosdim/errors.hpp"
#include "sosdim/tscore.hpp"
#include "sosdim/csv.hpp"
#include "sosdim/jointdiag.hpp"
#include "sosdim/bss.hpp"
#include "sosdim/chisq.hpp"
#include "sosdim/dimtest.hpp"
#include "sosdim/simgen.hpp"
#include "sosdim/presets.hpp"
#include "sosdim/harness.hpp"
