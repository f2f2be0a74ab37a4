#pragma once

#include "modco/error.hpp"
#include "modco/lattice.hpp"
#include "modco/mfs.hpp"
#include "modco/coset_analysis.hpp"
#include "modco/coincidence.hpp"
#include "modco/census.hpp"
#include "modco/dekking.hpp"
#include "modco/collaring.hpp"
#include "modco/analysis.hpp"
#include "modco/io/spec_format.hpp"
#include "modco/io/builtins.hpp"
#include "modco/io/dot.hpp"
#include "modco/io/report.hpp"
#include "modco/io/cli.hpp"
