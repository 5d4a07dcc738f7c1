// primecorr.hpp — umbrella include.

#pragma once

#include "primecorr/arith.hpp"
#include "primecorr/characters.hpp"
#include "primecorr/common.hpp"
#include "primecorr/compare.hpp"
#include "primecorr/correlations.hpp"
#include "primecorr/divisor_correlation.hpp"
#include "primecorr/expsums.hpp"
#include "primecorr/rational.hpp"
#include "primecorr/report.hpp"
#include "primecorr/sieve.hpp"
#include "primecorr/singular.hpp"
#include "primecorr/smooth.hpp"
#include "primecorr/variance.hpp"
#include "primecorr/verify.hpp"
