#pragma once
// Umbrella header for the whole library.

#include "fermat/cm_structure.hpp"
#include "fermat/cyclotomic.hpp"
#include "fermat/demjanenko.hpp"
#include "fermat/errors.hpp"
#include "fermat/exact_linalg.hpp"
#include "fermat/finite_field.hpp"
#include "fermat/jacobi.hpp"
#include "fermat/local_factor.hpp"
#include "fermat/moments.hpp"
#include "fermat/residue.hpp"
#include "fermat/sato_tate.hpp"
#include "fermat/sieve.hpp"
#include "fermat/stats.hpp"
#include "fermat/report_json.hpp"
