#ifndef POLYBOHR_POLYBOHR_HPP
#define POLYBOHR_POLYBOHR_HPP

#include "polybohr/errors.hpp"
#include "polybohr/families.hpp"
#include "polybohr/functionals.hpp"
#include "polybohr/parallel.hpp"
#include "polybohr/radius.hpp"
#include "polybohr/report.hpp"
#include "polybohr/series.hpp"
#include "polybohr/verification.hpp"

#endif  // POLYBOHR_POLYBOHR_HPP
