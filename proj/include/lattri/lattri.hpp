#pragma once

#include "lattri/bigcount.hpp"
#include "lattri/bounds.hpp"
#include "lattri/brute_force.hpp"
#include "lattri/complex.hpp"
#include "lattri/count_cache.hpp"
#include "lattri/dense_lu.hpp"
#include "lattri/fredholm.hpp"
#include "lattri/geometry.hpp"
#include "lattri/laurent.hpp"
#include "lattri/quartic.hpp"
#include "lattri/series.hpp"
#include "lattri/strip_counter.hpp"
#include "lattri/verify.hpp"
