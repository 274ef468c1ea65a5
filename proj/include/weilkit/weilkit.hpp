#ifndef WEILKIT_WEILKIT_HPP
#define WEILKIT_WEILKIT_HPP

#include "weilkit/common.hpp"
#include "weilkit/count_cache.hpp"
#include "weilkit/counter.hpp"
#include "weilkit/ffield.hpp"
#include "weilkit/geomdsl.hpp"
#include "weilkit/json_io.hpp"
#include "weilkit/kequiv.hpp"
#include "weilkit/padics.hpp"
#include "weilkit/polynomial.hpp"
#include "weilkit/zech.hpp"
#include "weilkit/zetakit.hpp"

#endif  // WEILKIT_WEILKIT_HPP
