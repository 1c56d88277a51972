#ifndef PROTSUB_PROTSUB_HPP
#define PROTSUB_PROTSUB_HPP

#include "protsub/channels.hpp"
#include "protsub/codes.hpp"
#include "protsub/error.hpp"
#include "protsub/geometry.hpp"
#include "protsub/isometry.hpp"
#include "protsub/linalg.hpp"
#include "protsub/numrange.hpp"
#include "protsub/random.hpp"
#include "protsub/recovery.hpp"
#include "protsub/simulator.hpp"

#endif  // PROTSUB_PROTSUB_HPP
