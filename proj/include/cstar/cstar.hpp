#ifndef CSTAR_CSTAR_HPP
#define CSTAR_CSTAR_HPP

#include "cstar/error.hpp"
#include "cstar/random.hpp"
#include "cstar/matcore.hpp"
#include "cstar/algebra.hpp"
#include "cstar/json.hpp"
#include "cstar/report.hpp"
#include "cstar/deform.hpp"
#include "cstar/laws.hpp"
#include "cstar/io.hpp"

#endif  // CSTAR_CSTAR_HPP
