#pragma once

// Exact decomposition of nonderogatory matrices over odd-characteristic finite
// fields into a p-potent part (E^p = E) and a nilpotent part of index at most
// three, with verifiable certificates.

#include "potent/error.hpp"
#include "potent/field.hpp"
#include "potent/poly.hpp"
#include "potent/matrix.hpp"
#include "potent/companion.hpp"
#include "potent/decompose.hpp"
#include "potent/oracle.hpp"
#include "potent/io.hpp"
