#ifndef CL4_CL4_HPP
#define CL4_CL4_HPP

#include "cl4/bridge.hpp"
#include "cl4/checker.hpp"
#include "cl4/diagnostics.hpp"
#include "cl4/elementary.hpp"
#include "cl4/error.hpp"
#include "cl4/formula.hpp"
#include "cl4/proof_io.hpp"
#include "cl4/prover.hpp"
#include "cl4/qbf.hpp"
#include "cl4/reduction.hpp"
#include "cl4/syntax.hpp"

#endif  // CL4_CL4_HPP
