#ifndef DYNREACH_DYNREACH_HPP
#define DYNREACH_DYNREACH_HPP

#include "dynreach/types.hpp"
#include "dynreach/graph_store.hpp"
#include "dynreach/reach_tree.hpp"
#include "dynreach/witness_matrix.hpp"
#include "dynreach/dynamic_oracle.hpp"
#include "dynreach/reference_oracles.hpp"
#include "dynreach/workload.hpp"

#endif  // DYNREACH_DYNREACH_HPP
