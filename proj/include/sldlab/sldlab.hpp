#pragma once

#include "sldlab/ambiguity.hpp"
#include "sldlab/blaschke.hpp"
#include "sldlab/capacity.hpp"
#include "sldlab/core.hpp"
#include "sldlab/equivalence.hpp"
#include "sldlab/error.hpp"
#include "sldlab/rootfind.hpp"
#include "sldlab/version.hpp"
